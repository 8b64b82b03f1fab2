"""sip3: single-interval property decider for graph-nonedge pairs (d ≤ 3) plus a
distance-geometry oracle that cross-checks its verdicts."""

__version__ = "0.1.0"
