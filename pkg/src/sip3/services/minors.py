from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Literal

import networkx as nx
from networkx.algorithms import isomorphism

from sip3.core.config import get_settings
from sip3.core.errors import GraphError, HostTooLarge, InvariantViolation, MinorBudgetExceeded, PreconditionError
from sip3.models.graph import Graph, PairLike, VertexPair, as_pair
from sip3.models.minor import NO_CONSTRAINTS, MinorConstraints, MinorMap
from sip3.services.graph_core import connected_components
from sip3.services.patterns import catalog

logger = logging.getLogger(__name__)

ORACLE_MAX_VERTICES = 9


@dataclass(frozen=True)
class MinorCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_minor_map(m: MinorMap) -> MinorCheck:
    host, pattern = m.host, m.pattern
    if len(m.branch) != host.n:
        return MinorCheck(False, "branch map is not total over host vertices")
    for x, p in enumerate(m.branch):
        if not (0 <= p < pattern.n):
            return MinorCheck(False, f"host vertex {x} maps outside the pattern")
    for p, s in enumerate(m.branch_sets):
        if not s:
            return MinorCheck(False, f"pattern vertex {p} has an empty branch set")
        if not _is_connected_set(host, s):
            return MinorCheck(False, f"branch set of {p} is disconnected in the host")
    for p, q in pattern.edges:
        if not m.crossing_edges(p, q):
            return MinorCheck(False, f"pattern edge {p},{q} has no crossing host edge")
    return MinorCheck(True)


def satisfies(m: MinorMap, c: MinorConstraints) -> MinorCheck:
    for h, p in c.pins:
        if m.branch[h] != p:
            return MinorCheck(False, f"pin {h}->{p} violated")
    for pair in c.preserve:
        if not m.is_preserved(pair):
            return MinorCheck(False, f"{pair} is contracted")
    for pair in c.retain:
        if not m.is_retained(pair):
            return MinorCheck(False, f"{pair} is not retained")
    if c.induced and m.deleted:
        return MinorCheck(False, "minor deletes crossing edges")
    return MinorCheck(True)


def _is_connected_set(G: Graph, s: frozenset[int] | set[int]) -> bool:
    return bool(s) and nx.is_connected(G.nx_view.subgraph(s))


@lru_cache(maxsize=64)
def pattern_automorphism_orbits(pattern: Graph) -> tuple[frozenset[int], ...]:
    g = pattern.to_networkx()
    orbit: dict[int, set[int]] = {v: {v} for v in pattern.vertices()}
    for iso in isomorphism.GraphMatcher(g, g).isomorphisms_iter():
        for v, w in iso.items():
            orbit[v].add(w)
    return tuple(sorted({frozenset(s) for s in orbit.values()}, key=min))


class _Budget:
    def __init__(self, limit: int) -> None:
        self.limit = int(limit)
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise MinorBudgetExceeded(self.limit, self.nodes)


class _MinorSearch:
    """Enumerates connected k-partitions of the host (blocks opened at the
    smallest unassigned vertex, so each partition appears once) and matches
    each complete partition against the pattern."""

    def __init__(self, host: Graph, pattern: Graph, c: MinorConstraints, budget: _Budget) -> None:
        self.host = host
        self.pattern = pattern
        self.c = c
        self.budget = budget
        self.k = pattern.n
        self.pdeg = [pattern.degree(p) for p in pattern.vertices()]
        self.pdeg_sorted = sorted(self.pdeg, reverse=True)
        self.min_pdeg = min(self.pdeg) if self.pdeg else 0
        self.assign = [-1] * host.n
        self.blocks: list[frozenset[int]] = []

        self.apart: list[set[int]] = [set() for _ in host.vertices()]
        for pair in c.separated:
            self.apart[pair.a].add(pair.b)
            self.apart[pair.b].add(pair.a)
        self.pin_groups: dict[int, set[int]] = {}
        for h, p in c.pins:
            self.pin_groups.setdefault(p, set()).add(h)
        for h1, p1 in c.pins:
            for h2, p2 in c.pins:
                if p1 != p2:
                    self.apart[h1].add(h2)

    def run(self) -> MinorMap | None:
        return self._next_block()

    # -- partition growth -------------------------------------------------

    def _next_block(self) -> MinorMap | None:
        v = next((x for x in self.host.vertices() if self.assign[x] < 0), None)
        if v is None:
            return self._match() if len(self.blocks) == self.k else None
        needed = self.k - len(self.blocks)
        if needed == 0:
            return None
        free = sum(1 for x in self.host.vertices() if self.assign[x] < 0)
        max_size = free - (needed - 1)
        idx = len(self.blocks)
        for S in self._connected_sets(v, max_size):
            if not self._block_ok(S):
                continue
            for x in S:
                self.assign[x] = idx
            self.blocks.append(S)
            try:
                if self._rest_ok(needed - 1):
                    found = self._next_block()
                    if found is not None:
                        return found
            finally:
                self.blocks.pop()
                for x in S:
                    self.assign[x] = -1
        return None

    def _connected_sets(self, v: int, max_size: int) -> Iterator[frozenset[int]]:
        adj = self.host.adj
        assign = self.assign
        apart = self.apart

        def grow(S: set[int], frontier: list[int], excluded: set[int]) -> Iterator[frozenset[int]]:
            self.budget.tick()
            while frontier and (frontier[-1] in excluded or frontier[-1] in S or apart[frontier[-1]] & S):
                frontier.pop()
            if not frontier or len(S) >= max_size:
                yield frozenset(S)
                return
            w = frontier.pop()
            extra = [y for y in adj[w] if assign[y] < 0 and y not in S and y != w and y not in excluded]
            S.add(w)
            yield from grow(S, frontier + extra, excluded)
            S.remove(w)
            excluded.add(w)
            yield from grow(S, frontier, excluded)
            excluded.discard(w)

        start = [y for y in sorted(adj[v], reverse=True) if assign[y] < 0]
        yield from grow({v}, start, set())

    def _block_ok(self, S: frozenset[int]) -> bool:
        pinned = self.c.pinned
        targets = {pinned[x] for x in S if x in pinned}
        if len(targets) > 1:
            return False
        if targets:
            (p,) = targets
            if not self.pin_groups[p] <= S:
                return False
        if self.min_pdeg:
            ext: set[int] = set()
            for x in S:
                ext |= self.host.adj[x]
            if len(ext - S) < self.min_pdeg:
                return False
        return True

    def _rest_ok(self, needed: int) -> bool:
        taken = [x for x in self.host.vertices() if self.assign[x] >= 0]
        comps = connected_components(self.host, taken)
        free = self.host.n - len(taken)
        return len(comps) <= needed <= free

    # -- quotient matching ------------------------------------------------

    def _match(self) -> MinorMap | None:
        self.budget.tick()
        k = self.k
        host, pattern, c = self.host, self.pattern, self.c
        cross: dict[tuple[int, int], int] = {}
        for u, v in host.edges:
            bu, bv = self.assign[u], self.assign[v]
            if bu != bv:
                key = (bu, bv) if bu < bv else (bv, bu)
                cross[key] = cross.get(key, 0) + 1

        for pair in c.retain:
            bu, bv = self.assign[pair.a], self.assign[pair.b]
            key = (bu, bv) if bu < bv else (bv, bu)
            allowed = 1 if host.has_edge(pair.a, pair.b) else 0
            if cross.get(key, 0) > allowed:
                return None

        qadj: list[set[int]] = [set() for _ in range(k)]
        for i, j in cross:
            qadj[i].add(j)
            qadj[j].add(i)
        qdeg = [len(s) for s in qadj]
        if len(cross) < pattern.m or (c.induced and len(cross) != pattern.m):
            return None
        for q, p in zip(sorted(qdeg, reverse=True), self.pdeg_sorted):
            if q < p or (c.induced and q != p):
                return None

        block_pin: dict[int, int] = {}
        for h, p in c.pins:
            block_pin[self.assign[h]] = p
        reserved = set(block_pin.values())
        order = sorted(range(k), key=lambda b: (b not in block_pin, -qdeg[b], b))
        first_choices: list[int] | None = None
        if not block_pin:
            first_choices = [min(orbit) for orbit in pattern_automorphism_orbits(pattern)]

        phi = [-1] * k
        used = [False] * k

        def place(idx: int) -> bool:
            if idx == k:
                return True
            b = order[idx]
            if b in block_pin:
                candidates: list[int] = [block_pin[b]]
            elif idx == 0 and first_choices is not None:
                candidates = first_choices
            else:
                candidates = [p for p in range(k) if p not in reserved]
            for p in candidates:
                if used[p]:
                    continue
                self.budget.tick()
                if qdeg[b] < self.pdeg[p] or (c.induced and qdeg[b] != self.pdeg[p]):
                    continue
                ok = True
                for b2 in order[:idx]:
                    p2 = phi[b2]
                    if pattern.has_edge(p, p2):
                        if b2 not in qadj[b]:
                            ok = False
                            break
                    elif c.induced and b2 in qadj[b]:
                        ok = False
                        break
                if not ok:
                    continue
                phi[b] = p
                used[p] = True
                if place(idx + 1):
                    return True
                phi[b] = -1
                used[p] = False
            return False

        if not place(0):
            return None
        return MinorMap(host, pattern, tuple(phi[self.assign[x]] for x in host.vertices()))


def _check_request(host: Graph, pattern: Graph, c: MinorConstraints) -> None:
    if pattern.n == 0 or not pattern.is_connected():
        raise PreconditionError("pattern must be a connected graph")
    for h, p in c.pins:
        if not (0 <= h < host.n):
            raise PreconditionError(f"pinned host vertex {h} out of range")
        if not (0 <= p < pattern.n):
            raise PreconditionError(f"pinned pattern vertex {p} out of range")
    for pair in c.separated:
        if pair.b >= host.n:
            raise PreconditionError(f"constrained pair {pair} out of range")


def find_rooted_minor(
    host: Graph,
    pattern: Graph,
    constraints: MinorConstraints | None = None,
    *,
    budget: int | None = None,
) -> MinorMap | None:
    """Complete search for a total minor map host -> pattern under `constraints`.

    None means the search space was exhausted; running out of `budget` nodes
    raises MinorBudgetExceeded instead.
    """
    c = constraints or NO_CONSTRAINTS
    _check_request(host, pattern, c)
    if pattern.n > host.n or pattern.m > host.m or not host.is_connected():
        return None
    limit = budget if budget is not None else get_settings().budget
    counter = _Budget(limit)
    result = _MinorSearch(host, pattern, c, counter).run()
    logger.debug(
        "minor search host(n=%d,m=%d) pattern(n=%d,m=%d): %s after %d nodes",
        host.n, host.m, pattern.n, pattern.m, "found" if result else "none", counter.nodes,
    )
    if result is not None:
        check = validate_minor_map(result)
        sat = satisfies(result, c)
        if not (check and sat):
            logger.error("minor search returned an invalid map: %s %s", check.reason, sat.reason)
            raise InvariantViolation(check.reason or sat.reason)
    return result


def brute_force_minor_oracle(host: Graph, pattern: Graph, constraints: MinorConstraints | None = None) -> bool:
    """Independent check: every set partition of V(host) into |V(pattern)|
    connected blocks, times every bijection onto the pattern."""
    if host.n > ORACLE_MAX_VERTICES:
        raise HostTooLarge(f"oracle refuses hosts with more than {ORACLE_MAX_VERTICES} vertices")
    c = constraints or NO_CONSTRAINTS
    _check_request(host, pattern, c)
    n, k = host.n, pattern.n
    if k > n:
        return False
    labels = [0] * n

    def partitions(i: int, used: int) -> Iterator[list[int]]:
        if i == n:
            if used == k:
                yield labels
            return
        if n - i < k - used:
            return
        for b in range(min(used + 1, k)):
            labels[i] = b
            yield from partitions(i + 1, max(used, b + 1))

    for lab in partitions(0, 0):
        blocks = [frozenset(x for x in range(n) if lab[x] == b) for b in range(k)]
        if not all(_is_connected_set(host, s) for s in blocks):
            continue
        for perm in permutations(range(k)):
            m = MinorMap(host, pattern, tuple(perm[lab[x]] for x in range(n)))
            if validate_minor_map(m) and satisfies(m, c):
                return True
    return False


def find_preserving_forbidden_minor(G: Graph, f: PairLike, *, budget: int | None = None) -> MinorMap | None:
    pair = as_pair(f)
    if pair.b >= G.n:
        raise PreconditionError(f"pair {pair} out of range")
    cat = catalog()
    for pattern in (cat.k5, cat.k222):
        m = find_rooted_minor(G, pattern, MinorConstraints(preserve=(pair,)), budget=budget)
        if m is not None:
            return m
    return None


def has_preserving_forbidden_minor(G: Graph, f: PairLike, *, budget: int | None = None) -> bool:
    return find_preserving_forbidden_minor(G, f, budget=budget) is not None


def find_retaining_induced_forbidden_minor(G: Graph, f: PairLike, *, budget: int | None = None) -> MinorMap | None:
    """Search G ∪ f for a K5/K2,2,2 minor with no deleted edges that retains f."""
    pair = as_pair(f)
    H = G.with_edges([pair])
    cat = catalog()
    for pattern in (cat.k5, cat.k222):
        m = find_rooted_minor(H, pattern, MinorConstraints(retain=(pair,), induced=True), budget=budget)
        if m is not None:
            return m
    return None


def has_retaining_induced_forbidden_minor(G: Graph, f: PairLike, *, budget: int | None = None) -> bool:
    return find_retaining_induced_forbidden_minor(G, f, budget=budget) is not None


ExchangeKind = Literal["vertex", "component"]


def apply_exchange(
    m: MinorMap,
    kind: ExchangeKind,
    a: int,
    b: int,
    *,
    x: int | None = None,
    keep: frozenset[int] | set[int] | None = None,
    moved: frozenset[int] | set[int] | None = None,
) -> MinorMap:
    """Move host vertices from branch set [a]^{-1} to [b]^{-1}.

    vertex: `x` in [a]^{-1} has a neighbor in [b]^{-1} and `keep` is the vertex
    set of a component J of [a]^{-1}∖x; [a]^{-1} becomes V(J) and everything
    else of the old [a]^{-1} joins [b]^{-1}.
    component: `keep` is a connected J inside [a]^{-1}, `moved` a component K of
    [a]^{-1}∖J with a vertex adjacent to [b]^{-1}; V(K) joins [b]^{-1}.
    The result is not validated here.
    """
    host = m.host
    if a == b or not (0 <= a < m.pattern.n and 0 <= b < m.pattern.n):
        raise PreconditionError("exchange needs two distinct pattern vertices")
    A, B = m.preimage(a), m.preimage(b)

    def touches_b(vs: set[int] | frozenset[int]) -> bool:
        return any(host.adj[y] & B for y in vs)

    if kind == "vertex":
        if x is None or x not in A:
            raise PreconditionError("x must lie in [a]^{-1}")
        if not host.adj[x] & B:
            raise PreconditionError("x has no neighbor in [b]^{-1}")
        J = frozenset(keep or ())
        comps = _components_within(host, A - {x})
        if J not in comps:
            raise PreconditionError("J is not a component of [a]^{-1}∖x")
        new_a = set(J)
    elif kind == "component":
        J = frozenset(keep or ())
        K = frozenset(moved or ())
        if not J <= A or not J or not _is_connected_set(host, J):
            raise PreconditionError("J must be a connected subgraph of [a]^{-1}")
        if K not in _components_within(host, A - J):
            raise PreconditionError("K is not a component of [a]^{-1}∖J")
        if not touches_b(K):
            raise PreconditionError("K has no vertex adjacent to [b]^{-1}")
        new_a = set(A - K)
    else:
        raise PreconditionError(f"unknown exchange kind {kind!r}")

    branch = list(m.branch)
    for y in A - new_a:
        branch[y] = b
    return MinorMap(host, m.pattern, tuple(branch))


def _components_within(G: Graph, vs: set[int] | frozenset[int]) -> list[frozenset[int]]:
    return [frozenset(c) for c in nx.connected_components(G.nx_view.subgraph(vs))]


def contract_edge(G: Graph, e: PairLike) -> tuple[Graph, tuple[int, ...]]:
    """Contract e = xy into x; returns the minor and the old-id -> new-id map."""
    pair = as_pair(e)
    if not G.has_edge(pair.a, pair.b):
        raise GraphError(f"{pair} is not an edge")
    keep = [v for v in G.vertices() if v != pair.b]
    index = {v: i for i, v in enumerate(keep)}
    index[pair.b] = index[pair.a]
    mapping = tuple(index[v] for v in G.vertices())
    edges = frozenset(
        (min(mapping[u], mapping[v]), max(mapping[u], mapping[v]))
        for u, v in G.edges
        if mapping[u] != mapping[v]
    )
    return Graph(len(keep), edges, tuple(G.label(v) for v in keep)), mapping


def quotient_graph(G: Graph, classes: list[frozenset[int]]) -> Graph:
    """Quotient by a partition into connected classes (classes ordered by min vertex)."""
    ordered = sorted(classes, key=min)
    where = {v: i for i, cls in enumerate(ordered) for v in cls}
    edges = frozenset(
        (min(where[u], where[v]), max(where[u], where[v]))
        for u, v in G.edges
        if where[u] != where[v]
    )
    return Graph(len(ordered), edges, tuple(G.label(min(cls)) for cls in ordered))


def induced_minor_pairs(
    G: Graph, f: PairLike, *, max_contractions: int | None = None
) -> Iterator[tuple[Graph, VertexPair]]:
    """Proper induced minor pairs (M, f') of (G, f): contractions of G ∪ f that retain f.

    Each distinct vertex partition is produced once.
    """
    pair = as_pair(f)
    if G.has_edge(pair.a, pair.b):
        raise PreconditionError(f"{pair} must be a nonedge")
    H = G.with_edges([pair])
    limit = H.n - 2 if max_contractions is None else max_contractions
    start = tuple(frozenset({v}) for v in H.vertices())
    layer = [start]
    seen = {frozenset(start)}
    for _ in range(limit):
        nxt: list[tuple[frozenset[int], ...]] = []
        for classes in layer:
            where = {v: i for i, cls in enumerate(classes) for v in cls}
            ia, ib = where[pair.a], where[pair.b]
            for u, v in H.edge_list():
                i, j = where[u], where[v]
                if i == j or {i, j} == {ia, ib}:
                    continue
                merged = [cls for t, cls in enumerate(classes) if t not in (i, j)] + [classes[i] | classes[j]]
                key = frozenset(merged)
                if key in seen:
                    continue
                seen.add(key)
                ca = next(cls for cls in merged if pair.a in cls)
                cb = next(cls for cls in merged if pair.b in cls)
                crossing = sum(1 for x, y in H.edges if (x in ca and y in cb) or (x in cb and y in ca))
                if crossing != 1:
                    continue
                ordered = tuple(sorted(merged, key=min))
                nxt.append(ordered)
                Q = quotient_graph(H, list(ordered))
                qa = next(t for t, cls in enumerate(ordered) if pair.a in cls)
                qb = next(t for t, cls in enumerate(ordered) if pair.b in cls)
                fq = VertexPair(qa, qb)
                yield Q.without_edges([fq]), fq
        layer = nxt
        if not layer:
            break
