from __future__ import annotations

import logging
from contextlib import contextmanager
from typing import Iterator

from fastapi import HTTPException, status

from sip3.core.errors import Sip3Error
from sip3.models.graph import Graph
from sip3.models.schemas import GraphIn
from sip3.services.graph_io import graph_from_model

logger = logging.getLogger(__name__)


@contextmanager
def domain_errors() -> Iterator[None]:
    """Sip3Error -> 400 with the message as detail."""
    try:
        yield
    except Sip3Error as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e)) from e
    except HTTPException:
        raise
    except Exception as e:
        logger.exception("request failed")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail="内部错误") from e


def graph_of(body: GraphIn) -> Graph:
    with domain_errors():
        return graph_from_model(body)
