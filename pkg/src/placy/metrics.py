"""Directed-edge confusion counts and the derived scores."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import InvalidInputError

__all__ = ["EvalReport", "evaluate"]


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    tn: int
    fn: int
    f1: float
    precision: float
    recall: float
    tnr: float

    def to_dict(self) -> dict:
        return asdict(self)


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _adjacency(obj) -> np.ndarray:
    m = getattr(obj, "adjacency", obj)
    return np.asarray(m).astype(bool)


def evaluate(predicted, truth) -> EvalReport:
    """Score ``predicted`` against ``truth`` over the ``d(d-1)`` ordered pairs.

    Both arguments may be graph objects with an ``adjacency`` attribute or
    plain square matrices. Edge present is the positive class, the diagonal
    is ignored, and any ratio with a zero denominator is reported as 0.
    """
    P = _adjacency(predicted)
    G = _adjacency(truth)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape != G.shape:
        raise InvalidInputError(
            f"predicted {P.shape} and truth {G.shape} must be square and of equal size"
        )
    off = ~np.eye(P.shape[0], dtype=bool)
    p, g = P[off], G[off]
    tp = int(np.sum(p & g))
    fp = int(np.sum(p & ~g))
    tn = int(np.sum(~p & ~g))
    fn = int(np.sum(~p & g))
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = _ratio(2 * tp, 2 * tp + fp + fn)
    tnr = _ratio(tn, tn + fp)
    return EvalReport(tp, fp, tn, fn, f1, precision, recall, tnr)
