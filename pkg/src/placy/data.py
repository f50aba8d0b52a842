from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError

__all__ = ["TimeSeriesSet", "as_series_set"]


@dataclass
class TimeSeriesSet:
    """``L x d`` block of aligned series with variable names.

    ``meta`` carries provenance (missing-value counts, generator settings)
    and is never used in computation.
    """

    values: np.ndarray
    names: tuple = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise InvalidInputError(f"values must be 2-D (L x d), got shape {v.shape}")
        self.values = v
        if self.names is None:
            self.names = tuple(f"x{i}" for i in range(v.shape[1]))
        else:
            self.names = tuple(str(n) for n in self.names)
        if len(self.names) != v.shape[1]:
            raise InvalidInputError(
                f"{len(self.names)} names given for {v.shape[1]} columns"
            )
        if len(set(self.names)) != len(self.names):
            raise InvalidInputError("variable names must be unique")

    @property
    def length(self) -> int:
        return self.values.shape[0]

    @property
    def n_vars(self) -> int:
        return self.values.shape[1]

    def column(self, i: int) -> np.ndarray:
        return self.values[:, i]

    def blocks(self, length: int) -> list["TimeSeriesSet"]:
        """Disjoint consecutive sub-series of ``length`` samples (remainder dropped)."""
        n = self.length // length
        return [
            TimeSeriesSet(
                self.values[k * length : (k + 1) * length],
                self.names,
                {"block": k, "start": k * length},
            )
            for k in range(n)
        ]


def as_series_set(data) -> TimeSeriesSet:
    if isinstance(data, TimeSeriesSet):
        return data
    return TimeSeriesSet(np.asarray(data, dtype=float))
