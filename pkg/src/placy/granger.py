"""VAR-based Granger causality with a joint Wald test.

The unrestricted regression of the caused series on an intercept and lags
``1..T`` of (caused, causing..., covariates...) is fitted once by OLS; the
null that every lag coefficient of the causing block is zero is tested with

    W = (R b)' (R V R')^-1 (R b)  ~  chi2(T * n_causing)

where ``V`` is the classical OLS coefficient covariance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

import numpy as np

from .exceptions import (
    InsufficientSamplesError,
    InvalidInputError,
    SingularRestrictionError,
)
from .numerics import RANK_TOL, chi2_sf, solve_least_squares

__all__ = ["VarSpec", "WaldResult", "build_lagged_design", "wald_granger_test", "DEFAULT_MAX_LAG"]

DEFAULT_MAX_LAG = 10

# residual sum of squares below this fraction of the target's total sum of
# squares is treated as an exact fit
_EXACT_FIT_TOL = 1e-24


@dataclass(frozen=True)
class VarSpec:
    """Which series is explained, which block is tested, what is conditioned on."""

    caused: Hashable
    causing: tuple
    covariates: tuple = ()
    max_lag: int = DEFAULT_MAX_LAG

    def __post_init__(self):
        causing = tuple(self.causing) if not isinstance(self.causing, str) else (self.causing,)
        covariates = (
            tuple(self.covariates) if not isinstance(self.covariates, str) else (self.covariates,)
        )
        object.__setattr__(self, "causing", causing)
        object.__setattr__(self, "covariates", covariates)
        if int(self.max_lag) != self.max_lag or self.max_lag < 1:
            raise InvalidInputError(f"max_lag must be a positive integer, got {self.max_lag}")
        object.__setattr__(self, "max_lag", int(self.max_lag))
        if not causing:
            raise InvalidInputError("causing block must be nonempty")
        names = (self.caused,) + causing + covariates
        if len(set(names)) != len(names):
            raise InvalidInputError(
                "caused, causing and covariates must be distinct series identifiers"
            )

    @property
    def n_params(self) -> int:
        return 1 + self.max_lag * (1 + len(self.causing) + len(self.covariates))

    @property
    def n_restrictions(self) -> int:
        return self.max_lag * len(self.causing)

    def min_length(self) -> int:
        """Shortest series for which the unrestricted model is estimable."""
        return self.max_lag + self.n_params + 1


@dataclass(frozen=True)
class WaldResult:
    statistic: float
    df: int
    p_value: float
    n_effective: int


def _collect(data: Mapping, spec: VarSpec) -> list[np.ndarray]:
    cols = []
    for name in (spec.caused,) + spec.causing + spec.covariates:
        try:
            col = np.asarray(data[name], dtype=float)
        except KeyError:
            raise InvalidInputError(f"series {name!r} not found in data") from None
        if col.ndim != 1:
            raise InvalidInputError(f"series {name!r} must be one-dimensional")
        cols.append(col)
    lengths = {c.size for c in cols}
    if len(lengths) != 1:
        raise InvalidInputError(f"series must have identical lengths, got {sorted(lengths)}")
    return cols


def build_lagged_design(data: Mapping, spec: VarSpec) -> tuple[np.ndarray, np.ndarray]:
    """Lagged regression design for ``spec``.

    Rows are times ``T..L'-1``. Columns: intercept, lags 1..T of the caused
    series, then lags 1..T of each causing series, then of each covariate,
    in declared order.
    """
    cols = _collect(data, spec)
    T = spec.max_lag
    n = cols[0].size
    if n <= T:
        raise InsufficientSamplesError(
            f"series length {n} leaves no rows at max_lag={T}; need at least {T + 1}",
            required=T + 1,
        )
    rows = n - T
    X = np.empty((rows, 1 + T * len(cols)))
    X[:, 0] = 1.0
    j = 1
    for col in cols:
        for lag in range(1, T + 1):
            X[:, j] = col[T - lag : n - lag]
            j += 1
    return X, cols[0][T:].copy()


def wald_granger_test(spec: VarSpec, data: Mapping) -> WaldResult:
    """Joint Wald test that the causing block's lags add nothing.

    Raises
    ------
    InsufficientSamplesError
        Not more usable rows than regression parameters.
    DegenerateDesignError
        Collinear regressors (for instance a duplicated series).
    SingularRestrictionError
        ``R V R'`` cannot be inverted, including the exact-fit case.
    """
    X, y = build_lagged_design(data, spec)
    n, p = X.shape
    if n <= p:
        raise InsufficientSamplesError(
            f"{n} usable rows for {p} parameters; series length must be at least "
            f"{spec.min_length()}",
            required=spec.min_length(),
        )
    fit = solve_least_squares(X, y)
    dev = y - y.mean()
    tss = float(dev @ dev) + float(y @ y)
    if fit.rss <= _EXACT_FIT_TOL * tss:
        raise SingularRestrictionError("unrestricted model fits exactly; Wald test undefined")

    T = spec.max_lag
    idx = np.arange(1 + T, 1 + T + spec.n_restrictions)
    rb = fit.coeffs[idx]
    v = fit.coeff_covariance[np.ix_(idx, idx)]
    scale = np.sqrt(np.diag(v))
    if np.any(scale <= 0.0):
        raise SingularRestrictionError("restricted coefficients have zero variance")
    corr = v / np.outer(scale, scale)
    w_eig = np.linalg.eigvalsh(corr)
    if w_eig[0] <= RANK_TOL * w_eig[-1]:
        raise SingularRestrictionError("restricted covariance block is singular")
    z = rb / scale
    stat = float(z @ np.linalg.solve(corr, z))
    stat = max(stat, 0.0)
    df = spec.n_restrictions
    return WaldResult(statistic=stat, df=df, p_value=chi2_sf(stat, df), n_effective=n)


def granger_pair(
    caused: np.ndarray,
    causing: Sequence[np.ndarray],
    max_lag: int = DEFAULT_MAX_LAG,
    covariates: Sequence[np.ndarray] = (),
) -> WaldResult:
    """Array-level convenience wrapper around :func:`wald_granger_test`."""
    data = {("y", 0): caused}
    data.update({("x", i): c for i, c in enumerate(causing)})
    data.update({("z", i): c for i, c in enumerate(covariates)})
    spec = VarSpec(
        caused=("y", 0),
        causing=tuple(("x", i) for i in range(len(causing))),
        covariates=tuple(("z", i) for i in range(len(covariates))),
        max_lag=max_lag,
    )
    return wald_granger_test(spec, data)
