"""Causal graph discovery on power-law spectral features, and the raw baseline."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import TimeSeriesSet, as_series_set
from .exceptions import InvalidInputError, PlacyError, SeriesTooShortError
from .granger import DEFAULT_MAX_LAG, VarSpec, wald_granger_test
from .spectral import DEFAULT_PLAN, WindowPlan, extract_features, select_window_length

__all__ = [
    "DiscoveryConfig",
    "CausalGraph",
    "discover",
    "granger_baseline",
    "resolve_threads",
]

INTERCEPT_ROLES = ("causing", "covariate", "excluded")


def resolve_threads(threads: int | None = None) -> int:
    """``threads`` if given, else ``$PLACY_THREADS``, else 1."""
    if threads is None:
        env = os.environ.get("PLACY_THREADS")
        threads = env if env else 1
    try:
        threads = int(threads)
    except (TypeError, ValueError):
        raise InvalidInputError(f"thread count must be an integer, got {threads!r}") from None
    if threads < 1:
        raise InvalidInputError(f"thread count must be >= 1, got {threads}")
    return threads


@dataclass(frozen=True)
class DiscoveryConfig:
    plan: WindowPlan = DEFAULT_PLAN
    max_lag: int = DEFAULT_MAX_LAG
    alpha: float = 0.05
    auto_window: bool = False
    window_candidates: tuple = (50, 100, 150, 200)
    # how the cause's intercept series enters the VAR: jointly tested with its
    # exponent series, conditioned on only, or left out
    intercept_role: str = "causing"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidInputError(f"alpha must lie in (0, 1), got {self.alpha}")
        if int(self.max_lag) != self.max_lag or self.max_lag < 1:
            raise InvalidInputError(f"max_lag must be a positive integer, got {self.max_lag}")
        if self.intercept_role not in INTERCEPT_ROLES:
            raise InvalidInputError(
                f"intercept_role must be one of {INTERCEPT_ROLES}, got {self.intercept_role!r}"
            )
        object.__setattr__(self, "window_candidates", tuple(int(c) for c in self.window_candidates))

    def pair_spec(self, i: int, j: int) -> VarSpec:
        caused = ("lam", j)
        if self.intercept_role == "causing":
            return VarSpec(caused, (("lam", i), ("a", i)), (), self.max_lag)
        if self.intercept_role == "covariate":
            return VarSpec(caused, (("lam", i),), (("a", i),), self.max_lag)
        return VarSpec(caused, (("lam", i),), (), self.max_lag)


@dataclass
class CausalGraph:
    names: tuple
    adjacency: np.ndarray
    p_values: np.ndarray
    alpha: float
    meta: dict = field(default_factory=dict)

    @property
    def n_vars(self) -> int:
        return len(self.names)

    def edges(self) -> list[tuple[int, int]]:
        return [tuple(map(int, e)) for e in np.argwhere(self.adjacency)]

    def to_dict(self) -> dict:
        p = [[None if np.isnan(v) else float(v) for v in row] for row in self.p_values]
        return {
            "names": list(self.names),
            "alpha": self.alpha,
            "adjacency": self.adjacency.astype(bool).tolist(),
            "p_values": p,
            "meta": dict(self.meta),
        }


def _graph_from_p(names, p_values, alpha, meta) -> CausalGraph:
    d = len(names)
    adj = np.zeros((d, d), dtype=bool)
    off = ~np.eye(d, dtype=bool)
    adj[off] = p_values[off] < alpha
    return CausalGraph(tuple(names), adj, p_values, float(alpha), meta)


def _run_pairs(pairs, test, threads: int) -> list:
    if threads <= 1 or len(pairs) <= 1:
        return [test(i, j) for i, j in pairs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ij: test(*ij), pairs))


def _with_context(exc: PlacyError, prefix: str) -> PlacyError:
    # same class and attributes (window, required, ...), message prefixed
    new = type(exc).__new__(type(exc))
    new.__dict__.update(exc.__dict__)
    new.args = (f"{prefix}: {exc}",)
    return new


def discover(data, config: DiscoveryConfig = DiscoveryConfig(), threads: int | None = None):
    """Spectral-feature causal graph.

    Every variable is mapped to its sliding-window ``(a, lam)`` features with
    a common window plan. For every ordered pair ``i != j`` the exponent series
    of ``j`` is regressed on its own lags and the lags of the cause's features,
    and the joint Wald p-value becomes ``p_values[i, j]``. Edge ``i -> j`` is
    drawn when that p-value is below ``config.alpha``.
    """
    ts = as_series_set(data)
    threads = resolve_threads(threads)
    d, L = ts.n_vars, ts.length
    meta = {
        "method": "placy",
        "max_lag": config.max_lag,
        "intercept_role": config.intercept_role,
        "auto_window": config.auto_window,
    }
    plan = config.plan
    if config.auto_window:
        chosen, flags, medians = [], {}, {}
        for i in range(d):
            try:
                sel = select_window_length(ts.column(i), config.window_candidates, config.alpha)
            except PlacyError as exc:
                raise _with_context(exc, f"variable {ts.names[i]!r}") from exc
            chosen.append(sel.length)
            flags[ts.names[i]] = sel.significant
            medians[ts.names[i]] = sel.median_p_values
        plan = WindowPlan(max(chosen), config.plan.stride)
        meta["window_selection"] = {
            "per_variable": dict(zip(ts.names, chosen)),
            "significant": flags,
            "median_p_values": medians,
        }
    meta["window"] = plan.length
    meta["stride"] = plan.stride

    p_values = np.full((d, d), np.nan)
    if d < 2:
        return _graph_from_p(ts.names, p_values, config.alpha, meta)

    min_feats = config.pair_spec(0, 1).min_length()
    required = plan.length + (min_feats - 1) * plan.stride
    if L < required:
        raise SeriesTooShortError(
            f"series length {L} too short: window {plan.length}, stride {plan.stride} and "
            f"max_lag {config.max_lag} need at least {required} samples",
            required=required,
        )

    features = {}
    for i in range(d):
        try:
            fs = extract_features(ts.column(i), plan)
        except PlacyError as exc:
            raise _with_context(exc, f"variable {ts.names[i]!r}") from exc
        features[("lam", i)] = fs.lambda_series
        features[("a", i)] = fs.a_series
    meta["n_features"] = int(len(features[("lam", 0)]))

    def test(i, j):
        try:
            return wald_granger_test(config.pair_spec(i, j), features).p_value
        except PlacyError as exc:
            raise _with_context(exc, f"{ts.names[i]} -> {ts.names[j]} (feature domain)") from exc

    pairs = [(i, j) for i in range(d) for j in range(d) if i != j]
    for (i, j), p in zip(pairs, _run_pairs(pairs, test, threads)):
        p_values[i, j] = p
    return _graph_from_p(ts.names, p_values, config.alpha, meta)


def granger_baseline(data, max_lag: int = DEFAULT_MAX_LAG, alpha: float = 0.05,
                     threads: int | None = None) -> CausalGraph:
    """Multivariate Granger test on the raw series.

    ``p_values[i, j]`` tests the lags of ``x_i`` in a VAR for ``x_j`` that
    also contains the lags of every other variable.
    """
    ts = as_series_set(data)
    threads = resolve_threads(threads)
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    d, L = ts.n_vars, ts.length
    meta = {"method": "granger", "max_lag": int(max_lag)}
    p_values = np.full((d, d), np.nan)
    if d < 2:
        return _graph_from_p(ts.names, p_values, alpha, meta)
    cols = {k: ts.column(k) for k in range(d)}
    bad = [ts.names[k] for k in range(d) if not np.all(np.isfinite(cols[k]))]
    if bad:
        raise InvalidInputError(f"non-finite values in variable(s) {bad}")

    def spec(i, j):
        others = tuple(k for k in range(d) if k not in (i, j))
        return VarSpec(j, (i,), others, max_lag)

    required = spec(0, 1).min_length()
    if L < required:
        raise SeriesTooShortError(
            f"series length {L} too short for max_lag {max_lag} with {d} variables; "
            f"need at least {required}",
            required=required,
        )

    def test(i, j):
        try:
            return wald_granger_test(spec(i, j), cols).p_value
        except PlacyError as exc:
            raise _with_context(exc, f"{ts.names[i]} -> {ts.names[j]}") from exc

    pairs = [(i, j) for i in range(d) for j in range(d) if i != j]
    for (i, j), p in zip(pairs, _run_pairs(pairs, test, threads)):
        p_values[i, j] = p
    return _graph_from_p(ts.names, p_values, alpha, meta)


def evaluate_blocks(data: TimeSeriesSet, length: int, method, **kwargs) -> list[CausalGraph]:
    """Run ``method`` on disjoint consecutive blocks of ``length`` samples."""
    graphs = []
    for block in data.blocks(length):
        g = method(block, **kwargs)
        g.meta.update(block.meta)
        graphs.append(g)
    return graphs
