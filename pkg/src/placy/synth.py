"""Synthetic benchmarks: generalized OU paths with injected lagged causation.

Each path follows the Euler recursion

    x(t+dt) = x(t) + (dt/tau_c) (mu - x(t))
              + (sigma_b eb(t) + sigma_ga ega(t) + sigma_gm egm(t) x(t)) sqrt(dt)

where ``ega`` and ``egm`` are i.i.d. standard normal per step and ``eb`` is a
Brownian path (cumulative sum of N(0, dt) increments, ``eb(0) = 0``).

Random numbers come from numpy's PCG64 seeded through ``SeedSequence(seed,
spawn_key=(role, index))``: one stream per variable for path noise and one
stream for the DAG, so adding variables never changes the earlier ones.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .data import TimeSeriesSet
from .exceptions import InvalidInputError

__all__ = [
    "OUParams",
    "GroundTruth",
    "ScenarioSpec",
    "SCENARIO_KINDS",
    "generate_ou",
    "generate_dag",
    "inject_causality",
    "simulate_paths",
    "make_scenario",
    "stream",
]

SCENARIO_KINDS = ("OU_NOMULT", "OU_MULT", "OUHAT_NOMULT", "OUHAT_MULT")
CLI_KIND_NAMES = {
    "ou": "OU_NOMULT",
    "ou-mult": "OU_MULT",
    "ouhat": "OUHAT_NOMULT",
    "ouhat-mult": "OUHAT_MULT",
}

_ROLE_DAG = 0
_ROLE_PATH = 1

DEFAULT_SIGMA_GM = 1.0


def stream(seed: int, role: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(role), int(index))))
    )


@dataclass(frozen=True)
class OUParams:
    dt: float = 0.01
    tau_c: float = 0.5
    mu: float = 1.0
    sigma_b: float = 0.0
    sigma_ga: float = 1.0
    sigma_gm: float = 0.0
    x0: float = 1.0

    def __post_init__(self):
        if not self.dt > 0 or not self.tau_c > 0:
            raise InvalidInputError("dt and tau_c must be positive")
        for name in ("sigma_b", "sigma_ga", "sigma_gm"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise InvalidInputError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class GroundTruth:
    adjacency: np.ndarray
    causal_strength: float = 0.5
    lag: int = 5

    def __post_init__(self):
        m = np.asarray(self.adjacency)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidInputError("adjacency must be square")
        if not np.all((m == 0) | (m == 1)):
            raise InvalidInputError("adjacency entries must be 0 or 1")
        if np.any(np.tril(m)):
            raise InvalidInputError("adjacency must be strictly upper triangular")
        if int(self.lag) != self.lag or self.lag < 0:
            raise InvalidInputError(f"lag must be a nonnegative integer, got {self.lag}")
        object.__setattr__(self, "adjacency", m.astype(np.int8))
        object.__setattr__(self, "lag", int(self.lag))

    @property
    def n_vars(self) -> int:
        return self.adjacency.shape[0]

    def edges(self) -> list[tuple[int, int]]:
        return [tuple(map(int, e)) for e in np.argwhere(self.adjacency)]

    def to_dict(self) -> dict:
        return {
            "adjacency": self.adjacency.tolist(),
            "causal_strength": self.causal_strength,
            "lag": self.lag,
        }


def generate_ou(params: OUParams, length: int, rng: np.random.Generator,
                backend: str | None = None) -> np.ndarray:
    """One generalized OU path of ``length`` samples starting at ``params.x0``."""
    if length < 1:
        raise InvalidInputError(f"length must be >= 1, got {length}")
    steps = length - 1
    z = rng.standard_normal((3, steps))
    sqrt_dt = math.sqrt(params.dt)
    eb = np.empty(steps)
    if steps:
        eb[0] = 0.0
        eb[1:] = np.cumsum(sqrt_dt * z[0, : steps - 1])
    impl = kernels if backend is None else kernels.get_backend(backend)
    return impl.ou_path(
        float(params.x0),
        params.dt / params.tau_c,
        float(params.mu),
        sqrt_dt,
        float(params.sigma_b),
        float(params.sigma_ga),
        float(params.sigma_gm),
        eb,
        z[1],
        z[2],
    )


def generate_dag(n: int, edge_prob: float = 0.3, rng: np.random.Generator | None = None):
    """Strictly upper-triangular 0/1 matrix; each ``(i, j), i < j`` is 1 w.p. ``edge_prob``.

    Uniforms are drawn column by column (``j`` draws for column ``j``), so
    the first columns do not depend on ``n``.
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if not 0.0 <= edge_prob <= 1.0:
        raise InvalidInputError(f"edge_prob must lie in [0, 1], got {edge_prob}")
    rng = np.random.default_rng() if rng is None else rng
    m = np.zeros((n, n), dtype=np.int8)
    for j in range(1, n):
        m[:j, j] = rng.random(j) < edge_prob
    return m


def inject_causality(values, truth: GroundTruth, return_flags: bool = False):
    """Add ``C * x_i(t - lag)`` to every effect column, then restore its range.

    Causes are read from a snapshot of the input, so edge order is irrelevant.
    Each modified column is min-max mapped back to its pre-injection range;
    a column whose original range is zero is left unscaled and reported.
    """
    x = np.array(values, dtype=float, copy=True)
    if x.ndim != 2 or x.shape[1] != truth.n_vars:
        raise InvalidInputError(
            f"values of shape {x.shape} do not match a {truth.n_vars}-variable ground truth"
        )
    L = x.shape[0]
    tau = truth.lag
    if L <= tau:
        raise InvalidInputError(f"series length {L} must exceed the causal lag {tau}")
    src = x.copy()
    C = truth.causal_strength
    modified = []
    unscaled = []
    for j in range(truth.n_vars):
        causes = np.flatnonzero(truth.adjacency[:, j])
        if causes.size == 0 or C == 0:
            continue
        add = np.zeros(L)
        for i in causes:
            add[tau:] += C * src[: L - tau, i]
        x[:, j] = src[:, j] + add
        modified.append(j)
    for j in modified:
        lo, hi = src[:, j].min(), src[:, j].max()
        nlo, nhi = x[:, j].min(), x[:, j].max()
        if hi == lo or nhi == nlo:
            unscaled.append(j)
            continue
        x[:, j] = lo + (x[:, j] - nlo) * ((hi - lo) / (nhi - nlo))
        # pin the endpoints exactly against rounding in the affine map
        x[np.argmin(x[:, j]), j] = lo
        x[np.argmax(x[:, j]), j] = hi
    if unscaled:
        warnings.warn(f"columns {unscaled} have zero range; rescaling skipped", stacklevel=2)
    if return_flags:
        return x, unscaled
    return x


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str = "OU_NOMULT"
    n_vars: int = 5
    length: int = 5000
    ou: OUParams = field(default_factory=OUParams)
    edge_prob: float = 0.3
    causal_strength: float = 0.5
    lag: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise InvalidInputError(f"unknown scenario kind {self.kind!r}")
        want_x0 = 100.0 if self.kind.startswith("OUHAT") else 1.0
        if self.ou.x0 != want_x0:
            raise InvalidInputError(f"{self.kind} requires x0={want_x0:g}, got {self.ou.x0}")
        if self.kind.endswith("_NOMULT") and self.ou.sigma_gm != 0:
            raise InvalidInputError(f"{self.kind} requires sigma_gm = 0")
        if self.kind.endswith("_MULT") and not self.ou.sigma_gm > 0:
            raise InvalidInputError(f"{self.kind} requires sigma_gm > 0")
        if self.n_vars < 1 or self.length < 1:
            raise InvalidInputError("n_vars and length must be >= 1")

    @classmethod
    def build(cls, kind: str, *, n_vars=5, length=5000, sigma_b=0.0, sigma_ga=1.0,
              sigma_gm=None, causal_strength=0.5, lag=5, edge_prob=0.3, seed=0,
              ou: OUParams | None = None) -> "ScenarioSpec":
        """Spec with the kind's fixed settings filled in.

        ``kind`` may be a canonical name or a CLI alias (``ou-mult``...).
        ``sigma_gm`` defaults to 1 for multiplicative kinds and is forced to
        0 otherwise.
        """
        kind = CLI_KIND_NAMES.get(kind, kind)
        if kind not in SCENARIO_KINDS:
            raise InvalidInputError(f"unknown scenario kind {kind!r}")
        mult = not kind.endswith("NOMULT")
        if sigma_gm is None:
            sigma_gm = DEFAULT_SIGMA_GM if mult else 0.0
        base = ou or OUParams()
        ou = replace(
            base,
            sigma_b=float(sigma_b),
            sigma_ga=float(sigma_ga),
            sigma_gm=float(sigma_gm),
            x0=100.0 if kind.startswith("OUHAT") else 1.0,
        )
        return cls(kind, int(n_vars), int(length), ou, float(edge_prob),
                   float(causal_strength), int(lag), int(seed))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_vars": self.n_vars,
            "length": self.length,
            "edge_prob": self.edge_prob,
            "causal_strength": self.causal_strength,
            "lag": self.lag,
            "seed": self.seed,
            "ou": {k: getattr(self.ou, k) for k in
                   ("dt", "tau_c", "mu", "sigma_b", "sigma_ga", "sigma_gm", "x0")},
        }


def simulate_paths(spec: ScenarioSpec, backend: str | None = None) -> np.ndarray:
    """Independent raw OU paths (``length x n_vars``), before any injection."""
    cols = [
        generate_ou(spec.ou, spec.length, stream(spec.seed, _ROLE_PATH, i), backend=backend)
        for i in range(spec.n_vars)
    ]
    return np.column_stack(cols)


def make_scenario(spec: ScenarioSpec, backend: str | None = None):
    """Generate ``(TimeSeriesSet, GroundTruth)`` for ``spec``; a pure function of it."""
    raw = simulate_paths(spec, backend=backend)
    adj = generate_dag(spec.n_vars, spec.edge_prob, stream(spec.seed, _ROLE_DAG))
    truth = GroundTruth(adj, spec.causal_strength, spec.lag)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        values, unscaled = inject_causality(raw, truth, return_flags=True)
    meta = {"scenario": spec.to_dict(), "unscaled_columns": unscaled}
    return TimeSeriesSet(values, tuple(f"x{i}" for i in range(spec.n_vars)), meta), truth
