"""Multi-seed benchmark harness over the synthetic scenario grid."""

from __future__ import annotations

import csv
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .discovery import DiscoveryConfig, discover, granger_baseline
from .exceptions import InvalidInputError, PlacyError
from .io import dump_json, fmt_float
from .metrics import evaluate
from .spectral import WindowPlan
from .synth import CLI_KIND_NAMES, SCENARIO_KINDS, ScenarioSpec, make_scenario

__all__ = ["BenchmarkSpec", "run_bench", "write_bench", "RAW_FIELDS", "AGG_FIELDS"]

METHODS = ("placy", "granger")
METRICS = ("tp", "fp", "tn", "fn", "precision", "recall", "f1", "tnr")

RAW_FIELDS = (
    "kind", "n_vars", "length", "causal_strength", "sigma_b", "sigma_ga", "sigma_gm",
    "seed", "method", "status", *METRICS, "error",
)
AGG_FIELDS = (
    "kind", "n_vars", "length", "causal_strength", "sigma_b", "sigma_ga", "sigma_gm",
    "method", "n_ok", "n_failed", "f1_mean", "f1_std", "tnr_mean", "tnr_std",
    "precision_mean", "recall_mean",
)


def parse_seeds(text) -> list[int]:
    """``"0-19"``, ``"1,2,5"`` or a mix (``"0-4,10"``)."""
    if isinstance(text, (list, tuple)):
        return [int(s) for s in text]
    seeds = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


@dataclass
class BenchmarkSpec:
    kinds: tuple = ("OU_MULT",)
    sigma_b: tuple = (0.0, 0.1, 0.5, 1.0)
    sigma_ga: tuple = (0.5, 1.0)
    n_vars: tuple = (5, 10)
    causal_strength: tuple = (0.5,)
    length: int = 5000
    seeds: tuple = tuple(range(100))
    methods: tuple = METHODS
    sigma_gm: float | None = None
    lag: int = 5
    edge_prob: float = 0.3
    window: int = 50
    stride: int = 1
    max_lag: int = 10
    alpha: float = 0.05

    def __post_init__(self):
        def tup(v):
            return tuple(v) if isinstance(v, (list, tuple)) else (v,)

        self.kinds = tuple(CLI_KIND_NAMES.get(k, k) for k in tup(self.kinds))
        bad = [k for k in self.kinds if k not in SCENARIO_KINDS]
        if bad:
            raise InvalidInputError(f"unknown scenario kind(s) {bad}")
        self.sigma_b = tuple(float(v) for v in tup(self.sigma_b))
        self.sigma_ga = tuple(float(v) for v in tup(self.sigma_ga))
        self.n_vars = tuple(int(v) for v in tup(self.n_vars))
        self.causal_strength = tuple(float(v) for v in tup(self.causal_strength))
        self.seeds = tuple(parse_seeds(self.seeds))
        if any(s < 0 for s in self.seeds):
            raise InvalidInputError("seeds must be nonnegative")
        self.methods = tuple(tup(self.methods))
        if not self.seeds:
            raise InvalidInputError("seed list must be nonempty")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown or not self.methods:
            raise InvalidInputError(f"methods must be drawn from {METHODS}, got {self.methods}")
        for name in ("sigma_b", "sigma_ga", "causal_strength"):
            vals = getattr(self, name)
            if not vals or any(not math.isfinite(v) or v < 0 for v in vals):
                raise InvalidInputError(f"{name} grid must be nonempty, finite and >= 0")
        if not self.n_vars or any(n < 1 for n in self.n_vars):
            raise InvalidInputError("n_vars grid must be nonempty and >= 1")

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchmarkSpec":
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise InvalidInputError(f"unknown benchmark spec field(s) {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def from_file(cls, path) -> "BenchmarkSpec":
        with Path(path).open(encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def cells(self) -> list[tuple]:
        return list(itertools.product(
            self.kinds, self.n_vars, self.causal_strength, self.sigma_b, self.sigma_ga
        ))

    def scenario(self, cell, seed) -> ScenarioSpec:
        kind, n, c, sb, sga = cell
        return ScenarioSpec.build(
            kind, n_vars=n, length=self.length, sigma_b=sb, sigma_ga=sga,
            sigma_gm=self.sigma_gm, causal_strength=c, lag=self.lag,
            edge_prob=self.edge_prob, seed=seed,
        )


def _run_one(spec: BenchmarkSpec, cell, seed) -> list[dict]:
    scen = spec.scenario(cell, seed)
    base = {
        "kind": scen.kind, "n_vars": scen.n_vars, "length": scen.length,
        "causal_strength": scen.causal_strength, "sigma_b": scen.ou.sigma_b,
        "sigma_ga": scen.ou.sigma_ga, "sigma_gm": scen.ou.sigma_gm, "seed": seed,
    }
    try:
        data, truth = make_scenario(scen)
    except PlacyError as exc:
        return [dict(base, method=m, status="error", error=f"generation: {exc}")
                for m in spec.methods]
    rows = []
    for method in spec.methods:
        row = dict(base, method=method)
        try:
            if method == "placy":
                cfg = DiscoveryConfig(
                    plan=WindowPlan(spec.window, spec.stride),
                    max_lag=spec.max_lag,
                    alpha=spec.alpha,
                )
                graph = discover(data, cfg, threads=1)
            else:
                graph = granger_baseline(data, spec.max_lag, spec.alpha, threads=1)
            rep = evaluate(graph, truth)
            row.update(status="ok", error="", **rep.to_dict())
        except (PlacyError, np.linalg.LinAlgError, FloatingPointError) as exc:
            row.update(status="error", error=f"{type(exc).__name__}: {exc}")
        rows.append(row)
    return rows


def _run_task(args):
    spec, cell, seed = args
    return _run_one(spec, cell, seed)


def _aggregate(spec: BenchmarkSpec, raw: list[dict]) -> list[dict]:
    out = []
    for cell in spec.cells():
        probe = spec.scenario(cell, spec.seeds[0])
        for method in spec.methods:
            rows = [
                r for r in raw
                if r["method"] == method and r["kind"] == probe.kind
                and r["n_vars"] == probe.n_vars and r["causal_strength"] == probe.causal_strength
                and r["sigma_b"] == probe.ou.sigma_b and r["sigma_ga"] == probe.ou.sigma_ga
            ]
            ok = [r for r in rows if r["status"] == "ok"]

            def stats(key):
                v = np.array([r[key] for r in ok], dtype=float)
                if v.size == 0:
                    return math.nan, math.nan
                return float(v.mean()), float(v.std(ddof=1)) if v.size > 1 else 0.0

            f1m, f1s = stats("f1")
            tnrm, tnrs = stats("tnr")
            out.append({
                "kind": probe.kind, "n_vars": probe.n_vars, "length": probe.length,
                "causal_strength": probe.causal_strength, "sigma_b": probe.ou.sigma_b,
                "sigma_ga": probe.ou.sigma_ga, "sigma_gm": probe.ou.sigma_gm,
                "method": method, "n_ok": len(ok), "n_failed": len(rows) - len(ok),
                "f1_mean": f1m, "f1_std": f1s, "tnr_mean": tnrm, "tnr_std": tnrs,
                "precision_mean": stats("precision")[0], "recall_mean": stats("recall")[0],
            })
    return out


def run_bench(spec: BenchmarkSpec, threads: int = 1) -> tuple[list[dict], list[dict]]:
    """Run every (cell, seed, method) and return ``(raw_rows, aggregate_rows)``.

    Rows are ordered by cell, then seed, then method, whatever the pool size.
    """
    tasks = [(spec, cell, seed) for cell in spec.cells() for seed in spec.seeds]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=1))
    else:
        results = [_run_task(t) for t in tasks]
    raw = [row for rows in results for row in rows]
    return raw, _aggregate(spec, raw)


def _cell(v):
    if isinstance(v, float):
        return fmt_float(v)
    return "" if v is None else str(v)


def write_rows(rows: list[dict], fields, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([_cell(r.get(f)) for f in fields])


def write_bench(spec: BenchmarkSpec, raw, agg, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "raw": out / "raw.csv",
        "aggregate_csv": out / "aggregate.csv",
        "aggregate_json": out / "aggregate.json",
    }
    write_rows(raw, RAW_FIELDS, paths["raw"])
    write_rows(agg, AGG_FIELDS, paths["aggregate_csv"])
    clean = [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in r.items()}
             for r in agg]
    dump_json({"spec": spec.to_dict(), "aggregate": clean}, paths["aggregate_json"])
    return {k: str(v) for k, v in paths.items()}
