"""Command-line interface.

Subcommands: ``discover``, ``baseline``, ``gen``, ``bench``, ``select-window``.

Exit codes: 0 success, 2 missing input file (or bad usage), 3 invalid
configuration, 4 malformed data file, 5 analysis failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import BenchmarkSpec, parse_seeds, run_bench, write_bench
from .discovery import CausalGraph, DiscoveryConfig, discover, granger_baseline, resolve_threads
from .exceptions import DataFileError, InvalidInputError, PlacyError
from .io import dump_json, graph_report, load_csv, load_truth, write_csv, write_pvalue_csv
from .metrics import evaluate
from .spectral import WindowPlan, select_window_length
from .synth import CLI_KIND_NAMES, ScenarioSpec, make_scenario

log = logging.getLogger("placy")

EXIT_OK = 0
EXIT_MISSING_FILE = 2
EXIT_CONFIG = 3
EXIT_DATA = 4
EXIT_ANALYSIS = 5

DEFAULT_SAMPLE_LENGTH = 500


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _float_list(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _int_list(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _read_input(args):
    path = Path(args.input)
    if not path.is_file():
        raise CliError(f"input file not found: {path}", EXIT_MISSING_FILE)
    return load_csv(path, interpolate_missing=not args.no_interpolate)


def _pvalue_path(args) -> Path:
    if args.pvalues_out:
        return Path(args.pvalues_out)
    out = Path(args.out)
    return out.with_name(out.stem + ".pvalues.csv")


def _aggregate_blocks(graphs: list[CausalGraph], alpha: float) -> CausalGraph:
    p = np.median(np.stack([g.p_values for g in graphs]), axis=0)
    d = p.shape[0]
    adj = np.zeros((d, d), dtype=bool)
    off = ~np.eye(d, dtype=bool)
    adj[off] = p[off] < alpha
    meta = dict(graphs[0].meta)
    for k in ("block", "start"):
        meta.pop(k, None)
    return CausalGraph(graphs[0].names, adj, p, alpha, meta)


def _analyse(args, ts, method, extra_meta: dict):
    """Run ``method`` on the whole set or on disjoint blocks; write outputs."""
    truth = None
    if args.truth:
        tpath = Path(args.truth)
        if not tpath.is_file():
            raise CliError(f"ground-truth file not found: {tpath}", EXIT_MISSING_FILE)
        truth = load_truth(tpath)
        if truth.shape != (ts.n_vars, ts.n_vars):
            raise CliError(
                f"ground truth is {truth.shape}, data has {ts.n_vars} variables", EXIT_CONFIG
            )

    meta = {"input": str(args.input), "missing": ts.meta.get("missing", {}), **extra_meta}
    if args.sample_length:
        blocks = ts.blocks(args.sample_length)
        if not blocks:
            raise CliError(
                f"series length {ts.length} shorter than --sample-length {args.sample_length}",
                EXIT_CONFIG,
            )
        graphs = []
        for block in blocks:
            g = method(block)
            g.meta.update(block.meta)
            graphs.append(g)
        graph = _aggregate_blocks(graphs, graphs[0].alpha)
        per_block = []
        for g in graphs:
            entry = {"block": g.meta["block"], "start": g.meta["start"],
                     "adjacency": g.adjacency.tolist()}
            if truth is not None:
                entry["evaluation"] = evaluate(g, truth).to_dict()
            per_block.append(entry)
        meta["sampling"] = {
            "mode": "disjoint consecutive blocks",
            "sample_length": args.sample_length,
            "n_blocks": len(graphs),
            "aggregation": "median p-value across blocks, thresholded at alpha",
            "blocks": per_block,
        }
        if truth is not None:
            f1 = np.array([b["evaluation"]["f1"] for b in per_block])
            tnr = np.array([b["evaluation"]["tnr"] for b in per_block])
            meta["evaluation_over_blocks"] = {
                "f1_mean": float(f1.mean()), "f1_std": float(f1.std()),
                "tnr_mean": float(tnr.mean()), "tnr_std": float(tnr.std()),
            }
    else:
        graph = method(ts)
    if truth is not None:
        meta["evaluation"] = evaluate(graph, truth).to_dict()

    report = graph_report(graph, meta)
    dump_json(report, args.out)
    write_pvalue_csv(graph, _pvalue_path(args))
    edges = [f"{graph.names[i]} -> {graph.names[j]}" for i, j in graph.edges()]
    print(f"{len(edges)} edge(s): " + (", ".join(edges) if edges else "none"))
    print(f"wrote {args.out} and {_pvalue_path(args)}")
    return report


def cmd_discover(args) -> int:
    ts = _read_input(args)
    cfg = DiscoveryConfig(
        plan=WindowPlan(args.window, args.stride),
        max_lag=args.max_lag,
        alpha=args.alpha,
        auto_window=args.auto_window,
        window_candidates=tuple(args.window_candidates),
        intercept_role=args.intercept_role,
    )
    threads = resolve_threads(args.threads)
    _analyse(args, ts, lambda d: discover(d, cfg, threads=threads), {})
    return EXIT_OK


def cmd_baseline(args) -> int:
    ts = _read_input(args)
    threads = resolve_threads(args.threads)
    _analyse(args, ts, lambda d: granger_baseline(d, args.max_lag, args.alpha, threads=threads),
             {})
    return EXIT_OK


def cmd_select_window(args) -> int:
    ts = _read_input(args)
    result = {}
    for i, name in enumerate(ts.names):
        sel = select_window_length(ts.column(i), args.window_candidates, args.alpha)
        result[name] = {
            "length": sel.length,
            "significant": sel.significant,
            "median_p_values": {str(k): v for k, v in sel.median_p_values.items()},
        }
        flag = "" if sel.significant else "  (not significant)"
        print(f"{name}: {sel.length}{flag}")
    common = max(r["length"] for r in result.values())
    print(f"common window: {common}")
    if args.out:
        dump_json({"alpha": args.alpha, "candidates": list(args.window_candidates),
                   "per_variable": result, "selected": common}, args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = ScenarioSpec.build(
        args.scenario,
        n_vars=args.n_vars,
        length=args.length,
        sigma_b=args.sigma_b,
        sigma_ga=args.sigma_ga,
        sigma_gm=args.sigma_gm,
        causal_strength=args.causal_strength,
        lag=args.lag_tau,
        seed=args.seed,
    )
    ts, truth = make_scenario(spec)
    out = Path(args.out)
    write_csv(ts, out)
    truth_path = Path(args.truth_out) if args.truth_out else out.with_name(out.stem + ".truth.json")
    dump_json({**truth.to_dict(), "names": list(ts.names), "scenario": spec.to_dict()}, truth_path)
    print(f"wrote {out} ({ts.length} x {ts.n_vars}) and {truth_path} "
          f"({len(truth.edges())} edge(s))")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.spec:
        path = Path(args.spec)
        if not path.is_file():
            raise CliError(f"benchmark spec not found: {path}", EXIT_MISSING_FILE)
        spec = BenchmarkSpec.from_file(path)
    else:
        spec = BenchmarkSpec(
            kinds=tuple(args.scenario.split(",")),
            sigma_b=tuple(_float_list(args.sigma_b)),
            sigma_ga=tuple(_float_list(args.sigma_ga)),
            n_vars=tuple(_int_list(args.n_vars)),
            causal_strength=tuple(_float_list(args.causal_strength)),
            length=args.length,
            seeds=tuple(parse_seeds(args.seeds)),
            methods=tuple(args.methods.split(",")),
            sigma_gm=args.sigma_gm,
            lag=args.lag_tau,
            window=args.window,
            stride=args.stride,
            max_lag=args.max_lag,
            alpha=args.alpha,
        )
    threads = resolve_threads(args.threads)
    raw, agg = run_bench(spec, threads=threads)
    paths = write_bench(spec, raw, agg, args.out_dir)
    for r in agg:
        print(f"{r['kind']:<13} N={r['n_vars']:<3} C={r['causal_strength']:<4} "
              f"sb={r['sigma_b']:<4} sga={r['sigma_ga']:<4} {r['method']:<8} "
              f"F1={r['f1_mean']:.3f}±{r['f1_std']:.3f} TNR={r['tnr_mean']:.3f}±{r['tnr_std']:.3f}"
              f" ({r['n_ok']} ok, {r['n_failed']} failed)")
    print("wrote " + ", ".join(paths.values()))
    return EXIT_OK


def _add_io(p, with_out=True):
    p.add_argument("--input", required=True, help="CSV with a header row of variable names")
    if with_out:
        p.add_argument("--out", required=True, help="graph JSON report")
        p.add_argument("--pvalues-out", help="p-value matrix CSV (default: <out>.pvalues.csv)")
        p.add_argument("--truth", help="ground-truth adjacency (JSON or CSV) to score against")
        p.add_argument("--sample-length", type=int, default=None,
                       help="analyse disjoint consecutive blocks of this length")
        p.add_argument("--sample", dest="sample_length", action="store_const",
                       const=DEFAULT_SAMPLE_LENGTH,
                       help=f"same as --sample-length {DEFAULT_SAMPLE_LENGTH}")
    p.add_argument("--no-interpolate", action="store_true",
                   help="keep missing values instead of interpolating them")


def _add_common(p):
    p.add_argument("--max-lag", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--threads", type=int, default=None,
                   help="worker count (default: $PLACY_THREADS or 1)")


def _add_window(p):
    p.add_argument("--window", type=int, default=50)
    p.add_argument("--stride", type=int, default=1)


def _add_scenario(p, multi=False):
    if multi:
        p.add_argument("--scenario", default="ou-mult",
                       help="comma list of " + ", ".join(CLI_KIND_NAMES))
        p.add_argument("--n-vars", default="5", help="comma list")
        p.add_argument("--causal-strength", default="0.5", help="comma list")
        p.add_argument("--sigma-b", default="0,0.1,0.5,1", help="comma list")
        p.add_argument("--sigma-ga", default="1", help="comma list")
    else:
        p.add_argument("--scenario", default="ou-mult", choices=sorted(CLI_KIND_NAMES))
        p.add_argument("--n-vars", type=int, default=5)
        p.add_argument("--causal-strength", type=float, default=0.5)
        p.add_argument("--sigma-b", type=float, default=0.0)
        p.add_argument("--sigma-ga", type=float, default=1.0)
    p.add_argument("--sigma-gm", type=float, default=None,
                   help="multiplicative volatility (default 1 for *-mult, 0 otherwise)")
    p.add_argument("--length", type=int, default=5000)
    p.add_argument("--lag-tau", type=int, default=5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="placy", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discover", help="causal graph from power-law spectral features")
    _add_io(p)
    _add_window(p)
    _add_common(p)
    p.add_argument("--auto-window", action="store_true",
                   help="pick the window length from the slope p-values first")
    p.add_argument("--window-candidates", type=_int_list, default=[50, 100, 150, 200])
    p.add_argument("--intercept-role", choices=["causing", "covariate", "excluded"],
                   default="causing")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("baseline", help="multivariate Granger test on the raw series")
    _add_io(p)
    _add_common(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("select-window", help="data-driven window length per variable")
    _add_io(p, with_out=False)
    p.add_argument("--out", help="optional JSON report")
    p.add_argument("--window-candidates", type=_int_list, default=[50, 100, 150, 200])
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_select_window)

    p = sub.add_parser("gen", help="generate a synthetic OU benchmark dataset")
    _add_scenario(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="data CSV")
    p.add_argument("--truth-out", help="ground truth JSON (default: <out>.truth.json)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="multi-seed benchmark over the scenario grid")
    p.add_argument("--spec", help="JSON benchmark spec (overrides the grid flags)")
    _add_scenario(p, multi=True)
    _add_window(p)
    _add_common(p)
    p.add_argument("--seeds", default="0-19", help='e.g. "0-99" or "1,2,3"')
    p.add_argument("--methods", default="placy,granger")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_MISSING_FILE
    except DataFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InvalidInputError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PlacyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
