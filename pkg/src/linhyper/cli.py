"""Command-line front end producing machine-readable reports.

Exit codes: 0 on success, 1 when an internal counting identity fails (a bug,
not bad input), 2 on user or input errors.  Randomized commands embed the
effective seed in their output; replaying with the same seed and worker count
reproduces the report byte for byte.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys

import numpy as np

from .asymptotics import (
    estimate_bigraph,
    estimate_linear,
    estimate_simple,
    girth6_probability,
    switching_ratio,
)
from .bigraph_core import BipartiteGraph, classify
from .degree_model import (
    DegreeSequence,
    degree_sequence_from_json,
    new_degree_sequence,
)
from .errors import InvariantViolation, LinhyperError
from .exact_oracle import (
    DEFAULT_MAX_SPACE,
    canonical_battery,
    enumerate_bigraphs,
    full_report,
)
from .switching_engine import (
    apply_forward,
    apply_reverse,
    derive_degree_sequence,
    forward_candidates,
    monte_carlo_girth,
    sample_no4cycle,
)


def _fmt(x: float) -> str:
    return f"{x + 0.0:.12g}"


def _add_ds_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("-r", type=int, help="uniform edge size")
    sp.add_argument("-k", type=str, help="comma-separated degrees (overrides --input)")
    sp.add_argument(
        "--input",
        type=str,
        help='degree-sequence JSON file: {"r": <int>, "k": [<int>, ...]}',
    )


def _resolve_ds(args) -> DegreeSequence:
    if args.k is not None:
        if args.r is None:
            raise ValueError("-r is required when -k is given")
        k = [int(part) for part in args.k.split(",") if part.strip() != ""]
        return new_degree_sequence(k, args.r)
    if args.input:
        with open(args.input) as fh:
            return degree_sequence_from_json(json.load(fh))
    raise ValueError("provide a degree sequence with -r/-k or --input")


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _emit_csv(header: list[str], rows: list[list[str]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def cmd_exact(args) -> int:
    ds = _resolve_ds(args)
    if args.format == "csv":
        raise ValueError("exact emits JSON only")
    report = full_report(ds, max_space=args.max_space, workers=args.workers)
    out = {"r": ds.r, "k": list(ds.k)}
    out.update(report.to_json_dict())
    _emit_json(out)
    return 0


def cmd_estimate(args) -> int:
    ds = _resolve_ds(args)
    estimates = {
        "linear": estimate_linear(ds),
        "simple": estimate_simple(ds),
        "bigraph": estimate_bigraph(ds),
        "girth6": girth6_probability(ds),
    }
    if args.format == "csv":
        rows = [
            [name, _fmt(est.log_value), _fmt(est.value), _fmt(est.error_scale)]
            for name, est in estimates.items()
        ]
        _emit_csv(["formula", "log_value", "value", "error_scale"], rows)
    else:
        _emit_json(
            {
                "r": ds.r,
                "k": list(ds.k),
                "estimates": {n: e.to_json_dict() for n, e in estimates.items()},
            }
        )
    return 0


def cmd_classify(args) -> int:
    if not args.input:
        raise ValueError("classify requires --input with a bipartite-graph JSON file")
    with open(args.input) as fh:
        graph = BipartiteGraph.from_json_dict(json.load(fh))
    if args.k is not None:
        if args.r is None:
            raise ValueError("-r is required when -k is given")
        ds = new_degree_sequence(
            [int(p) for p in args.k.split(",") if p.strip() != ""], args.r
        )
    else:
        ds = derive_degree_sequence(graph)
    cls = classify(graph, ds)
    _emit_json(
        {
            "d": cls.d,
            "in_b0": cls.in_b0,
            "in_bplus": cls.in_bplus,
            "failed_properties": sorted(cls.failed_properties),
            "four_cycles": [
                {
                    "left": [j + 1 for j in c.left_pair],
                    "right": [i + 1 for i in c.right_pair],
                }
                for c in cls.four_cycles
            ],
        }
    )
    return 0


def cmd_sample(args) -> int:
    ds = _resolve_ds(args)
    seed = args.seed if args.seed is not None else secrets.randbits(32)
    rng = np.random.default_rng(seed)
    res = sample_no4cycle(ds, rng)
    _emit_json(
        {
            "graph": res.graph.to_json_dict(),
            "meta": {
                "seed": seed,
                "steps": res.steps,
                "rejections": res.pairing_rejections,
                "bplus_rejections": res.bplus_rejections,
                "restarts": res.restarts,
                "d_trajectory": list(res.d_trajectory),
            },
        }
    )
    return 0


def cmd_girth(args) -> int:
    ds = _resolve_ds(args)
    seed = args.seed if args.seed is not None else secrets.randbits(32)
    est = monte_carlo_girth(ds, seed=seed, trials=args.trials, workers=args.workers)
    out = {
        "p_hat": est.p_hat,
        "ci_halfwidth": est.ci_halfwidth,
        "trials": est.trials,
        "predicted": est.predicted,
        "seed": seed,
        "workers": args.workers,
        "rejections": est.rejections,
    }
    if args.format == "csv":
        _emit_csv(
            ["p_hat", "ci_halfwidth", "trials", "predicted", "seed"],
            [
                [
                    _fmt(est.p_hat),
                    _fmt(est.ci_halfwidth),
                    str(est.trials),
                    _fmt(est.predicted),
                    str(seed),
                ]
            ],
        )
    else:
        _emit_json(out)
    return 0


def _involution_spot_check(ds: DegreeSequence, max_space: int, limit: int = 10) -> int:
    """Round-trip the first applicable switch on up to ``limit`` graphs.

    Returns the number of round trips performed; raises InvariantViolation
    if any fails to restore its graph.
    """
    found: list[BipartiteGraph] = []

    def visitor(graph: BipartiteGraph) -> None:
        if len(found) < limit and graph.has_four_cycle():
            cls = classify(graph, ds)
            if cls.in_bplus and cls.d >= 1:
                found.append(graph)

    enumerate_bigraphs(ds, visitor=visitor, max_space=max_space)
    checks = 0
    for graph in found:
        cls = classify(graph, ds)
        for t in forward_candidates(graph, cls):
            try:
                switched = apply_forward(graph, t)
            except LinhyperError:
                continue
            back = apply_reverse(switched, t)
            if back != graph:
                raise InvariantViolation(
                    "switch round trip failed to restore the graph"
                )
            checks += 1
            break
    return checks


def cmd_verify(args) -> int:
    r = args.r if args.r is not None else 3
    battery = canonical_battery(rs=(r,), max_space=args.max_space)
    if not battery:
        raise ValueError(
            f"verification battery is empty for r={r}, max_space={args.max_space}"
        )
    rows = []
    spot_checks = 0
    for ds in battery:
        report = full_report(ds, max_space=args.max_space, workers=args.workers)
        est = estimate_linear(ds)
        row = {
            "k": list(ds.k),
            "r": ds.r,
            "count_l": str(report.count_l),
            "estimate_linear": est.value,
            "ratio": (report.count_l / est.value) if est.value > 0 else None,
            "error_scale": est.error_scale,
        }
        if args.ratio_check:
            c0, c1 = report.cd_profile[0], report.cd_profile[1]
            row["c0"] = str(c0)
            row["c1"] = str(c1)
            row["ratio_c1_c0"] = (c1 / c0) if c0 > 0 else None
            row["switching_ratio_d1"] = switching_ratio(ds, 1)
        rows.append(row)
        spot_checks += _involution_spot_check(ds, args.max_space)
    out = {
        "instances": len(rows),
        "identities": "ok",
        "involution_spot_checks": spot_checks,
        "rows": rows,
    }
    if args.format == "csv":
        header = list(rows[0].keys())
        csv_rows = []
        for row in rows:
            cells = []
            for h in header:
                v = row[h]
                if isinstance(v, list):
                    cells.append(" ".join(str(x) for x in v))
                elif isinstance(v, float):
                    cells.append(_fmt(v))
                else:
                    cells.append("" if v is None else str(v))
            csv_rows.append(cells)
        _emit_csv(header, csv_rows)
    else:
        _emit_json(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linhyper",
        description=(
            "Enumerate, estimate, classify and sample uniform hypergraphs "
            "with given degrees via their bipartite incidence graphs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exact = sub.add_parser("exact", help="exact counts by exhaustive search")
    _add_ds_args(p_exact)
    p_exact.add_argument("--max-space", type=int, default=DEFAULT_MAX_SPACE)
    p_exact.add_argument("--workers", type=int, default=1)
    p_exact.add_argument("--format", choices=("json", "csv"), default="json")
    p_exact.set_defaults(func=cmd_exact)

    p_est = sub.add_parser("estimate", help="closed-form estimates")
    _add_ds_args(p_est)
    p_est.add_argument("--format", choices=("json", "csv"), default="json")
    p_est.set_defaults(func=cmd_estimate)

    p_cls = sub.add_parser("classify", help="classify a bipartite graph JSON")
    _add_ds_args(p_cls)
    p_cls.set_defaults(func=cmd_classify)

    p_sample = sub.add_parser("sample", help="sample a 4-cycle-free graph")
    _add_ds_args(p_sample)
    p_sample.add_argument("--seed", type=int, default=None)
    p_sample.set_defaults(func=cmd_sample)

    p_girth = sub.add_parser("girth", help="Monte Carlo girth-6 probability")
    _add_ds_args(p_girth)
    p_girth.add_argument("--seed", type=int, default=None)
    p_girth.add_argument("--trials", type=int, default=1000)
    p_girth.add_argument("--workers", type=int, default=1)
    p_girth.add_argument("--format", choices=("json", "csv"), default="json")
    p_girth.set_defaults(func=cmd_girth)

    p_verify = sub.add_parser(
        "verify", help="run the small-instance identity battery"
    )
    p_verify.add_argument("-r", type=int, default=None)
    p_verify.add_argument("--max-space", type=int, default=DEFAULT_MAX_SPACE)
    p_verify.add_argument("--workers", type=int, default=1)
    p_verify.add_argument("--format", choices=("json", "csv"), default="json")
    p_verify.add_argument("--ratio-check", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"identity violation: {exc}", file=sys.stderr)
        return 1
    except (LinhyperError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
