"""Command-line front end.

Subcommands: generate, pod, interp, evaluate, pipeline, report.
Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import interp, io, manifold, pipeline, pod, testbed
from .errors import ConfigInvalid, GrassintError

_LAMBDA_RE = re.compile(r"_(-?[0-9.eE+-]+)$")


def _lambda_from_stem(stem: str) -> float:
    match = _LAMBDA_RE.search(stem)
    if not match:
        raise ConfigInvalid(
            f"cannot parse a parameter value from file name {stem!r} "
            "(expected e.g. basis_110.0.grsm)"
        )
    return float(match.group(1))


def _fmt_lambda(lam: float) -> str:
    return f"{lam:g}"


def load_sample_dir(path) -> interp.ParameterSampleSet:
    """Read a directory of basis_<lambda>.{grsm,csv} files (plus optional means)."""
    path = Path(path)
    basis_files = sorted(
        list(path.glob("basis_*.grsm")) + list(path.glob("basis_*.csv"))
    )
    if not basis_files:
        raise ConfigInvalid(f"no basis_*.grsm or basis_*.csv files in {path}")
    entries = sorted(
        ((_lambda_from_stem(f.stem), f) for f in basis_files), key=lambda e: e[0]
    )
    params = [lam for lam, _ in entries]
    raw_bases = [io.read_matrix(f) for _, f in entries]
    points = [manifold.make_point(b) for b in raw_bases]
    mean_fields = None
    means = {}
    for f in list(path.glob("mean_*.grsm")) + list(path.glob("mean_*.csv")):
        means[_lambda_from_stem(f.stem)] = io.read_matrix(f).ravel()
    if means:
        try:
            mean_fields = [means[lam] for lam in params]
        except KeyError as exc:
            raise ConfigInvalid(f"missing mean field for lambda = {exc}") from exc
    return interp.ParameterSampleSet(
        params=np.asarray(params),
        points=points,
        raw_bases=raw_bases,
        mean_fields=mean_fields,
    )


def cmd_generate(args) -> int:
    config = pipeline.load_config(args.config, out_dir=args.out, workers=args.workers,
                                  seed=args.seed)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for lam in config.samples:
        raw, times, hit = pipeline.solve_or_load(config, lam, out / "cache")
        tag = _fmt_lambda(lam)
        io.write_matrix(out / f"snapshots_{tag}.grsm", raw)
        problem = testbed.BurgersProblem(
            n_cells=config.grid,
            length=config.domain_length,
            lam=lam,
            initial_condition=config.initial_condition,
            final_time=config.final_time,
        )
        io.write_json(
            out / f"snapshots_{tag}.json",
            {
                "lambda": lam,
                "nu": problem.nu,
                "grid": config.grid,
                "dt": problem.dt,
                "T": config.final_time,
                "N_T": config.n_snapshots,
                "seed": config.seed,
                "kind": config.kind,
                "times": list(times),
            },
        )
        print(f"wrote {out / f'snapshots_{tag}.grsm'}" + (" (cached)" if hit else ""))
    return 0


def cmd_pod(args) -> int:
    src = Path(args.snapshots)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = sorted(src.glob("snapshots_*.grsm")) + sorted(src.glob("snapshots_*.csv"))
    if not files:
        raise ConfigInvalid(f"no snapshots_* files in {src}")
    for f in files:
        lam = _lambda_from_stem(f.stem)
        meta_path = f.with_suffix(".json")
        raw = io.read_matrix(f)
        if meta_path.exists():
            times = np.asarray(io.read_json(meta_path)["times"])
        else:
            times = np.arange(raw.shape[1], dtype=float)
        ens = pod.split_mean(raw, times)
        basis = pod.snapshots_pod(ens, args.modes)
        tag = _fmt_lambda(lam)
        io.write_matrix(out / f"basis_{tag}.grsm", basis.modes)
        io.write_matrix(out / f"mean_{tag}.grsm", basis.mean[:, None])
        io.write_spectrum_csv(out / f"spectrum_{tag}.csv", basis.eigenvalues)
        print(f"wrote {out / f'basis_{tag}.grsm'} ({args.modes} modes)")
    return 0


def cmd_interp(args) -> int:
    samples = load_sample_dir(args.samples)
    result = interp.interpolate(
        samples, args.target, args.method, reference_index=args.reference_index
    )
    out = Path(args.out) if args.out else Path(args.samples) / (
        f"interp_{args.method}_{_fmt_lambda(args.target)}.grsm"
    )
    io.write_matrix(out, result.point.representative)
    print(out)
    for line in result.diagnostics:
        print(f"diagnostic: {line}")
    return 0


def cmd_evaluate(args) -> int:
    modes = io.read_matrix(args.basis)
    raw = io.read_matrix(args.snapshots)
    meta_path = Path(args.snapshots).with_suffix(".json")
    if meta_path.exists():
        times = np.asarray(io.read_json(meta_path)["times"])
    else:
        times = np.arange(raw.shape[1], dtype=float)
    ens = pod.split_mean(raw, times)
    point = manifold.make_point(modes)
    basis = pod.PODBasis(
        modes=point.representative,
        eigenvalues=np.zeros(point.m),
        mean=ens.mean,
    )
    err = pod.projection_error(basis, ens)
    print(json.dumps({"projection_error": pipeline.format_error(err),
                      "projection_error_raw": err}))
    return 0


def cmd_pipeline(args) -> int:
    config = pipeline.load_config(
        args.config, out_dir=args.out, workers=args.workers, seed=args.seed
    )
    report = pipeline.run_pipeline(config)
    json_path, csv_path = pipeline.write_report(report, config.out_dir)
    print(f"wrote {json_path}")
    print(f"wrote {csv_path}")
    return 0


def cmd_report(args) -> int:
    reports = [io.read_json(p) for p in args.reports]
    table = pipeline.merge_reports(reports, metric=args.metric)
    if args.out:
        Path(args.out).write_text(table)
        print(f"wrote {args.out}")
    else:
        print(table, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grassint",
        description="Subspace interpolation benchmark pipeline",
    )
    parser.add_argument("--json-errors", action="store_true",
                        help="emit machine-readable error JSON on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="solve the HDM for each sample parameter")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("pod", help="POD bases from a snapshots directory")
    p.add_argument("--snapshots", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--modes", type=int, required=True)
    p.set_defaults(func=cmd_pod)

    p = sub.add_parser("interp", help="interpolate a basis at a new parameter")
    p.add_argument("--samples", required=True,
                   help="directory of basis_<lambda>.grsm files")
    p.add_argument("--method", required=True,
                   choices=["neville", "amsallem", "standard"])
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--reference-index", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_interp)

    p = sub.add_parser("evaluate", help="projection error of a basis vs snapshots")
    p.add_argument("--basis", required=True)
    p.add_argument("--snapshots", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="run the full benchmark pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("report", help="merge reports into a method x case table")
    p.add_argument("reports", nargs="+")
    p.add_argument("--metric", default="projection_error",
                   choices=["projection_error", "dynamic_error"])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalid, FileNotFoundError) as exc:
        _emit_error(args, exc)
        return 1
    except GrassintError as exc:
        _emit_error(args, exc)
        return 2


def _emit_error(args, exc: Exception) -> None:
    if getattr(args, "json_errors", False):
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
