"""End-to-end benchmark pipeline: solve -> POD -> interpolate -> ROM -> report.

The reference basis (direct POD at the target parameter) is used as ground
truth only; interpolation methods never see target-parameter data.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import interp, io, kernels, manifold, pod, testbed
from .errors import ConfigInvalid, GrassintError

METHOD_NAMES = ("reference", "neville", "amsallem", "standard")


def format_error(value: float) -> str:
    """Scientific notation with 3 significant digits (table style)."""
    return f"{value:.2e}"


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    samples: tuple
    target: float
    modes: int
    methods: tuple = METHOD_NAMES
    kind: str = "burgers"
    grid: int = 512
    domain_length: float = 1.0
    final_time: float = 2.0
    initial_condition: str = "sine"
    n_snapshots: int = 200
    reference_index: int | None = None
    seed: int = 0
    label: str = "case"
    out_dir: str = "out"
    workers: int = 1

    def __post_init__(self):
        if self.kind != "burgers":
            raise ConfigInvalid(f"unknown testbed kind {self.kind!r}")
        if self.modes < 1:
            raise ConfigInvalid("modes must be >= 1")
        if not self.methods:
            raise ConfigInvalid("methods list is empty")
        for method in self.methods:
            if method not in METHOD_NAMES:
                raise ConfigInvalid(f"unknown method {method!r}")
        samples = tuple(float(s) for s in self.samples)
        if sorted(set(samples)) != list(samples):
            raise ConfigInvalid("samples must be strictly increasing and distinct")
        if len(samples) < 1:
            raise ConfigInvalid("need at least one sample")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "methods", tuple(self.methods))

    def physics_key(self, lam: float) -> dict:
        """Settings that determine one HDM solve (the cache key content)."""
        return {
            "kind": self.kind,
            "grid": self.grid,
            "domain_length": self.domain_length,
            "final_time": self.final_time,
            "initial_condition": self.initial_condition,
            "n_snapshots": self.n_snapshots,
            "lambda": lam,
            "seed": self.seed,
        }

    def config_hash(self) -> str:
        payload = {
            "samples": self.samples,
            "target": self.target,
            "modes": self.modes,
            "methods": self.methods,
            "reference_index": self.reference_index,
            **self.physics_key(lam=None),
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


_PARSERS = {
    "samples": lambda v: tuple(float(x) for x in str(v).replace(",", " ").split()),
    "methods": lambda v: tuple(
        str(v).replace(",", " ").split() if isinstance(v, str) else v
    ),
    "target": float,
    "modes": int,
    "grid": int,
    "n_snapshots": int,
    "domain_length": float,
    "final_time": float,
    "reference_index": lambda v: None if v in (None, "", "none") else int(v),
    "seed": int,
    "workers": int,
    "kind": str,
    "initial_condition": str,
    "label": str,
    "out_dir": str,
}


def load_config(path, **overrides) -> ExperimentConfig:
    """Load a config from flat key=value text or JSON (by extension)."""
    path = Path(path)
    if not path.exists():
        raise ConfigInvalid(f"config file {path} not found")
    if path.suffix.lower() == ".json":
        raw = json.loads(path.read_text())
    else:
        raw = {}
        for lineno, line in enumerate(path.read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigInvalid(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            raw[key] = value
    raw.update({k: v for k, v in overrides.items() if v is not None})
    kwargs = {}
    for key, value in raw.items():
        if key not in _PARSERS:
            raise ConfigInvalid(f"unknown config key {key!r}")
        try:
            kwargs[key] = _PARSERS[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(f"bad value for {key!r}: {value!r}") from exc
    missing = {"samples", "target", "modes"} - kwargs.keys()
    if missing:
        raise ConfigInvalid(f"missing config keys: {sorted(missing)}")
    return ExperimentConfig(**kwargs)


def _solve_burgers_lam(physics: dict):
    problem = testbed.BurgersProblem(
        n_cells=physics["grid"],
        length=physics["domain_length"],
        lam=physics["lambda"],
        initial_condition=physics["initial_condition"],
        final_time=physics["final_time"],
    )
    return testbed.solve_burgers(problem, n_snapshots=physics["n_snapshots"])


def _cache_paths(cache_dir: Path, physics: dict):
    key = hashlib.sha256(json.dumps(physics, sort_keys=True).encode()).hexdigest()[:20]
    return cache_dir / f"hdm_{key}.grsm", cache_dir / f"hdm_{key}.json"


def solve_or_load(config: ExperimentConfig, lam: float, cache_dir: Path):
    """One HDM solve with on-disk caching (atomic writes)."""
    physics = config.physics_key(lam)
    mat_path, meta_path = _cache_paths(cache_dir, physics)
    if mat_path.exists() and meta_path.exists():
        meta = io.read_json(meta_path)
        return io.read_matrix(mat_path), np.asarray(meta["times"]), True
    raw, times = _solve_burgers_lam(physics)
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = mat_path.with_suffix(".grsm.tmp")
    io.write_matrix(tmp, raw)
    tmp.replace(mat_path)
    problem = testbed.BurgersProblem(
        n_cells=config.grid,
        length=config.domain_length,
        lam=lam,
        initial_condition=config.initial_condition,
        final_time=config.final_time,
    )
    io.write_json(
        meta_path,
        {
            **physics,
            "nu": problem.nu,
            "dt": problem.dt,
            "times": list(times),
        },
    )
    return raw, times, False


def _interpolate_mean(samples_lam, means, target):
    """Entrywise piecewise-linear mean-field interpolation (flagged choice)."""
    samples_lam = np.asarray(samples_lam)
    stacked = np.column_stack(means)
    i = int(np.searchsorted(samples_lam, target, side="right")) - 1
    i = min(max(i, 0), samples_lam.size - 2) if samples_lam.size > 1 else 0
    if samples_lam.size == 1:
        return stacked[:, 0]
    alpha = (target - samples_lam[i]) / (samples_lam[i + 1] - samples_lam[i])
    return (1.0 - alpha) * stacked[:, i] + alpha * stacked[:, i + 1]


def run_pipeline(config: ExperimentConfig) -> dict:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache_dir = out_dir / "cache"
    cache_dir.mkdir(exist_ok=True)

    timings: dict[str, float] = {}
    cache_hits = 0
    t_total = time.perf_counter()

    # Stage 1: HDM snapshots for each sample (and the target, for ground truth).
    lams = list(config.samples)
    need_reference = "reference" in config.methods
    if need_reference and config.target not in lams:
        lams_to_solve = lams + [config.target]
    else:
        lams_to_solve = list(lams)
    t0 = time.perf_counter()
    solutions = {}
    if config.workers > 1:
        with concurrent.futures.ThreadPoolExecutor(config.workers) as pool:
            futures = {
                lam: pool.submit(solve_or_load, config, lam, cache_dir)
                for lam in lams_to_solve
            }
            for lam, fut in futures.items():
                solutions[lam] = fut.result()
    else:
        for lam in lams_to_solve:
            solutions[lam] = solve_or_load(config, lam, cache_dir)
    cache_hits = sum(1 for _, _, hit in solutions.values() if hit)
    timings["hdm_s"] = time.perf_counter() - t0

    # Stage 2: POD bases truncated to M.
    t0 = time.perf_counter()
    ensembles = {}
    bases = {}
    for lam, (raw, times, _) in solutions.items():
        ens = pod.split_mean(raw, times)
        ensembles[lam] = ens
        bases[lam] = pod.snapshots_pod(ens, config.modes)
    timings["pod_s"] = time.perf_counter() - t0

    sample_set = interp.ParameterSampleSet(
        params=np.asarray(lams),
        points=[manifold.make_point(bases[lam].modes) for lam in lams],
        raw_bases=[bases[lam].modes for lam in lams],
        mean_fields=[bases[lam].mean for lam in lams],
    )
    reference_ens = ensembles.get(config.target) if need_reference else None

    # Stage 3: interpolation at the target per method.
    t0 = time.perf_counter()
    method_bases = {}
    method_rows = {}
    for method in config.methods:
        row = {"status": "ok", "diagnostics": []}
        try:
            if method == "reference":
                basis = bases[config.target]
                row["diagnostics"].append("direct POD at the target parameter")
            else:
                result = interp.interpolate(
                    sample_set,
                    config.target,
                    method,
                    reference_index=config.reference_index,
                )
                row["diagnostics"].extend(result.diagnostics)
                mean = _interpolate_mean(
                    lams, sample_set.mean_fields, config.target
                )
                row["diagnostics"].append(
                    "mean field interpolated entrywise-linearly in lambda"
                )
                basis = pod.PODBasis(
                    modes=result.point.representative,
                    eigenvalues=np.zeros(result.point.m),
                    mean=mean,
                )
            method_bases[method] = basis
        except GrassintError as exc:
            row["status"] = "failed"
            row["reason"] = f"{type(exc).__name__}: {exc}"
        method_rows[method] = row
    timings["interp_s"] = time.perf_counter() - t0

    # Stages 4-5: ROM simulation and error evaluation against the reference.
    t0 = time.perf_counter()
    problem_target = testbed.BurgersProblem(
        n_cells=config.grid,
        length=config.domain_length,
        lam=config.target,
        initial_condition=config.initial_condition,
        final_time=config.final_time,
    )
    for method, basis in method_bases.items():
        row = method_rows[method]
        if reference_ens is None:
            row["diagnostics"].append(
                "no reference HDM solve requested; errors not evaluated"
            )
            continue
        try:
            row["projection_error"] = pod.projection_error(basis, reference_ens)
            system = testbed.build_rom(basis, problem_target)
            u0 = reference_ens.mean + reference_ens.snapshots[:, 0]
            a0 = basis.modes.T @ (u0 - basis.mean)
            trajectory = testbed.simulate_rom(system, a0, reference_ens.times)
            row["dynamic_error"] = pod.dynamic_error(
                basis, trajectory, reference_ens
            )
        except GrassintError as exc:
            row["status"] = "failed"
            row["reason"] = f"{type(exc).__name__}: {exc}"
    timings["rom_s"] = time.perf_counter() - t0
    timings["total_s"] = time.perf_counter() - t_total

    report = {
        "case": config.label,
        "config_hash": config.config_hash(),
        "backend": kernels.BACKEND,
        "target": config.target,
        "modes": config.modes,
        "samples": list(config.samples),
        "seed": config.seed,
        "methods": {},
        "timings": {**{k: round(v, 6) for k, v in timings.items()},
                    "cache_hits": cache_hits},
    }
    for method in config.methods:
        row = method_rows[method]
        entry = {
            "status": row["status"],
            "diagnostics": row["diagnostics"],
        }
        if row["status"] == "failed":
            entry["reason"] = row["reason"]
        for key in ("projection_error", "dynamic_error"):
            if key in row:
                entry[key] = format_error(row[key])
                entry[key + "_raw"] = row[key]
        report["methods"][method] = entry
    return report


def write_report(report: dict, out_dir) -> tuple:
    """Emit report.json and report.csv through one shared formatting path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / "report.json"
    csv_path = out_dir / "report.csv"
    io.write_json(json_path, report)
    lines = ["method,case,projection_error,dynamic_error"]
    for method, entry in report["methods"].items():
        proj = entry.get("projection_error", "failed")
        dyn = entry.get("dynamic_error", "failed")
        lines.append(f"{method},{report['case']},{proj},{dyn}")
    csv_path.write_text("\n".join(lines) + "\n")
    return json_path, csv_path


def merge_reports(reports: list, metric: str = "projection_error") -> str:
    """Merge per-case reports into one method x case CSV table."""
    cases = [r["case"] for r in reports]
    methods: list[str] = []
    for r in reports:
        for method in r["methods"]:
            if method not in methods:
                methods.append(method)
    lines = ["method," + ",".join(cases)]
    for method in methods:
        cells = []
        for r in reports:
            entry = r["methods"].get(method)
            cells.append(entry.get(metric, "failed") if entry else "")
        lines.append(f"{method}," + ",".join(cells))
    return "\n".join(lines) + "\n"
