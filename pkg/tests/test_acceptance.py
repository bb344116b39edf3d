"""Acceptance suite: one criterion per test, one printed pass/fail line each."""

import time

import numpy as np
import pytest

from grassint import interp, io, manifold as mf, pipeline, pod, testbed as tb


def report_line(capsys, num, ok, detail):
    with capsys.disabled():
        print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def random_pair_in_ball(n, m, rng):
    x = mf.make_point(rng.standard_normal((n, m)))
    delta = rng.standard_normal((n, m))
    delta -= x.representative @ (x.representative.T @ delta)
    delta *= 0.4 * (np.pi / 2) / np.linalg.norm(delta)
    y = mf.exp_map(x, mf.TangentVector(base=x, delta=delta))
    return x, y


def benchmark_config(out_dir, **overrides):
    kwargs = dict(
        samples=(100.0, 120.0, 130.0, 160.0, 170.0, 200.0),
        target=110.0,
        modes=10,
        grid=512,
        n_snapshots=200,
        final_time=2.0,
        initial_condition="bump",
        label="case1",
        out_dir=str(out_dir),
        seed=0,
    )
    kwargs.update(overrides)
    return pipeline.ExperimentConfig(**kwargs)


def test_criterion_1_geometry_suite(capsys):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = {"endpoint": 0.0, "roundtrip": 0.0, "two_route": 0.0,
             "invariance": 0.0, "triangle": 0.0}
    for _ in range(100):
        n = int(rng.integers(4, 51))
        m = int(rng.integers(1, min(5, n - 1) + 1))
        x, y = random_pair_in_ball(n, m, rng)

        worst["endpoint"] = max(
            worst["endpoint"],
            mf.distance(mf.geodesic_eval(x, y, 0.0), x),
            mf.distance(mf.geodesic_eval(x, y, 1.0), y),
        )
        worst["roundtrip"] = max(
            worst["roundtrip"], mf.distance(mf.exp_map(x, mf.log_map(x, y)), y)
        )
        overlap = x.representative.T @ y.representative
        sigma = np.linalg.svd(
            y.representative @ np.linalg.inv(overlap) - x.representative,
            compute_uv=False,
        )
        worst["two_route"] = max(
            worst["two_route"],
            abs(mf.distance(x, y) - np.linalg.norm(np.arctan(sigma))),
        )
        a = rng.standard_normal((m, m)) + 3 * np.eye(m)
        worst["invariance"] = max(
            worst["invariance"],
            abs(mf.distance(mf.make_point(x.representative @ a), y) - mf.distance(x, y)),
        )
        z = mf.make_point(rng.standard_normal((n, m)))
        worst["triangle"] = max(
            worst["triangle"],
            mf.distance(x, z) - mf.distance(x, y) - mf.distance(y, z),
        )
    elapsed = time.perf_counter() - start
    ok = (
        worst["endpoint"] <= 1e-10
        and worst["roundtrip"] <= 1e-8
        and worst["two_route"] <= 1e-8
        and worst["invariance"] <= 1e-9
        and worst["triangle"] <= 1e-9
        and elapsed < 10.0
    )
    report_line(
        capsys, 1, ok,
        f"100 instances; endpoint {worst['endpoint']:.1e}, "
        f"roundtrip {worst['roundtrip']:.1e}, two-route {worst['two_route']:.1e}, "
        f"invariance {worst['invariance']:.1e}, triangle slack {worst['triangle']:.1e}; "
        f"{elapsed:.1f}s",
    )


def test_criterion_2_karcher_minimality(capsys):
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst_violation = -np.inf
    for _ in range(50):
        y_i, y_j = random_pair_in_ball(8, 2, rng)
        for alpha in (0.25, 0.5, 0.75):
            bary = mf.geodesic_eval(y_i, y_j, alpha)
            j_star = interp.karcher_objective(bary, y_i, y_j, alpha)
            deltas = rng.standard_normal((1000, 8, 2))
            scales = rng.uniform(1e-3, 0.1, size=1000)
            for delta, eps in zip(deltas, scales):
                delta -= bary.representative @ (bary.representative.T @ delta)
                delta *= eps / np.linalg.norm(delta)
                perturbed = mf.exp_map(bary, mf.TangentVector(base=bary, delta=delta))
                j_pert = interp.karcher_objective(perturbed, y_i, y_j, alpha)
                worst_violation = max(worst_violation, j_star - j_pert)
    elapsed = time.perf_counter() - start
    ok = worst_violation <= 1e-9 and elapsed < 30.0
    report_line(
        capsys, 2, ok,
        f"50 pairs x 3 weights x 1000 perturbations; worst J(bary) - J(pert) "
        f"= {worst_violation:.1e} (<= 1e-9); {elapsed:.1f}s",
    )


def test_criterion_3_node_reproduction_and_exactness(capsys):
    worst_node = 0.0
    fam = tb.AnalyticFamily(kind="polynomial_frame")
    for n_nodes in (2, 4, 8):
        params = np.linspace(0.0, 0.7, n_nodes)
        samples = interp.ParameterSampleSet(
            params=params, points=[tb.eval_family(fam, t) for t in params]
        )
        for method in ("neville", "amsallem", "standard"):
            for k, t in enumerate(params):
                got = interp.interpolate(samples, t, method).point
                worst_node = max(worst_node, mf.distance(got, samples.points[k]))

    rng = np.random.default_rng(303)
    worst_exact = 0.0
    for _ in range(5):
        x, y = random_pair_in_ball(12, 3, rng)
        geo = tb.AnalyticFamily(kind="geodesic_through_pair", endpoints=(x, y))
        params = np.linspace(0.0, 1.0, 5)
        samples = interp.ParameterSampleSet(
            params=params, points=[tb.eval_family(geo, t) for t in params]
        )
        for target in rng.uniform(0.0, 1.0, size=10):
            got = interp.neville(samples, target).point
            worst_exact = max(
                worst_exact, mf.distance(got, tb.eval_family(geo, target))
            )
    ok = worst_node <= 1e-8 and worst_exact <= 1e-8
    report_line(
        capsys, 3, ok,
        f"node reproduction {worst_node:.1e}, geodesic-family exactness "
        f"{worst_exact:.1e} (both <= 1e-8)",
    )


def test_criterion_4_convergence(capsys):
    fam = tb.AnalyticFamily(kind="polynomial_frame")
    grid = np.linspace(0.0, 0.8, 50)
    errors = []
    for h in (0.4, 0.2, 0.1):
        params = np.arange(0.0, 0.8 + 1e-12, h)
        samples = interp.ParameterSampleSet(
            params=params, points=[tb.eval_family(fam, t) for t in params]
        )
        errors.append(
            max(
                mf.distance(interp.neville(samples, t).point, tb.eval_family(fam, t))
                for t in grid
            )
        )
    ratios = [errors[i + 1] / errors[i] for i in range(2)]
    ok = all(r <= 0.5 for r in ratios)
    report_line(
        capsys, 4, ok,
        f"errors {errors[0]:.2e} -> {errors[1]:.2e} -> {errors[2]:.2e}, "
        f"halving ratios {ratios[0]:.3f}, {ratios[1]:.3f} (<= 0.5)",
    )


def test_criterion_5_pod_suite(capsys):
    rng = np.random.default_rng(505)
    worst_tail = 0.0
    optimal = True
    for _ in range(5):
        raw = rng.standard_normal((40, 12))
        ens = pod.split_mean(raw, np.arange(12.0))
        eig = np.sort(
            np.linalg.eigvalsh(ens.snapshots.T @ ens.snapshots / 12.0)
        )[::-1].clip(min=0.0)
        for m in (1, 3, 6):
            basis = pod.snapshots_pod(ens, m)
            tail = eig[m:].sum() / eig.sum()
            worst_tail = max(
                worst_tail, abs(pod.projection_error(basis, ens) - tail)
            )
            best = pod.projection_error(basis, ens)
            for _ in range(20):
                q = np.linalg.qr(rng.standard_normal((40, m)))[0]
                rival = pod.PODBasis(
                    modes=q, eigenvalues=np.zeros(m), mean=np.zeros(40)
                )
                if pod.projection_error(rival, ens) <= best:
                    optimal = False
    ok = worst_tail <= 1e-10 and optimal
    report_line(
        capsys, 5, ok,
        f"eigenvalue-tail identity residual {worst_tail:.1e} (<= 1e-10); "
        f"optimal against 20 random competitors per ensemble: {optimal}",
    )


@pytest.fixture(scope="module")
def benchmark_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench")
    config = benchmark_config(out)
    start = time.perf_counter()
    report = pipeline.run_pipeline(config)
    elapsed = time.perf_counter() - start
    pipeline.write_report(report, out)
    return report, elapsed, out


def test_criterion_6_burgers_benchmark(capsys, benchmark_run):
    report, elapsed, out = benchmark_run
    raw = {
        m: report["methods"][m]["projection_error_raw"]
        for m in ("reference", "neville", "amsallem", "standard")
    }
    csv_lines = (out / "report.csv").read_text().strip().splitlines()
    schema_ok = (
        csv_lines[0] == "method,case,projection_error,dynamic_error"
        and all(line.split(",")[1] == "case1" for line in csv_lines[1:])
        and len(csv_lines) == 5
    )
    ok = (
        raw["reference"] <= min(raw["neville"], raw["amsallem"], raw["standard"])
        and raw["neville"] <= raw["standard"]
        and raw["amsallem"] <= raw["standard"]
        and elapsed <= 60.0
        and schema_ok
    )
    report_line(
        capsys, 6, ok,
        f"projection errors: reference {raw['reference']:.3e} <= "
        f"neville {raw['neville']:.3e}, amsallem {raw['amsallem']:.3e} <= "
        f"standard {raw['standard']:.3e}; cold pipeline {elapsed:.1f}s (<= 60s); "
        f"csv schema ok: {schema_ok}",
    )


def test_criterion_7_rom_consistency(capsys, benchmark_run):
    report, _, _ = benchmark_run
    slack = min(
        entry["dynamic_error_raw"] - entry["projection_error_raw"]
        for entry in report["methods"].values()
    )

    n, length = 128, 1.0
    prob = tb.BurgersProblem(n_cells=n, length=length, lam=20.0, final_time=0.05)
    x = (np.arange(n) + 0.5) * length / n
    modes = np.column_stack(
        [np.sin(2 * np.pi * k * x / length) for k in (1, 2)]
    )
    modes /= np.linalg.norm(modes, axis=0)
    basis = pod.PODBasis(modes=modes, eigenvalues=np.ones(2), mean=np.zeros(n))
    system = tb.build_rom(basis, prob)
    heat = tb.ROMSystem(
        constant=np.zeros(2),
        linear=system.linear,
        quadratic=np.zeros((2, 2, 2)),
        basis=basis,
    )
    a0 = np.array([1.0, 0.5])
    times = np.linspace(0.0, 0.05, 26)
    traj = tb.simulate_rom(heat, a0, times, dt=1e-5)
    dx = length / n
    worst_decay = 0.0
    for idx, k in enumerate((1, 2)):
        kappa = 2 * np.pi * k / length
        rate = -prob.nu * (4.0 / dx**2) * np.sin(kappa * dx / 2.0) ** 2
        worst_decay = max(
            worst_decay,
            np.abs(traj.coefficients[idx] - a0[idx] * np.exp(rate * times)).max(),
        )
    ok = slack >= -1e-12 and worst_decay <= 1e-6
    report_line(
        capsys, 7, ok,
        f"min(dynamic - projection) = {slack:.1e} (>= -1e-12); heat-limit modal "
        f"decay deviation {worst_decay:.1e} (<= 1e-6)",
    )


def test_criterion_8_determinism(capsys, tmp_path):
    def strip_timings(report):
        return {k: v for k, v in report.items() if k != "timings"}

    reports = []
    for run in ("a", "b"):
        config = benchmark_config(
            tmp_path / run, grid=128, n_snapshots=50, modes=5,
            samples=(100.0, 140.0, 200.0),
        )
        report = pipeline.run_pipeline(config)
        json_path, _ = pipeline.write_report(report, config.out_dir)
        reports.append(strip_timings(io.read_json(json_path)))
    ok = reports[0] == reports[1]
    report_line(
        capsys, 8, ok,
        "two runs with identical config/seed produce identical reports "
        f"(timings excluded): {ok}",
    )
