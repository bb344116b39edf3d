"""Desk-scale parametric problems with known structure.

Two kinds of ground truth:

* analytic subspace families (exact points for interpolation-error studies);
* a 1D viscous Burgers solver on a periodic grid (the high-dimensional
  model of the benchmark pipeline) together with its Galerkin reduced model.

The parameter plays the Reynolds-number role: viscosity is nu = 1/lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, manifold
from .errors import DimensionMismatch, Divergence, OutOfDomain, UnstableRun
from .manifold import GrassmannPoint
from .pod import PODBasis, ROMTrajectory

# Default coefficient law of the polynomial_frame family: a smooth,
# non-geodesic curve in G_2(R^3). Entry (i, j) is a polynomial in lambda
# with coefficients COEFFS[i, j, :] (ascending degree).
_POLY_COEFFS = np.zeros((3, 2, 4))
_POLY_COEFFS[0, 0, 0] = 1.0  # 1
_POLY_COEFFS[1, 0, 1] = 1.0  # lambda
_POLY_COEFFS[2, 0, 2] = 1.0  # lambda^2
_POLY_COEFFS[1, 1, 0] = 1.0  # 1
_POLY_COEFFS[2, 1, 3] = 1.0  # lambda^3


@dataclass(frozen=True, eq=False)
class AnalyticFamily:
    """Smooth parametric family of subspaces with a closed-form evaluator."""

    kind: str  # planar_rotation | polynomial_frame | geodesic_through_pair
    n: int = 3
    m: int = 1
    rate: float = 1.0
    coeffs: np.ndarray | None = None
    endpoints: tuple | None = None  # (GrassmannPoint, GrassmannPoint)
    domain: tuple = (-math.inf, math.inf)

    def __post_init__(self):
        if self.kind not in (
            "planar_rotation",
            "polynomial_frame",
            "geodesic_through_pair",
        ):
            raise OutOfDomain(f"unknown family kind {self.kind!r}")
        if self.kind == "planar_rotation" and self.m + 1 > self.n:
            raise DimensionMismatch("planar rotation needs n >= m + 1")
        if self.kind == "polynomial_frame":
            coeffs = self.coeffs if self.coeffs is not None else _POLY_COEFFS
            coeffs = np.asarray(coeffs, dtype=float)
            if coeffs.ndim != 3:
                raise DimensionMismatch("coeffs must be (n, m, degree+1)")
            object.__setattr__(self, "coeffs", coeffs)
            object.__setattr__(self, "n", coeffs.shape[0])
            object.__setattr__(self, "m", coeffs.shape[1])
        if self.kind == "geodesic_through_pair":
            if self.endpoints is None:
                raise DimensionMismatch("geodesic_through_pair needs endpoints")
            x, y = self.endpoints
            object.__setattr__(self, "n", x.n)
            object.__setattr__(self, "m", x.m)


def eval_family(family: AnalyticFamily, lam: float) -> GrassmannPoint:
    lo, hi = family.domain
    if not lo <= lam <= hi:
        raise OutOfDomain(f"lambda = {lam} outside family domain [{lo}, {hi}]")
    if family.kind == "planar_rotation":
        theta = family.rate * lam
        frame = np.eye(family.n, family.m)
        frame[0, 0] = math.cos(theta)
        frame[family.m, 0] = math.sin(theta)
        return manifold.make_point(frame)
    if family.kind == "polynomial_frame":
        powers = lam ** np.arange(family.coeffs.shape[2])
        return manifold.make_point(family.coeffs @ powers)
    x, y = family.endpoints
    return manifold.geodesic_eval(x, y, lam)


@dataclass(frozen=True, eq=False)
class BurgersProblem:
    """Viscous Burgers run on a periodic uniform grid, explicit RK4 in time."""

    n_cells: int
    length: float
    lam: float  # Reynolds-like parameter; viscosity is 1/lam
    initial_condition: str = "sine"
    final_time: float = 2.0
    dt: float = field(default=0.0)  # 0 -> largest stable step

    def __post_init__(self):
        if self.n_cells < 4 or self.length <= 0 or self.lam <= 0:
            raise DimensionMismatch("need n_cells >= 4, length > 0, lambda > 0")
        if self.initial_condition not in ("sine", "bump", "zero"):
            raise OutOfDomain(f"unknown initial condition {self.initial_condition!r}")
        u0 = self.initial_state()
        u_max = float(np.abs(u0).max())
        dx = self.dx
        bound = 0.25 * min(
            dx / u_max if u_max > 0 else math.inf,
            dx * dx / (2.0 * self.nu),
        )
        dt = self.dt if self.dt > 0 else bound
        if dt > bound * (1 + 1e-12):
            raise DimensionMismatch(
                f"dt = {dt:.3e} violates the stability bound {bound:.3e}"
            )
        object.__setattr__(self, "dt", dt)

    @property
    def nu(self) -> float:
        return 1.0 / self.lam

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    def grid(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.dx

    def initial_state(self) -> np.ndarray:
        x = self.grid()
        if self.initial_condition == "sine":
            return np.sin(2.0 * np.pi * x / self.length)
        if self.initial_condition == "bump":
            center = 0.5 * self.length
            width = 0.1 * self.length
            return np.exp(-(((x - center) / width) ** 2))
        return np.zeros(self.n_cells)


def solve_burgers(problem: BurgersProblem, n_snapshots: int = 200):
    """Run the solver; returns (raw snapshot matrix n x N_T, times).

    Snapshots are regularly spaced in time from t=0 to t=final_time.
    """
    if n_snapshots < 2:
        raise DimensionMismatch("need at least two snapshots")
    u0 = problem.initial_state()
    intervals = n_snapshots - 1
    steps_per_interval = max(
        1, math.ceil(problem.final_time / (intervals * problem.dt) - 1e-12)
    )
    n_steps = intervals * steps_per_interval
    dt = problem.final_time / n_steps
    cap = 10.0 * float(np.abs(u0).max())
    try:
        snapshots = kernels.integrate_burgers(
            u0, problem.nu, problem.dx, dt, n_steps, steps_per_interval, cap
        )
    except ValueError as exc:
        raise UnstableRun(
            f"Burgers run at lambda = {problem.lam} exceeded 10x the initial amplitude"
        ) from exc
    times = np.linspace(0.0, problem.final_time, n_snapshots)
    return snapshots, times


def _ddx(v: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)) / (2.0 * dx)


def _d2dx2(v: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(v, -1, axis=0) - 2.0 * v + np.roll(v, 1, axis=0)) / (dx * dx)


@dataclass(frozen=True, eq=False)
class ROMSystem:
    """Galerkin-reduced dynamics da/dt = c + L a + a^T Q a."""

    constant: np.ndarray
    linear: np.ndarray
    quadratic: np.ndarray
    basis: PODBasis

    def __post_init__(self):
        m = self.basis.rank
        if (
            self.constant.shape != (m,)
            or self.linear.shape != (m, m)
            or self.quadratic.shape != (m, m, m)
        ):
            raise DimensionMismatch("ROM operator shapes inconsistent with basis rank")


def build_rom(basis: PODBasis, problem: BurgersProblem) -> ROMSystem:
    """Project the semi-discrete Burgers operator onto the POD modes.

    The full state is mean + modes @ a; substituting into
    u_t = -(u^2/2)_x + nu u_xx and testing against each mode gives a
    constant, linear and quadratic term in the coefficients.
    """
    if basis.n != problem.n_cells:
        raise DimensionMismatch("basis does not match the solver grid")
    phi = basis.modes
    mean = basis.mean
    nu = problem.nu
    dx = problem.dx

    constant = phi.T @ (-_ddx(0.5 * mean**2, dx) + nu * _d2dx2(mean, dx))
    linear = phi.T @ (-_ddx(mean[:, None] * phi, dx) + nu * _d2dx2(phi, dx))
    pairwise = phi[:, :, None] * phi[:, None, :]  # (n, M, M)
    quadratic = -0.5 * np.einsum("nm,njk->mjk", phi, _ddx(pairwise, dx))
    return ROMSystem(constant=constant, linear=linear, quadratic=quadratic, basis=basis)


def _stable_step(system: ROMSystem, a0: np.ndarray, min_gap: float) -> float:
    eigs = np.linalg.eigvals(system.linear)
    rho = float(np.abs(eigs).max()) if eigs.size else 0.0
    rho += float(np.linalg.norm(system.quadratic)) * float(np.linalg.norm(a0))
    if rho <= 0.0:
        return min_gap
    return min(min_gap, 0.5 / rho)


def simulate_rom(
    system: ROMSystem,
    a0: np.ndarray,
    times: np.ndarray,
    dt: float | None = None,
) -> ROMTrajectory:
    """Integrate the reduced dynamics by RK4, sampling at the given times.

    The step is the smallest time gap, sub-stepped further when the linear
    operator demands it (or when an explicit dt is passed).
    """
    times = np.asarray(times, dtype=float)
    a0 = np.asarray(a0, dtype=float)
    if times.ndim != 1 or times.size < 2 or np.any(np.diff(times) <= 0):
        raise DimensionMismatch("times must be strictly increasing with >= 2 entries")
    gaps = np.diff(times)
    min_gap = float(gaps.min())
    dt_target = dt if dt is not None else _stable_step(system, a0, min_gap)
    cap = 1e6 * max(float(np.linalg.norm(a0)), 1e-30)

    uniform = np.allclose(gaps, gaps[0], rtol=1e-9, atol=0.0)
    try:
        if uniform:
            n_sub = max(1, math.ceil(gaps[0] / dt_target - 1e-12))
            coeffs = kernels.integrate_rom(
                system.constant,
                system.linear,
                system.quadratic,
                a0,
                gaps[0] / n_sub,
                (times.size - 1) * n_sub,
                n_sub,
                cap,
            )
        else:
            cols = [a0]
            a = a0
            for gap in gaps:
                n_sub = max(1, math.ceil(gap / dt_target - 1e-12))
                out = kernels.integrate_rom(
                    system.constant,
                    system.linear,
                    system.quadratic,
                    a,
                    gap / n_sub,
                    n_sub,
                    n_sub,
                    cap,
                )
                a = out[:, -1]
                cols.append(a)
            coeffs = np.column_stack(cols)
    except ValueError as exc:
        raise Divergence(
            "reduced trajectory exceeded 1e6 times the initial amplitude"
        ) from exc
    return ROMTrajectory(coefficients=coeffs, times=times)
