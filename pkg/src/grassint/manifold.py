"""Geometry of linear subspaces: orthonormal representatives, principal
angles, geodesics, exponential and logarithm maps.

A subspace is stored through an orthonormal n x m representative; all maps
below exploit that convention (every Gram factor collapses to the identity).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BaseMismatch,
    DimensionMismatch,
    GeodesicArcWarning,
    OutOfInjectivityBall,
    RankDeficient,
    SubspacesNotInGenericPosition,
)

INJECTIVITY_RADIUS = np.pi / 2

_RANK_RTOL = 1e-10
_HORIZONTAL_TOL = 1e-10


def _orthonormalize(basis: np.ndarray) -> np.ndarray:
    """Thin QR with nonnegative diagonal of R (deterministic representative)."""
    q, r = np.linalg.qr(basis)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


@dataclass(frozen=True, eq=False)
class GrassmannPoint:
    """An m-dimensional subspace of R^n through an orthonormal representative."""

    representative: np.ndarray

    def __post_init__(self):
        rep = np.asarray(self.representative, dtype=float)
        if rep.ndim != 2 or rep.shape[1] < 1 or rep.shape[1] > rep.shape[0]:
            raise DimensionMismatch(
                f"representative must be n x m with 1 <= m <= n, got {rep.shape}"
            )
        object.__setattr__(self, "representative", rep)
        gram = rep.T @ rep
        if np.linalg.norm(gram - np.eye(self.m)) > 1e-12:
            raise RankDeficient("representative columns are not orthonormal")

    @property
    def n(self) -> int:
        return self.representative.shape[0]

    @property
    def m(self) -> int:
        return self.representative.shape[1]

    def same_shape(self, other: "GrassmannPoint") -> bool:
        return self.n == other.n and self.m == other.m


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Horizontal direction at a base point (base^T . delta = 0)."""

    base: GrassmannPoint
    delta: np.ndarray

    def __post_init__(self):
        delta = np.asarray(self.delta, dtype=float)
        if delta.shape != self.base.representative.shape:
            raise DimensionMismatch(
                f"delta shape {delta.shape} does not match base "
                f"{self.base.representative.shape}"
            )
        object.__setattr__(self, "delta", delta)
        if np.linalg.norm(self.base.representative.T @ delta) > _HORIZONTAL_TOL:
            raise DimensionMismatch("delta is not horizontal at the base point")

    def norm(self) -> float:
        return float(np.linalg.norm(self.delta))


@dataclass(frozen=True)
class GeodesicFactors:
    """SVD factors of the geodesic direction matrix Y (X^T Y)^{-1} - X."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    base: GrassmannPoint


@dataclass(frozen=True)
class PrincipalAngles:
    """Canonical angles between two subspaces, ascending, in [0, pi/2]."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "angles", a)

    def norm(self) -> float:
        return float(np.linalg.norm(self.angles))

    def max(self) -> float:
        return float(self.angles[-1]) if self.angles.size else 0.0


@dataclass(frozen=True)
class HypothesisReport:
    """Diagnostic for the common-geodesic-ball requirement of the samples."""

    max_pairwise_distance: float
    verdict: str  # "PASS" or "WARN"
    worst_pair: tuple = field(default=(0, 0))

    @property
    def ok(self) -> bool:
        return self.verdict == "PASS"


def make_point(basis: np.ndarray) -> GrassmannPoint:
    """Orthonormalize a full-rank n x m matrix into a subspace point."""
    basis = np.asarray(basis, dtype=float)
    if basis.ndim == 1:
        basis = basis[:, None]
    if basis.shape[1] > basis.shape[0]:
        raise DimensionMismatch(f"need n >= m, got shape {basis.shape}")
    svals = np.linalg.svd(basis, compute_uv=False)
    if svals[-1] <= _RANK_RTOL * svals[0]:
        raise RankDeficient(
            f"matrix is rank deficient (sigma_min/sigma_max = {svals[-1] / svals[0]:.2e})"
        )
    return GrassmannPoint(_orthonormalize(basis))


def metric_inner(v1: TangentVector, v2: TangentVector) -> float:
    """Riemannian inner product; the trace form reduces to Frobenius here."""
    if v1.base != v2.base and not np.array_equal(
        v1.base.representative, v2.base.representative
    ):
        raise BaseMismatch("tangent vectors live at different base points")
    return float(np.trace(v1.delta.T @ v2.delta))


def _check_same_shape(x: GrassmannPoint, y: GrassmannPoint):
    if not x.same_shape(y):
        raise DimensionMismatch(
            f"points have shapes ({x.n},{x.m}) and ({y.n},{y.m})"
        )


def principal_angles(x: GrassmannPoint, y: GrassmannPoint) -> PrincipalAngles:
    """Canonical angles via the cosine/sine combination of Bjorck-Golub.

    arccos alone loses ~sqrt(eps) accuracy near zero angle; small angles are
    therefore recomputed from the sines of the complementary projection.
    """
    _check_same_shape(x, y)
    overlap = x.representative.T @ y.representative
    cosines = np.linalg.svd(overlap, compute_uv=False)  # descending
    residual = y.representative - x.representative @ overlap
    sines = np.sort(np.linalg.svd(residual, compute_uv=False))  # ascending
    angles = np.empty(x.m)
    for i in range(x.m):
        if cosines[i] ** 2 >= 0.5:
            angles[i] = np.arcsin(np.clip(sines[i], 0.0, 1.0))
        else:
            angles[i] = np.arccos(np.clip(cosines[i], 0.0, 1.0))
    return PrincipalAngles(np.sort(angles))


def distance(x: GrassmannPoint, y: GrassmannPoint) -> float:
    """Geodesic distance, the 2-norm of the principal angles."""
    return principal_angles(x, y).norm()


def geodesic_factors(x: GrassmannPoint, y: GrassmannPoint) -> GeodesicFactors:
    """Factor the direction matrix Y (X^T Y)^{-1} - X of the geodesic from x to y."""
    _check_same_shape(x, y)
    overlap = x.representative.T @ y.representative
    svals = np.linalg.svd(overlap, compute_uv=False)
    if svals[-1] <= 1e-10:
        raise SubspacesNotInGenericPosition(
            "subspaces share an orthogonal direction (x^T y singular)"
        )
    direction = y.representative @ np.linalg.inv(overlap) - x.representative
    u, s, vt = np.linalg.svd(direction, full_matrices=False)
    return GeodesicFactors(U=u, sigma=s, V=vt.T, base=x)


def log_map(x: GrassmannPoint, y: GrassmannPoint) -> TangentVector:
    """Inverse exponential at x; requires all principal angles below pi/2."""
    _check_same_shape(x, y)
    overlap = x.representative.T @ y.representative
    svals = np.linalg.svd(overlap, compute_uv=False)
    if svals[-1] <= 1e-10:
        raise OutOfInjectivityBall(
            "target subspace has a principal angle of pi/2 with the base"
        )
    factors = geodesic_factors(x, y)
    delta = factors.U @ np.diag(np.arctan(factors.sigma)) @ factors.V.T
    # Kill roundoff in the horizontal component before constructing the vector.
    delta = delta - x.representative @ (x.representative.T @ delta)
    return TangentVector(base=x, delta=delta)


def exp_map(x: GrassmannPoint, v: TangentVector) -> GrassmannPoint:
    if v.base is not x and not np.array_equal(
        v.base.representative, x.representative
    ):
        raise BaseMismatch("tangent vector is not based at the given point")
    u, s, vt = np.linalg.svd(v.delta, full_matrices=False)
    rep = x.representative @ vt.T @ np.diag(np.cos(s)) @ vt + u @ np.diag(np.sin(s)) @ vt
    return make_point(rep)


def geodesic_eval(x: GrassmannPoint, y: GrassmannPoint, s: float) -> GrassmannPoint:
    """Point at parameter s on the geodesic through x (s=0) and y (s=1).

    Extrapolation (s outside [0, 1]) is allowed; a GeodesicArcWarning is
    emitted when the traveled arc reaches the injectivity radius.
    """
    factors = geodesic_factors(x, y)
    theta = np.arctan(factors.sigma)
    arc = abs(s) * np.linalg.norm(theta)
    if arc >= INJECTIVITY_RADIUS:
        warnings.warn(
            f"geodesic arc length {arc:.4f} >= pi/2; result leaves the "
            "injectivity ball of the start point",
            GeodesicArcWarning,
            stacklevel=2,
        )
    rep = (
        x.representative @ factors.V @ np.diag(np.cos(s * theta))
        + factors.U @ np.diag(np.sin(s * theta))
    ) @ factors.V.T
    return make_point(rep)


def check_hypothesis_H(points: list) -> HypothesisReport:
    """Report the max pairwise distance against the pi/2 geodesic-uniqueness bound."""
    if not points:
        raise DimensionMismatch("need at least one point")
    first = points[0]
    for p in points[1:]:
        _check_same_shape(first, p)
    worst = 0.0
    worst_pair = (0, 0)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = distance(points[i], points[j])
            if d > worst:
                worst = d
                worst_pair = (i, j)
    verdict = "PASS" if worst < INJECTIVITY_RADIUS - 1e-9 else "WARN"
    return HypothesisReport(
        max_pairwise_distance=worst, verdict=verdict, worst_pair=worst_pair
    )
