"""Subspace interpolation methods.

Three routes to a basis at an unsampled parameter value:

* ``neville``  -- recursive geodesic barycenters (triangular table, the
  manifold analogue of the classical divided-difference recursion);
* ``amsallem`` -- log everything at a reference sample, interpolate the
  tangent matrices entrywise with the full-degree Lagrange polynomial,
  exp back;
* ``standard`` -- naive piecewise-linear blend of the basis matrices seen
  as plain arrays, re-orthonormalized afterwards.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import manifold
from .errors import (
    ConfigInvalid,
    DegenerateInterval,
    DimensionMismatch,
    EmptySampleSet,
    ExtrapolationWarning,
    GeodesicArcWarning,
    GrassintError,
    OutOfInjectivityBall,
)
from .manifold import GrassmannPoint


@dataclass(frozen=True, eq=False)
class ParameterSampleSet:
    """Sampled subspaces indexed by strictly increasing parameter values."""

    params: np.ndarray
    points: list
    raw_bases: list | None = None
    mean_fields: list | None = None

    def __post_init__(self):
        params = np.asarray(self.params, dtype=float)
        object.__setattr__(self, "params", params)
        if len(self.points) == 0:
            raise EmptySampleSet("no sample points")
        if params.ndim != 1 or params.size != len(self.points):
            raise DimensionMismatch("params and points lengths differ")
        if params.size > 1:
            gaps = np.diff(params)
            span = params[-1] - params[0]
            if np.any(gaps <= 1e-12 * max(span, 1.0)):
                raise DegenerateInterval("params must be strictly increasing")
        first = self.points[0]
        for p in self.points[1:]:
            if not first.same_shape(p):
                raise DimensionMismatch("sample points have mixed shapes")
        for attr in (self.raw_bases, self.mean_fields):
            if attr is not None and len(attr) != params.size:
                raise DimensionMismatch("auxiliary lists must match params length")

    def __len__(self) -> int:
        return self.params.size

    @property
    def degree(self) -> int:
        return self.params.size - 1


@dataclass(frozen=True, eq=False)
class InterpolationResult:
    point: GrassmannPoint
    method: str
    target: float
    diagnostics: list = field(default_factory=list)


def affine_weight(lambda_i: float, lambda_j: float, lam: float) -> float:
    """Affine coordinate of lam on the segment [lambda_i, lambda_j]."""
    if abs(lambda_j - lambda_i) <= 1e-12 * max(abs(lambda_i), abs(lambda_j), 1.0):
        raise DegenerateInterval(
            f"interval [{lambda_i}, {lambda_j}] is degenerate"
        )
    return (lam - lambda_i) / (lambda_j - lambda_i)


def two_point_barycenter(
    lambda_i: float,
    lambda_j: float,
    y_i: GrassmannPoint,
    y_j: GrassmannPoint,
    lam: float,
) -> GrassmannPoint:
    """Geodesic barycenter of y_i, y_j with weights (1-alpha, alpha)."""
    return manifold.geodesic_eval(y_i, y_j, affine_weight(lambda_i, lambda_j, lam))


def karcher_objective(
    y: GrassmannPoint,
    y_i: GrassmannPoint,
    y_j: GrassmannPoint,
    alpha: float,
) -> float:
    """Weighted half-sum of squared geodesic distances to the two anchors."""
    di = manifold.distance(y, y_i)
    dj = manifold.distance(y, y_j)
    return 0.5 * ((1.0 - alpha) * di**2 + alpha * dj**2)


def _hull_warning(samples: ParameterSampleSet, lam: float, diagnostics: list):
    lo, hi = samples.params[0], samples.params[-1]
    if lam < lo or lam > hi:
        msg = f"target {lam} outside sampled hull [{lo}, {hi}]"
        warnings.warn(msg, ExtrapolationWarning, stacklevel=3)
        diagnostics.append(f"extrapolation: {msg}")


def neville(samples: ParameterSampleSet, lam: float) -> InterpolationResult:
    """Recursive geodesic interpolation through all samples.

    Fills the triangular table Y(i, j): Y(i, 0) = y_i and Y(i, j+1) is the
    geodesic barycenter of Y(i, j) and Y(i+1, j) for the node pair
    (lambda_i, lambda_{i+j+1}).
    """
    diagnostics: list[str] = []
    _hull_warning(samples, lam, diagnostics)
    report = manifold.check_hypothesis_H(samples.points)
    if not report.ok:
        diagnostics.append(
            "hypothesis check WARN: max pairwise distance "
            f"{report.max_pairwise_distance:.4f} >= pi/2 for sample pair "
            f"{report.worst_pair}"
        )

    n_samples = len(samples)
    table = list(samples.points)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GeodesicArcWarning)
        for j in range(n_samples - 1):
            for i in range(n_samples - j - 1):
                try:
                    table[i] = two_point_barycenter(
                        samples.params[i],
                        samples.params[i + j + 1],
                        table[i],
                        table[i + 1],
                        lam,
                    )
                except GrassintError as exc:
                    raise type(exc)(
                        f"{exc} [in Neville table cell (i={i}, j={j + 1})]"
                    ) from exc
    for w in caught:
        if issubclass(w.category, GeodesicArcWarning):
            diagnostics.append(f"arc warning: {w.message}")
    return InterpolationResult(
        point=table[0], method="neville", target=lam, diagnostics=diagnostics
    )


def lagrange_weights(nodes: np.ndarray, lam: float) -> np.ndarray:
    """Values of the Lagrange cardinal polynomials at lam."""
    nodes = np.asarray(nodes, dtype=float)
    weights = np.ones_like(nodes)
    for k in range(nodes.size):
        for j in range(nodes.size):
            if j != k:
                weights[k] *= (lam - nodes[j]) / (nodes[k] - nodes[j])
    return weights


def amsallem(
    samples: ParameterSampleSet,
    lam: float,
    reference_index: int | None = None,
) -> InterpolationResult:
    """Tangent-space interpolation at a reference sample.

    Maps every sample through the logarithm at the reference point,
    Lagrange-interpolates the tangent matrices entrywise, and maps the
    result back through the exponential.
    """
    diagnostics: list[str] = []
    _hull_warning(samples, lam, diagnostics)
    if reference_index is None:
        reference_index = int(np.argmin(np.abs(samples.params - lam)))
    if not 0 <= reference_index < len(samples):
        raise DimensionMismatch(f"reference index {reference_index} out of range")
    diagnostics.append(
        f"reference: index {reference_index} (lambda = {samples.params[reference_index]})"
    )
    ref = samples.points[reference_index]
    tangents = []
    for k, point in enumerate(samples.points):
        try:
            tangents.append(manifold.log_map(ref, point).delta)
        except OutOfInjectivityBall as exc:
            raise OutOfInjectivityBall(
                f"sample {k} (lambda = {samples.params[k]}) is at distance >= pi/2 "
                f"from the reference sample {reference_index}"
            ) from exc
    weights = lagrange_weights(samples.params, lam)
    delta = sum(w * t for w, t in zip(weights, tangents))
    delta = delta - ref.representative @ (ref.representative.T @ delta)
    point = manifold.exp_map(ref, manifold.TangentVector(base=ref, delta=delta))
    return InterpolationResult(
        point=point, method="amsallem", target=lam, diagnostics=diagnostics
    )


def standard(samples: ParameterSampleSet, lam: float) -> InterpolationResult:
    """Entrywise piecewise-linear blend of the raw basis matrices."""
    diagnostics: list[str] = []
    _hull_warning(samples, lam, diagnostics)
    if samples.raw_bases is not None:
        bases = samples.raw_bases
    else:
        bases = [p.representative for p in samples.points]
        diagnostics.append("no raw bases stored; blending orthonormal representatives")
    if len(samples) == 1:
        return InterpolationResult(
            point=manifold.make_point(bases[0]),
            method="standard",
            target=lam,
            diagnostics=diagnostics,
        )
    params = samples.params
    i = int(np.searchsorted(params, lam, side="right")) - 1
    i = min(max(i, 0), len(samples) - 2)
    alpha = affine_weight(params[i], params[i + 1], lam)
    blend = (1.0 - alpha) * np.asarray(bases[i]) + alpha * np.asarray(bases[i + 1])
    diagnostics.append(f"blend interval [{params[i]}, {params[i + 1]}], orthonormalized")
    point = manifold.make_point(blend)
    return InterpolationResult(
        point=point, method="standard", target=lam, diagnostics=diagnostics
    )


METHODS = {
    "neville": neville,
    "amsallem": amsallem,
    "standard": standard,
}


def interpolate(
    samples: ParameterSampleSet,
    lam: float,
    method: str,
    reference_index: int | None = None,
) -> InterpolationResult:
    if method == "amsallem":
        return amsallem(samples, lam, reference_index)
    if method in METHODS:
        return METHODS[method](samples, lam)
    raise ConfigInvalid(f"unknown interpolation method {method!r}")
