"""Snapshots-based proper orthogonal decomposition and the two error metrics.

The basis is computed through the temporal correlation matrix (method of
snapshots): eigenvectors of (1/N_T) S^T S are mapped back through S and
normalized. The Euclidean inner product is used throughout; on the uniform
grids of the bundled testbeds this matches the continuous product up to a
constant factor that cancels in every relative error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .manifold import _orthonormalize
from .errors import (
    DimensionMismatch,
    RankTooLow,
    TimeGridMismatch,
    TooFewSnapshots,
    ZeroReference,
)


@dataclass(frozen=True, eq=False)
class SnapshotEnsemble:
    """Fluctuation snapshots (columns) with their time grid and mean field."""

    snapshots: np.ndarray
    times: np.ndarray
    mean: np.ndarray

    def __post_init__(self):
        snaps = np.asarray(self.snapshots, dtype=float)
        times = np.asarray(self.times, dtype=float)
        mean = np.asarray(self.mean, dtype=float)
        if snaps.ndim != 2 or snaps.shape[1] < 2:
            raise TooFewSnapshots("need at least two snapshot columns")
        if times.shape != (snaps.shape[1],) or np.any(np.diff(times) <= 0):
            raise TimeGridMismatch("times must be strictly increasing, one per column")
        if mean.shape != (snaps.shape[0],):
            raise DimensionMismatch("mean length does not match snapshot rows")
        scale = np.linalg.norm(snaps) + np.linalg.norm(mean) * np.sqrt(snaps.shape[1])
        if scale > 0 and np.abs(snaps.sum(axis=1)).max() > 1e-8 * scale:
            raise DimensionMismatch("snapshots are not mean-free fluctuations")
        object.__setattr__(self, "snapshots", snaps)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "mean", mean)

    @property
    def n(self) -> int:
        return self.snapshots.shape[0]

    @property
    def n_snapshots(self) -> int:
        return self.snapshots.shape[1]


@dataclass(frozen=True, eq=False)
class PODBasis:
    """Truncated orthonormal modes with the correlation spectrum and mean field."""

    modes: np.ndarray
    eigenvalues: np.ndarray
    mean: np.ndarray

    def __post_init__(self):
        modes = np.asarray(self.modes, dtype=float)
        eig = np.asarray(self.eigenvalues, dtype=float)
        mean = np.asarray(self.mean, dtype=float)
        if modes.ndim != 2:
            raise DimensionMismatch("modes must be an n x M matrix")
        m = modes.shape[1]
        if np.linalg.norm(modes.T @ modes - np.eye(m)) > 1e-10:
            raise DimensionMismatch("modes are not orthonormal")
        if eig.shape != (m,) or np.any(np.diff(eig) > 0) or np.any(eig < 0):
            raise DimensionMismatch("eigenvalues must be nonnegative, nonincreasing")
        if mean.shape != (modes.shape[0],):
            raise DimensionMismatch("mean length does not match mode rows")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "eigenvalues", eig)
        object.__setattr__(self, "mean", mean)

    @property
    def n(self) -> int:
        return self.modes.shape[0]

    @property
    def rank(self) -> int:
        return self.modes.shape[1]


@dataclass(frozen=True, eq=False)
class ROMTrajectory:
    """Temporal coefficients (one row per mode) on a time grid."""

    coefficients: np.ndarray
    times: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        times = np.asarray(self.times, dtype=float)
        if coeffs.ndim != 2 or times.shape != (coeffs.shape[1],):
            raise DimensionMismatch("coefficients must be M x N_T matching times")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "times", times)


def split_mean(raw: np.ndarray, times: np.ndarray) -> SnapshotEnsemble:
    """Split raw snapshots into temporal mean and fluctuations."""
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2 or raw.shape[1] < 2:
        raise TooFewSnapshots("need at least two snapshots")
    mean = raw.mean(axis=1)
    return SnapshotEnsemble(snapshots=raw - mean[:, None], times=times, mean=mean)


def _fix_mode_signs(modes: np.ndarray) -> np.ndarray:
    """Make the first significant entry of each mode positive (determinism)."""
    out = modes.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        nz = np.nonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0]
        if nz.size and col[nz[0]] < 0:
            out[:, k] = -col
    return out


def snapshots_pod(ens: SnapshotEnsemble, n_modes: int) -> PODBasis:
    """Truncated POD basis of the fluctuations via the correlation matrix."""
    s = ens.snapshots
    n_t = ens.n_snapshots
    corr = (s.T @ s) / n_t
    eigvals, eigvecs = np.linalg.eigh(corr)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    rank = int(np.sum(eigvals > 1e-12 * max(eigvals[0], 0.0)))
    if not 1 <= n_modes <= rank:
        raise RankTooLow(
            f"requested {n_modes} modes but snapshot rank is {rank}"
        )
    modes = s @ eigvecs[:, :n_modes]
    modes /= np.sqrt(n_t * eigvals[:n_modes])
    # The correlation route degrades orthogonality for trailing eigenvalues;
    # a thin QR restores it without touching the span.
    modes = _orthonormalize(modes)
    return PODBasis(
        modes=_fix_mode_signs(modes),
        eigenvalues=eigvals[:n_modes].clip(min=0.0),
        mean=ens.mean,
    )


def rank_for_energy(ens: SnapshotEnsemble, captured: float) -> int:
    """Smallest truncation rank capturing the requested energy fraction."""
    s = ens.snapshots
    eigvals = np.sort(np.linalg.eigvalsh((s.T @ s) / ens.n_snapshots))[::-1]
    eigvals = eigvals.clip(min=0.0)
    cumulative = np.cumsum(eigvals) / eigvals.sum()
    return int(np.searchsorted(cumulative, captured) + 1)


def projection_error(basis: PODBasis, reference: SnapshotEnsemble) -> float:
    """Relative squared Frobenius error of projecting onto the basis span."""
    if basis.n != reference.n:
        raise DimensionMismatch("basis and snapshots live on different grids")
    v = reference.snapshots
    denom = np.linalg.norm(v) ** 2
    if denom == 0.0:
        raise ZeroReference("reference fluctuations are identically zero")
    residual = v - basis.modes @ (basis.modes.T @ v)
    return float(np.linalg.norm(residual) ** 2 / denom)


def dynamic_error(
    basis: PODBasis, trajectory: ROMTrajectory, reference: SnapshotEnsemble
) -> float:
    """Relative squared Frobenius error of the coefficient reconstruction."""
    if basis.n != reference.n:
        raise DimensionMismatch("basis and snapshots live on different grids")
    if trajectory.coefficients.shape[0] != basis.rank:
        raise DimensionMismatch("trajectory row count does not match basis rank")
    if trajectory.times.shape != reference.times.shape or not np.allclose(
        trajectory.times, reference.times, rtol=0.0, atol=1e-12
    ):
        raise TimeGridMismatch("trajectory and reference use different time grids")
    v = reference.snapshots
    denom = np.linalg.norm(v) ** 2
    if denom == 0.0:
        raise ZeroReference("reference fluctuations are identically zero")
    residual = v - basis.modes @ trajectory.coefficients
    return float(np.linalg.norm(residual) ** 2 / denom)
