"""Eigen-analysis of the decoherence matrix: collective rates, the dominant
jump mode, its delocalization measure, and momentum-space diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import CouplingMatrices
from .errors import PhysicsValidationError
from .lattice import AtomArray

K0 = 2.0 * np.pi


@dataclass
class SpectralSummary:
    """Sorted collective rates and the brightest mode of a decoherence matrix.

    eigenvalues are descending in units of gamma0; dominant_vec is the unit
    eigenvector of the largest one (sign fixed so its largest-magnitude entry
    is positive); delta is the relative fluctuation of |dominant_vec| entries
    (0 for a uniform mode, sqrt(N-1) for a single-site mode); degeneracy
    counts eigenvalues within 1e-10*gamma_max of the top.
    """

    eigenvalues: np.ndarray
    gamma_max: float
    dominant_vec: np.ndarray
    delta: float
    gamma0: float
    degeneracy: int = 1

    @property
    def n(self) -> int:
        return self.eigenvalues.size


def delocalization_delta(dominant_vec) -> float:
    """Relative fluctuation of the entry magnitudes of a unit vector.

    delta^2 = N / ||v||_1^2 - 1, clamped at zero against rounding.
    """
    v = np.asarray(dominant_vec, dtype=float)
    norm2 = np.linalg.norm(v)
    if norm2 == 0:
        raise PhysicsValidationError("zero vector has no delocalization measure")
    l1 = np.abs(v).sum() / norm2
    return float(np.sqrt(max(0.0, v.size / l1**2 - 1.0)))


def decompose(mats: CouplingMatrices) -> SpectralSummary:
    """Full symmetric eigendecomposition of gamma, sorted descending."""
    vals, vecs = np.linalg.eigh(mats.gamma)
    vals = vals[::-1]
    vec = vecs[:, -1]
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    gmax = float(vals[0])
    degeneracy = int(np.sum(vals >= gmax - 1e-10 * max(abs(gmax), 1.0)))
    return SpectralSummary(
        eigenvalues=np.ascontiguousarray(vals),
        gamma_max=gmax,
        dominant_vec=np.ascontiguousarray(vec),
        delta=delocalization_delta(vec),
        gamma0=mats.gamma0,
        degeneracy=degeneracy,
    )


def gamma_max_only(mats: CouplingMatrices) -> float:
    """Largest collective rate without eigenvectors (cheaper for sweeps)."""
    return float(np.linalg.eigvalsh(mats.gamma)[-1])


def jacobi_eigenvalues(matrix: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Cyclic Jacobi rotations; independent cross-check of the LAPACK path.

    Intended for N <= 200. Returns eigenvalues sorted descending.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if n > 200:
        raise PhysicsValidationError("Jacobi oracle is limited to N <= 200")
    scale = np.abs(a).max() or 1.0
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * scale * n:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol * scale:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = 1.0 if theta == 0.0 else np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                # rotate rows/columns p and q in place
                row_p, row_q = a[p].copy(), a[q].copy()
                a[p] = c * row_p - s * row_q
                a[q] = s * row_p + c * row_q
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
    return np.sort(np.diag(a))[::-1]


@dataclass
class MomentumDistribution:
    """Discrete momentum-space weight of a real-space mode on an ordered lattice.

    kvecs are 3-vectors in units of 2*pi/lambda0 (so the light line sits at
    |k| = 2*pi); weights sum to 1.
    """

    kvecs: np.ndarray
    weights: np.ndarray

    def to_csv(self, path):
        table = np.column_stack([self.kvecs, self.weights])
        np.savetxt(
            path,
            table,
            fmt="%.17g",
            delimiter=",",
            header="kx,ky,kz,weight",
            comments="",
        )


def momentum_distribution(dominant_vec, array: AtomArray) -> MomentumDistribution:
    """Unitary DFT of a mode over the reciprocal grid of an ordered lattice.

    alpha_k = N^{-1/2} sum_j exp(i k.r_j) alpha_j on the centered DFT grid;
    Parseval guarantees the weights sum to one. Positions that do not sit on
    the spec's integer lattice are rejected.
    """
    spec = array.source_spec
    d, n1 = spec.spacing, spec.n_per_axis
    dim = spec.dimension
    idx = array.positions / d
    if not np.allclose(idx, np.round(idx), atol=1e-9):
        raise PhysicsValidationError("positions are not on the ordered lattice grid")

    v = np.asarray(dominant_vec, dtype=complex)
    if v.size != array.n_atoms:
        raise PhysicsValidationError("mode length does not match atom count")
    grid = v.reshape((n1,) * dim)
    # exp(+i k.r) convention matches numpy's inverse transform (up to norm)
    alpha_k = np.fft.ifftn(grid, norm="ortho")
    weights = np.abs(alpha_k) ** 2

    freqs = np.fft.fftfreq(n1, d=d)  # cycles per lambda0
    kaxis = 2.0 * np.pi * freqs  # radians: light line at |k| = 2*pi
    mesh = np.meshgrid(*([kaxis] * dim), indexing="ij")
    kvecs = np.zeros((n1**dim, 3))
    if dim == 1:
        kvecs[:, 2] = mesh[0].ravel()  # chains run along z
    else:
        for axis_idx in range(dim):
            kvecs[:, axis_idx] = mesh[axis_idx].ravel()
    return MomentumDistribution(kvecs=kvecs, weights=weights.ravel())


def eigen_residual(mats: CouplingMatrices, summary: SpectralSummary) -> float:
    """||gamma v - gamma_max v|| / ||gamma|| for the reported dominant pair."""
    r = mats.gamma @ summary.dominant_vec - summary.gamma_max * summary.dominant_vec
    return float(np.linalg.norm(r) / np.linalg.norm(mats.gamma, 2))


def spectrum_to_csv(summary: SpectralSummary, path):
    table = np.column_stack([np.arange(summary.n), summary.eigenvalues])
    np.savetxt(
        path,
        table,
        fmt=["%d", "%.17g"],
        delimiter=",",
        header="index,eigenvalue",
        comments="",
    )
