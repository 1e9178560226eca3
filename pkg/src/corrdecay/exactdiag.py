"""Exact many-body verification: excitation-sector spectra of the auxiliary
decay Hamiltonian and Haar-random typicality sampling.

The auxiliary Hamiltonian sum_ij Gamma_ij sigma+_i sigma-_j conserves the
excitation number, so it block-diagonalizes into sectors labelled by m, the
number of de-excited qubits (m = 0 is fully excited). Sector bases are
bitmasks (bit i set = qubit i excited) sorted ascending, with searchsorted
index lookup. Note this is a 2^N-space diagonalization; the N x N matrix
eigenproblem lives in spectral.py and is a different, much cheaper beast.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coupling import CouplingMatrices
from .errors import ConfigError, SolverConvergenceError
from .lattice import _rng

MAX_QUBITS = 24  # C(24,12) ~ 2.7e6 is the largest tractable sector
MAX_DENSE_DIM = 4096
MAX_QUBITS_DENSE = 12
MAX_QUBITS_HAAR = 14


@dataclass
class SectorBasis:
    """Computational basis of one excitation sector of N qubits.

    The bitmask -> position index map is realized by binary search over the
    sorted mask array (see position()).
    """

    n: int
    m_ground: int
    states: np.ndarray  # uint64 bitmasks, sorted ascending

    @property
    def dim(self) -> int:
        return self.states.size

    @classmethod
    def build(cls, n: int, m_ground: int) -> "SectorBasis":
        if not 0 <= m_ground <= n:
            raise ConfigError(f"m_ground = {m_ground} outside [0, {n}]")
        n_exc = n - m_ground
        masks = []
        for bits in itertools.combinations(range(n), n_exc):
            mask = 0
            for b in bits:
                mask |= 1 << b
            masks.append(mask)
        states = np.sort(np.asarray(masks, dtype=np.uint64))
        return cls(n=n, m_ground=m_ground, states=states)

    def position(self, mask) -> np.ndarray:
        """Index of each bitmask within the sorted sector basis."""
        return np.searchsorted(self.states, mask)


def sector_matvec(mats: CouplingMatrices, basis: SectorBasis, v: np.ndarray) -> np.ndarray:
    """Apply the auxiliary Hamiltonian restricted to one sector, matrix-free.

    Diagonal: sum of Gamma_ii over excited qubits. Off-diagonal: amplitude
    Gamma_ij for moving one excitation from j to i (hard-core hop, no signs).
    """
    v = np.asarray(v)
    if v.shape[0] != basis.dim:
        raise ConfigError("vector length does not match sector dimension")
    n = basis.n
    states = basis.states
    out = np.zeros_like(v, dtype=np.result_type(v.dtype, float))

    occ = [((states >> np.uint64(i)) & np.uint64(1)).astype(bool) for i in range(n)]
    diag = np.zeros(basis.dim)
    for i in range(n):
        diag += np.where(occ[i], mats.gamma[i, i], 0.0)
    out += diag * v

    for j in range(n):
        for i in range(n):
            if i == j:
                continue
            amp = mats.gamma[i, j]
            if amp == 0.0:
                continue
            src = occ[j] & ~occ[i]
            if not src.any():
                continue
            moved = (states[src] ^ np.uint64(1 << j)) | np.uint64(1 << i)
            out[basis.position(moved)] += amp * v[src]
    return out


def build_sector_dense(mats: CouplingMatrices, basis: SectorBasis) -> np.ndarray:
    """Dense sector matrix, assembled column-block-wise from the matvec kernel."""
    dim = basis.dim
    h = np.zeros((dim, dim))
    states = basis.states
    n = basis.n
    occ = [((states >> np.uint64(i)) & np.uint64(1)).astype(bool) for i in range(n)]
    diag = np.zeros(dim)
    for i in range(n):
        diag += np.where(occ[i], mats.gamma[i, i], 0.0)
    h[np.arange(dim), np.arange(dim)] = diag
    for j in range(n):
        for i in range(n):
            if i == j:
                continue
            src = occ[j] & ~occ[i]
            if not src.any():
                continue
            moved = (states[src] ^ np.uint64(1 << j)) | np.uint64(1 << i)
            h[basis.position(moved), np.flatnonzero(src)] += mats.gamma[i, j]
    return h


def lanczos_largest(matvec, dim: int, tol: float = 1e-10, max_iter: int = 300,
                    seed: int = 0, restarts: int = 3):
    """Largest eigenvalue by Lanczos with full reorthogonalization.

    Restart-free up to max_iter steps; a breakdown (vanishing residual before
    convergence) retries with a fresh seeded start. Returns (value, iterations).
    """
    if dim == 1:
        e = np.zeros(1)
        e[0] = 1.0
        return float(matvec(e)[0]), 1
    for attempt in range(restarts):
        rng = _rng(seed, attempt)
        q = rng.standard_normal(dim)
        q /= np.linalg.norm(q)
        basis_vecs = [q]
        alphas, betas = [], []
        theta_prev = None
        for it in range(1, max_iter + 1):
            w = matvec(basis_vecs[-1])
            alpha = float(np.dot(basis_vecs[-1], w))
            alphas.append(alpha)
            w = w - alpha * basis_vecs[-1]
            if len(basis_vecs) > 1:
                w = w - betas[-1] * basis_vecs[-2]
            # full reorthogonalization: small dims make the cost irrelevant
            vstack = np.asarray(basis_vecs)
            w = w - vstack.T @ (vstack @ w)
            beta = float(np.linalg.norm(w))
            tmat = np.diag(alphas)
            if betas:
                off = np.asarray(betas)
                tmat += np.diag(off, 1) + np.diag(off, -1)
            evals, evecs = np.linalg.eigh(tmat)
            theta = float(evals[-1])
            resid = beta * abs(evecs[-1, -1])
            scale = max(abs(theta), 1.0)
            if resid <= tol * scale and theta_prev is not None and \
                    abs(theta - theta_prev) <= tol * scale:
                return theta, it
            theta_prev = theta
            if beta <= 1e-14 * scale:
                if len(alphas) >= dim:  # exact invariant subspace covers everything
                    return theta, it
                break  # breakdown: retry with a fresh start
            if len(basis_vecs) >= min(dim, max_iter):
                return theta, it
            betas.append(beta)
            basis_vecs.append(w / beta)
    raise SolverConvergenceError("Lanczos failed to converge after seeded restarts")


@dataclass
class ExactResult:
    """Sector-resolved maximal decay rate (the true r_star at small N)."""

    rstar_exact: float
    argmax_sector: int  # m_ground of the winning sector
    per_sector_max: list
    method: str  # "dense", "lanczos" or "dense+lanczos"

    def to_dict(self):
        return {
            "rstar_exact": self.rstar_exact,
            "argmax_sector": self.argmax_sector,
            "per_sector_max": self.per_sector_max,
            "method": self.method,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def exact_rstar(mats: CouplingMatrices, max_dense_dim: int = MAX_DENSE_DIM,
                force_method: str | None = None, tol: float = 1e-10,
                seed: int = 7, threads: int = 1) -> ExactResult:
    """Largest eigenvalue of the auxiliary Hamiltonian over all sectors.

    Sectors with dimension <= max_dense_dim are solved densely, larger ones
    with matrix-free Lanczos; force_method = "dense" | "lanczos" overrides.
    Sector solves are independent and can run on a thread pool.
    """
    n = mats.n
    if n > MAX_QUBITS:
        raise ConfigError(f"exact diagonalization is limited to N <= {MAX_QUBITS}")
    if force_method not in (None, "dense", "lanczos"):
        raise ConfigError("force_method must be None, 'dense' or 'lanczos'")

    def solve_sector(m_ground):
        basis = SectorBasis.build(n, m_ground)
        use_dense = basis.dim <= max_dense_dim if force_method is None else force_method == "dense"
        if use_dense:
            h = build_sector_dense(mats, basis)
            return float(np.linalg.eigvalsh(h)[-1]), "dense"
        value, _ = lanczos_largest(
            lambda v: sector_matvec(mats, basis, v), basis.dim, tol=tol, seed=seed
        )
        return value, "lanczos"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            solved = list(pool.map(solve_sector, range(n + 1)))
    else:
        solved = [solve_sector(m) for m in range(n + 1)]
    per_sector = [value for value, _ in solved]
    methods = {method for _, method in solved}
    argmax = int(np.argmax(per_sector))
    return ExactResult(
        rstar_exact=float(max(per_sector)),
        argmax_sector=argmax,
        per_sector_max=per_sector,
        method="+".join(sorted(methods)),
    )


@dataclass
class HaarStatistics:
    """Decay-rate statistics over Haar-random many-body states."""

    mean: float
    std: float
    min: float
    max: float
    n_samples: int

    def to_dict(self):
        return {"mean": self.mean, "std": self.std, "min": self.min,
                "max": self.max, "n_samples": self.n_samples}


def haar_rate_samples(mats: CouplingMatrices, n_samples: int, seed: int = 0) -> HaarStatistics:
    """Decay rate of Haar-random states over the full 2^N space.

    States are normalized complex Gaussian vectors; the expectation of the
    auxiliary Hamiltonian is accumulated sector by sector.
    """
    n = mats.n
    if n > MAX_QUBITS_HAAR:
        raise ConfigError(f"Haar sampling is limited to N <= {MAX_QUBITS_HAAR}")
    if n_samples < 1:
        raise ConfigError("n_samples must be positive")
    dim_full = 2**n
    sectors = []
    for m_ground in range(n + 1):
        basis = SectorBasis.build(n, m_ground)
        dense = build_sector_dense(mats, basis) if n <= MAX_QUBITS_DENSE else None
        sectors.append((basis, basis.states.astype(np.int64), dense))

    rng = _rng(seed)
    rates = np.empty(n_samples)
    for s in range(n_samples):
        psi = rng.standard_normal(dim_full) + 1j * rng.standard_normal(dim_full)
        psi /= np.linalg.norm(psi)
        total = 0.0
        for basis, full_idx, dense in sectors:
            chunk = psi[full_idx]
            if dense is not None:
                total += float(np.real(np.vdot(chunk, dense @ chunk)))
            else:
                total += float(np.real(np.vdot(chunk, sector_matvec(mats, basis, chunk))))
        rates[s] = total
    return HaarStatistics(
        mean=float(rates.mean()),
        std=float(rates.std(ddof=1)) if n_samples > 1 else 0.0,
        min=float(rates.min()),
        max=float(rates.max()),
        n_samples=n_samples,
    )


def dicke_rstar(n: int, gamma0: float = 1.0) -> float:
    """Exact all-to-all maximum: (J+M)(J-M+1) at J = N/2 optimized over M.

    Equals N(N+2)/4 for even N and (N+1)^2/4 for odd N (integer vs
    half-integer magnetization closest to 1/2).
    """
    if n % 2 == 0:
        return 0.25 * n * (n + 2) * gamma0
    return 0.25 * (n + 1) ** 2 * gamma0
