import numpy as np
import pytest

from corrdecay.coupling import CouplingMatrices


def random_unit_diag_psd(n, rng):
    """Random PSD matrix with unit diagonal (a valid decoherence matrix)."""
    a = rng.standard_normal((n, n + 2))
    g = a @ a.T
    dinv = 1.0 / np.sqrt(np.diag(g))
    return g * np.outer(dinv, dinv)


def mats_from_gamma(gamma):
    gamma = np.asarray(gamma, dtype=float)
    n = gamma.shape[0]
    return CouplingMatrices(gamma=gamma, jmat=np.zeros_like(gamma), gamma0=float(gamma[0, 0]), n=n)


def dicke_mats(n):
    return mats_from_gamma(np.ones((n, n)))


def full_space_hamiltonian(gamma):
    """Independent oracle: the 2^N x 2^N decay Hamiltonian from Kronecker products."""
    n = gamma.shape[0]
    sp = np.array([[0.0, 0.0], [1.0, 0.0]])  # raising op in (|g>, |e>) ordering
    sm = sp.T
    eye = np.eye(2)

    def embed(op, site):
        out = np.array([[1.0]])
        for q in range(n - 1, -1, -1):
            out = np.kron(out, op if q == site else eye)
        return out

    dim = 2**n
    h = np.zeros((dim, dim))
    for i in range(n):
        for j in range(n):
            h += gamma[i, j] * (embed(sp, i) @ embed(sm, j))
    return h


def random_small_lattice(rng, max_atoms=12):
    """Random free-space array spec with N <= max_atoms."""
    from corrdecay.lattice import LatticeSpec

    dim = int(rng.integers(1, 4))
    cap = int(max_atoms ** (1.0 / dim))
    n1 = int(rng.integers(2, cap + 1))
    pol = rng.standard_normal(3)
    pol /= np.linalg.norm(pol)
    return LatticeSpec(
        dimension=dim,
        n_per_axis=n1,
        spacing=float(rng.uniform(0.1, 0.9)),
        polarization=tuple(pol),
        disorder_eta=float(rng.uniform(0.0, 0.1)),
        seed=int(rng.integers(0, 2**31)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)
