import numpy as np
import pytest

from conftest import mats_from_gamma, random_small_lattice
from corrdecay.coupling import (
    build_coupling_matrices,
    coupling_pair,
    green_tensor,
    offdiagonal_sum,
    read_coupling_csv,
    read_matrix_binary,
    validate_psd,
    write_coupling_csv,
    write_matrix_binary,
)
from corrdecay.errors import CoincidentEmittersError, SelfTermError
from corrdecay.lattice import LatticeSpec, build_array, generate_lattice


def transverse_kernel(x):
    # independent scalar oracle for the transverse radiation kernel
    return 1.5 * (np.sin(x) / x + np.cos(x) / x**2 - np.sin(x) / x**3)


def longitudinal_kernel(x):
    return 3.0 * (np.sin(x) / x**3 - np.cos(x) / x**2)


def test_green_transverse_projection_half_wavelength():
    g = green_tensor((0.0, 0.0, 0.5))
    got = 6.0 * np.pi / (2 * np.pi) * np.imag(g[0, 0])
    assert np.isclose(got, -3.0 / (2.0 * np.pi**2), atol=1e-14)
    assert np.isclose(got, transverse_kernel(np.pi), atol=1e-14)


def test_green_longitudinal_projection_half_wavelength():
    g = green_tensor((0.0, 0.0, 0.5))
    got = 6.0 * np.pi / (2 * np.pi) * np.imag(g[2, 2])
    assert np.isclose(got, 3.0 / np.pi**2, atol=1e-14)
    assert np.isclose(got, longitudinal_kernel(np.pi), atol=1e-14)


def test_green_far_field_decay():
    near = np.abs(green_tensor((0, 0, 10.0)))
    far = np.abs(green_tensor((0, 0, 100.0)))
    assert far.max() < near.max() / 9.0  # 1/r falloff (within oscillation slack)


def test_green_symmetric_complex():
    g = green_tensor((0.3, -0.2, 0.7))
    np.testing.assert_allclose(g, g.T, atol=1e-15)


def test_green_self_term_rejected():
    with pytest.raises(SelfTermError):
        green_tensor((0.0, 0.0, 0.0))


def test_pair_perpendicular_value():
    _, gamma = coupling_pair((0, 0, 0), (0, 0, 0.5), (1.0, 0, 0))
    assert np.isclose(gamma, -3.0 / (2.0 * np.pi**2), atol=1e-14)


def test_pair_dicke_limit():
    for pol in ((1.0, 0, 0), (0, 0, 1.0)):
        _, gamma = coupling_pair((0, 0, 0), (0, 0, 1e-4), pol)
        assert abs(gamma - 1.0) < 1e-6


def test_pair_swap_symmetric():
    ri, rj = (0.1, 0.2, 0.3), (0.5, -0.1, 0.2)
    pol = np.array([0.36, 0.48, 0.8])
    assert coupling_pair(ri, rj, pol) == coupling_pair(rj, ri, pol)


def test_pair_coincident_rejected():
    with pytest.raises(CoincidentEmittersError):
        coupling_pair((0, 0, 0), (0, 0, 0), (1, 0, 0))


def test_pair_matches_green_projection(rng):
    # both rates must equal the projected propagator, -(3*pi/k0) p.ReG.p and
    # (6*pi/k0) p.ImG.p, evaluated through the independent tensor routine
    k0 = 2 * np.pi
    for _ in range(10):
        ri = rng.uniform(-1, 1, 3)
        rj = rng.uniform(-1, 1, 3)
        if np.linalg.norm(ri - rj) < 0.05:
            continue
        pol = rng.standard_normal(3)
        pol /= np.linalg.norm(pol)
        g = green_tensor(ri - rj)
        j_ref = -3 * np.pi / k0 * float(pol @ np.real(g) @ pol)
        gamma_ref = 6 * np.pi / k0 * float(pol @ np.imag(g) @ pol)
        jij, gij = coupling_pair(ri, rj, pol)
        assert abs(jij - j_ref) < 1e-12 * max(1.0, abs(j_ref))
        assert abs(gij - gamma_ref) < 1e-12


def chain_mats(n, d, pol):
    spec = LatticeSpec(dimension=1, n_per_axis=n, spacing=d, polarization=pol)
    return build_coupling_matrices(generate_lattice(spec))


def test_two_atom_matrix_closed_form():
    mats = chain_mats(2, 0.5, (1.0, 0, 0))
    g12 = -3.0 / (2.0 * np.pi**2)
    np.testing.assert_allclose(mats.gamma, [[1.0, g12], [g12, 1.0]], atol=1e-14)
    eig = np.linalg.eigvalsh(mats.gamma)
    np.testing.assert_allclose(eig, [1.0 + g12, 1.0 - g12], atol=1e-14)  # g12 < 0


def test_single_atom():
    mats = chain_mats(1, 0.5, (1.0, 0, 0))
    np.testing.assert_array_equal(mats.gamma, [[1.0]])
    np.testing.assert_array_equal(mats.jmat, [[0.0]])


def test_dicke_surrogate_gamma_max():
    # all separations 1e-4 lambda0: largest collective rate approaches N
    spec = LatticeSpec(dimension=2, n_per_axis=2, spacing=1e-4, polarization=(1.0, 0, 0))
    mats = build_coupling_matrices(generate_lattice(spec))
    gmax = np.linalg.eigvalsh(mats.gamma)[-1]
    assert abs(gmax - 4.0) < 1e-4


def test_exact_symmetry_and_units():
    spec = LatticeSpec(dimension=2, n_per_axis=5, spacing=0.43, polarization=(0, 0, 1.0))
    mats = build_coupling_matrices(generate_lattice(spec))
    assert np.array_equal(mats.gamma, mats.gamma.T)  # exact, mirrored per pair
    assert np.array_equal(mats.jmat, mats.jmat.T)
    assert np.all(np.diag(mats.gamma) == 1.0)
    assert np.all(np.diag(mats.jmat) == 0.0)


def test_translation_invariance():
    spec = LatticeSpec(dimension=1, n_per_axis=20, spacing=0.4, polarization=(1.0, 0, 0))
    mats = build_coupling_matrices(generate_lattice(spec))
    # same displacement vector -> same coupling, to 1e-12
    for k in range(1, 19):
        col = np.array([mats.gamma[i, i + k] for i in range(20 - k)])
        assert np.ptp(col) < 1e-12


def test_polarization_sign_flip():
    spec = LatticeSpec(dimension=2, n_per_axis=3, spacing=0.3, polarization=(1.0, 0, 0))
    arr = generate_lattice(spec)
    a = build_coupling_matrices(arr, pol=np.array([1.0, 0, 0]))
    b = build_coupling_matrices(arr, pol=np.array([-1.0, 0, 0]))
    np.testing.assert_array_equal(a.gamma, b.gamma)


def test_sum_rule_bounds(rng):
    for _ in range(10):
        mats = build_coupling_matrices(build_array(random_small_lattice(rng)))
        s = offdiagonal_sum(mats)
        n = mats.n
        assert -n - 1e-9 <= s <= n * (n - 1) + 1e-9


def test_psd_on_random_lattices(rng):
    for _ in range(15):
        mats = build_coupling_matrices(build_array(random_small_lattice(rng, max_atoms=30)))
        assert validate_psd(mats).passed


def test_psd_identity_and_handbuilt_failure():
    diag = validate_psd(mats_from_gamma(np.eye(4)))
    assert diag.passed and np.isclose(diag.min_eigenvalue, 1.0)
    bad = validate_psd(mats_from_gamma(np.array([[1.0, 1.5], [1.5, 1.0]])))
    assert not bad.passed
    assert np.isclose(bad.min_eigenvalue, -0.5)


def test_coincident_positions_reported_with_indices():
    from corrdecay.coupling import build_coupling_from_positions

    pos = np.array([[0, 0, 0], [0, 0, 0.4], [0, 0, 0.0]])
    with pytest.raises(CoincidentEmittersError) as err:
        build_coupling_from_positions(pos, np.array([1.0, 0, 0]))
    assert set(err.value.indices) == {0, 2}


def test_csv_roundtrip(tmp_path):
    mats = chain_mats(4, 0.37, (0, 0, 1.0))
    path = tmp_path / "coupling.csv"
    write_coupling_csv(mats, path)
    header = path.read_text().splitlines()[0]
    assert header == "i,j,gamma,jcoupling"
    back = read_coupling_csv(path)
    np.testing.assert_allclose(back.gamma, mats.gamma, rtol=1e-15)
    np.testing.assert_allclose(back.jmat, mats.jmat, rtol=1e-15)


def test_binary_roundtrip(tmp_path):
    mats = chain_mats(5, 0.29, (1.0, 0, 0))
    path = tmp_path / "gamma.bin"
    write_matrix_binary(mats.gamma, path)
    assert path.stat().st_size == 16 + 8 * 25
    back = read_matrix_binary(path)
    np.testing.assert_array_equal(back, mats.gamma)
