"""Closed-form spin-wave transition rates of infinite arrays and their
finite-grid estimates of the largest collective rate.

Wavevectors are handled in units of k0 (light line at |u| = 1); the lattice
constant enters through k0*d = 2*pi*d with d in lambda0 units. Reciprocal
vectors g contribute whenever k + g falls inside the light cone; for 3D the
rate is a regularized Lorentzian controlled by reg_delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DivergentModeError

POL_TAGS = ("parallel", "perpendicular")
LIGHT_LINE_TOL = 1e-9  # |u| within this of 1 counts as on the light line (2D)
PREFACTOR_DOMAIN_MAX = 0.5  # asymptotic alpha/beta formulas assume d <~ 0.5 lambda0


@dataclass
class KSpaceRates:
    """Rates Gamma(k)/gamma0 sampled on a wavevector grid."""

    dimension: int
    spacing: float
    pol_tag: str
    kvecs: np.ndarray  # (M, D) in units of k0
    rates: np.ndarray
    reg_delta: float | None = None

    def to_csv(self, path):
        full = np.zeros((self.rates.size, 3))
        if self.dimension == 1:
            full[:, 2] = self.kvecs[:, 0]  # chains run along z
        else:
            full[:, : self.dimension] = self.kvecs
        table = np.column_stack([full, self.rates])
        np.savetxt(path, table, fmt="%.17g", delimiter=",",
                   header="kx,ky,kz,rate", comments="")


def _check_args(dimension, spacing, pol_tag):
    if dimension not in (1, 2, 3):
        raise ConfigError(f"dimension must be 1, 2 or 3, got {dimension}")
    if not spacing > 0:
        raise ConfigError("spacing must be positive")
    if pol_tag not in POL_TAGS:
        raise ConfigError(f"pol_tag must be one of {POL_TAGS}")


def _recip_shifts(dimension, spacing, kmax_units):
    """Reciprocal vectors g/k0 = n/d (per axis) with |g| small enough to matter."""
    nmax = int(math.floor(kmax_units * spacing)) + 1
    axis = np.arange(-nmax, nmax + 1) / spacing
    if dimension == 1:
        return axis[:, None]
    mesh = np.meshgrid(*([axis] * dimension), indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def gamma_k(dimension: int, spacing: float, pol_tag: str, k, reg_delta: float | None = None) -> float:
    """Transition rate Gamma(k)/gamma0 of an infinite D-dimensional array.

    k is a length-D wavevector in units of k0, expected inside the first
    Brillouin zone. For D = 2 a wavevector exactly on the light line raises
    DivergentModeError; for D = 3 a positive reg_delta is required.
    """
    _check_args(dimension, spacing, pol_tag)
    u0 = np.atleast_1d(np.asarray(k, dtype=float))
    if u0.size != dimension:
        raise ConfigError(f"k must have {dimension} components")
    if np.any(np.abs(u0) > 0.5 / spacing * (1 + 1e-12)):
        raise ConfigError("k outside the first Brillouin zone")
    kd = 2.0 * np.pi * spacing  # k0 * d

    g = _recip_shifts(dimension, spacing, kmax_units=np.linalg.norm(u0) + 1.5)
    u = u0[None, :] + g  # candidate k + g in k0 units
    unorm2 = np.sum(u**2, axis=1)

    if dimension == 1:
        sel = unorm2 <= 1.0 + 1e-15
        u2 = unorm2[sel]
        if pol_tag == "parallel":
            return float(3.0 * np.pi / (2.0 * kd) * np.sum(1.0 - u2))
        return float(3.0 * np.pi / (4.0 * kd) * np.sum(1.0 + u2))

    if dimension == 2:
        on_line = np.abs(unorm2 - 1.0) < LIGHT_LINE_TOL
        if np.any(on_line):
            raise DivergentModeError(f"wavevector {u0} + g lies on the light line")
        sel = unorm2 < 1.0
        if not np.any(sel):
            return 0.0
        u2 = unorm2[sel]
        root = np.sqrt(1.0 - u2)
        if pol_tag == "parallel":
            pol_axis = u[sel, 0]  # in-plane polarization along x
            num = 1.0 - pol_axis**2
        else:
            num = u2
        return float(3.0 * np.pi / kd**2 * np.sum(num / root))

    if reg_delta is None or not reg_delta > 0:
        raise ConfigError("D = 3 rates need a positive reg_delta regularizer")
    sel = unorm2 < 1.0  # cutoff shell: the closed light sphere
    if not np.any(sel):
        return 0.0
    pol_axis = u[sel, 2]  # polarization along one array axis (z)
    num = reg_delta * (1.0 - pol_axis**2)
    den = (1.0 - unorm2[sel]) ** 2 + reg_delta**2
    return float(6.0 * np.pi / kd**3 * np.sum(num / den))


def _grid_axis_1d(spacing, n):
    # k_mu = -pi/d + 2*pi*mu/(d*(N+1)), mu = 1..N, in units of k0
    mu = np.arange(1, n + 1)
    return (-0.5 + mu / (n + 1.0)) / spacing


def _grid_axis_offset(spacing, n):
    # uniform BZ grid shifted by half a cell so no point sits on the light line
    mu = np.arange(n)
    return (-0.5 + (mu + 0.5) / n) / spacing


def default_reg_delta(spacing: float, n_per_axis: int) -> float:
    """Grid-offset regularizer for 3D rates: 2*pi / (k0 d (N_1D + 1))."""
    return 2.0 * np.pi / (2.0 * np.pi * spacing * (n_per_axis + 1.0))


def gamma_k_grid(dimension, spacing, pol_tag, n_per_axis, reg_delta=None,
                 offset: float | None = None) -> KSpaceRates:
    """Sample Gamma(k) on the finite-array wavevector grid (N_1D points per axis).

    A finite array cannot resolve momenta closer to the light line than its
    grid scale, so for D >= 2 every sampled wavevector is kept at least
    `offset` away from it (radially retracted if needed); offset defaults to
    the grid bound 2*pi/(k0 d (N_1D + 1)). This makes the estimate a
    deterministic function of (D, d, N_1D) instead of a Diophantine accident
    of where mesh points land relative to the divergence.
    """
    _check_args(dimension, spacing, pol_tag)
    if n_per_axis < 2:
        raise ConfigError("n_per_axis must be >= 2")
    if dimension == 1:
        axes = [_grid_axis_1d(spacing, n_per_axis)]
    else:
        axes = [_grid_axis_offset(spacing, n_per_axis)] * dimension
    if offset is None:
        offset = default_reg_delta(spacing, n_per_axis)
    if dimension == 3 and reg_delta is None:
        reg_delta = default_reg_delta(spacing, n_per_axis)
    mesh = np.meshgrid(*axes, indexing="ij")
    kvecs = np.column_stack([m.ravel() for m in mesh])
    rates = np.empty(kvecs.shape[0])
    nudge = 1e-6 / (spacing * n_per_axis)
    bz_edge = 0.5 / spacing
    for idx, kv in enumerate(kvecs):
        kv_eval = kv if dimension == 1 else np.clip(
            _retract_from_light_line(kv, spacing, offset), -bz_edge, bz_edge
        )
        try:
            rates[idx] = gamma_k(dimension, spacing, pol_tag, kv_eval, reg_delta)
        except DivergentModeError:
            shrink = 1.0 - nudge / max(np.linalg.norm(kv_eval), nudge)
            rates[idx] = gamma_k(dimension, spacing, pol_tag, kv_eval * shrink, reg_delta)
    return KSpaceRates(
        dimension=dimension,
        spacing=spacing,
        pol_tag=pol_tag,
        kvecs=kvecs,
        rates=rates,
        reg_delta=reg_delta,
    )


def _retract_from_light_line(kv, spacing, offset):
    """Pull |k + g| out of the band (1 - offset, 1 + offset) around the light line.

    Checked against every reciprocal shift so folded copies of the divergence
    are regularized too; the retraction moves k radially about -g.
    """
    for g in _recip_shifts(kv.size, spacing, kmax_units=np.linalg.norm(kv) + 1.5):
        u = kv + g
        norm = np.linalg.norm(u)
        if abs(norm - 1.0) < offset:
            target = 1.0 - offset
            if norm < 1e-12:
                continue
            kv = u * (target / norm) - g
    return kv


def gamma_max_finite_grid(dimension, spacing, pol_tag, n_per_axis, reg_delta=None,
                          offset: float | None = None) -> float:
    """Grid-based estimate of the largest collective rate of an N_1D^D array."""
    return float(
        gamma_k_grid(dimension, spacing, pol_tag, n_per_axis, reg_delta, offset).rates.max()
    )


@dataclass
class ScalingPrefactors:
    """Asymptotic gamma_max ~ beta * N^alpha prefactors for a D-dim array."""

    alpha: float
    beta: float
    in_validity_domain: bool


def asymptotic_prefactors(dimension: int, spacing: float) -> ScalingPrefactors:
    """Large-N exponent and prefactor of the largest rate at lattice constant d.

    alpha is 0, 1/4, 1/3 for D = 1, 2, 3; beta is 3*pi/(2 k0 d),
    3*sqrt(pi)/(2 (k0 d)^{3/2}), 3/(5 (k0 d)^2). Valid for 0 < d <~ 0.5;
    outside that the in_validity_domain flag is lowered.
    """
    if dimension not in (1, 2, 3):
        raise ConfigError("dimension must be 1, 2 or 3")
    if not spacing > 0:
        raise ConfigError("spacing must be positive")
    kd = 2.0 * np.pi * spacing
    if dimension == 1:
        alpha, beta = 0.0, 3.0 * np.pi / (2.0 * kd)
    elif dimension == 2:
        alpha, beta = 0.25, 3.0 * np.sqrt(np.pi) / (2.0 * kd**1.5)
    else:
        alpha, beta = 1.0 / 3.0, 3.0 / (5.0 * kd**2)
    return ScalingPrefactors(alpha=alpha, beta=beta,
                             in_validity_domain=bool(spacing <= PREFACTOR_DOMAIN_MAX))


def scaling_exponent_general(d_lattice: int, delta_space: int) -> float:
    """Exponent x of gamma_max ~ N^x for a D-dim lattice in delta-dim vacuum.

    x = 0 below the critical codimension (D < delta - 1), 1/(2(delta-1)) at
    codimension one, and 1/delta for a space-filling lattice.
    """
    if d_lattice < 1 or delta_space < 1:
        raise ConfigError("dimensions must be positive integers")
    if d_lattice > delta_space:
        raise ConfigError("lattice dimension cannot exceed the vacuum dimension")
    if d_lattice < delta_space - 1:
        return 0.0
    if d_lattice == delta_space - 1:
        return 1.0 / (2.0 * (delta_space - 1))
    return 1.0 / delta_space
