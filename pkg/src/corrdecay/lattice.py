"""Emitter geometry: D-dimensional square lattices and Gaussian position disorder.

All coordinates are in units of the transition wavelength lambda0, so the
resonant wavenumber is k0 = 2*pi and phase factors are k0*r = 2*pi*r.
Randomness comes from numpy's counter-based Philox generator seeded through
SeedSequence; a given seed fully determines every draw.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigError, PhysicsValidationError

RNG_ALGORITHM = "numpy.random.Philox (counter-based), keyed via SeedSequence"

# 46341^2 overflows signed 32-bit indexing used by dense LAPACK drivers;
# dense storage/eigensolvers are the regime of interest, so hard-stop there.
MAX_ATOMS = 46341


def _rng(seed: int, *subkeys: int) -> np.random.Generator:
    """Philox generator for `seed`, optionally split by integer subkeys."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(subkeys))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class LatticeSpec:
    """Recipe for a square emitter array.

    dimension: 1 (chain along z), 2 (square array in xy) or 3 (cube).
    n_per_axis: emitters per axis; total N = n_per_axis**dimension.
    spacing: lattice constant d in units of lambda0.
    polarization: real unit 3-vector of the transition dipole.
    disorder_eta: per-coordinate Gaussian displacement std. dev. in units of d.
    seed: 64-bit seed for the disorder draws.
    """

    dimension: int
    n_per_axis: int
    spacing: float
    polarization: tuple[float, float, float] = (1.0, 0.0, 0.0)
    disorder_eta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ConfigError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        if self.n_per_axis < 1:
            raise ConfigError(f"n_per_axis must be >= 1, got {self.n_per_axis}")
        if self.n_per_axis**self.dimension > MAX_ATOMS:
            raise ConfigError(
                f"N = {self.n_per_axis}**{self.dimension} exceeds the dense-solver "
                f"ceiling of {MAX_ATOMS} atoms"
            )
        if not self.spacing > 0:
            raise ConfigError(f"spacing must be positive, got {self.spacing}")
        pol = np.asarray(self.polarization, dtype=float)
        if pol.shape != (3,) or abs(np.linalg.norm(pol) - 1.0) > 1e-12:
            raise ConfigError("polarization must be a real unit 3-vector (within 1e-12)")
        if self.disorder_eta < 0:
            raise ConfigError("disorder_eta must be non-negative")
        object.__setattr__(self, "polarization", tuple(float(c) for c in pol))

    @property
    def n_atoms(self) -> int:
        return self.n_per_axis**self.dimension

    @property
    def pol_vector(self) -> np.ndarray:
        return np.asarray(self.polarization, dtype=float)

    def to_json(self) -> str:
        return json.dumps(
            {
                "dimension": self.dimension,
                "n_per_axis": self.n_per_axis,
                "spacing": self.spacing,
                "polarization": list(self.polarization),
                "disorder_eta": self.disorder_eta,
                "seed": self.seed,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "LatticeSpec":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid LatticeSpec JSON: {exc}") from exc
        known = {"dimension", "n_per_axis", "spacing", "polarization", "disorder_eta", "seed"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown LatticeSpec keys: {sorted(unknown)}")
        missing = {"dimension", "n_per_axis", "spacing"} - set(raw)
        if missing:
            raise ConfigError(f"missing LatticeSpec keys: {sorted(missing)}")
        raw.setdefault("polarization", (1.0, 0.0, 0.0))
        raw["polarization"] = tuple(raw["polarization"])
        return cls(**raw)


@dataclass(frozen=True)
class AtomArray:
    """N emitter positions (N x 3, units of lambda0) plus the spec that made them."""

    positions: np.ndarray
    source_spec: LatticeSpec

    def __post_init__(self):
        pos = np.ascontiguousarray(np.asarray(self.positions, dtype=float))
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ConfigError("positions must be an (N, 3) array")
        if pos.shape[0] != self.source_spec.n_atoms:
            raise ConfigError(
                f"position count {pos.shape[0]} does not match spec N = {self.source_spec.n_atoms}"
            )
        object.__setattr__(self, "positions", pos)

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    def min_pair_distance(self) -> float:
        if self.n_atoms < 2:
            return np.inf
        dist, _ = cKDTree(self.positions).query(self.positions, k=2)
        return float(dist[:, 1].min())


def generate_lattice(spec: LatticeSpec) -> AtomArray:
    """Ordered positions on the square lattice defined by `spec`.

    1D chains run along z, 2D arrays fill the xy plane, 3D arrays are cubic;
    the origin sits at a lattice corner. Pure function of the spec.
    """
    n, d = spec.n_per_axis, spec.spacing
    axis = np.arange(n, dtype=float) * d
    if spec.dimension == 1:
        pos = np.zeros((n, 3))
        pos[:, 2] = axis
    elif spec.dimension == 2:
        xx, yy = np.meshgrid(axis, axis, indexing="ij")
        pos = np.column_stack([xx.ravel(), yy.ravel(), np.zeros(n * n)])
    else:
        xx, yy, zz = np.meshgrid(axis, axis, axis, indexing="ij")
        pos = np.column_stack([xx.ravel(), yy.ravel(), zz.ravel()])
    return AtomArray(positions=pos, source_spec=spec)


def apply_position_disorder(array: AtomArray, disorder_eta: float, seed: int) -> AtomArray:
    """Displace every coordinate by an independent Gaussian of std disorder_eta * d.

    Displacements are isotropic in 3D even for 1D/2D lattices (tweezer-style
    position noise). disorder_eta = 0 returns the input unchanged; a fixed
    seed makes the output bit-reproducible. Draws are not clipped, so a
    pathological overlap is rejected rather than repaired.
    """
    if disorder_eta < 0:
        raise ConfigError("disorder_eta must be non-negative")
    if disorder_eta == 0:
        return array
    sigma = disorder_eta * array.source_spec.spacing
    offsets = _rng(seed).normal(0.0, sigma, size=array.positions.shape)
    new_spec = replace(array.source_spec, disorder_eta=disorder_eta, seed=seed)
    out = AtomArray(positions=array.positions + offsets, source_spec=new_spec)
    if out.n_atoms > 1 and out.min_pair_distance() <= 0.0:
        raise PhysicsValidationError("disorder draw produced coincident emitters")
    return out


def build_array(spec: LatticeSpec) -> AtomArray:
    """generate_lattice plus the spec's own disorder, if any."""
    array = generate_lattice(spec)
    if spec.disorder_eta > 0:
        array = apply_position_disorder(array, spec.disorder_eta, spec.seed)
    return array
