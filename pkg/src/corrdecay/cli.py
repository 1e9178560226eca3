"""Command-line front end: seeded, reproducible runs emitting CSV/JSON.

Subcommands: gamma, analyze, scan, sdp, exact, kspace, rydberg.
Exit codes: 0 success, 2 config error, 3 physics-validation error,
4 solver non-convergence. Config precedence: flags > --config file > defaults.
Every run writes a manifest (config hash, seed, versions, wall time) next to
its outputs. Omitted seeds fall back to a fixed documented constant, never
the wall clock.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import bounds_report, driven_report
from .coupling import (
    build_coupling_matrices,
    read_matrix_binary,
    validate_psd,
    write_coupling_csv,
    write_matrix_binary,
    CouplingMatrices,
)
from .errors import ConfigError, CorrdecayError, PhysicsValidationError, SolverConvergenceError
from .exactdiag import MAX_QUBITS, exact_rstar
from .kspace import gamma_k_grid
from .lattice import MAX_ATOMS, LatticeSpec, build_array
from .rydberg import RydbergInput, read_transition_table, rydberg_report
from .sdp import SdpProblem, round_to_product_state, sdp_certificates, solve_low_rank, solve_projection
from .spectral import decompose, momentum_distribution, spectrum_to_csv
from .sweep import DisorderSpec, SweepPlan, fit_table, run_sweep, sweep_sizes

DEFAULT_SEED = 20250810  # fixed fallback so omitted seeds stay reproducible

POL_PRESETS = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}

_LATTICE_KEYS = {
    "dim": {"type": "integer", "enum": [1, 2, 3]},
    "n": {"type": "integer", "minimum": 1},
    "d": {"type": "number", "exclusiveMinimum": 0},
    "pol": {"type": "string"},
    "eta": {"type": "number", "minimum": 0},
    "seed": {"type": "integer"},
}

_GLOBAL_KEYS = {
    "threads": {"type": "integer", "minimum": 1},
    "out": {"type": "string"},
    "output_format": {"type": "string", "enum": ["csv", "binary", "both"]},
}

SCHEMAS = {
    "gamma": {**_LATTICE_KEYS, **_GLOBAL_KEYS},
    "analyze": {
        **_LATTICE_KEYS,
        **_GLOBAL_KEYS,
        "gamma_file": {"type": "string"},
        "exact_max_n": {"type": "integer", "minimum": 2, "maximum": MAX_QUBITS},
        "sdp_max_n": {"type": "integer", "minimum": 2},
        "max_dense_dim": {"type": "integer", "minimum": 1},
    },
    "scan": {
        **_LATTICE_KEYS,
        **_GLOBAL_KEYS,
        "quantity": {"type": "string", "enum": ["gamma_max", "sdp_estimate", "lb_best", "ub"]},
        "sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "n_min": {"type": "integer", "minimum": 2},
        "n_max": {"type": "integer", "minimum": 2},
        "count": {"type": "integer", "minimum": 3},
        "spacing_mode": {"type": "string", "enum": ["geometric", "linear"]},
        "realizations": {"type": "integer", "minimum": 1},
    },
    "sdp": {
        **_LATTICE_KEYS,
        **_GLOBAL_KEYS,
        "gamma_file": {"type": "string"},
        "solver": {"type": "string", "enum": ["lowrank", "projection"]},
        "rank": {"type": "integer", "minimum": 2},
        "max_iters": {"type": "integer", "minimum": 1},
        "tol": {"type": "number", "exclusiveMinimum": 0},
    },
    "exact": {
        **_LATTICE_KEYS,
        **_GLOBAL_KEYS,
        "gamma_file": {"type": "string"},
        "max_dense_dim": {"type": "integer", "minimum": 1},
    },
    "kspace": {
        **_GLOBAL_KEYS,
        "dim": {"type": "integer", "enum": [1, 2, 3]},
        "n": {"type": "integer", "minimum": 2},
        "d": {"type": "number", "exclusiveMinimum": 0},
        "pol_tag": {"type": "string", "enum": ["parallel", "perpendicular"]},
        "reg_delta": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer"},
    },
    "rydberg": {
        **_GLOBAL_KEYS,
        "table": {"type": "string"},
        "n_atoms": {"type": "integer", "minimum": 2},
        "spacing_um": {"type": "number", "exclusiveMinimum": 0},
        "c6": {"type": "number", "exclusiveMinimum": 0},
        "rabi": {"type": "number", "exclusiveMinimum": 0},
        "dominant": {"type": "string"},
        "exact_gamma_max_hz": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer"},
    },
}


def _validate_config(command: str, config: dict) -> None:
    import jsonschema

    schema = {
        "type": "object",
        "properties": SCHEMAS[command],
        "additionalProperties": False,
    }
    try:
        jsonschema.validate(config, schema)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config schema violation: {exc.message}") from exc


def _merge_config(command: str, args: argparse.Namespace, flag_names: list) -> dict:
    config = {}
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        config.update(loaded)
    for name in flag_names:
        value = getattr(args, name, None)
        if value is not None:
            config[name] = value
    _validate_config(command, config)
    return config


def _parse_pol(text: str):
    if text in POL_PRESETS:
        return POL_PRESETS[text]
    try:
        vec = np.asarray([float(t) for t in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"cannot parse polarization {text!r}") from exc
    if vec.shape != (3,):
        raise ConfigError("polarization needs 3 comma-separated components")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ConfigError("polarization must be nonzero")
    return tuple(vec / norm)


def _lattice_from_config(config: dict) -> LatticeSpec:
    for key in ("dim", "n", "d"):
        if key not in config:
            raise ConfigError(f"missing required lattice key '{key}'")
    return LatticeSpec(
        dimension=config["dim"],
        n_per_axis=config["n"],
        spacing=config["d"],
        polarization=_parse_pol(config.get("pol", "x")),
        disorder_eta=config.get("eta", 0.0),
        seed=config.get("seed", DEFAULT_SEED),
    )


def _coupling_from_config(config: dict):
    """Coupling matrices from either a lattice spec or a binary matrix file."""
    if "gamma_file" in config:
        gamma = read_matrix_binary(config["gamma_file"])
        n = gamma.shape[0]
        return CouplingMatrices(gamma=gamma, jmat=np.zeros_like(gamma),
                                gamma0=float(gamma[0, 0]), n=n), None
    spec = _lattice_from_config(config)
    return build_coupling_matrices(build_array(spec)), spec


def _write_manifest(out_dir: Path, command: str, config: dict, outputs: list, t0: float):
    digest = hashlib.sha256(
        json.dumps(config, sort_keys=True, default=str).encode()
    ).hexdigest()
    manifest = {
        "command": command,
        "config": config,
        "config_sha256": digest,
        "seed": config.get("seed", DEFAULT_SEED),
        "versions": {
            "corrdecay": __version__,
            "numpy": np.__version__,
            "scipy": _scipy_version(),
            "python": sys.version.split()[0],
        },
        "wall_time_s": time.time() - t0,
        "outputs": [str(p) for p in outputs],
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _scipy_version() -> str:
    import scipy

    return scipy.__version__


def _out_dir(config: dict) -> Path:
    out = Path(config.get("out", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gamma(args) -> int:
    t0 = time.time()
    config = _merge_config("gamma", args, ["dim", "n", "d", "pol", "eta", "seed",
                                           "threads", "out", "output_format"])
    spec = _lattice_from_config(config)
    mats = build_coupling_matrices(build_array(spec))
    diag = validate_psd(mats)
    out = _out_dir(config)
    outputs = []
    fmt = config.get("output_format", "csv")
    if fmt in ("csv", "both"):
        write_coupling_csv(mats, out / "coupling.csv")
        outputs.append(out / "coupling.csv")
    if fmt in ("binary", "both"):
        write_matrix_binary(mats.gamma, out / "gamma.bin")
        write_matrix_binary(mats.jmat, out / "jmat.bin")
        outputs += [out / "gamma.bin", out / "jmat.bin"]
    (out / "psd.json").write_text(json.dumps(diag.to_dict(), indent=2) + "\n")
    outputs.append(out / "psd.json")
    (out / "lattice.json").write_text(spec.to_json() + "\n")
    outputs.append(out / "lattice.json")
    _write_manifest(out, "gamma", config, outputs, t0)
    if not diag.passed:
        print(f"PSD check failed: min eigenvalue {diag.min_eigenvalue:.3e}", file=sys.stderr)
        return 3
    print(f"wrote {len(outputs)} files to {out} (N = {mats.n})")
    return 0


def cmd_analyze(args) -> int:
    t0 = time.time()
    config = _merge_config("analyze", args, ["dim", "n", "d", "pol", "eta", "seed",
                                             "gamma_file", "exact_max_n", "sdp_max_n",
                                             "max_dense_dim", "threads", "out",
                                             "output_format"])
    mats, spec = _coupling_from_config(config)
    threads = config.get("threads", _default_threads())
    diag = validate_psd(mats)
    if not diag.passed:
        print(f"PSD check failed: min eigenvalue {diag.min_eigenvalue:.3e}", file=sys.stderr)
        return 3
    summary = decompose(mats)
    bounds = bounds_report(summary, mats)
    doc = {
        "n": mats.n,
        "psd": diag.to_dict(),
        "spectral": {
            "gamma_max": summary.gamma_max,
            "delta": summary.delta,
            "degeneracy": summary.degeneracy,
            "trace": float(np.sum(summary.eigenvalues)),
        },
        "bounds": bounds.to_dict(),
    }
    if spec is not None:
        doc["lattice"] = json.loads(spec.to_json())
        doc["driven"] = driven_report(summary, bounds, mats, spec.dimension, spec.spacing).to_dict()
    if mats.n <= config.get("sdp_max_n", 2000):
        problem = SdpProblem.from_coupling(mats)
        sol = solve_low_rank(problem, seed=config.get("seed", DEFAULT_SEED))
        if not sol.converged:
            print("SDP solver did not converge", file=sys.stderr)
            return 4
        sdp_certificates(problem, sol, summary.gamma_max, mats.gamma0)
        doc["sdp"] = sol.to_dict()
    if mats.n <= config.get("exact_max_n", 14):
        doc["exact"] = exact_rstar(mats, max_dense_dim=config.get("max_dense_dim", 4096),
                                   threads=threads).to_dict()
    out = _out_dir(config)
    (out / "analysis.json").write_text(json.dumps(doc, indent=2) + "\n")
    spectrum_to_csv(summary, out / "spectrum.csv")
    outputs = [out / "analysis.json", out / "spectrum.csv"]
    if spec is not None and spec.disorder_eta == 0:
        momentum_distribution(summary.dominant_vec, build_array(spec)).to_csv(out / "momentum.csv")
        outputs.append(out / "momentum.csv")
    _write_manifest(out, "analyze", config, outputs, t0)
    print(f"analysis written to {out / 'analysis.json'}")
    return 0


def cmd_scan(args) -> int:
    t0 = time.time()
    config = _merge_config("scan", args, ["dim", "n_min", "n_max", "count", "spacing_mode",
                                          "sizes", "d", "pol", "quantity", "eta",
                                          "realizations", "seed", "threads", "out",
                                          "output_format"])
    if "sizes" in config:
        sizes = config["sizes"]
    elif "n_min" in config and "n_max" in config:
        sizes = sweep_sizes(config["n_min"], config["n_max"], config.get("count", 7),
                            config.get("spacing_mode", "geometric"))
    else:
        raise ConfigError("scan needs either sizes or n_min/n_max")
    if not sizes:
        raise ConfigError("empty sweep size list")
    disorder = None
    if config.get("eta", 0.0) > 0:
        disorder = DisorderSpec(eta=config["eta"],
                                n_realizations=config.get("realizations", 1),
                                seed=config.get("seed", DEFAULT_SEED))
    plan = SweepPlan(
        dimension=config.get("dim", 1),
        spacing=config["d"],
        polarization=_parse_pol(config.get("pol", "x")),
        n_1d_values=sizes,
        quantity=config.get("quantity", "gamma_max"),
        disorder=disorder,
        sdp_seed=config.get("seed", DEFAULT_SEED),
    )
    out = _out_dir(config)
    with open(out / "sweep.csv", "w") as fh:
        fh.write("n_atoms,value,stderr\n")

        def stream_row(row):
            se = "" if row.stderr is None else f"{row.stderr:.17g}"
            fh.write(f"{row.n_atoms},{row.value:.17g},{se}\n")
            fh.flush()

        table = run_sweep(plan, threads=config.get("threads", _default_threads()),
                          on_row=stream_row)
    outputs = [out / "sweep.csv"]
    clean = table.clean()
    if len(clean) >= 3:
        fit = fit_table(table)
        (out / "fit.json").write_text(fit.to_json() + "\n")
        outputs.append(out / "fit.json")
        print(f"fit: alpha = {fit.alpha:.4f} +- {fit.alpha_ci_1sigma:.4f}, "
              f"beta = {fit.beta:.4f}, r^2 = {fit.r_squared:.4f}, accepted = {fit.accepted}")
    failed = [r for r in table.rows if r.error is not None]
    if failed:
        print(f"{len(failed)} sweep rows flagged: {failed[0].error}", file=sys.stderr)
    _write_manifest(out, "scan", config, outputs, t0)
    return 0


def cmd_sdp(args) -> int:
    t0 = time.time()
    config = _merge_config("sdp", args, ["dim", "n", "d", "pol", "eta", "seed",
                                         "gamma_file", "solver", "rank", "max_iters",
                                         "tol", "threads", "out", "output_format"])
    mats, _ = _coupling_from_config(config)
    problem = SdpProblem.from_coupling(mats)
    kwargs = {}
    if "max_iters" in config:
        kwargs["max_iters"] = config["max_iters"]
    if "tol" in config:
        kwargs["tol"] = config["tol"]
    if config.get("solver", "lowrank") == "lowrank":
        sol = solve_low_rank(problem, rank=config.get("rank"),
                             seed=config.get("seed", DEFAULT_SEED), **kwargs)
    else:
        sol = solve_projection(problem, **kwargs)
    gamma_max = float(np.linalg.eigvalsh(mats.gamma)[-1])
    cert = sdp_certificates(problem, sol, gamma_max, mats.gamma0)
    rounding = round_to_product_state(sol, problem)
    doc = sol.to_dict()
    doc["certificates"] = cert
    doc["rounded_product_value"] = rounding.value
    doc["rounded_rstar_witness"] = rounding.value + 0.5 * mats.n * mats.gamma0
    out = _out_dir(config)
    (out / "sdp.json").write_text(json.dumps(doc, indent=2) + "\n")
    np.savetxt(out / "product_angles.csv", rounding.angles[:, None], fmt="%.17g",
               delimiter=",", header="phi", comments="")
    _write_manifest(out, "sdp", config, [out / "sdp.json", out / "product_angles.csv"], t0)
    if not sol.converged:
        print("solver returned best-so-far without converging", file=sys.stderr)
        return 4
    print(f"sdp value = {sol.value:.6f}, rstar_estimate = {sol.rstar_estimate:.6f}")
    return 0


def cmd_exact(args) -> int:
    t0 = time.time()
    config = _merge_config("exact", args, ["dim", "n", "d", "pol", "eta", "seed",
                                           "gamma_file", "max_dense_dim", "threads",
                                           "out", "output_format"])
    mats, _ = _coupling_from_config(config)
    result = exact_rstar(mats, max_dense_dim=config.get("max_dense_dim", 4096),
                         seed=config.get("seed", DEFAULT_SEED),
                         threads=config.get("threads", _default_threads()))
    out = _out_dir(config)
    (out / "exact.json").write_text(json.dumps(result.to_dict(), indent=2) + "\n")
    _write_manifest(out, "exact", config, [out / "exact.json"], t0)
    print(f"rstar_exact = {result.rstar_exact:.9f} (sector m = {result.argmax_sector})")
    return 0


def cmd_kspace(args) -> int:
    t0 = time.time()
    config = _merge_config("kspace", args, ["dim", "n", "d", "pol_tag", "reg_delta",
                                            "seed", "threads", "out", "output_format"])
    for key in ("dim", "n", "d"):
        if key not in config:
            raise ConfigError(f"missing required key '{key}'")
    grid = gamma_k_grid(config["dim"], config["d"], config.get("pol_tag", "parallel"),
                        config["n"], config.get("reg_delta"))
    out = _out_dir(config)
    grid.to_csv(out / "kspace.csv")
    summary = {
        "dimension": grid.dimension,
        "n_per_axis": config["n"],
        "pol_tag": grid.pol_tag,
        "gamma_max_grid": float(grid.rates.max()),
        "reg_delta": grid.reg_delta,
    }
    (out / "kspace.json").write_text(json.dumps(summary, indent=2) + "\n")
    _write_manifest(out, "kspace", config, [out / "kspace.csv", out / "kspace.json"], t0)
    print(f"grid gamma_max = {summary['gamma_max_grid']:.6f}")
    return 0


def cmd_rydberg(args) -> int:
    t0 = time.time()
    config = _merge_config("rydberg", args, ["table", "n_atoms", "spacing_um", "c6",
                                             "rabi", "dominant", "exact_gamma_max_hz",
                                             "seed", "threads", "out", "output_format"])
    for key in ("table", "n_atoms", "spacing_um", "c6", "rabi", "dominant"):
        if key not in config:
            raise ConfigError(f"missing required key '{key}'")
    rows = read_transition_table(config["table"])
    inp = RydbergInput(
        n_atoms=config["n_atoms"],
        spacing_um=config["spacing_um"],
        c6_2pi_ghz_um6=config["c6"],
        rabi_2pi_mhz=config["rabi"],
        transitions=rows,
        dominant_label=config["dominant"],
        exact_gamma_max_2pi_hz=config.get("exact_gamma_max_hz"),
    )
    report = rydberg_report(inp)
    out = _out_dir(config)
    (out / "rydberg.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    _write_manifest(out, "rydberg", config, [out / "rydberg.json"], t0)
    print(f"chi = {report.chi:.6e}, gate_error = {report.gate_error:.6e}")
    return 0


def _default_threads() -> int:
    env = os.environ.get("CORRDECAY_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return 1


def _add_lattice_flags(p: argparse.ArgumentParser):
    p.add_argument("--dim", type=int, help="lattice dimensionality (1, 2 or 3)")
    p.add_argument("--n", type=int, help="emitters per axis (N = n**dim)")
    p.add_argument("--d", type=float, help="lattice constant in units of lambda0")
    p.add_argument("--pol", help="polarization: x|y|z or 'px,py,pz'")
    p.add_argument("--eta", type=float, help="Gaussian position disorder in units of d")


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--threads", type=int,
                   help="worker threads (default $CORRDECAY_THREADS or 1)")
    p.add_argument("--out", help="output directory (default .)")
    p.add_argument("--output-format", dest="output_format",
                   choices=["csv", "binary", "both"], help="matrix output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrdecay",
        description="Collective decay rates of dipole-coupled emitter arrays: "
                    "coupling matrices, analytic bounds, SDP relaxation, exact "
                    f"small-N diagonalization and scaling fits. Dense storage "
                    f"caps the atom number at {MAX_ATOMS}.",
    )
    parser.add_argument("--version", action="version", version=f"corrdecay {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="build and export the coupling matrices")
    _add_lattice_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("analyze", help="spectral summary, bounds, SDP, driven report "
                                       "and (small N) exact rate in one JSON")
    _add_lattice_flags(p)
    _add_common_flags(p)
    p.add_argument("--gamma-file", dest="gamma_file", help="binary gamma matrix input")
    p.add_argument("--exact-max-n", dest="exact_max_n", type=int,
                   help=f"largest N for the exact section (default 14, cap {MAX_QUBITS})")
    p.add_argument("--sdp-max-n", dest="sdp_max_n", type=int,
                   help="largest N for the SDP section (default 2000)")
    p.add_argument("--max-dense-dim", dest="max_dense_dim", type=int,
                   help="largest sector dimension solved densely before Lanczos")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="N-sweep of a rate quantity plus power-law fit")
    _add_lattice_flags(p)
    _add_common_flags(p)
    p.add_argument("--quantity", choices=["gamma_max", "sdp_estimate", "lb_best", "ub"])
    p.add_argument("--sizes", type=lambda s: [int(t) for t in s.split(",")],
                   help="explicit comma-separated N_1D list")
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--count", type=int, help="number of sweep points (default 7)")
    p.add_argument("--spacing-mode", dest="spacing_mode", choices=["geometric", "linear"])
    p.add_argument("--realizations", type=int, help="disorder realizations per point")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sdp", help="solve the product-state SDP relaxation")
    _add_lattice_flags(p)
    _add_common_flags(p)
    p.add_argument("--gamma-file", dest="gamma_file")
    p.add_argument("--solver", choices=["lowrank", "projection"])
    p.add_argument("--rank", type=int)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_sdp)

    p = sub.add_parser("exact", help="sector-resolved exact maximal decay rate")
    _add_lattice_flags(p)
    _add_common_flags(p)
    p.add_argument("--gamma-file", dest="gamma_file")
    p.add_argument("--max-dense-dim", dest="max_dense_dim", type=int)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("kspace", help="spin-wave rates on the finite-array grid")
    _add_common_flags(p)
    p.add_argument("--dim", type=int)
    p.add_argument("--n", type=int, help="grid points per axis")
    p.add_argument("--d", type=float)
    p.add_argument("--pol-tag", dest="pol_tag", choices=["parallel", "perpendicular"])
    p.add_argument("--reg-delta", dest="reg_delta", type=float,
                   help="3D light-line regularizer (default: grid offset)")
    p.set_defaults(func=cmd_kspace)

    p = sub.add_parser("rydberg", help="collective-decay gate-error estimator")
    _add_common_flags(p)
    p.add_argument("--table", help="transition CSV: label,wavelength_um,gamma0_2pi_hz,nbar")
    p.add_argument("--n-atoms", dest="n_atoms", type=int)
    p.add_argument("--spacing-um", dest="spacing_um", type=float)
    p.add_argument("--c6", type=float, help="C6 in 2*pi*GHz*um^6")
    p.add_argument("--rabi", type=float, help="two-photon Rabi frequency in 2*pi*MHz")
    p.add_argument("--dominant", help="label of the dominant collective transition")
    p.add_argument("--exact-gamma-max-hz", dest="exact_gamma_max_hz", type=float,
                   help="externally computed collective gamma_max in 2*pi*Hz")
    p.set_defaults(func=cmd_rydberg)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PhysicsValidationError as exc:
        print(f"physics validation error: {exc}", file=sys.stderr)
        return 3
    except SolverConvergenceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 4
    except CorrdecayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
