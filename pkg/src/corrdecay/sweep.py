"""N-sweeps of collective-rate quantities and power-law fits with a fit-quality gate.

Sweep points (and disorder realizations within a point) run in a bounded
thread pool; numpy releases the GIL in the heavy kernels. Results are keyed
by (point, realization) seeds, so the table is identical however the pool
schedules the work.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import bounds_report
from .coupling import build_coupling_matrices
from .errors import ConfigError
from .lattice import LatticeSpec, apply_position_disorder, generate_lattice
from .sdp import SdpProblem, solve_low_rank
from .spectral import decompose, gamma_max_only

QUANTITIES = ("gamma_max", "sdp_estimate", "lb_best", "ub")


@dataclass
class DisorderSpec:
    """Ensemble recipe: displacement scale, realization count and base seed."""

    eta: float
    n_realizations: int
    seed: int

    def __post_init__(self):
        if self.eta < 0 or self.n_realizations < 1:
            raise ConfigError("disorder needs eta >= 0 and n_realizations >= 1")


@dataclass
class SweepPlan:
    """One scaling sweep: geometry family, sizes and the quantity to record."""

    dimension: int
    spacing: float
    polarization: tuple
    n_1d_values: list
    quantity: str = "gamma_max"
    disorder: DisorderSpec | None = None
    sdp_seed: int = 0
    sdp_tol: float = 1e-8

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ConfigError(f"quantity must be one of {QUANTITIES}")
        sizes = list(self.n_1d_values)
        if len(sizes) < 3:
            raise ConfigError("a sweep needs at least 3 points")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ConfigError("n_1d_values must be strictly increasing")
        self.n_1d_values = sizes


@dataclass
class SweepRow:
    n_atoms: int
    value: float
    stderr: float | None = None
    error: str | None = None


@dataclass
class SweepTable:
    rows: list = field(default_factory=list)

    def clean(self):
        return [r for r in self.rows if r.error is None]

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("n_atoms,value,stderr\n")
            for r in self.rows:
                se = "" if r.stderr is None else f"{r.stderr:.17g}"
                fh.write(f"{r.n_atoms},{r.value:.17g},{se}\n")  # failed rows hold nan


def sweep_sizes(n_min: int, n_max: int, count: int, mode: str = "geometric") -> list:
    """Distinct integer N_1D values between n_min and n_max.

    Geometric spacing by default; linear on request.
    """
    if mode not in ("geometric", "linear"):
        raise ConfigError("mode must be 'geometric' or 'linear'")
    if n_min < 2 or n_max <= n_min or count < 3:
        raise ConfigError("need 2 <= n_min < n_max and count >= 3")
    if mode == "geometric":
        raw = np.geomspace(n_min, n_max, count)
    else:
        raw = np.linspace(n_min, n_max, count)
    sizes = sorted(set(int(round(x)) for x in raw))
    return sizes


def _evaluate_point(plan: SweepPlan, n_1d: int, eta: float, seed: int) -> float:
    spec = LatticeSpec(
        dimension=plan.dimension,
        n_per_axis=n_1d,
        spacing=plan.spacing,
        polarization=tuple(plan.polarization),
    )
    array = generate_lattice(spec)
    if eta > 0:
        array = apply_position_disorder(array, eta, seed)
    mats = build_coupling_matrices(array)
    if plan.quantity == "gamma_max":
        return gamma_max_only(mats)
    if plan.quantity == "sdp_estimate":
        sol = solve_low_rank(SdpProblem.from_coupling(mats), seed=plan.sdp_seed,
                             tol=plan.sdp_tol)
        return sol.rstar_estimate
    report = bounds_report(decompose(mats), mats)
    return report.lb_best if plan.quantity == "lb_best" else report.ub


def run_sweep(plan: SweepPlan, threads: int = 1, on_row=None) -> SweepTable:
    """Evaluate the planned quantity at every size, averaging any disorder ensemble.

    Rows are emitted in N order as soon as every realization of a point has
    finished (on_row callback), however the pool schedules the work; values
    are keyed by per-(point, realization) seeds so threading never changes
    them. Per-point failures are recorded in the row and the sweep continues.
    """
    dis = plan.disorder
    r_count = 1 if (dis is None or dis.eta == 0) else dis.n_realizations
    jobs = []  # (point_idx, realization_idx, n_1d, eta, seed)
    for p_idx, n_1d in enumerate(plan.n_1d_values):
        if r_count == 1:
            jobs.append((p_idx, 0, n_1d, 0.0 if dis is None else dis.eta, 0))
        else:
            for r_idx in range(dis.n_realizations):
                # stable per-(point, realization) seed, independent of scheduling
                seed = int(
                    np.random.SeedSequence(
                        entropy=dis.seed, spawn_key=(p_idx, r_idx)
                    ).generate_state(1)[0]
                )
                jobs.append((p_idx, r_idx, n_1d, dis.eta, seed))

    results: dict = {}
    table = SweepTable()
    next_point = 0

    def _run(job):
        p_idx, r_idx, n_1d, eta, seed = job
        try:
            return p_idx, r_idx, ("ok", _evaluate_point(plan, n_1d, eta, seed))
        except Exception as exc:  # per-point failure must not kill the sweep
            return p_idx, r_idx, ("error", f"{type(exc).__name__}: {exc}")

    def _aggregate(p_idx):
        n_atoms = plan.n_1d_values[p_idx] ** plan.dimension
        vals, errors = [], []
        for r_idx in range(r_count):
            status, payload = results[(p_idx, r_idx)]
            (vals if status == "ok" else errors).append(payload)
        if not vals:
            return SweepRow(n_atoms=n_atoms, value=float("nan"),
                            error="; ".join(errors))
        arr = np.asarray(vals, dtype=float)
        stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else None
        err = f"partial: {'; '.join(errors)}" if errors else None
        return SweepRow(n_atoms=n_atoms, value=float(arr.mean()), stderr=stderr, error=err)

    def _collect(p_idx, r_idx, outcome):
        nonlocal next_point
        results[(p_idx, r_idx)] = outcome
        # emit every leading point whose ensemble is complete, in N order
        while next_point < len(plan.n_1d_values) and all(
            (next_point, r) in results for r in range(r_count)
        ):
            row = _aggregate(next_point)
            table.rows.append(row)
            if on_row is not None:
                on_row(row)
            next_point += 1

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for p_idx, r_idx, outcome in pool.map(_run, jobs):
                _collect(p_idx, r_idx, outcome)
    else:
        for job in jobs:
            _collect(*_run(job))
    return table


@dataclass
class ScalingFit:
    """Power-law fit value = beta * N^alpha from ordinary least squares in logs.

    1-sigma intervals come from the linear-fit covariance; accepted requires
    r_squared >= 0.95 and a non-degenerate response.
    """

    alpha: float
    beta: float
    alpha_ci_1sigma: float
    beta_ci_1sigma: float
    r_squared: float
    accepted: bool
    degenerate: bool = False

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "alpha_ci": self.alpha_ci_1sigma,
            "beta_ci": self.beta_ci_1sigma,
            "r_squared": self.r_squared,
            "accepted": self.accepted,
            "degenerate": self.degenerate,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


R_SQUARED_GATE = 0.95


def fit_power_law(n_atoms, values) -> ScalingFit:
    """Fit value = beta * N^alpha by OLS on (log N, log value).

    Requires >= 3 points with positive values. A zero-variance response is
    reported as alpha = 0, beta = the common value, degenerate and rejected
    (r_squared is meaningless there and reported as 0).
    """
    x = np.log(np.asarray(n_atoms, dtype=float))
    yvals = np.asarray(values, dtype=float)
    if x.size < 3:
        raise ConfigError("power-law fit needs at least 3 points")
    if np.any(yvals <= 0) or not np.all(np.isfinite(yvals)):
        raise ConfigError("power-law fit needs positive finite values")
    y = np.log(yvals)

    tss = float(np.sum((y - y.mean()) ** 2))
    if tss < 1e-28:
        return ScalingFit(alpha=0.0, beta=float(np.exp(y.mean())),
                          alpha_ci_1sigma=0.0, beta_ci_1sigma=0.0,
                          r_squared=0.0, accepted=False, degenerate=True)

    design = np.column_stack([x, np.ones_like(x)])
    coef, residuals, _, _ = np.linalg.lstsq(design, y, rcond=None)
    alpha, intercept = float(coef[0]), float(coef[1])
    fitted = design @ coef
    rss = float(np.sum((y - fitted) ** 2))
    r2 = 1.0 - rss / tss
    dof = max(x.size - 2, 1)
    sigma2 = rss / dof
    cov = sigma2 * np.linalg.inv(design.T @ design)
    alpha_ci = float(np.sqrt(cov[0, 0]))
    intercept_ci = float(np.sqrt(cov[1, 1]))
    beta = float(np.exp(intercept))
    return ScalingFit(
        alpha=alpha,
        beta=beta,
        alpha_ci_1sigma=alpha_ci,
        beta_ci_1sigma=beta * intercept_ci,
        r_squared=float(r2),
        accepted=bool(r2 >= R_SQUARED_GATE),
    )


def fit_table(table: SweepTable) -> ScalingFit:
    rows = table.clean()
    return fit_power_law([r.n_atoms for r in rows], [r.value for r in rows])
