"""Convergence and local-error studies with machine-readable reports.

A study takes a scheme list and a descending tau ladder, runs every
(scheme, tau) combination against a shared high-accuracy reference, fits
log-log slopes and emits a deterministic report: CSV rows with the exact
column set scheme,tau,error_rel,gamma,n_points,theta,seed,t_final,status,
or JSON carrying the same rows plus the fitted orders.  Identical configs
produce byte-identical CSV files.

Independent runs may execute in parallel threads; set the KDVLRI_WORKERS
environment variable (default 1).  Report assembly sorts by scheme then
descending tau, so the output does not depend on completion order.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as _field

import numpy as np

from .integrators import BlowUpError, SchemeKind, SolverRun, evolve, step_function
from .oracles import ifrk4_solve, reference_solution
from .rough_data import RoughSpec, generate_rough
from .spectral import Field, Grid, sobolev_norm

WORKERS_ENV = "KDVLRI_WORKERS"

CSV_HEADER = "scheme,tau,error_rel,gamma,n_points,theta,seed,t_final,status"

# pre-asymptotic guard: when the log-log fit is this bad, drop the two
# largest-tau points and refit (recorded in the report)
FIT_RESIDUAL_LIMIT = 0.05


class FitDataError(ValueError):
    """Not enough finite error points to fit an order."""


@dataclass
class StudyConfig:
    """Parameters of one convergence or local-error study."""

    schemes: tuple
    taus: tuple
    n_points: int = 1024
    theta: float = 2.0
    seed: int = 42
    gamma_err: float = 1.0
    t_final: float = 1.0
    ref_tau: float = 2.0**-14
    output: str = None
    fmt: str = "csv"
    dealias: bool = False
    cross_check: bool = False

    def __post_init__(self):
        self.schemes = tuple(self.schemes)
        self.taus = tuple(float(t) for t in self.taus)
        if not self.schemes:
            raise ValueError("study needs at least one scheme")
        for s in self.schemes:
            step_function(s)  # rejects the reserved LRI2 name
        if not self.taus:
            raise ValueError("study needs at least one tau")
        if any(t <= 0 for t in self.taus):
            raise ValueError(f"taus must be positive, got {self.taus}")
        if any(a <= b for a, b in zip(self.taus, self.taus[1:])):
            raise ValueError(f"tau ladder must be strictly decreasing: {self.taus}")
        if self.ref_tau > min(self.taus) / 10.0:
            raise ValueError(
                f"ref_tau = {self.ref_tau:g} must be <= min(tau)/10 = "
                f"{min(self.taus) / 10.0:g}"
            )
        if self.gamma_err < 0:
            raise ValueError(f"gamma_err must be >= 0, got {self.gamma_err}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be 'csv' or 'json', got {self.fmt!r}")


@dataclass
class RunResult:
    scheme: SchemeKind
    tau: float
    error_rel: float
    status: str  # "ok" or "diverged"


@dataclass
class SchemeFit:
    scheme: SchemeKind
    fitted_order: float = None  # None when fewer than 2 finite points
    fit_residual: float = None
    excluded_taus: tuple = ()


@dataclass
class ConvergenceReport:
    config: StudyConfig
    rows: list = _field(default_factory=list)
    fits: list = _field(default_factory=list)
    flags: list = _field(default_factory=list)
    kind: str = "convergence"
    wall_time_s: float = 0.0

    def fit_for(self, scheme) -> SchemeFit:
        for f in self.fits:
            if f.scheme == scheme:
                return f
        raise KeyError(scheme)


def estimate_order(pairs):
    """Least-squares slope of log(err) vs log(tau); returns (slope, residual).

    residual is the RMS deviation of the fit in log space.  Points with
    non-finite or non-positive error are discarded; fewer than two usable
    points raise FitDataError.
    """
    usable = [(t, e) for t, e in pairs if math.isfinite(e) and e > 0]
    if len(usable) < 2:
        raise FitDataError(
            f"order fit needs >= 2 finite error points, got {len(usable)}"
        )
    lt = np.log([t for t, _ in usable])
    le = np.log([e for _, e in usable])
    coeffs = np.polyfit(lt, le, 1)
    fitted = np.polyval(coeffs, lt)
    residual = float(np.sqrt(np.mean((le - fitted) ** 2)))
    return float(coeffs[0]), residual


def _fit_scheme(scheme, rows):
    pairs = [
        (r.tau, r.error_rel) for r in rows if r.scheme == scheme and r.status == "ok"
    ]
    pairs.sort(key=lambda p: -p[0])  # descending tau
    try:
        slope, residual = estimate_order(pairs)
    except FitDataError:
        return SchemeFit(scheme=scheme)
    if residual > FIT_RESIDUAL_LIMIT and len(pairs) >= 4:
        refit_slope, refit_residual = estimate_order(pairs[2:])
        return SchemeFit(
            scheme=scheme,
            fitted_order=refit_slope,
            fit_residual=refit_residual,
            excluded_taus=(pairs[0][0], pairs[1][0]),
        )
    return SchemeFit(scheme=scheme, fitted_order=slope, fit_residual=residual)


def _worker_count():
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    return max(count, 1)


def _run_jobs(jobs, worker):
    n_workers = _worker_count()
    if n_workers == 1 or len(jobs) <= 1:
        return [worker(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(worker, jobs))


def _monotonicity_flags(rows, schemes):
    flags = []
    for scheme in schemes:
        ok = [r for r in rows if r.scheme == scheme and r.status == "ok"]
        ok.sort(key=lambda r: -r.tau)
        for a, b in zip(ok, ok[1:]):
            if b.error_rel > a.error_rel:
                flags.append(
                    f"{scheme.value}: error not monotone, "
                    f"tau={b.tau:g} error {b.error_rel:.3e} > "
                    f"tau={a.tau:g} error {a.error_rel:.3e}"
                )
    return flags


def run_convergence_study(cfg: StudyConfig) -> ConvergenceReport:
    """Rough data once, reference once, then every (scheme, tau) run.

    Diverged runs keep a row (status 'diverged', infinite error) but are
    excluded from slope fits.  Relative errors are measured in H^gamma_err
    against the ELRI2 reference at ref_tau, normalized by its norm.
    """
    start = time.perf_counter()
    u0 = generate_rough(RoughSpec(cfg.n_points, cfg.theta, cfg.seed))
    ref = reference_solution(
        u0, cfg.t_final, cfg.ref_tau, cross_check=cfg.cross_check,
        dealias=cfg.dealias,
    )
    ref_norm = sobolev_norm(ref, cfg.gamma_err)

    def one(job):
        scheme, tau = job
        run = SolverRun(
            scheme=scheme,
            tau=tau,
            t_final=cfg.t_final,
            initial=u0,
            dealias=cfg.dealias,
        )
        try:
            final = evolve(run).final
        except BlowUpError:
            return RunResult(scheme, tau, float("inf"), "diverged")
        diff = Field.from_spectrum(u0.grid, final.spectrum - ref.spectrum)
        return RunResult(scheme, tau, sobolev_norm(diff, cfg.gamma_err) / ref_norm, "ok")

    jobs = [(s, t) for s in cfg.schemes for t in cfg.taus]
    rows = _run_jobs(jobs, one)
    rows.sort(key=lambda r: (r.scheme.value, -r.tau))
    fits = [_fit_scheme(s, rows) for s in cfg.schemes]
    return ConvergenceReport(
        config=cfg,
        rows=rows,
        fits=fits,
        flags=_monotonicity_flags(rows, cfg.schemes),
        kind="convergence",
        wall_time_s=time.perf_counter() - start,
    )


def smooth_test_data(grid: Grid) -> Field:
    """The built-in smooth zero-mean profile cos(x) + sin(2x)/2."""
    return Field.from_values(grid, np.cos(grid.x) + 0.5 * np.sin(2.0 * grid.x))


def run_local_error_study(cfg: StudyConfig) -> ConvergenceReport:
    """One-step errors of each scheme on smooth data across the tau ladder.

    The one-step reference at each tau is the integrating-factor RK4 with
    64 substeps, cross-checked against an ELRI2 run with 256 substeps; a
    disagreement above 5% of the smallest scheme error is flagged.
    """
    start = time.perf_counter()
    grid = Grid(cfg.n_points)
    u0 = smooth_test_data(grid)
    flags = []
    rows = []

    def references(tau):
        ref_a = ifrk4_solve(u0, tau, tau / 64.0, dealias=cfg.dealias)
        ref_b = evolve(
            SolverRun(
                scheme=SchemeKind.ELRI2,
                tau=tau / 256.0,
                t_final=tau,
                initial=u0,
                dealias=cfg.dealias,
            )
        ).final
        return ref_a, ref_b

    ref_pairs = dict(zip(cfg.taus, _run_jobs(list(cfg.taus), references)))
    for tau in cfg.taus:
        ref, ref_check = ref_pairs[tau]
        ref_norm = sobolev_norm(ref, cfg.gamma_err)
        dual_gap = sobolev_norm(
            Field.from_spectrum(grid, ref.spectrum - ref_check.spectrum),
            cfg.gamma_err,
        )
        tau_errors = []
        for scheme in cfg.schemes:
            stepped = step_function(scheme)(u0, tau, dealias=cfg.dealias)
            diff = Field.from_spectrum(grid, stepped.spectrum - ref.spectrum)
            err = sobolev_norm(diff, cfg.gamma_err) / ref_norm
            tau_errors.append(err)
            rows.append(RunResult(scheme, tau, err, "ok"))
        smallest = min(tau_errors)
        if dual_gap / ref_norm > 0.05 * smallest:
            flags.append(
                f"tau={tau:g}: one-step references disagree by "
                f"{dual_gap / ref_norm:.3e} (>5% of smallest error {smallest:.3e})"
            )

    rows.sort(key=lambda r: (r.scheme.value, -r.tau))
    fits = [_fit_scheme(s, rows) for s in cfg.schemes]
    return ConvergenceReport(
        config=cfg,
        rows=rows,
        fits=fits,
        flags=flags,
        kind="local_error",
        wall_time_s=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# report serialization


def _g17(x) -> str:
    return format(float(x), ".17g")


def render_report_csv(report: ConvergenceReport) -> str:
    cfg = report.config
    lines = [CSV_HEADER]
    for r in report.rows:
        lines.append(
            ",".join(
                (
                    r.scheme.value,
                    _g17(r.tau),
                    _g17(r.error_rel),
                    _g17(cfg.gamma_err),
                    str(cfg.n_points),
                    _g17(cfg.theta),
                    str(cfg.seed),
                    _g17(cfg.t_final),
                    r.status,
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_report_csv(text: str):
    """Rows of a render_report_csv document as dicts (inverse of the writer)."""
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"bad report header: {lines[:1]!r}")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 9:
            raise ValueError(f"bad report row: {ln!r}")
        out.append(
            {
                "scheme": parts[0],
                "tau": float(parts[1]),
                "error_rel": float(parts[2]),
                "gamma": float(parts[3]),
                "n_points": int(parts[4]),
                "theta": float(parts[5]),
                "seed": int(parts[6]),
                "t_final": float(parts[7]),
                "status": parts[8],
            }
        )
    return out


def _json_token(value) -> str:
    # hand-rolled so floats serialize with 17 significant digits; stdlib
    # json offers no control over float formatting
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return "null"  # JSON has no inf/nan; divergence is in "status"
        return _g17(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_token(v) for v in value) + "]"
    if isinstance(value, dict):
        items = ", ".join(
            f"{json.dumps(str(k))}: {_json_token(v)}" for k, v in value.items()
        )
        return "{" + items + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def report_as_dict(report: ConvergenceReport) -> dict:
    cfg = report.config
    return {
        "kind": report.kind,
        "metadata": {
            "n_points": cfg.n_points,
            "theta": cfg.theta,
            "seed": cfg.seed,
            "gamma": cfg.gamma_err,
            "t_final": cfg.t_final,
            "ref_tau": cfg.ref_tau,
            "dealias": cfg.dealias,
            "wall_time_s": report.wall_time_s,
        },
        "rows": [
            {
                "scheme": r.scheme.value,
                "tau": r.tau,
                "error_rel": r.error_rel,
                "gamma": cfg.gamma_err,
                "n_points": cfg.n_points,
                "theta": cfg.theta,
                "seed": cfg.seed,
                "t_final": cfg.t_final,
                "status": r.status,
            }
            for r in report.rows
        ],
        "fits": [
            {
                "scheme": f.scheme.value,
                "fitted_order": f.fitted_order,
                "fit_residual": f.fit_residual,
                "excluded_taus": list(f.excluded_taus),
            }
            for f in report.fits
        ],
        "flags": list(report.flags),
    }


def render_report_json(report: ConvergenceReport) -> str:
    return _json_token(report_as_dict(report)) + "\n"


#: jsonschema document the JSON report validates against
REPORT_JSON_SCHEMA = {
    "type": "object",
    "required": ["kind", "metadata", "rows", "fits", "flags"],
    "properties": {
        "kind": {"enum": ["convergence", "local_error"]},
        "metadata": {
            "type": "object",
            "required": ["n_points", "theta", "seed", "gamma", "t_final", "ref_tau"],
            "properties": {
                "n_points": {"type": "integer", "minimum": 4},
                "theta": {"type": "number", "minimum": 0},
                "seed": {"type": "integer", "minimum": 0},
                "gamma": {"type": "number", "minimum": 0},
                "t_final": {"type": "number", "exclusiveMinimum": 0},
                "ref_tau": {"type": "number", "exclusiveMinimum": 0},
                "dealias": {"type": "boolean"},
                "wall_time_s": {"type": "number", "minimum": 0},
            },
        },
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "scheme",
                    "tau",
                    "error_rel",
                    "gamma",
                    "n_points",
                    "theta",
                    "seed",
                    "t_final",
                    "status",
                ],
                "properties": {
                    "scheme": {"enum": ["lri1", "elri1", "elri2"]},
                    "tau": {"type": "number", "exclusiveMinimum": 0},
                    "error_rel": {"type": ["number", "null"], "minimum": 0},
                    "gamma": {"type": "number", "minimum": 0},
                    "n_points": {"type": "integer"},
                    "theta": {"type": "number"},
                    "seed": {"type": "integer"},
                    "t_final": {"type": "number"},
                    "status": {"enum": ["ok", "diverged"]},
                },
            },
        },
        "fits": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["scheme", "fitted_order", "fit_residual", "excluded_taus"],
                "properties": {
                    "scheme": {"enum": ["lri1", "elri1", "elri2"]},
                    "fitted_order": {"type": ["number", "null"]},
                    "fit_residual": {"type": ["number", "null"]},
                    "excluded_taus": {"type": "array", "items": {"type": "number"}},
                },
            },
        },
        "flags": {"type": "array", "items": {"type": "string"}},
    },
}


def emit_report(report: ConvergenceReport, fmt: str, path) -> None:
    """Write the report as CSV or JSON; files always end with a newline."""
    if fmt == "csv":
        text = render_report_csv(report)
    elif fmt == "json":
        text = render_report_json(report)
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
