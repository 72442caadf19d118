"""Hyperparameter tuning, benchmark sweeps and report files."""

import csv
import json
import math
import statistics
import time
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .core.grid import make_collocation_grid
from .core.kernels import KernelConfig
from .core.optimize import nelder_mead_minimize
from .errors import DesolveError, InvalidArgumentError, TuningFailure
from .problems import LINEAR_1ST, LINEAR_2ND, LINEAR_PDE, NONLINEAR_1ST, get_problem
from .report import CSV_COLUMNS, ErrorReport, exact_values, failed_report, test_points
from .svm import csvm, lssvm
from .svm.dual import UNIFORM, tensor_training_points, training_grid
from .tfc import solver as tfc

METHODS = ("tfc", "lssvm", "csvm")
VARIANTS = {"linear": (LINEAR_1ST, LINEAR_2ND), "nonlinear": (NONLINEAR_1ST,),
            "pde": (LINEAR_PDE,)}
TUNING_MODES = ("auto", "grid", "simplex", "fixed")
ODE_POINT_COUNTS = (8, 16, 32, 50, 100)
PDE_POINT_COUNTS = (9, 16, 36, 64, 100)

M_GRID = tuple(range(5, 41))
SIGMA_GRID = tuple(np.logspace(-2, 1, 13))
GAMMA_GRID = tuple(np.logspace(5, 20, 16))
SIMPLEX_GAMMA = 1e10
SIMPLEX_START = 0.4
TIMING_REPEATS = 5


@dataclass(frozen=True)
class Hyperparameters:
    m: int = None
    sigma: float = None
    gamma: float = None
    score: float = math.nan

    def as_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass(frozen=True)
class RunSpec:
    """One benchmark sweep: a problem, a method and a list of point counts.

    ``method`` is ``tfc``, ``lssvm`` or ``csvm``, optionally suffixed with the
    solver variant (``-linear``, ``-nonlinear``, ``-pde``), which must then
    match the problem. ``tuning="auto"`` follows the published protocol:
    grid search, except a simplex over sigma for the kernel methods on the
    nonlinear problem. ``fixed`` uses ``m`` or ``sigma``/``gamma``.
    ``test_points`` is a count on the interval, or points per axis in 2-D.
    """

    problem_id: str
    method: str
    point_counts: tuple = None
    tuning: str = "auto"
    seed: int = 0
    test_points: int = None
    m: int = None
    sigma: float = None
    gamma: float = None

    def __post_init__(self):
        problem = get_problem(self.problem_id)
        object.__setattr__(self, "problem_id", problem.id)
        base = method_family(self.method, problem)
        if self.point_counts is None:
            counts = PDE_POINT_COUNTS if problem.is_pde else ODE_POINT_COUNTS
        else:
            counts = tuple(self.point_counts)
        if not counts:
            raise InvalidArgumentError("point_counts must not be empty")
        for n in counts:
            if isinstance(n, bool) or int(n) != n or n < 1:
                raise InvalidArgumentError(f"point counts must be positive integers, got {n}")
        object.__setattr__(self, "point_counts", tuple(int(n) for n in counts))
        if self.tuning not in TUNING_MODES:
            raise InvalidArgumentError(f"tuning must be one of {TUNING_MODES}")
        if self.tuning == "fixed":
            fixed_hyperparameters(base, self)
        if self.tuning == "simplex" and base == "tfc":
            raise InvalidArgumentError("simplex tuning applies to kernel methods only")
        if self.test_points is not None and (int(self.test_points) != self.test_points
                                             or self.test_points < 2):
            raise InvalidArgumentError("test_points must be an integer >= 2")

    @property
    def problem(self):
        return get_problem(self.problem_id)

    @property
    def family(self):
        return method_family(self.method, self.problem)

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise InvalidArgumentError(f"unknown spec keys: {unknown}")
        if "problem_id" not in data or "method" not in data:
            raise InvalidArgumentError("spec needs problem_id and method")
        return cls(**data)


def method_family(method, problem):
    """Base method name after checking any variant suffix against the problem."""
    if not isinstance(method, str):
        raise InvalidArgumentError(f"method must be a string, got {method!r}")
    base, _, variant = method.lower().partition("-")
    if base not in METHODS:
        raise InvalidArgumentError(f"unknown method {method!r}; expected one of {METHODS}")
    if variant:
        if variant not in VARIANTS:
            raise InvalidArgumentError(f"unknown solver variant {variant!r}")
        if problem.kind not in VARIANTS[variant]:
            raise InvalidArgumentError(
                f"{method} does not apply to {problem.id} ({problem.kind})")
    return base


def fixed_hyperparameters(family, spec):
    if family == "tfc":
        if spec.m is None:
            raise InvalidArgumentError("fixed tuning for tfc needs m")
        return Hyperparameters(m=int(spec.m))
    if spec.sigma is None or spec.gamma is None:
        raise InvalidArgumentError(f"fixed tuning for {family} needs sigma and gamma")
    KernelConfig(spec.sigma, spec.gamma)
    return Hyperparameters(sigma=float(spec.sigma), gamma=float(spec.gamma))


def solve(problem, family, n, hp, n_test=None):
    """Run the solver matching ``family`` and the problem kind."""
    kind = problem.kind
    if family == "tfc":
        if kind == NONLINEAR_1ST:
            return tfc.solve_nonlinear_ode_tfc(problem, n, hp.m, n_test=n_test)
        if kind == LINEAR_PDE:
            return tfc.solve_linear_pde_tfc(problem, n, hp.m, n_test=n_test)
        return tfc.solve_linear_ode_tfc(problem, n, hp.m, n_test=n_test)
    cfg = KernelConfig(hp.sigma, hp.gamma)
    mod = lssvm if family == "lssvm" else csvm
    if kind == NONLINEAR_1ST:
        fn = mod.solve_nonlinear_ode_lssvm if family == "lssvm" else mod.solve_nonlinear_ode_csvm
    elif kind == LINEAR_PDE:
        fn = mod.solve_linear_pde_lssvm if family == "lssvm" else mod.solve_pde_csvm
    else:
        fn = mod.solve_linear_ode_lssvm if family == "lssvm" else mod.solve_linear_ode_csvm
    return fn(problem, n, cfg, n_test=n_test)


def validation_points(problem, family, n):
    """Midpoints between neighbouring training points (cell centres in 2-D)."""
    if problem.is_pde:
        side = tfc.pde_side(n)
        if family == "tfc":
            pts, _ = tfc.pde_collocation_points(problem, n)
            gx = np.unique(pts[:, 0])
            gy = np.unique(pts[:, 1])
        else:
            inner, edge = tensor_training_points(problem.domain, side, UNIFORM)
            allp = np.vstack([inner, edge])
            gx, gy = np.unique(allp[:, 0]), np.unique(allp[:, 1])
        mx, my = 0.5 * (gx[1:] + gx[:-1]), 0.5 * (gy[1:] + gy[:-1])
        X, Y = np.meshgrid(mx, my, indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])
    if family == "tfc":
        t = np.asarray(make_collocation_grid(n, problem.t0, problem.tf).t_points)
    else:
        t = training_grid(problem.t0, problem.tf, n, UNIFORM)
    return np.clip(0.5 * (t[1:] + t[:-1]), problem.t0, problem.tf)


def de_residual_norm(problem, sol, pts):
    """2-norm of the DE residual of a solution at ``pts``."""
    if problem.is_pde:
        lap = sol(pts, (2, 0)) + sol(pts, (0, 2))
        res = lap - problem.rhs(pts[:, 0], pts[:, 1])
    else:
        y, dy = sol(pts, 0), sol(pts, 1)
        d2y = sol(pts, 2) if problem.order == 2 else None
        res = problem.de_residual(pts, y, dy, d2y)
    return float(np.linalg.norm(res))


def validation_mse(problem, sol, pts):
    return float(np.mean((exact_values(problem, pts) - sol(pts)) ** 2))


def _score(fn):
    """Run a candidate; failures and non-finite values score +inf."""
    try:
        with np.errstate(all="ignore"), warnings.catch_warnings():
            warnings.simplefilter("ignore")
            value = fn()
    except (DesolveError, ArithmeticError, ValueError, np.linalg.LinAlgError):
        return math.inf
    return value if np.isfinite(value) else math.inf


def tune_hyperparameters(problem, method, n, spec=None, m_grid=M_GRID, sigma_grid=SIGMA_GRID,
                         gamma_grid=GAMMA_GRID):
    """Pick hyperparameters for one point count.

    TFC: m minimizing the DE residual at validation midpoints. Kernel
    methods: (sigma, gamma) minimizing validation MSE over the grid, or for
    the simplex mode sigma alone with gamma = 1e10 from sigma = 0.4. Ties go
    to the smaller sigma, then gamma, then m (candidates are scanned in
    increasing order and only a strictly better score replaces the best).
    """
    family = method_family(method, problem)
    mode = "auto" if spec is None else spec.tuning
    if mode == "fixed":
        return fixed_hyperparameters(family, spec)
    n_test = None if spec is None else spec.test_points
    val = validation_points(problem, family, n)
    best, best_score = None, math.inf
    if family == "tfc":
        if mode == "simplex":
            raise InvalidArgumentError("simplex tuning applies to kernel methods only")
        for m in sorted(m_grid):
            hp = Hyperparameters(m=int(m))
            s = _score(lambda: de_residual_norm(problem, solve(problem, family, n, hp,
                                                               n_test=n_test)[0], val))
            if s < best_score:
                best, best_score = hp, s
    elif mode == "simplex" or (mode == "auto" and problem.kind == NONLINEAR_1ST):
        def objective(x):
            sigma = float(x[0])
            if not sigma > 0:
                return math.inf
            hp = Hyperparameters(sigma=sigma, gamma=SIMPLEX_GAMMA)
            return _score(lambda: validation_mse(problem, solve(problem, family, n, hp,
                                                               n_test=n_test)[0], val))
        if np.isfinite(objective([SIMPLEX_START])):
            x, f = nelder_mead_minimize(objective, [SIMPLEX_START])
            if np.isfinite(f):
                best, best_score = Hyperparameters(sigma=float(x[0]), gamma=SIMPLEX_GAMMA), f
    else:
        for sigma in sorted(sigma_grid):
            for gamma in sorted(gamma_grid):
                hp = Hyperparameters(sigma=float(sigma), gamma=float(gamma))
                s = _score(lambda: validation_mse(problem, solve(problem, family, n, hp,
                                                                 n_test=n_test)[0], val))
                if s < best_score:
                    best, best_score = hp, s
    if best is None:
        raise TuningFailure(f"no finite candidate for {problem.id}/{family} at N={n}")
    return Hyperparameters(best.m, best.sigma, best.gamma, best_score)


def run_benchmark(spec, on_solution=None, repeats=TIMING_REPEATS):
    """Tune, solve and score every point count of ``spec``.

    The solve is repeated ``repeats`` times and the median wall-clock time is
    reported. A failing row is recorded with ``converged=False`` and the
    sweep goes on. ``on_solution(report, solution)`` is called for each
    successful row (used to write error curves).
    """
    problem, family = spec.problem, spec.family
    reports = []
    for n in spec.point_counts:
        hp = Hyperparameters()
        try:
            hp = tune_hyperparameters(problem, spec.method, n, spec)
            times = []
            for _ in range(max(1, int(repeats))):
                start = time.perf_counter()
                sol, report = solve(problem, family, n, hp, n_test=spec.test_points)
                times.append(time.perf_counter() - start)
            report = report.with_time(statistics.median(times))
        except (DesolveError, ArithmeticError, ValueError, np.linalg.LinAlgError):
            reports.append(failed_report(problem.id, family, n, hp.m, hp.sigma, hp.gamma))
            continue
        reports.append(report)
        if on_solution is not None:
            on_solution(report, sol)
    return reports


def error_curve(problem, sol, n_test=None):
    """Test points with the absolute error of ``sol`` at each of them."""
    pts = test_points(problem, n_test)
    err = np.abs(exact_values(problem, pts) - sol(pts))
    return np.column_stack([pts, err])


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(reports, fmt, path):
    """Write reports as CSV (fixed header) or as a JSON array of flat records."""
    reports = list(reports)
    if not reports:
        raise InvalidArgumentError("no reports to write")
    if fmt not in ("csv", "json"):
        raise InvalidArgumentError(f"unknown format {fmt!r}")
    path = Path(path)
    if fmt == "json":
        records = [_json_record(r) for r in reports]
        path.write_text(json.dumps(records, indent=1) + "\n")
        return path
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in reports:
            rec = r.as_record()
            writer.writerow([_fmt(rec[c]) for c in CSV_COLUMNS])
    return path


def _json_record(report):
    rec = report.as_record()
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v)
            for k, v in rec.items()}


_INT_COLUMNS = ("n_train", "hp_m")
_STR_COLUMNS = ("problem", "method")


def _parse_value(name, text):
    if name in _STR_COLUMNS:
        return text
    if text == "" or text is None:
        return math.nan if name not in ("hp_m", "hp_sigma", "hp_gamma") else None
    if name == "converged":
        if text in ("true", "false"):
            return text == "true"
        raise InvalidArgumentError(f"bad converged flag {text!r}")
    if name in _INT_COLUMNS:
        return int(text)
    return float(text)


def read_report(path, fmt=None):
    """Parse a file written by :func:`emit_report` back into ErrorReports."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    if fmt == "json":
        out = []
        for rec in json.loads(path.read_text()):
            vals = {k: (math.nan if v is None and k not in ("hp_m", "hp_sigma", "hp_gamma")
                        else v) for k, v in rec.items()}
            out.append(ErrorReport.from_record(vals))
        return out
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise InvalidArgumentError(f"unexpected CSV header {header}")
        return [ErrorReport.from_record({h: _parse_value(h, v) for h, v in zip(header, row)})
                for row in reader]


def emit_curves(curves, directory):
    """Write ``{(problem, method, n): array}`` as one CSV per run."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for (pid, method, n), data in sorted(curves.items()):
        path = directory / f"{pid}_{method}_{n}.csv"
        header = "x,y,abs_error" if data.shape[1] == 3 else "t,abs_error"
        lines = [header] + [",".join(repr(float(v)) for v in row) for row in data]
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written
