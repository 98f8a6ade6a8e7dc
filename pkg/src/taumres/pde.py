"""Time stepping for the fractional diffusion model problem.

Each step solves the symmetrized system Y A u = Y b by preconditioned
MINRES.  Two benchmark setups are provided: a first-order (backward
Euler + shifted Grünwald) problem with a smooth source on the unit
square, and a second-order (Crank-Nicolson + weighted-shifted Grünwald)
problem on (0,2)^2 with a known exact solution.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .discretization import (FIRST_ORDER, SECOND_ORDER, FractionalParams, GridSpec,
                             assemble_operator)
from .krylov import MinresConfig, pminres
from .tau import build_preconditioner
from .toeplitz import flip

__all__ = ["FractionalProblem", "StepReport", "sample_grid",
           "step_second_order", "step_first_order",
           "example1_problem", "example2_problem",
           "run_example1", "run_example2", "run_steps", "ALPHA_PAIRS"]

ALPHA_PAIRS = tuple((a1, a2) for a1 in (1.1, 1.5, 1.9) for a2 in (1.1, 1.5, 1.9))


@dataclass(frozen=True)
class FractionalProblem:
    """Model problem data: grid, coefficients, time grid and samplers.

    ``source``/``exact`` are called as f(x1, ..., xd, t) on broadcast
    coordinate arrays; ``u0`` as u0(x1, ..., xd).
    """

    grid: GridSpec
    params: FractionalParams
    T: float
    M: int
    source: callable
    u0: callable
    exact: callable = None

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"need at least one time step, got M={self.M}")
        if self.T <= 0:
            raise ValueError(f"final time must be positive, got {self.T}")

    @property
    def tau_step(self):
        return self.T / self.M

    @property
    def nu(self):
        return self.M / self.T


@dataclass
class StepReport:
    step: int
    iters: int
    converged: bool
    relres: float
    err_inf: float = None


def sample_grid(grid, fn, t=None):
    """Sample fn on the interior tensor grid, lexicographic order.

    Dirichlet boundary points are excluded; fn receives broadcastable
    coordinate arrays (and t when given) and is evaluated vectorized.
    """
    coords = np.meshgrid(*(grid.axis_points(i) for i in range(len(grid.n))),
                         indexing="ij", sparse=True)
    vals = fn(*coords) if t is None else fn(*coords, t)
    return np.broadcast_to(np.asarray(vals, dtype=float), grid.n).reshape(grid.size).copy()


def _solve_symmetrized(A, P, b, cfg):
    pinv = P.apply_inverse if P is not None else None
    return pminres(A.apply_symmetrized, pinv, flip(A.dims, b), cfg)


def _err_inf(problem, u, t):
    if problem.exact is None:
        return None
    return float(np.max(np.abs(u - sample_grid(problem.grid, problem.exact, t))))


def step_second_order(problem, A, P, u_k, t_k, cfg=None):
    """One Crank-Nicolson step from t_k: (nu I + B) u^{k+1} = (nu I - B) u^k + f^{k+1/2}.

    The right-hand side reuses A through (nu I - B) = 2 nu I - A; the
    source is sampled at the midpoint t_k + tau/2.  Returns the next
    iterate and a report (error measured at t_k + tau when an exact
    solution is available).
    """
    if problem.params.scheme != SECOND_ORDER:
        raise ValueError("step_second_order requires second-order params")
    nu = problem.nu
    tau = problem.tau_step
    b = 2.0 * nu * u_k - A.apply(u_k) + sample_grid(problem.grid, problem.source, t_k + 0.5 * tau)
    res = _solve_symmetrized(A, P, b, cfg or MinresConfig())
    k_next = int(round((t_k + tau) / tau))
    report = StepReport(k_next, res.iters, res.converged,
                        res.relres_history[-1] if res.relres_history else 0.0,
                        _err_inf(problem, res.x, t_k + tau))
    return res.x, report


def step_first_order(problem, A, P, u_prev, t_k, cfg=None):
    """One backward Euler step onto t_k: A u^k = nu u^{k-1} + f^k."""
    if problem.params.scheme != FIRST_ORDER:
        raise ValueError("step_first_order requires first-order params")
    b = problem.nu * u_prev + sample_grid(problem.grid, problem.source, t_k)
    res = _solve_symmetrized(A, P, b, cfg or MinresConfig())
    k = int(round(t_k / problem.tau_step))
    report = StepReport(k, res.iters, res.converged,
                        res.relres_history[-1] if res.relres_history else 0.0,
                        _err_inf(problem, res.x, t_k))
    return res.x, report


def run_steps(problem, num_steps=None, preconditioner="tau", cfg=None):
    """March the scheme from u0; returns the final iterate and reports."""
    num_steps = problem.M if num_steps is None else num_steps
    A = assemble_operator(problem.params, problem.grid, problem.nu)
    P = build_preconditioner(problem.params, problem.grid, problem.nu) \
        if preconditioner == "tau" else None
    u = sample_grid(problem.grid, problem.u0)
    tau = problem.tau_step
    reports = []
    for k in range(num_steps):
        if problem.params.scheme == SECOND_ORDER:
            u, rep = step_second_order(problem, A, P, u, k * tau, cfg)
        else:
            u, rep = step_first_order(problem, A, P, u, (k + 1) * tau, cfg)
        reports.append(rep)
    return u, reports


# ---------------------------------------------------------------------------
# Experiment setups

EXAMPLE1_COEFFS = ((2.0, 0.5), (0.3, 1.0))
EXAMPLE2_COEFFS = ((3.0, 1.0), (2.0, 1.0))


def _example1_source(x1, x2, t):
    return 100.0 * np.sin(10.0 * x1) * np.cos(x2) + np.sin(10.0 * t) * x1 * x2


def example1_problem(n1, alphas):
    """First-order problem on (0,1)^2, zero initial data, tau = 1/ceil(n1^alpha1)."""
    params = FractionalParams(alphas,
                              [d[0] for d in EXAMPLE1_COEFFS],
                              [d[1] for d in EXAMPLE1_COEFFS], FIRST_ORDER)
    grid = GridSpec((0.0, 0.0), (1.0, 1.0), (n1, n1))
    M = int(math.ceil(n1 ** alphas[0]))
    return FractionalProblem(grid, params, 1.0, M, _example1_source,
                             lambda x1, x2: np.zeros(np.broadcast_shapes(np.shape(x1), np.shape(x2))))


def example2_exact(x1, x2, t):
    return math.exp(t) * x1 ** 2 * (2.0 - x1) ** 2 * x2 ** 2 * (2.0 - x2) ** 2


def _example2_source(alphas):
    (d1p, d1m), (d2p, d2m) = EXAMPLE2_COEFFS
    a1, a2 = alphas

    def source(x1, x2, t):
        phi1 = x1 ** 2 * (2.0 - x1) ** 2
        phi2 = x2 ** 2 * (2.0 - x2) ** 2
        s1 = 0.0
        s2 = 0.0
        for i in range(2, 5):
            c = math.comb(2, i - 2) * 2 ** (4 - i) * math.factorial(i) / (-1.0) ** (i - 2)
            s1 = s1 + c * (d1p * x1 ** (i - a1) + d1m * (2.0 - x1) ** (i - a1)) / math.gamma(i + 1 - a1)
            s2 = s2 + c * (d2p * x2 ** (i - a2) + d2m * (2.0 - x2) ** (i - a2)) / math.gamma(i + 1 - a2)
        return math.exp(t) * (phi1 * phi2 - phi2 * s1 - phi1 * s2)

    return source


def example2_problem(n1, alphas):
    """Second-order problem on (0,2)^2 with exact solution, tau = T/(n1+1)."""
    params = FractionalParams(alphas,
                              [d[0] for d in EXAMPLE2_COEFFS],
                              [d[1] for d in EXAMPLE2_COEFFS], SECOND_ORDER)
    grid = GridSpec((0.0, 0.0), (2.0, 2.0), (n1, n1))
    return FractionalProblem(grid, params, 1.0, n1 + 1, _example2_source(alphas),
                             lambda x1, x2: example2_exact(x1, x2, 0.0), example2_exact)


def _experiment_x0(n):
    return np.ones(n) / math.sqrt(n)


def _first_step_row(problem, preconditioner, tol, maxit):
    A = assemble_operator(problem.params, problem.grid, problem.nu)
    P = build_preconditioner(problem.params, problem.grid, problem.nu) \
        if preconditioner == "tau" else None
    u0 = sample_grid(problem.grid, problem.u0)
    cfg = MinresConfig(tol=tol, maxit=maxit, x0=_experiment_x0(problem.grid.size))
    t0 = time.perf_counter()
    if problem.params.scheme == SECOND_ORDER:
        _, rep = step_second_order(problem, A, P, u0, 0.0, cfg)
    else:
        _, rep = step_first_order(problem, A, P, u0, problem.tau_step, cfg)
    wall = time.perf_counter() - t0
    return {
        "alpha1": problem.params.alpha[0],
        "alpha2": problem.params.alpha[1],
        "n": problem.grid.size,
        "preconditioner": preconditioner,
        "iters": rep.iters,
        "converged": rep.converged,
        "relres": rep.relres,
        "err_inf": rep.err_inf,
        "wall_seconds": wall,
    }


def run_example1(n1, alphas=ALPHA_PAIRS, preconditioners=("tau", "identity"),
                 tol=1e-8, maxit=100):
    """First-step benchmark rows for the first-order problem."""
    rows = []
    for pair in alphas:
        problem = example1_problem(n1, pair)
        for pc in preconditioners:
            rows.append(_first_step_row(problem, pc, tol, maxit))
    return rows


def run_example2(n1, alphas=ALPHA_PAIRS, preconditioners=("tau",),
                 tol=1e-8, maxit=100):
    """First-step benchmark rows (iterations and error) for the second-order problem."""
    rows = []
    for pair in alphas:
        problem = example2_problem(n1, pair)
        for pc in preconditioners:
            rows.append(_first_step_row(problem, pc, tol, maxit))
    return rows
