"""Preconditioned MINRES for symmetric indefinite systems.

Standard Lanczos-based MINRES in the inner product induced by an SPD
preconditioner inverse.  The recurrence tracks the preconditioned-norm
residual, which is what the convergence theory bounds; the true 2-norm
residual is recomputed at exit.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["MinresConfig", "MinresResult", "BreakdownError", "pminres", "bound_curve"]


class BreakdownError(RuntimeError):
    """Raised when the preconditioner is detected to be non-SPD."""


@dataclass(frozen=True)
class MinresConfig:
    tol: float = 1e-8
    maxit: int = 100
    x0: np.ndarray = None

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.maxit < 1:
            raise ValueError(f"maxit must be at least 1, got {self.maxit}")


@dataclass
class MinresResult:
    x: np.ndarray
    relres_history: list = field(default_factory=list)
    true_relres: float = 0.0
    iters: int = 0
    converged: bool = False


def _sample_symmetry(apply_a, n, rng, tol=1e-10, pairs=3):
    for _ in range(pairs):
        x = rng.standard_normal(n)
        y = rng.standard_normal(n)
        ax_y = float(apply_a(x) @ y)
        x_ay = float(x @ apply_a(y))
        scale = max(abs(ax_y), abs(x_ay), 1.0)
        if abs(ax_y - x_ay) > tol * scale:
            raise ValueError(f"operator not symmetric: <Ax,y>={ax_y} vs <x,Ay>={x_ay}")


def pminres(apply_a, apply_pinv, b, cfg=None, check_symmetry=False):
    """Solve A x = b, A symmetric, with SPD preconditioner inverse.

    ``apply_a`` and ``apply_pinv`` are callables mapping vectors to
    vectors; ``apply_pinv=None`` gives plain MINRES.  The iteration stops
    once the estimated preconditioned-norm relative residual drops below
    ``cfg.tol``; ``relres_history`` is nonincreasing by construction.
    """
    if cfg is None:
        cfg = MinresConfig()
    if apply_pinv is None:
        apply_pinv = lambda r: r
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    if check_symmetry:
        _sample_symmetry(apply_a, n, np.random.default_rng(0))

    bnorm = float(np.linalg.norm(b))
    if cfg.x0 is None:
        x = np.zeros(n)
        r = b.copy()
    else:
        x = np.array(cfg.x0, dtype=float)
        if x.shape != (n,):
            raise ValueError(f"x0 shape {x.shape} does not match rhs length {n}")
        r = b - apply_a(x)

    z = apply_pinv(r)
    g2 = float(z @ r)
    if g2 < 0.0:
        raise BreakdownError(f"<r, P^-1 r> = {g2} < 0: preconditioner is not SPD")
    gamma = math.sqrt(g2)
    if gamma == 0.0:
        if float(np.linalg.norm(r)) != 0.0:
            raise BreakdownError("<r, P^-1 r> = 0 for a nonzero residual: "
                                 "preconditioner is singular")
        # x0 already solves the system
        true_rel = 0.0 if bnorm == 0.0 else float(np.linalg.norm(b - apply_a(x))) / bnorm
        return MinresResult(x, [0.0], true_rel, 0, True)

    eta0 = gamma
    eta = gamma
    v_old = np.zeros(n)
    v = r
    gamma_old = 1.0
    c_old = c = 1.0
    s_old = s = 0.0
    w = np.zeros(n)
    w_old = np.zeros(n)
    history = []
    converged = False
    it = 0
    while it < cfg.maxit:
        it += 1
        zhat = z / gamma
        q = apply_a(zhat)
        delta = float(q @ zhat)
        v_new = q - (delta / gamma) * v - (gamma / gamma_old) * v_old
        z_new = apply_pinv(v_new)
        g2 = float(z_new @ v_new)
        vnorm2 = float(v_new @ v_new)
        if g2 < -1e-13 * max(vnorm2, 1.0):
            raise BreakdownError(f"<v, P^-1 v> = {g2} < 0: preconditioner is not SPD")
        gamma_new = math.sqrt(max(g2, 0.0))

        a0 = c * delta - c_old * s * gamma
        a1 = math.hypot(a0, gamma_new)
        if a1 == 0.0:
            # stagnation (A singular on the Krylov space); no progress possible
            it -= 1
            break
        a2 = s * delta + c_old * c * gamma
        a3 = s_old * gamma
        c_old, s_old = c, s
        c = a0 / a1
        s = gamma_new / a1
        w_new = (zhat - a3 * w_old - a2 * w) / a1
        x = x + (c * eta) * w_new
        eta = -s * eta

        history.append(abs(eta) / eta0)
        if history[-1] <= cfg.tol:
            converged = True
            break
        if gamma_new == 0.0:
            # Krylov space exhausted: residual cannot decrease further
            break
        v_old, v = v, v_new
        z = z_new
        gamma_old, gamma = gamma, gamma_new
        w_old, w = w, w_new

    true_rel = float(np.linalg.norm(b - apply_a(x))) / bnorm if bnorm > 0 else 0.0
    return MinresResult(x, history, true_rel, it, converged)


def bound_curve(epsilon, k_max):
    """Residual bound 2 rho^floor(k/2), rho = (kappa-1)/(kappa+1), kappa = 3(1+eps).

    The preconditioned-norm relative residual of MINRES on a system whose
    eigenvalues fill +-(1/2, (3/2)(1+eps)) obeys this curve; entry k of
    the returned vector is the bound after k iterations, k = 0..k_max.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    kappa = 3.0 * (1.0 + epsilon)
    rho = (kappa - 1.0) / (kappa + 1.0)
    k = np.arange(k_max + 1)
    return 2.0 * rho ** (k // 2)
