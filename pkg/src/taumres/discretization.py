"""Grünwald discretizations of Riemann-Liouville fractional diffusion.

Generates the first-order (shifted) and second-order (weighted-shifted)
Grünwald coefficient tables, assembles the time-stepping operators

    A = nu*I + sum_i ( v+_i W_i + v-_i W_i^T ),

evaluates the generating functions of the per-direction Toeplitz blocks,
and provides the closed-form bounds governing preconditioned MINRES
convergence.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .toeplitz import MultilevelOperator, Toeplitz1D

__all__ = [
    "FIRST_ORDER",
    "SECOND_ORDER",
    "FractionalParams",
    "GridSpec",
    "CoefficientTable",
    "ConvergenceBound",
    "grunwald_g",
    "weights_second",
    "weights_first",
    "build_L",
    "assemble_operator",
    "symbol_series",
    "symbol_closed",
    "epsilon_bound",
    "omega_bound",
]

FIRST_ORDER = "first_order"
SECOND_ORDER = "second_order"
_SCHEMES = (FIRST_ORDER, SECOND_ORDER)


def _check_alpha(alpha):
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"fractional order must lie in (1, 2), got {alpha}")


def _check_scheme(scheme):
    if scheme not in _SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {_SCHEMES}")


@dataclass(frozen=True)
class FractionalParams:
    """Orders and diffusion coefficients of the model problem.

    ``alpha[i]`` must lie strictly in (1, 2); the coefficients are
    nonnegative.  A direction with ``d_plus + d_minus == 0`` makes the
    spatial operator vanish there (allowed for degenerate identity-like
    operators; ``epsilon_bound`` rejects it).
    """

    alpha: tuple
    d_plus: tuple
    d_minus: tuple
    scheme: str = SECOND_ORDER

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "d_plus", tuple(float(v) for v in self.d_plus))
        object.__setattr__(self, "d_minus", tuple(float(v) for v in self.d_minus))
        if not (len(self.alpha) == len(self.d_plus) == len(self.d_minus)):
            raise ValueError("alpha, d_plus, d_minus must have equal length")
        for a in self.alpha:
            _check_alpha(a)
        if any(v < 0 for v in self.d_plus + self.d_minus):
            raise ValueError("diffusion coefficients must be nonnegative")
        _check_scheme(self.scheme)

    @property
    def d(self):
        return len(self.alpha)


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid of interior points on a hyper-rectangle."""

    a: tuple
    b: tuple
    n: tuple
    h: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        if not (len(self.a) == len(self.b) == len(self.n)):
            raise ValueError("a, b, n must have equal length")
        if any(bi <= ai for ai, bi in zip(self.a, self.b)):
            raise ValueError("domain endpoints must satisfy b > a")
        if any(ni < 1 for ni in self.n):
            raise ValueError("need at least one interior point per direction")
        h = tuple((bi - ai) / (ni + 1) for ai, bi, ni in zip(self.a, self.b, self.n))
        object.__setattr__(self, "h", h)

    @property
    def size(self):
        return int(np.prod(self.n))

    def axis_points(self, i):
        """Interior points a_i + j*h_i, j = 1..n_i."""
        return self.a[i] + self.h[i] * np.arange(1, self.n[i] + 1)


@dataclass(frozen=True)
class CoefficientTable:
    """Grünwald coefficients w_k (second order) or g~_k (first order)."""

    alpha: float
    scheme: str
    values: np.ndarray

    def __post_init__(self):
        _check_alpha(self.alpha)
        _check_scheme(self.scheme)
        v = np.asarray(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ConvergenceBound:
    """Spectral-interval data for the preconditioned symmetrized system."""

    epsilon_star: float
    omega: float
    kappa_lo: float = 0.5
    kappa_hi: float = 1.5


def grunwald_g(alpha, K):
    """Coefficients g_0..g_K with g_0 = 1, g_k = (1 - (alpha+1)/k) g_{k-1}.

    Equals the alternating binomial (-1)^k C(alpha, k).
    """
    _check_alpha(alpha)
    if K < 0:
        raise ValueError("K must be nonnegative")
    g = np.empty(K + 1)
    g[0] = 1.0
    for k in range(1, K + 1):
        g[k] = (1.0 - (alpha + 1.0) / k) * g[k - 1]
    return g


def weights_second(alpha, K):
    """Second-order weights w_0 = alpha/2, w_k = (alpha/2) g_k + ((2-alpha)/2) g_{k-1}."""
    g = grunwald_g(alpha, K)
    w = np.empty(K + 1)
    w[0] = 0.5 * alpha
    if K >= 1:
        w[1:] = 0.5 * alpha * g[1:] + 0.5 * (2.0 - alpha) * g[:-1]
    return CoefficientTable(alpha, SECOND_ORDER, w)


def weights_first(alpha, K):
    """First-order coefficients g~_k = (-1)^k C(alpha, k)."""
    return CoefficientTable(alpha, FIRST_ORDER, grunwald_g(alpha, K))


def _table(alpha, K, scheme):
    return weights_second(alpha, K) if scheme == SECOND_ORDER else weights_first(alpha, K)


def build_L(alpha, m, scheme=SECOND_ORDER):
    """Lower-Hessenberg Grünwald Toeplitz block of size m.

    First column -[c_1 .. c_m], first row -[c_1, c_0, 0, ...] where c is
    the scheme's coefficient table; the diagonal -c_1 is positive.
    """
    _check_scheme(scheme)
    if m < 1:
        raise ValueError(f"matrix size must be positive, got {m}")
    c = _table(alpha, m, scheme).values
    col = -c[1:m + 1]
    row = np.zeros(m)
    row[0] = -c[1]
    if m > 1:
        row[1] = -c[0]
    return Toeplitz1D(col, row)


def level_scales(params, grid):
    """Per-direction scalings (v+_i, v-_i) of the scheme."""
    half = 0.5 if params.scheme == SECOND_ORDER else 1.0
    out = []
    for i in range(params.d):
        s = half / grid.h[i] ** params.alpha[i]
        out.append((params.d_plus[i] * s, params.d_minus[i] * s))
    return out


def assemble_operator(params, grid, nu):
    """Assemble nu*I + sum_i (v+_i W_i + v-_i W_i^T) for the given scheme."""
    if len(grid.n) != params.d:
        raise ValueError(f"grid has {len(grid.n)} directions, params has {params.d}")
    levels = []
    for i, (vp, vm) in enumerate(level_scales(params, grid)):
        L = build_L(params.alpha[i], grid.n[i], params.scheme)
        levels.append((L, vp, vm))
    return MultilevelOperator(grid.n, nu, levels)


def symbol_series(table, theta, K):
    """Truncated generating-function series -sum_k c_{k+1} e^{i k theta}.

    The k = 0 term (-c_1, the diagonal) enters first; the single negative
    index k = -1 joins from K >= 1 onward together with k = 1..K.
    Requires table entries up to c_{K+1}.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    c = table.values
    if K + 2 > len(c):
        raise ValueError(f"K={K} needs {K + 2} table entries, table has {len(c)}")
    k = np.arange(1, K + 1)
    s = c[1] + np.sum(c[k + 1] * np.exp(1j * k * theta))
    if K >= 1:
        s += c[0] * np.exp(-1j * theta)
    return -s


def symbol_closed(alpha, theta, scheme=SECOND_ORDER):
    """Closed-form generating function of the Grünwald block.

    First order:  -e^{-i theta} (1 - e^{i theta})^alpha.
    Second order: -[(alpha/2) e^{-i theta} + (2-alpha)/2] (1 - e^{i theta})^alpha.
    Principal branch; the value at theta = 0 is 0 by continuity.  The
    formula is evaluated for any positive order (boundary sanity checks
    use alpha = 2); the (1, 2) restriction applies to the tables.
    """
    _check_scheme(scheme)
    if theta == 0.0:
        return 0.0 + 0.0j
    z = 1.0 - np.exp(1j * theta)
    zp = z ** alpha
    if scheme == FIRST_ORDER:
        return -np.exp(-1j * theta) * zp
    return -(0.5 * alpha * np.exp(-1j * theta) + 0.5 * (2.0 - alpha)) * zp


def epsilon_bound(params):
    """Closed-form essup bound max_i |d+_i - d-_i|/(d+_i + d-_i) |tan(alpha_i pi/2)|."""
    eps = 0.0
    for a, dp, dm in zip(params.alpha, params.d_plus, params.d_minus):
        denom = dp + dm
        if denom == 0.0:
            raise ValueError("epsilon bound undefined when d_plus + d_minus = 0 in a direction")
        eps = max(eps, abs(dp - dm) / denom * abs(math.tan(0.5 * a * math.pi)))
    return eps


def omega_bound(epsilon):
    """Contraction factor sqrt((2 + 3 eps) / (4 + 3 eps)) in (sqrt(1/2), 1)."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    return math.sqrt((2.0 + 3.0 * epsilon) / (4.0 + 3.0 * epsilon))


def convergence_bound(params):
    """Bundle epsilon* and omega for the given problem."""
    eps = epsilon_bound(params)
    return ConvergenceBound(epsilon_star=eps, omega=omega_bound(eps))
