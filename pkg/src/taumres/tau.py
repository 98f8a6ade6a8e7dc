"""Tau-algebra preconditioners diagonalized by the sine transform.

For a symmetric Toeplitz matrix T with first column t, the tau matrix is
tau(T) = T - H with H the Hankel correction whose first column is
(t_3, ..., t_m, 0, 0) and last column (0, 0, t_m, ..., t_3).  It is
diagonalized by the DST-I, tau(T) = S diag(q) S, with

    q_i = t_1 + 2 sum_{j>=2} t_j cos(pi*i*(j-1)/(m+1)).

The multilevel preconditioner is built from the tau approximations of
the symmetric parts of the per-direction Grünwald blocks and stored as
its eigenvalue vector in the multilevel sine basis, so applying the
inverse (or inverse square root) costs two multilevel DSTs.
"""

from dataclasses import dataclass, replace

import numpy as np

from .discretization import build_L, level_scales
from .transforms import dst1, dst1_multi

__all__ = ["Tau1D", "TauPreconditioner", "tau_dense", "tau_eigs", "tau_eigs_direct",
           "build_preconditioner"]


@dataclass(frozen=True)
class Tau1D:
    """Eigenvalues of a uni-level tau matrix in the sine basis."""

    m: int
    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.shape != (self.m,):
            raise ValueError(f"expected {self.m} eigenvalues, got shape {q.shape}")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)


def tau_dense(T):
    """Dense tau(T) = T - Hankel correction; requires symmetric T."""
    if not T.is_symmetric:
        raise ValueError("tau matrix is defined for symmetric Toeplitz input")
    m = T.m
    col = T.col
    out = T.dense()
    for j in range(m):
        for k in range(m):
            s = j + k
            if s <= m - 3:
                out[j, k] -= col[s + 2]
            elif s >= m + 1:
                out[j, k] -= col[2 * m - s]
    return out


def tau_eigs_direct(col):
    """Eigenvalues by the explicit cosine sum (O(m^2) reference)."""
    col = np.asarray(col, dtype=float)
    m = col.shape[0]
    if m < 1:
        raise ValueError("empty eigenvalue problem")
    i = np.arange(1, m + 1)
    j = np.arange(2, m + 1)
    if m == 1:
        return Tau1D(1, col.copy())
    q = col[0] + 2.0 * np.cos(np.pi * np.outer(i, j - 1) / (m + 1)) @ col[1:]
    return Tau1D(m, q)


def tau_eigs(col):
    """Eigenvalues via the DST first-column identity in O(m log m).

    q = diag(S e_1)^{-1} (S tau(T) e_1); the first column of tau(T) is
    t_j - t_{j+2}.
    """
    col = np.asarray(col, dtype=float)
    m = col.shape[0]
    if m < 1:
        raise ValueError("empty eigenvalue problem")
    u = col.copy()
    if m > 2:
        u[:m - 2] -= col[2:]
    e1 = np.zeros(m)
    e1[0] = 1.0
    return Tau1D(m, dst1(u) / dst1(e1))


class TauPreconditioner:
    """SPD multilevel tau preconditioner P = S diag(lam) S.

    ``lam`` is the full length-n eigenvalue vector in the multilevel
    sine basis (Kronecker sum of per-direction tau spectra plus nu).
    Immutable; all applications are pure.
    """

    def __init__(self, dims, lam, nu=0.0):
        self.dims = tuple(int(m) for m in dims)
        self.n = int(np.prod(self.dims))
        lam = np.asarray(lam, dtype=float)
        if lam.shape != (self.n,):
            raise ValueError(f"expected {self.n} eigenvalues, got shape {lam.shape}")
        if lam.min() <= 0.0:
            raise ValueError(f"preconditioner not positive definite: min eigenvalue {lam.min()}")
        lam = lam.copy()
        lam.setflags(write=False)
        self.lam = lam
        self.nu = float(nu)
        self._inv_sqrt = np.sqrt(1.0 / lam)

    def __repr__(self):
        return f"TauPreconditioner(dims={self.dims}, nu={self.nu})"

    def apply(self, x):
        """P @ x."""
        return dst1_multi(self.dims, self.lam * dst1_multi(self.dims, x))

    def apply_inverse(self, x):
        """P^{-1} @ x."""
        return dst1_multi(self.dims, dst1_multi(self.dims, x) / self.lam)

    def apply_inv_sqrt(self, x):
        """P^{-1/2} @ x; applying twice equals ``apply_inverse``."""
        return dst1_multi(self.dims, self._inv_sqrt * dst1_multi(self.dims, x))

    def materialize(self):
        """Dense P (oracle use)."""
        cols = np.empty((self.n, self.n))
        for j in range(self.n):
            e = np.zeros(self.n)
            e[j] = 1.0
            cols[:, j] = self.apply(e)
        return cols


def build_preconditioner(params, grid, nu, scheme=None):
    """Multilevel tau preconditioner for the symmetrized system.

    Per direction, q_i is the tau spectrum of the first column of the
    symmetric part of the Grünwald block; the eigenvalue vector is the
    Kronecker sum nu + sum_i (v+_i + v-_i) q_i.
    """
    if scheme is not None and scheme != params.scheme:
        params = replace(params, scheme=scheme)
    if len(grid.n) != params.d:
        raise ValueError(f"grid has {len(grid.n)} directions, params has {params.d}")
    if nu < 0:
        raise ValueError(f"nu must be nonnegative, got {nu}")
    lam = np.full(grid.n, float(nu))
    for i, (vp, vm) in enumerate(level_scales(params, grid)):
        if vp + vm == 0.0:
            continue
        L = build_L(params.alpha[i], grid.n[i], params.scheme)
        q = tau_eigs(L.symmetric_part().col).q
        shape = [1] * params.d
        shape[i] = grid.n[i]
        lam = lam + (vp + vm) * q.reshape(shape)
    return TauPreconditioner(grid.n, lam.reshape(-1), nu=nu)
