"""Uni-level and multilevel Toeplitz operators with FFT matvecs.

A ``Toeplitz1D`` stores first column and first row; products use a
circulant embedding padded to a power of two.  ``MultilevelOperator``
represents the Kronecker-sum form

    nu*I + sum_i ( v_plus[i] * W_i + v_minus[i] * W_i^T ),
    W_i = I (x) L_i (x) I,

applied axis by axis on the lexicographically ordered vector.  Dense
materialization is provided as a desk-scale oracle.
"""

import numpy as np

__all__ = ["Toeplitz1D", "MultilevelOperator", "flip"]

MATERIALIZE_CAP = 4096


def _next_pow2(n):
    return 1 << (int(n) - 1).bit_length() if n > 1 else 1


class Toeplitz1D:
    """Toeplitz matrix stored by first column and first row.

    Entry (j, k) is ``col[j-k]`` for j >= k and ``row[k-j]`` otherwise.
    ``row`` defaults to ``col`` (symmetric matrix).
    """

    def __init__(self, col, row=None):
        col = np.array(col, dtype=float)
        row = col if row is None else np.array(row, dtype=float)
        if col.ndim != 1 or row.shape != col.shape:
            raise ValueError("col and row must be equal-length vectors")
        if col.shape[0] < 1:
            raise ValueError("empty Toeplitz matrix")
        if col[0] != row[0]:
            raise ValueError(f"col[0]={col[0]} and row[0]={row[0]} must agree")
        col.setflags(write=False)
        row.setflags(write=False)
        self.col = col
        self.row = row
        self.m = col.shape[0]
        self._kernel_fft = None
        self._pad = None
        self._transpose = None

    def __repr__(self):
        return f"Toeplitz1D(m={self.m})"

    @property
    def is_symmetric(self):
        return self.row is self.col or np.array_equal(self.col, self.row)

    def transpose(self):
        if self._transpose is None:
            t = Toeplitz1D(self.row, self.col)
            t._transpose = self
            self._transpose = t
        return self._transpose

    def symmetric_part(self):
        half = 0.5 * (self.col + self.row)
        return Toeplitz1D(half)

    def _embedding(self):
        # circulant kernel of power-of-two length >= 2m-1
        if self._kernel_fft is None:
            L = _next_pow2(2 * self.m - 1)
            c = np.zeros(L)
            c[:self.m] = self.col
            if self.m > 1:
                c[L - self.m + 1:] = self.row[1:][::-1]
            self._pad = L
            self._kernel_fft = np.fft.rfft(c)
        return self._pad, self._kernel_fft

    def matvec(self, x):
        """T @ x in O(m log m) via the circulant embedding."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.m:
            raise ValueError(f"expected trailing dimension {self.m}, got shape {x.shape}")
        L, chat = self._embedding()
        y = np.fft.rfft(x, n=L, axis=-1)
        y *= chat
        return np.fft.irfft(y, n=L, axis=-1)[..., :self.m]

    def matvec_transpose(self, x):
        return self.transpose().matvec(x)

    def dense(self):
        idx = np.subtract.outer(np.arange(self.m), np.arange(self.m))
        return np.where(idx >= 0, self.col[np.abs(idx)], self.row[np.abs(idx)])


def flip(dims, x):
    """Apply the multilevel anti-identity Y = Y_{n1} (x) ... (x) Y_{nd}.

    Under lexicographic ordering the Kronecker product of per-axis
    reversals is the full reversal of the flat vector.
    """
    n = int(np.prod([int(m) for m in dims]))
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"expected vector of length {n} for dims {tuple(dims)}, got shape {x.shape}")
    return x[::-1].copy()


def _axis_matvec(T, X, axis):
    Xm = np.moveaxis(X, axis, -1)
    return np.moveaxis(T.matvec(Xm), -1, axis)


class MultilevelOperator:
    """Kronecker-sum operator ``nu*I + sum_i (v+_i W_i + v-_i W_i^T)``.

    ``levels`` is a sequence of ``(Toeplitz1D, v_plus, v_minus)`` with one
    entry per dimension; level i acts along axis i of the reshaped
    vector.  Immutable after construction; ``apply`` is pure.
    """

    def __init__(self, dims, nu, levels):
        dims = tuple(int(m) for m in dims)
        levels = list(levels)
        if len(levels) != len(dims):
            raise ValueError(f"{len(dims)} dims but {len(levels)} levels")
        for m, (T, vp, vm) in zip(dims, levels):
            if T.m != m:
                raise ValueError(f"level size {T.m} does not match dim {m}")
            if vp < 0 or vm < 0:
                raise ValueError("level coefficients must be nonnegative")
        if nu < 0:
            raise ValueError(f"nu must be nonnegative, got {nu}")
        self.dims = dims
        self.n = int(np.prod(dims))
        self.nu = float(nu)
        self.levels = [(T, float(vp), float(vm)) for T, vp, vm in levels]

    def __repr__(self):
        return f"MultilevelOperator(dims={self.dims}, nu={self.nu})"

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got shape {x.shape}")
        return x

    def _apply(self, x, transpose):
        X = self._check(x).reshape(self.dims)
        out = self.nu * X
        for axis, (T, vp, vm) in enumerate(self.levels):
            if transpose:
                vp, vm = vm, vp
            if vp != 0.0:
                out += vp * _axis_matvec(T, X, axis)
            if vm != 0.0:
                out += vm * _axis_matvec(T.transpose(), X, axis)
        return out.reshape(self.n)

    def apply(self, x):
        """A @ x."""
        return self._apply(x, transpose=False)

    def apply_transpose(self, x):
        """A.T @ x (roles of W_i and W_i^T swapped)."""
        return self._apply(x, transpose=True)

    def apply_symmetric_part(self, x):
        """H(A) @ x with H(A) = (A + A.T)/2."""
        X = self._check(x).reshape(self.dims)
        out = self.nu * X
        for axis, (T, vp, vm) in enumerate(self.levels):
            w = 0.5 * (vp + vm)
            if w != 0.0:
                out += w * _axis_matvec(T, X, axis)
                out += w * _axis_matvec(T.transpose(), X, axis)
        return out.reshape(self.n)

    def apply_symmetrized(self, x):
        """(Y A) @ x; the induced dense matrix is symmetric."""
        return self.apply(x)[::-1].copy()

    def symmetric_part(self):
        """H(A) as a MultilevelOperator."""
        levels = [(T.symmetric_part(), 0.5 * (vp + vm), 0.5 * (vp + vm))
                  for T, vp, vm in self.levels]
        return MultilevelOperator(self.dims, self.nu, levels)

    def materialize(self, cap=MATERIALIZE_CAP):
        """Dense n x n assembly (oracle use; refuses n > cap)."""
        if self.n > cap:
            raise ValueError(f"materialize capped at n={cap}, operator has n={self.n}")
        A = self.nu * np.eye(self.n)
        for axis, (T, vp, vm) in enumerate(self.levels):
            left = int(np.prod(self.dims[:axis])) if axis > 0 else 1
            right = int(np.prod(self.dims[axis + 1:])) if axis + 1 < len(self.dims) else 1
            W = np.kron(np.kron(np.eye(left), T.dense()), np.eye(right))
            if vp != 0.0:
                A += vp * W
            if vm != 0.0:
                A += vm * W.T
        return A
