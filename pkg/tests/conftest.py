import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


# ---------------------------------------------------------------------------
# Independent dense oracles (kept free of the library's fast paths)

def sine_matrix(m):
    """Dense orthonormal DST-I matrix."""
    j = np.arange(1, m + 1)
    return np.sqrt(2.0 / (m + 1)) * np.sin(np.pi * np.outer(j, j) / (m + 1))


def toeplitz_dense(col, row=None):
    col = np.asarray(col, dtype=float)
    row = col if row is None else np.asarray(row, dtype=float)
    m = len(col)
    return np.array([[col[j - k] if j >= k else row[k - j] for k in range(m)]
                     for j in range(m)])


def kron_chain(mats):
    out = np.array([[1.0]])
    for m in mats:
        out = np.kron(out, m)
    return out


def assemble_dense(dims, nu, level_data):
    """Dense nu*I + sum_i (vp_i W_i + vm_i W_i^T) from (col, row, vp, vm) tuples."""
    n = int(np.prod(dims))
    A = nu * np.eye(n)
    for i, (col, row, vp, vm) in enumerate(level_data):
        blocks = [np.eye(m) for m in dims]
        blocks[i] = toeplitz_dense(col, row)
        W = kron_chain(blocks)
        A += vp * W + vm * W.T
    return A


def convolve_direct(a, b):
    L = len(a)
    return np.array([sum(a[k] * b[(j - k) % L] for k in range(L)) for j in range(L)])


def rel_err(got, ref):
    ref = np.asarray(ref, dtype=float)
    scale = np.max(np.abs(ref))
    if scale == 0.0:
        return np.max(np.abs(got))
    return np.max(np.abs(got - ref)) / scale
