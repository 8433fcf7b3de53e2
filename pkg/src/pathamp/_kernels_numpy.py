"""Pure-numpy implementations of the hot kernels.

Selected by the backend dispatcher when numba is unavailable or when
PATHAMP_BACKEND=numpy.  Signatures must stay in lockstep with
_kernels_numba.

Band layout (LAPACK gbtrf working storage): a square matrix with
bandwidth bw is held in an array ab of shape (3*bw + 1, n) such that

    ab[2*bw + i - j, j] == A[i, j]   for |i - j| <= bw

The top bw rows are fill-in space for partial pivoting.
"""

import numpy as np


def grid_amplitude(a, j, nodes, weights):
    """Trapezoid sum of exp(i*(0.5 Q.A.Q + J.Q)) over a tensor grid.

    a is the dense (dim, dim) complex symmetric matrix, j the real source
    vector, nodes/weights the 1-D quadrature rule applied per axis.
    Supports dim 1..3.
    """
    dim = a.shape[0]
    x = nodes
    if dim == 1:
        expo = 0.5 * a[0, 0] * x * x + j[0] * x
        return complex(np.sum(weights * np.exp(1j * expo)))
    if dim == 2:
        X, Y = np.meshgrid(x, x, indexing="ij")
        expo = (0.5 * (a[0, 0] * X * X + a[1, 1] * Y * Y)
                + a[0, 1] * X * Y + j[0] * X + j[1] * Y)
        return complex(np.sum(np.outer(weights, weights) * np.exp(1j * expo)))
    if dim == 3:
        # chunk over the first axis to keep the working set at p^2
        Y, Z = np.meshgrid(x, x, indexing="ij")
        wyz = np.outer(weights, weights)
        base = (0.5 * (a[1, 1] * Y * Y + a[2, 2] * Z * Z)
                + a[1, 2] * Y * Z + j[1] * Y + j[2] * Z)
        lin = a[0, 1] * Y + a[0, 2] * Z
        total = 0.0 + 0.0j
        for i in range(x.shape[0]):
            xi = x[i]
            expo = base + xi * lin + (0.5 * a[0, 0] * xi * xi + j[0] * xi)
            total += weights[i] * np.sum(wyz * np.exp(1j * expo))
        return complex(total)
    raise ValueError("grid_amplitude supports dim <= 3")


def banded_lu_factor(ab, bw):
    """LU factorization with partial pivoting of a banded matrix, in place.

    Returns (ipiv, nswaps, info); info is 1-based index of the first zero
    pivot, or 0 on success.
    """
    n = ab.shape[1]
    ipiv = np.arange(n, dtype=np.int64)
    nswaps = 0
    info = 0
    for j in range(n):
        ihi = min(j + bw, n - 1)
        chi = min(j + 2 * bw, n - 1)
        # pivot search in column j, rows j..ihi
        col = np.abs(ab[2 * bw : 2 * bw + (ihi - j) + 1, j])
        p = int(np.argmax(col))
        cols = np.arange(j, chi + 1)
        rows_j = 2 * bw + j - cols
        if p != 0:
            rows_p = rows_j + p
            tmp = ab[rows_j, cols].copy()
            ab[rows_j, cols] = ab[rows_p, cols]
            ab[rows_p, cols] = tmp
            ipiv[j] = j + p
            nswaps += 1
        piv = ab[2 * bw, j]
        if piv == 0:
            if info == 0:
                info = j + 1
            continue
        if ihi > j:
            urow = ab[rows_j[1:], cols[1:]]
            for i in range(j + 1, ihi + 1):
                l = ab[2 * bw + i - j, j] / piv
                ab[2 * bw + i - j, j] = l
                if l != 0:
                    ab[rows_j[1:] + (i - j), cols[1:]] -= l * urow
    return ipiv, nswaps, info


def banded_lu_solve(ab, ipiv, bw, rhs):
    """Solve A x = rhs given the output of banded_lu_factor."""
    n = ab.shape[1]
    x = rhs.astype(ab.dtype, copy=True)
    for j in range(n - 1):
        p = ipiv[j]
        if p != j:
            x[j], x[p] = x[p], x[j]
        ihi = min(j + bw, n - 1)
        for i in range(j + 1, ihi + 1):
            x[i] -= ab[2 * bw + i - j, j] * x[j]
    for j in range(n - 1, -1, -1):
        x[j] /= ab[2 * bw, j]
        ilo = max(0, j - 2 * bw)
        for i in range(ilo, j):
            x[i] -= ab[2 * bw + i - j, j] * x[j]
    return x
