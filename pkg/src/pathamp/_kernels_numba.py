"""Numba-jitted twins of the hot kernels in _kernels_numpy.

Importing this module requires numba; the backend dispatcher falls back
to the numpy module when it is missing.  Band layout is documented in
_kernels_numpy.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _grid1(a, j, nodes, weights):
    total = 0.0 + 0.0j
    for ix in range(nodes.shape[0]):
        x = nodes[ix]
        total += weights[ix] * np.exp(1j * (0.5 * a[0, 0] * x * x + j[0] * x))
    return total


@njit(cache=True)
def _grid2(a, j, nodes, weights):
    p = nodes.shape[0]
    total = 0.0 + 0.0j
    for ix in range(p):
        x = nodes[ix]
        cx = 0.5 * a[0, 0] * x * x + j[0] * x
        lx = a[0, 1] * x
        sub = 0.0 + 0.0j
        for iy in range(p):
            y = nodes[iy]
            sub += weights[iy] * np.exp(
                1j * (cx + lx * y + 0.5 * a[1, 1] * y * y + j[1] * y))
        total += weights[ix] * sub
    return total


@njit(cache=True)
def _grid3(a, j, nodes, weights):
    p = nodes.shape[0]
    total = 0.0 + 0.0j
    for ix in range(p):
        x = nodes[ix]
        cx = 0.5 * a[0, 0] * x * x + j[0] * x
        sub_x = 0.0 + 0.0j
        for iy in range(p):
            y = nodes[iy]
            cy = cx + a[0, 1] * x * y + 0.5 * a[1, 1] * y * y + j[1] * y
            lz = a[0, 2] * x + a[1, 2] * y
            sub_y = 0.0 + 0.0j
            for iz in range(p):
                z = nodes[iz]
                sub_y += weights[iz] * np.exp(
                    1j * (cy + lz * z + 0.5 * a[2, 2] * z * z + j[2] * z))
            sub_x += weights[iy] * sub_y
        total += weights[ix] * sub_x
    return total


def grid_amplitude(a, j, nodes, weights):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    j = np.ascontiguousarray(j, dtype=np.float64)
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    dim = a.shape[0]
    if dim == 1:
        return complex(_grid1(a, j, nodes, weights))
    if dim == 2:
        return complex(_grid2(a, j, nodes, weights))
    if dim == 3:
        return complex(_grid3(a, j, nodes, weights))
    raise ValueError("grid_amplitude supports dim <= 3")


@njit(cache=True)
def _lu_factor(ab, bw):
    n = ab.shape[1]
    ipiv = np.arange(n, dtype=np.int64)
    nswaps = 0
    info = 0
    for j in range(n):
        ihi = min(j + bw, n - 1)
        chi = min(j + 2 * bw, n - 1)
        p = 0
        best = abs(ab[2 * bw, j])
        for i in range(j + 1, ihi + 1):
            v = abs(ab[2 * bw + i - j, j])
            if v > best:
                best = v
                p = i - j
        if p != 0:
            for c in range(j, chi + 1):
                r1 = 2 * bw + j - c
                r2 = r1 + p
                tmp = ab[r1, c]
                ab[r1, c] = ab[r2, c]
                ab[r2, c] = tmp
            ipiv[j] = j + p
            nswaps += 1
        piv = ab[2 * bw, j]
        if piv == 0:
            if info == 0:
                info = j + 1
            continue
        for i in range(j + 1, ihi + 1):
            l = ab[2 * bw + i - j, j] / piv
            ab[2 * bw + i - j, j] = l
            if l != 0:
                for c in range(j + 1, chi + 1):
                    ab[2 * bw + i - c, c] -= l * ab[2 * bw + j - c, c]
    return ipiv, nswaps, info


@njit(cache=True)
def _lu_solve(ab, ipiv, bw, x):
    n = ab.shape[1]
    for j in range(n - 1):
        p = ipiv[j]
        if p != j:
            tmp = x[j]
            x[j] = x[p]
            x[p] = tmp
        ihi = min(j + bw, n - 1)
        for i in range(j + 1, ihi + 1):
            x[i] -= ab[2 * bw + i - j, j] * x[j]
    for j in range(n - 1, -1, -1):
        x[j] /= ab[2 * bw, j]
        ilo = max(0, j - 2 * bw)
        for i in range(ilo, j):
            x[i] -= ab[2 * bw + i - j, j] * x[j]
    return x


def banded_lu_factor(ab, bw):
    ipiv, nswaps, info = _lu_factor(ab, bw)
    return ipiv, int(nswaps), int(info)


def banded_lu_solve(ab, ipiv, bw, rhs):
    x = rhs.astype(ab.dtype, copy=True)
    return _lu_solve(ab, ipiv, bw, x)
