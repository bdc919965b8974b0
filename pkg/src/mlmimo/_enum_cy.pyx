# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled lattice enumeration backend.

Statement-for-statement mirror of _enum_py (see there for the algorithm
notes); compiled with -ffp-contract=off so both backends produce the
same floating-point trajectories.
"""

from libc.math cimport floor
from libc.stdlib cimport free, malloc

import numpy as np

BACKEND = "compiled"

cdef enum:
    MAXN = 64

_MAXN = 64


cdef bint _lex_less(long long* a, long long* b, int n) noexcept nogil:
    cdef int i
    for i in range(n):
        if a[i] != b[i]:
            return a[i] < b[i]
    return False


cdef int _enumerate(const double[:, ::1] r, const double[::1] yt, long long lo, long long hi,
                    bint bounded, bint exclude_zero, const long long[::1] z_init,
                    long long* best_z, double* best_d_out) noexcept nogil:
    cdef int n = yt.shape[0]
    cdef int i, j
    cdef double acc, c, e, d, best_d
    cdef long long b
    cdef bint nonzero, take

    cdef long long z[MAXN]
    cdef long long nlow[MAXN]
    cdef long long nhigh[MAXN]
    cdef double center[MAXN]
    cdef double part[MAXN]
    cdef double rdiag[MAXN]

    for i in range(n):
        rdiag[i] = r[i, i]
        best_z[i] = z_init[i]

    best_d = 0.0
    for i in range(n - 1, -1, -1):
        acc = yt[i]
        for j in range(i + 1, n):
            acc -= r[i, j] * best_z[j]
        e = (acc / rdiag[i] - best_z[i]) * rdiag[i]
        best_d += e * e

    i = n - 1
    part[i] = 0.0
    # init level i
    acc = yt[i]
    for j in range(i + 1, n):
        acc -= r[i, j] * z[j]
    c = acc / rdiag[i]
    center[i] = c
    b = <long long>floor(c + 0.5)
    if bounded:
        if b < lo:
            b = lo
        elif b > hi:
            b = hi
    z[i] = b
    nlow[i] = b - 1
    nhigh[i] = b + 1

    while True:
        e = (center[i] - z[i]) * rdiag[i]
        d = part[i] + e * e
        if d <= best_d:
            if i > 0:
                part[i - 1] = d
                i -= 1
                acc = yt[i]
                for j in range(i + 1, n):
                    acc -= r[i, j] * z[j]
                c = acc / rdiag[i]
                center[i] = c
                b = <long long>floor(c + 0.5)
                if bounded:
                    if b < lo:
                        b = lo
                    elif b > hi:
                        b = hi
                z[i] = b
                nlow[i] = b - 1
                nhigh[i] = b + 1
                continue
            # leaf
            nonzero = False
            if exclude_zero:
                for j in range(n):
                    if z[j] != 0:
                        nonzero = True
                        break
            if (not exclude_zero) or nonzero:
                take = d < best_d
                if (not take) and d == best_d and _lex_less(z, best_z, n):
                    take = True
                if take:
                    best_d = d
                    for j in range(n):
                        best_z[j] = z[j]
            # advance level 0
            if _advance(0, lo, hi, bounded, z, nlow, nhigh, center):
                continue
        # pruned or exhausted: climb
        while True:
            i += 1
            if i == n:
                best_d_out[0] = best_d
                return 0
            if _advance(i, lo, hi, bounded, z, nlow, nhigh, center):
                break


cdef inline bint _advance(int i, long long lo, long long hi, bint bounded,
                          long long* z, long long* nlow, long long* nhigh,
                          double* center) noexcept nogil:
    cdef bint low_ok, high_ok
    if bounded:
        low_ok = nlow[i] >= lo
        high_ok = nhigh[i] <= hi
        if (not low_ok) and (not high_ok):
            return False
        if not low_ok:
            z[i] = nhigh[i]
            nhigh[i] += 1
            return True
        if not high_ok:
            z[i] = nlow[i]
            nlow[i] -= 1
            return True
    if nhigh[i] - center[i] <= center[i] - nlow[i]:
        z[i] = nhigh[i]
        nhigh[i] += 1
    else:
        z[i] = nlow[i]
        nlow[i] -= 1
    return True


def _run(r, ytilde, lo, hi, bounded, exclude_zero, z0):
    cdef const double[:, ::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(ytilde, dtype=np.float64)
    cdef const long long[::1] zv = np.ascontiguousarray(z0, dtype=np.int64)
    cdef int n = yv.shape[0]
    if n > _MAXN:
        raise ValueError(f"enumeration dimension {n} exceeds compiled limit {_MAXN}")
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef double best_d = 0.0
    cdef long long clo = lo, chi = hi
    cdef bint cb = bounded, cx = exclude_zero
    with nogil:
        _enumerate(rv, yv, clo, chi, cb, cx, zv, &ov[0], &best_d)
    return out, best_d


def decode_box(r, ytilde, lo, m, z0):
    """Closest constellation point in {lo..lo+m-1}^n under R."""
    return _run(r, ytilde, int(lo), int(lo) + int(m) - 1, True, False, z0)


def decode_unbounded(r, ytilde, z0):
    """Closest lattice coefficient vector in Z^n (no box)."""
    return _run(r, ytilde, 0, 0, False, False, z0)


def shortest_nonzero(r, z0):
    """Shortest nonzero coefficient vector; returns (z, ||R z||^2)."""
    return _run(r, np.zeros(len(z0)), 0, 0, False, True, z0)
