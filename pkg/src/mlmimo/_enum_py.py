"""Pure-Python lattice enumeration backend.

Schnorr-Euchner depth-first enumeration over coefficient vectors z,
minimizing ||ytilde - R z^T||^2 for an upper-triangular R with positive
diagonal (from the QR of G^T). Three entry points share one state
machine: box-constrained decoding (finite constellation), unconstrained
CVP, and the shortest nonzero vector.

Candidates at each level are visited closest-first (zig-zag around the
real-valued center, clamped to the box), so the first candidate whose
partial distance exceeds the current best prunes the whole level. Exact
distance ties are resolved toward the lexicographically smaller z, which
matches the exhaustive-search convention. The compiled backend mirrors
this file statement for statement.
"""

import math

import numpy as np

BACKEND = "python"


def _lex_less(a, b, n):
    for i in range(n):
        if a[i] != b[i]:
            return a[i] < b[i]
    return False


def _enumerate(r, yt, lo, hi, bounded, exclude_zero, z_init):
    n = len(yt)
    rows = [list(map(float, r[i])) for i in range(n)]
    rdiag = [rows[i][i] for i in range(n)]
    yt = list(map(float, yt))

    # warm-start distance, accumulated level n-1 .. 0 exactly like the search
    best_z = [int(v) for v in z_init]
    best_d = 0.0
    for i in range(n - 1, -1, -1):
        acc = yt[i]
        row = rows[i]
        for j in range(i + 1, n):
            acc -= row[j] * best_z[j]
        e = (acc / rdiag[i] - best_z[i]) * rdiag[i]
        best_d += e * e

    z = [0] * n
    nlow = [0] * n
    nhigh = [0] * n
    center = [0.0] * n
    part = [0.0] * n  # part[i]: distance fixed by levels i+1..n-1

    def init_level(i):
        acc = yt[i]
        row = rows[i]
        for j in range(i + 1, n):
            acc -= row[j] * z[j]
        c = acc / rdiag[i]
        center[i] = c
        b = math.floor(c + 0.5)
        if bounded:
            if b < lo:
                b = lo
            elif b > hi:
                b = hi
        z[i] = b
        nlow[i] = b - 1
        nhigh[i] = b + 1

    def advance(i):
        if bounded:
            low_ok = nlow[i] >= lo
            high_ok = nhigh[i] <= hi
            if not low_ok and not high_ok:
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

    i = n - 1
    part[i] = 0.0
    init_level(i)
    while True:
        e = (center[i] - z[i]) * rdiag[i]
        d = part[i] + e * e
        if d <= best_d:
            if i > 0:
                part[i - 1] = d
                i -= 1
                init_level(i)
                continue
            if not exclude_zero or any(z):
                if d < best_d or (d == best_d and _lex_less(z, best_z, n)):
                    best_d = d
                    best_z = z.copy()
            if advance(0):
                continue
        # pruned or exhausted: climb until some level still has candidates
        while True:
            i += 1
            if i == n:
                return np.array(best_z, dtype=np.int64), best_d
            if advance(i):
                break


def decode_box(r, ytilde, lo, m, z0):
    """Closest constellation point in {lo..lo+m-1}^n under R."""
    return _enumerate(r, ytilde, int(lo), int(lo) + int(m) - 1, True, False, z0)


def decode_unbounded(r, ytilde, z0):
    """Closest lattice coefficient vector in Z^n (no box)."""
    return _enumerate(r, ytilde, 0, 0, False, False, z0)


def shortest_nonzero(r, z0):
    """Shortest nonzero coefficient vector; returns (z, ||R z||^2)."""
    return _enumerate(r, np.zeros(len(z0)), 0, 0, False, True, z0)
