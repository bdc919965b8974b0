"""Dense real linear algebra helpers (row-vector convention).

Vectors are rows and act on matrices from the left, matching the channel
equation y = z G. Factorizations are delegated to LAPACK through numpy;
the condition number is an in-house two-sided eigen-iteration so that
tests can cross-check it against an independent SVD.
"""

import numpy as np

from .errors import SingularMatrix

SINGULARITY_RTOL = 1e-12


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _check_pivots(a: np.ndarray, r: np.ndarray):
    # |R_ii| of the QR factorization serve as pivot magnitudes
    tol = SINGULARITY_RTOL * np.max(np.linalg.norm(a, axis=1))
    small = np.min(np.abs(np.diag(r)))
    if small <= tol:
        raise SingularMatrix(f"pivot {small:.3e} below tolerance {tol:.3e}")


def solve(a, b) -> np.ndarray:
    """Solve x a = b for the row vector x."""
    a = _as_square(a)
    b = np.asarray(b, dtype=np.float64)
    _, r = np.linalg.qr(a)
    _check_pivots(a, r)
    return np.linalg.solve(a.T, b.T).T


def inverse(a) -> np.ndarray:
    a = _as_square(a)
    _, r = np.linalg.qr(a)
    _check_pivots(a, r)
    return np.linalg.inv(a)


def qr_decompose(a):
    """QR with the sign convention diag(R) > 0, so Q R = a uniquely."""
    a = _as_square(a)
    q, r = np.linalg.qr(a)
    _check_pivots(a, r)
    signs = np.sign(np.diag(r))
    q = q * signs[None, :]
    r = r * signs[:, None]
    return q, r


def condition_number(a, rtol: float = 1e-8, max_iter: int = 20000) -> float:
    """Ratio of extreme singular values via power iteration on a^T a.

    The largest eigenvalue of S = a^T a comes from plain power iteration,
    the smallest from inverse iteration; both run to a relative eigenvalue
    tolerance of `rtol`.
    """
    a = _as_square(a)
    _, r = np.linalg.qr(a)
    _check_pivots(a, r)
    s = a.T @ a
    n = s.shape[0]
    # fixed, slightly asymmetric start vector keeps the iteration deterministic
    v0 = 1.0 + np.arange(n) / (2.0 * n)
    v0 /= np.linalg.norm(v0)

    def _power(mul):
        v = v0.copy()
        lam = 0.0
        for _ in range(max_iter):
            w = mul(v)
            lam_new = float(v @ w)
            nw = np.linalg.norm(w)
            if nw == 0.0:
                raise SingularMatrix("iteration collapsed to the null space")
            v = w / nw
            if abs(lam_new - lam) <= rtol * abs(lam_new):
                return abs(lam_new)
            lam = lam_new
        return abs(lam)

    lam_max = _power(lambda v: s @ v)
    lam_min_inv = _power(lambda v: np.linalg.solve(s, v))
    return float(np.sqrt(lam_max * lam_min_inv))


def save_matrix(path, a):
    """Plain-text CSV: first line "rows,cols", then one row per line."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a 2-D array")
    lines = [f"{a.shape[0]},{a.shape[1]}"]
    for row in a:
        lines.append(",".join(f"{x:.17g}" for x in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    try:
        rows, cols = (int(tok) for tok in lines[0].split(","))
    except ValueError as exc:
        raise ValueError(f"{path}: bad header {lines[0]!r}") from exc
    if len(lines) - 1 != rows:
        raise ValueError(f"{path}: expected {rows} rows, found {len(lines) - 1}")
    data = np.empty((rows, cols))
    for i, ln in enumerate(lines[1:]):
        vals = ln.split(",")
        if len(vals) != cols:
            raise ValueError(f"{path}: row {i} has {len(vals)} entries, expected {cols}")
        data[i] = [float(v) for v in vals]
    if not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: non-finite entries")
    return data
