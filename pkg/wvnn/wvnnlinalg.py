"""Small dense complex linear algebra.

Vectors and matrices are complex128 numpy arrays, scalars are Python
``complex``. Everything here is a pure function of its inputs.
"""

import logging
from typing import List, Sequence

import numpy as np
from scipy.linalg import hessenberg

from wvnn.wvnnerrors import (
    DegenerateInputError,
    IterationFailureError,
    UnsupportedDimensionError,
)
from wvnn.wvnnsettings import get_log_level

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

DEFAULT_QR_TOL = 1e-12
NEWTON_STEPS = 2
EPS = np.finfo(float).eps
TRIPLE_ROOT_TOL = 64 * EPS


def as_cmatrix(m) -> np.ndarray:
    """Validated complex square matrix (always a fresh copy)."""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DegenerateInputError(f"Expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DegenerateInputError("Matrix has non-finite entries")
    return arr


def as_cvector(v) -> np.ndarray:
    """Validated complex vector (always a fresh copy)."""
    arr = np.array(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DegenerateInputError(f"Expected a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DegenerateInputError("Vector has non-finite entries")
    return arr


def frobenius_norm(m) -> float:
    m = np.asarray(m)
    return float(np.sqrt(np.sum(m.real**2 + m.imag**2)))


def adjoint(m) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(m).conj().T)


def trace(m) -> complex:
    return complex(np.trace(np.asarray(m)))


def normality_defect(m) -> float:
    """||M M^dagger - M^dagger M||_F, zero exactly for normal matrices."""
    m = np.asarray(m, dtype=np.complex128)
    m_dagger = adjoint(m)
    return frobenius_norm(m @ m_dagger - m_dagger @ m)


def sort_spectrum(values: Sequence[complex]) -> List[complex]:
    # (re, im) lexicographic keeps multiset comparisons deterministic
    return sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))


def quadratic_roots(tr: complex, det: complex):
    """Roots of x^2 - tr x + det = 0, the larger one first."""
    half = tr / 2
    s = np.sqrt(complex(half * half - det))
    if (np.conj(half) * s).real < 0:
        s = -s
    r1 = half + s
    if r1 != 0:
        r2 = det / r1
    else:
        r2 = tr - r1
    return complex(r1), complex(r2)


def _char_poly(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    tr = np.trace(m)
    if n == 2:
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        return np.array([1.0, -tr, det], dtype=np.complex128)
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    det = np.linalg.det(m)
    return np.array([1.0, -tr, minors, -det], dtype=np.complex128)


def _cubic_roots(a: complex, b: complex, c: complex):
    """Cardano in complex arithmetic for x^3 + a x^2 + b x + c."""
    p = b - a * a / 3
    q = 2 * a**3 / 27 - a * b / 3 + c
    scale = max(abs(a) / 3, np.sqrt(abs(b)), np.cbrt(abs(c)))
    # p and q at rounding level relative to the coefficients: triple root at -a/3
    if abs(p) <= TRIPLE_ROOT_TOL * scale**2 and abs(q) <= TRIPLE_ROOT_TOL * scale**3:
        return [complex(-a / 3)] * 3
    sd = np.sqrt(complex((q / 2) ** 2 + (p / 3) ** 3))
    w = -q / 2 + sd
    w_other = -q / 2 - sd
    if abs(w_other) > abs(w):
        w = w_other
    if w == 0:
        ts = [0j, 0j, 0j]
    else:
        u = complex(w) ** (1.0 / 3.0)
        omega = complex(-0.5, np.sqrt(3) / 2)
        ts = []
        for k in range(3):
            uk = u * omega**k
            ts.append(uk - p / (3 * uk))
    return [t - a / 3 for t in ts]


def _newton_polish(coeffs: np.ndarray, root: complex) -> complex:
    derivative = np.polyder(coeffs)
    best = root
    best_residual = abs(np.polyval(coeffs, root))
    for _ in range(NEWTON_STEPS):
        slope = np.polyval(derivative, best)
        if abs(slope) <= EPS * max(1.0, abs(best)):
            break
        candidate = best - np.polyval(coeffs, best) / slope
        residual = abs(np.polyval(coeffs, candidate))
        if residual >= best_residual:
            break
        best, best_residual = candidate, residual
    return complex(best)


def eigvals_closed(m) -> List[complex]:
    """Eigenvalues of a 2x2 or 3x3 matrix from the characteristic polynomial.

    Each root gets at most two Newton steps on the characteristic
    polynomial; a step is kept only if it lowers the residual.
    """
    m = as_cmatrix(m)
    n = m.shape[0]
    if n not in (2, 3):
        raise UnsupportedDimensionError(f"Closed-form eigenvalues need dim 2 or 3, got {n}")
    coeffs = _char_poly(m)
    if n == 2:
        roots = list(quadratic_roots(-coeffs[1], coeffs[2]))
    else:
        roots = _cubic_roots(coeffs[1], coeffs[2], coeffs[3])
    return sort_spectrum(_newton_polish(coeffs, r) for r in roots)


def _wilkinson_shift(h: np.ndarray, hi: int) -> complex:
    a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
    c, d = h[hi, hi - 1], h[hi, hi]
    r1, r2 = quadratic_roots(a + d, a * d - b * c)
    return r1 if abs(r1 - d) <= abs(r2 - d) else r2


def _qr_step(h: np.ndarray, lo: int, hi: int, mu: complex):
    """One shifted QR sweep on the active Hessenberg block, in place."""
    block = h[lo : hi + 1, lo : hi + 1]
    m = block.shape[0]
    diag = np.arange(m)
    block[diag, diag] -= mu
    rotations = []
    for k in range(m - 1):
        x, y = block[k, k], block[k + 1, k]
        r = np.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0 + 0j, 0j
        else:
            c, s = x / r, y / r
        g = np.array([[np.conj(c), np.conj(s)], [-s, c]])
        block[k : k + 2, k:] = g @ block[k : k + 2, k:]
        block[k + 1, k] = 0.0
        rotations.append(g)
    for k, g in enumerate(rotations):
        rows = min(k + 3, m)
        block[:rows, k : k + 2] = block[:rows, k : k + 2] @ g.conj().T
    block[diag, diag] += mu


def eigvals_qr(m, tol: float = DEFAULT_QR_TOL, max_iter: int = None) -> List[complex]:
    """Eigenvalues via Hessenberg reduction and Wilkinson-shifted QR.

    :param m: square complex matrix of any dimension
    :param tol: relative deflation threshold on subdiagonal entries
    :param max_iter: total QR sweeps allowed, defaults to 100 * dim
    :raises IterationFailureError: when the sweeps run out
    """
    m = as_cmatrix(m)
    n = m.shape[0]
    if max_iter is None:
        max_iter = 100 * n
    if n == 1:
        return [complex(m[0, 0])]

    h = np.array(hessenberg(m), dtype=np.complex128)
    scale = max(frobenius_norm(m), np.finfo(float).tiny)
    floor = EPS * scale

    found = []
    hi = n - 1
    iterations = 0
    since_deflation = 0
    while hi >= 0:
        if hi == 0:
            found.append(complex(h[0, 0]))
            break

        lo = hi
        while lo > 0:
            local = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if local == 0.0:
                local = scale
            if abs(h[lo, lo - 1]) <= max(tol * local, floor):
                h[lo, lo - 1] = 0.0
                break
            lo -= 1

        if lo == hi:
            found.append(complex(h[hi, hi]))
            hi -= 1
            since_deflation = 0
            continue
        if hi - lo == 1:
            a, b = h[lo, lo], h[lo, hi]
            c, d = h[hi, lo], h[hi, hi]
            found.extend(quadratic_roots(a + d, a * d - b * c))
            hi -= 2
            since_deflation = 0
            continue

        iterations += 1
        since_deflation += 1
        if iterations > max_iter:
            raise IterationFailureError(
                f"QR iteration did not converge in {max_iter} sweeps "
                f"({len(found)} of {n} eigenvalues deflated)",
                iterations=iterations - 1,
                deflated=found,
                active_block=hi - lo + 1,
            )
        if since_deflation % 10 == 0:
            # exceptional shift to break cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson_shift(h, hi)
        _qr_step(h, lo, hi, mu)

    logger.debug(f"QR converged for dim {n} after {iterations} sweeps")
    return sort_spectrum(found)


def eigvals(m) -> List[complex]:
    """Closed forms for dim 2 and 3, QR iteration otherwise."""
    m = as_cmatrix(m)
    if m.shape[0] in (2, 3):
        return eigvals_closed(m)
    return eigvals_qr(m)


def match_spectra(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Largest pair distance after greedy minimal-distance matching.

    Adequate for well separated spectra; clustered spectra may be paired
    suboptimally.
    """
    a = np.asarray(list(a), dtype=np.complex128)
    b = np.asarray(list(b), dtype=np.complex128)
    if a.shape != b.shape:
        raise DegenerateInputError(f"Spectra differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    distances = np.abs(a[:, None] - b[None, :])
    worst = 0.0
    for _ in range(a.size):
        i, j = np.unravel_index(np.argmin(distances), distances.shape)
        worst = max(worst, float(distances[i, j]))
        distances[i, :] = np.inf
        distances[:, j] = np.inf
    return worst
