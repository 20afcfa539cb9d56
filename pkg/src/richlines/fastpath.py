"""Accelerated pair-to-line grouping for degree-1 integer point sets.

The brute-force oracle spends essentially all of its time hashing the
O(n^2) point pairs into primitive line keys.  For the integers basis those
keys are int64 triples, so the hot loop compiles cleanly with numba; a
vectorized numpy path and a plain-Python path provide the same answers.

Backend selection: the RICHLINES_BACKEND environment variable ("numba",
"numpy" or "python"); default is numba when importable, else numpy.  All
backends are exact and must agree bit-for-bit; tests enforce this.
"""

import os
from math import gcd

import numpy as np

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

# Coordinates above this bound could overflow the int64 C term (|C| can reach
# 2 * max|x| * max|y|); callers fall back to the generic exact path instead.
MAX_ABS_COORD = 2**30


def available_backends():
    out = ["python", "numpy"]
    if HAVE_NUMBA:
        out.append("numba")
    return out


def default_backend():
    env = os.environ.get("RICHLINES_BACKEND")
    if env:
        if env not in ("numba", "numpy", "python"):
            raise ValueError(f"RICHLINES_BACKEND must be numba/numpy/python, got {env!r}")
        if env == "numba" and not HAVE_NUMBA:
            raise ValueError("RICHLINES_BACKEND=numba but numba is not importable")
        return env
    return "numba" if HAVE_NUMBA else "numpy"


def pair_line_counts(px, py, backend=None):
    """Group all unordered point pairs by the line they span.

    px, py: int64 arrays of distinct points (x_i, y_i).
    Returns {(a, b, c): pair_count} where a*x + b*y + c = 0 is the primitive
    integer equation of the line (gcd 1, first nonzero of (a, b) positive).
    """
    px = np.asarray(px, dtype=np.int64)
    py = np.asarray(py, dtype=np.int64)
    if px.shape != py.shape or px.ndim != 1:
        raise ValueError("px and py must be 1-d arrays of equal length")
    if len(px) and max(np.abs(px).max(), np.abs(py).max()) > MAX_ABS_COORD:
        raise OverflowError("coordinates too large for the int64 fast path")
    if backend is None:
        backend = default_backend()
    if backend == "numba":
        keys, counts = _pair_counts_numba(px, py)
        return {
            (int(a), int(b), int(c)): int(n)
            for (a, b, c), n in zip(keys, counts)
        }
    if backend == "numpy":
        return _pair_counts_numpy(px, py)
    if backend == "python":
        return _pair_counts_python(px, py)
    raise ValueError(f"unknown backend {backend!r}")


def _pair_counts_python(px, py):
    n = len(px)
    counts = {}
    for i in range(n):
        xi, yi = int(px[i]), int(py[i])
        for j in range(i + 1, n):
            a = int(py[j]) - yi
            b = xi - int(px[j])
            c = -(a * xi + b * yi)
            g = gcd(gcd(abs(a), abs(b)), abs(c))
            if g > 1:
                a //= g
                b //= g
                c //= g
            if a < 0 or (a == 0 and b < 0):
                a, b, c = -a, -b, -c
            key = (a, b, c)
            counts[key] = counts.get(key, 0) + 1
    return counts


def _pair_counts_numpy(px, py):
    n = len(px)
    counts = {}
    for i in range(n - 1):
        a = py[i + 1 :] - py[i]
        b = px[i] - px[i + 1 :]
        c = -(a * px[i] + b * py[i])
        g = np.gcd(np.gcd(np.abs(a), np.abs(b)), np.abs(c))
        g[g == 0] = 1
        a = a // g
        b = b // g
        c = c // g
        flip = (a < 0) | ((a == 0) & (b < 0))
        a = np.where(flip, -a, a)
        b = np.where(flip, -b, b)
        c = np.where(flip, -c, c)
        rows = np.stack([a, b, c], axis=1)
        uniq, cnt = np.unique(rows, axis=0, return_counts=True)
        for row, k in zip(uniq, cnt):
            key = (int(row[0]), int(row[1]), int(row[2]))
            counts[key] = counts.get(key, 0) + int(k)
    return counts


if HAVE_NUMBA:

    @njit(cache=True)
    def _pair_counts_numba_impl(px, py):  # pragma: no cover - compiled
        counts = {}
        n = len(px)
        for i in range(n):
            xi = px[i]
            yi = py[i]
            for j in range(i + 1, n):
                a = py[j] - yi
                b = xi - px[j]
                c = -(a * xi + b * yi)
                # gcd of |a|, |b|, |c|
                g = a if a >= 0 else -a
                h = b if b >= 0 else -b
                while h:
                    g, h = h, g % h
                h = c if c >= 0 else -c
                while h:
                    g, h = h, g % h
                if g > 1:
                    a //= g
                    b //= g
                    c //= g
                if a < 0 or (a == 0 and b < 0):
                    a = -a
                    b = -b
                    c = -c
                key = (a, b, c)
                if key in counts:
                    counts[key] += 1
                else:
                    counts[key] = 1
        m = len(counts)
        keys = np.empty((m, 3), dtype=np.int64)
        vals = np.empty(m, dtype=np.int64)
        idx = 0
        for key, v in counts.items():
            keys[idx, 0] = key[0]
            keys[idx, 1] = key[1]
            keys[idx, 2] = key[2]
            vals[idx] = v
            idx += 1
        return keys, vals

    def _pair_counts_numba(px, py):
        return _pair_counts_numba_impl(px, py)

else:  # pragma: no cover

    def _pair_counts_numba(px, py):
        raise RuntimeError("numba backend requested but numba is unavailable")
