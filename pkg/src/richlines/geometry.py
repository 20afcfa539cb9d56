"""Exact incidence geometry over a nice-basis field.

Lines are stored as coefficient triples A*X + B*Y + C = 0 over the fraction
field, normalized so the first nonzero coefficient (in the order A, B, C) is
the field's unity.  Two CanonicalLines are then equal as lines exactly when
their coordinate triples are identical, which makes them hashable dedup keys.
"""

from fractions import Fraction
from math import comb, gcd, isqrt

import numpy as np

from . import fastpath
from .errors import DegeneratePairError, InvalidParameterError
from .numberfield import (
    BasisMismatchError,
    Element,
    RationalElement,
    divide,
    integer_inverse,
)


class Point:
    """A plane point with coordinates in the ring of a shared nice basis."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        if x.basis != y.basis:
            raise BasisMismatchError("point coordinates from different bases")
        self.x = x
        self.y = y

    @property
    def basis(self):
        return self.x.basis

    def sort_key(self):
        return (self.x.coords, self.y.coords)

    def __eq__(self, other):
        return isinstance(other, Point) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x.coords, self.y.coords))

    def __repr__(self):
        return f"Point({self.x.coords}, {self.y.coords})"


class CanonicalLine:
    """A line A*X + B*Y + C = 0 with RationalElement coefficients, normalized
    so the first nonzero coefficient is unity."""

    __slots__ = ("basis", "a", "b", "c", "_hash")

    def __init__(self, basis, a, b, c):
        self.basis = basis
        self.a = a
        self.b = b
        self.c = c
        self._hash = hash((a.coords, b.coords, c.coords))

    def coeffs(self):
        return (self.a, self.b, self.c)

    def sort_key(self):
        out = []
        for coeff in (self.a, self.b, self.c):
            for f in coeff.coords:
                out.append((f.numerator, f.denominator))
        return tuple(out)

    def __eq__(self, other):
        return (
            isinstance(other, CanonicalLine)
            and self.basis == other.basis
            and self.a == other.a
            and self.b == other.b
            and self.c == other.c
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"CanonicalLine(a={self.a!r}, b={self.b!r}, c={self.c!r})"


def collinear(p, q, t):
    """Exact collinearity of three points: vanishing of the field determinant
    (q.x - p.x)(t.y - p.y) - (q.y - p.y)(t.x - p.x)."""
    for other in (q, t):
        if other.basis != p.basis:
            raise BasisMismatchError("points from different bases")
    det = (q.x - p.x) * (t.y - p.y) - (q.y - p.y) * (t.x - p.x)
    return det.is_zero()


def raw_line_coeffs(p, q):
    """Unnormalized integer coefficient triple of the line through p and q."""
    a = q.y - p.y
    b = p.x - q.x
    c = p.y * q.x - p.x * q.y
    return a, b, c


def canonicalize_triple(basis, a, b, c):
    """Normalize an integer coefficient triple to a CanonicalLine.

    Repeated triples are common (every pair on a line reproduces one of a few
    integer triples), so results are cached per basis keyed on the
    content-reduced triple.
    """
    if a.is_zero() and b.is_zero():
        raise DegeneratePairError("degenerate line: A and B both zero")
    flat = list(a.coords) + list(b.coords) + list(c.coords)
    g = 0
    for v in flat:
        g = gcd(g, abs(v))
    if g > 1:
        flat = [v // g for v in flat]
    for v in flat:
        if v:
            if v < 0:
                flat = [-w for w in flat]
            break
    key = tuple(flat)
    cache = basis._line_cache
    line = cache.get(key)
    if line is None and basis.degree == 1:
        ka, kb, kc = key
        pivot = ka if ka else kb
        line = CanonicalLine(
            basis,
            RationalElement(basis, (Fraction(ka, pivot),)),
            RationalElement(basis, (Fraction(kb, pivot),)),
            RationalElement(basis, (Fraction(kc, pivot),)),
        )
        cache[key] = line
    if line is None:
        d = basis.degree
        pivot = key[:d] if any(key[:d]) else key[d : 2 * d]
        q, delta = integer_inverse(basis, pivot)
        mul = basis.mul_coords
        coeffs = [
            RationalElement(
                basis, tuple(Fraction(v, delta) for v in mul(part, q))
            )
            for part in (key[:d], key[d : 2 * d], key[2 * d :])
        ]
        line = CanonicalLine(basis, *coeffs)
        cache[key] = line
    return line


def line_through(p, q):
    """CanonicalLine through two distinct points; both satisfy it exactly."""
    if p.basis != q.basis:
        raise BasisMismatchError("points from different bases")
    if p == q:
        raise DegeneratePairError("need two distinct points")
    a, b, c = raw_line_coeffs(p, q)
    return canonicalize_triple(p.basis, a, b, c)


def on_line(p, line):
    """Exact incidence test A*p.x + B*p.y + C == 0."""
    if p.basis != line.basis:
        raise BasisMismatchError("point and line from different bases")
    val = line.a * p.x + line.b * p.y + line.c
    return val.is_zero()


def _richness_from_pairs(pair_count):
    """Invert pair_count = k*(k-1)/2 to the number k of points on the line."""
    k = (1 + isqrt(1 + 8 * pair_count)) // 2
    if k * (k - 1) // 2 != pair_count:
        raise AssertionError(
            f"pair count {pair_count} is not triangular; duplicate points?"
        )
    return k


def _check_distinct(points):
    seen = set()
    for p in points:
        key = (p.x.coords, p.y.coords)
        if key in seen:
            raise InvalidParameterError(f"duplicate point {p!r}")
        seen.add(key)


def _reduce_flat(flat):
    """Content-reduce a flat integer triple and fix the overall sign."""
    flat = tuple(flat)
    g = 0
    for v in flat:
        g = gcd(g, v if v >= 0 else -v)
    if g > 1:
        flat = tuple(v // g for v in flat)
    for v in flat:
        if v:
            if v < 0:
                flat = tuple(-w for w in flat)
            break
    return flat


def _raw_pair_counts_loop(points):
    basis = points[0].basis
    mul = basis.mul_coords
    coords = [(p.x.coords, p.y.coords) for p in points]
    raw = {}
    n = len(points)
    for i in range(n):
        px, py = coords[i]
        for j in range(i + 1, n):
            qx, qy = coords[j]
            a = tuple(u - v for u, v in zip(qy, py))
            b = tuple(u - v for u, v in zip(px, qx))
            c = tuple(u - v for u, v in zip(mul(py, qx), mul(px, qy)))
            key = _reduce_flat(a + b + c)
            raw[key] = raw.get(key, 0) + 1
    return raw


def _raw_pair_counts_vec(points):
    """Vectorized reduced-key pair grouping for any degree, int64 only.

    Per anchor point the raw triples of all later points come from two small
    matmuls against the multiplication matrices of the anchor's coordinates.
    """
    basis = points[0].basis
    sc = np.array(basis.structure_constants, dtype=np.int64)
    xs = np.array([p.x.coords for p in points], dtype=np.int64)
    ys = np.array([p.y.coords for p in points], dtype=np.int64)
    raw = {}
    n = len(points)
    for i in range(n - 1):
        a = ys[i + 1 :] - ys[i]
        b = xs[i] - xs[i + 1 :]
        my = np.einsum("i,ijk->jk", ys[i], sc)
        mx = np.einsum("i,ijk->jk", xs[i], sc)
        c = xs[i + 1 :] @ my - ys[i + 1 :] @ mx
        rows = np.concatenate([a, b, c], axis=1)
        g = np.gcd.reduce(np.abs(rows), axis=1)
        g[g == 0] = 1
        rows //= g[:, None]
        first = np.argmax(rows != 0, axis=1)
        lead = np.take_along_axis(rows, first[:, None], axis=1)[:, 0]
        rows[lead < 0] *= -1
        uniq, cnt = np.unique(rows, axis=0, return_counts=True)
        for row, k in zip(uniq.tolist(), cnt.tolist()):
            key = tuple(row)
            raw[key] = raw.get(key, 0) + k
    return raw


# Keeps every intermediate of the vectorized path inside int64: |C| is at
# most 2 d^2 C_L max|x| max|y|.
_VEC_COORD_CAP = 2**24


def _raw_pair_counts_generic(points):
    basis = points[0].basis
    d = basis.degree
    biggest = max(
        (abs(v) for p in points for v in p.x.coords + p.y.coords), default=0
    )
    if biggest * basis.c_lambda * d * d < _VEC_COORD_CAP:
        return _raw_pair_counts_vec(points)
    return _raw_pair_counts_loop(points)


def _merge_raw_by_line(basis, raw):
    """Merge reduced raw keys that are unit multiples of the same line.

    Multiplying a key by the inverse of its pivot and content-reducing gives
    a primitive integer representative of the canonical triple, so two raw
    keys map together exactly when they denote the same line.  Everything
    stays in integer arithmetic; CanonicalLine objects are only built later
    for the keys a caller actually reports.
    """
    d = basis.degree
    mul = basis.mul_coords
    out = {}
    for key, cnt in raw.items():
        pivot = key[:d] if any(key[:d]) else key[d : 2 * d]
        q, _ = integer_inverse(basis, pivot)
        ck = _reduce_flat(
            mul(key[:d], q) + mul(key[d : 2 * d], q) + mul(key[2 * d :], q)
        )
        out[ck] = out.get(ck, 0) + cnt
    return out


def _canonical_from_key(basis, key):
    d = basis.degree
    return canonicalize_triple(
        basis,
        Element(basis, key[:d]),
        Element(basis, key[d : 2 * d]),
        Element(basis, key[2 * d :]),
    )


def _line_pair_counts_generic(points):
    """Pair grouping on raw coordinate tuples; the much cheaper reduced
    integer keys are only pushed through field canonicalization once per
    line, after merging unit multiples."""
    basis = points[0].basis
    merged = _merge_raw_by_line(basis, _raw_pair_counts_generic(points))
    return {
        _canonical_from_key(basis, key): cnt for key, cnt in merged.items()
    }


def _raw_pair_counts_d1(points, backend=None):
    """{primitive int triple: pair count} for a degree-1 point set.  Primitive
    triples are already unique per line over Q, so no field canonicalization
    is needed until a line is actually reported."""
    px = np.array([p.x.coords[0] for p in points], dtype=np.int64)
    py = np.array([p.y.coords[0] for p in points], dtype=np.int64)
    return fastpath.pair_line_counts(px, py, backend=backend)


def _canonical_d1(basis, triple):
    a, b, c = triple
    return canonicalize_triple(
        basis, Element(basis, (a,)), Element(basis, (b,)), Element(basis, (c,))
    )


def _line_pair_counts_fast(points, backend=None):
    basis = points[0].basis
    raw = _raw_pair_counts_d1(points, backend=backend)
    return {_canonical_d1(basis, key): cnt for key, cnt in raw.items()}


def line_pair_counts(points, backend=None):
    """Map each spanned line to its number of unordered point pairs.

    Uses the int64 fast path for degree-1 point sets with safely-bounded
    coordinates; the generic exact path otherwise.  backend="generic" forces
    the reference path.
    """
    points = list(points)
    if len(points) < 2:
        return {}
    _check_distinct(points)
    basis = points[0].basis
    if backend != "generic" and basis.degree == 1:
        try:
            return _line_pair_counts_fast(points, backend=backend)
        except OverflowError:
            pass
    return _line_pair_counts_generic(points)


def rich_lines_bruteforce(points, r, backend=None):
    """All lines containing at least r points of P, with exact richness.

    The O(n^2) pair-grouping oracle: deterministic output, keys sorted by
    canonical triple.
    """
    if r < 2:
        raise InvalidParameterError("r must be at least 2")
    points = list(points)
    if len(points) < 2:
        return {}
    _check_distinct(points)
    basis = points[0].basis
    threshold = comb(r, 2)
    if backend != "generic" and basis.degree == 1:
        try:
            raw = _raw_pair_counts_d1(points, backend=backend)
        except OverflowError:
            raw = None
        if raw is not None:
            counts = {
                _canonical_d1(basis, key): cnt
                for key, cnt in raw.items()
                if cnt >= threshold
            }
            return {
                line: _richness_from_pairs(counts[line])
                for line in sorted(counts, key=CanonicalLine.sort_key)
            }
    merged = _merge_raw_by_line(basis, _raw_pair_counts_generic(points))
    counts = {
        _canonical_from_key(basis, key): cnt
        for key, cnt in merged.items()
        if cnt >= threshold
    }
    rich = {}
    for line in sorted(counts, key=CanonicalLine.sort_key):
        k = _richness_from_pairs(counts[line])
        if k >= r:
            rich[line] = k
    return rich


def count_incidences(points, lines):
    """Exact number of (point, line) incidences."""
    total = 0
    for line in lines:
        for p in points:
            if on_line(p, line):
                total += 1
    return total


def beck_statistic(points):
    """(max collinear points, number of distinct 2-rich lines), exactly."""
    points = list(points)
    if len(points) < 2:
        raise InvalidParameterError("need at least 2 points")
    _check_distinct(points)
    basis = points[0].basis
    if basis.degree == 1:
        try:
            counts = _raw_pair_counts_d1(points)
        except OverflowError:
            counts = _raw_pair_counts_loop(points)
    else:
        # integer merged keys suffice; no need to build CanonicalLines here
        counts = _merge_raw_by_line(basis, _raw_pair_counts_generic(points))
    max_collinear = max(_richness_from_pairs(c) for c in counts.values())
    return max_collinear, len(counts)


def pair_grouping_identity(points):
    """sum over lines of C(richness, 2) == C(|P|, 2); exact sanity identity."""
    points = list(points)
    counts = line_pair_counts(points)
    lhs = sum(comb(_richness_from_pairs(c), 2) for c in counts.values())
    return lhs == comb(len(points), 2)


# ---------------------------------------------------------------------------
# Line-oriented text interchange: one point per row as 2d integers, one line
# per row as 3d rationals "num/den".


def points_to_text(points):
    rows = []
    for p in points:
        rows.append(" ".join(str(c) for c in (*p.x.coords, *p.y.coords)))
    return "\n".join(rows) + ("\n" if rows else "")


def points_from_text(text, basis):
    d = basis.degree
    points = []
    for row in text.splitlines():
        row = row.strip()
        if not row:
            continue
        vals = [int(v) for v in row.split()]
        if len(vals) != 2 * d:
            raise InvalidParameterError(
                f"point row needs {2 * d} integers, got {len(vals)}"
            )
        points.append(Point(Element(basis, vals[:d]), Element(basis, vals[d:])))
    return points


def lines_to_text(lines):
    rows = []
    for line in lines:
        parts = []
        for coeff in line.coeffs():
            for f in coeff.coords:
                parts.append(f"{f.numerator}/{f.denominator}")
        rows.append(" ".join(parts))
    return "\n".join(rows) + ("\n" if rows else "")


def lines_from_text(text, basis):
    d = basis.degree
    lines = []
    for row in text.splitlines():
        row = row.strip()
        if not row:
            continue
        vals = [Fraction(v) for v in row.split()]
        if len(vals) != 3 * d:
            raise InvalidParameterError(
                f"line row needs {3 * d} rationals, got {len(vals)}"
            )
        lines.append(
            CanonicalLine(
                basis,
                RationalElement(basis, vals[:d]),
                RationalElement(basis, vals[d : 2 * d]),
                RationalElement(basis, vals[2 * d :]),
            )
        )
    return lines
