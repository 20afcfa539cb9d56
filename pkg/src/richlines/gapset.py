"""Symmetric GAP boxes A_m(Lambda) and their closure bounds.

A_m(Lambda) collects the elements sum a_i l_i with |a_i| <= m^(1/d)/3.  The
box radius floor(m^(1/d)/3) is computed by exact integer root extraction, so
membership stays decidable even when m is an irrational power like n^(1/3):
bounds of that shape are handled as coeff * n^alpha with rational coeff and
alpha, compared through integer powering.
"""

import itertools
from fractions import Fraction

from .errors import InvalidParameterError
from .numberfield import Element


def _floor_scaled_root(coeff, n, alpha, d):
    """Largest integer t >= 0 with t^d <= coeff * n^alpha (all exact).

    coeff: positive Fraction; alpha: Fraction p/q; n: positive int.
    The comparison t^d <= (u/v) n^(p/q) is decided as t^(dq) v^q <= u^q n^p.
    """
    coeff = Fraction(coeff)
    alpha = Fraction(alpha)
    if coeff <= 0 or n <= 0:
        raise InvalidParameterError("bound must be positive")
    p, q = alpha.numerator, alpha.denominator
    u, v = coeff.numerator, coeff.denominator
    rhs = u**q * n**p
    vq = v**q

    def ok(t):
        return t >= 0 and t ** (d * q) * vq <= rhs

    # Float seed, then exact fix-up; fall back to doubling + bisection when
    # the float path overflows.
    try:
        t = max(int((float(coeff) * float(n) ** float(alpha)) ** (1.0 / d)), 0)
    except OverflowError:
        t = None
    if t is None or not (ok(t) or ok(t - 1) or ok(t + 1)):
        hi = 1
        while ok(hi):
            hi *= 2
        lo = 0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                lo = mid
            else:
                hi = mid
        return lo
    while not ok(t):
        t -= 1
    while ok(t + 1):
        t += 1
    return t


def gap_radius(m, d):
    """floor(m^(1/d) / 3) for a positive rational m: the largest t with
    (3t)^d <= m."""
    m = Fraction(m)
    if m <= 0:
        raise InvalidParameterError("m must be positive")
    if d < 1:
        raise InvalidParameterError("d must be a positive integer")
    # (3t)^d <= m  <=>  t^d <= m / 3^d
    return _floor_scaled_root(m / 3**d, 1, Fraction(0), d)


def gap_radius_power(coeff, n, alpha, d):
    """Box radius for the bound m = coeff * n^alpha, exactly."""
    return _floor_scaled_root(Fraction(coeff) / 3**d, n, alpha, d)


def floor_scaled_root(coeff, n, alpha, d):
    """floor((coeff * n^alpha)^(1/d)), exactly.  Used for the translate
    lattice step sizes."""
    return _floor_scaled_root(coeff, n, alpha, d)


def scaled_power_le(coeff, n, alpha, x):
    """Exact test coeff * n^alpha <= x for rational coeff, x and alpha = p/q."""
    coeff = Fraction(coeff)
    alpha = Fraction(alpha)
    x = Fraction(x)
    if x < 0:
        return False
    p, q = alpha.numerator, alpha.denominator
    # coeff^q * n^p <= x^q   (all terms positive)
    return coeff.numerator**q * n**p * x.denominator**q <= (
        x.numerator**q * coeff.denominator**q
    )


class GapSet:
    """The box A_m(s * Lambda): coordinates s*a with |a| <= radius.

    Iteration is lexicographic over the underlying integer box, which keeps
    every construction downstream deterministic.
    """

    def __init__(self, basis, radius, scale=1, bound=None):
        if radius < 0:
            raise InvalidParameterError("radius must be nonnegative")
        if scale < 1:
            raise InvalidParameterError("scale must be a positive integer")
        self.basis = basis
        self.radius = int(radius)
        self.scale = int(scale)
        self.bound = bound  # Fraction, or a (coeff, n, alpha) triple, or None

    def __len__(self):
        return (2 * self.radius + 1) ** self.basis.degree

    def __iter__(self):
        rng = range(-self.radius, self.radius + 1)
        s = self.scale
        for coords in itertools.product(rng, repeat=self.basis.degree):
            yield Element(self.basis, tuple(s * c for c in coords))

    def contains(self, e):
        if e.basis != self.basis:
            return False
        s = self.scale
        for c in e.coords:
            if c % s != 0 or abs(c // s) > self.radius:
                return False
        return True

    def __contains__(self, e):
        return self.contains(e)

    def __repr__(self):
        return (
            f"GapSet(radius={self.radius}, scale={self.scale}, "
            f"d={self.basis.degree})"
        )


def gap_set(basis, m, scale=1):
    """A_m(scale * Lambda) for a positive rational bound m."""
    return GapSet(basis, gap_radius(m, basis.degree), scale, bound=Fraction(m))


def gap_set_power(basis, coeff, n, alpha, scale=1):
    """A_m(scale * Lambda) for the bound m = coeff * n^alpha, exactly."""
    r = gap_radius_power(coeff, n, alpha, basis.degree)
    return GapSet(basis, r, scale, bound=(Fraction(coeff), n, Fraction(alpha)))


def generate(basis, m, scale=1):
    """Spec-level entry point: the iterable box A_m(scale * Lambda)."""
    return gap_set(basis, m, scale)


def contains(basis, m, scale, e):
    """Membership of e in A_m(scale * Lambda)."""
    return gap_set(basis, m, scale).contains(e)


def sum_bound(m, m_prime, d):
    """Bound m'' with a +/- a' in A_m''(Lambda) for a in A_m, a' in A_m'."""
    m, m_prime = Fraction(m), Fraction(m_prime)
    if m < 1 or m_prime < 1:
        raise InvalidParameterError("bounds must be at least 1")
    return 2**d * max(m, m_prime)


def product_bound(m, m_prime, d, c_lambda):
    """Bound m'' with a * a' in A_m''(Lambda) for a in A_m, a' in A_m'."""
    m, m_prime = Fraction(m), Fraction(m_prime)
    if m < 1 or m_prime < 1:
        raise InvalidParameterError("bounds must be at least 1")
    return (d**2 * c_lambda) ** d * m * m_prime
