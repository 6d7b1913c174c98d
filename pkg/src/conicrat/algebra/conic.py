"""Points on conics p0*a^2 + q0*b^2 = c^2 and isotropy of diagonal forms.

Over Q the decision is local (Hilbert symbols at infinity, 2 and the primes
dividing the coefficients) and a witness is produced by Legendre descent.
Over Q(sqrt d) with rational coefficients the conic has a point iff every
place where the quaternion algebra (p0, q0) ramifies fails to split in
Q(sqrt d); a witness is then assembled from a rational representation of d
by the reduced norm form.  Other Q(sqrt d) inputs fall back to a real-place
obstruction plus a bounded search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from sympy import factorint, legendre_symbol
from sympy.ntheory import sqrt_mod

from .fields import (Elem, FiniteField, QuadraticRationals, Rationals, rational_sqrt,
                     squarefree_part)
from ..errors import ConsistencyError, PreconditionError, UnsupportedFieldError

SOLVABLE = "Solvable"
UNSOLVABLE = "Unsolvable"
UNKNOWN = "Unknown"

DEFAULT_SEARCH_BOUND = 30


@dataclass(frozen=True)
class ConicResult:
    status: str
    witness: tuple | None = None  # (a, b, c) as Elems
    reason: str = ""

    @property
    def solvable(self) -> bool:
        return self.status == SOLVABLE


# ---------------------------------------------------------------------------
# local arithmetic over Q

def _sqf_int(q) -> int:
    """Squarefree integer in the square class of a nonzero rational."""
    q = Fraction(q)
    return squarefree_part(q.numerator * q.denominator)


def _split_p(n: int, p: int):
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def hilbert_symbol(a, b, p) -> int:
    """(a, b)_p for nonzero rationals; p = -1 denotes the real place."""
    a, b = _sqf_int(a), _sqf_int(b)
    if p == -1:
        return -1 if a < 0 and b < 0 else 1
    al, u = _split_p(a, p)
    be, v = _split_p(b, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(v) + al * omega(v) + be * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
    if be % 2:
        sign *= legendre_symbol(u % p, p)
    if al % 2:
        sign *= legendre_symbol(v % p, p)
    return sign


def _bad_places(*coeffs) -> list:
    primes = {2}
    for c in coeffs:
        n = _sqf_int(c)
        primes.update(factorint(abs(n)).keys())
    return [-1] + sorted(primes)


def ramified_places(p0, q0) -> list:
    """Places where the quaternion algebra (p0, q0) over Q ramifies."""
    return [v for v in _bad_places(p0, q0) if hilbert_symbol(p0, q0, v) == -1]


def is_local_square(d, p) -> bool:
    """Whether the nonzero rational d is a square in Q_p (p = -1: in R)."""
    n = _sqf_int(d)
    if p == -1:
        return n > 0
    if p == 2:
        return n % 8 == 1
    if n % p == 0:
        return False
    return legendre_symbol(n % p, p) == 1


def _norm_ok(p0, q0) -> bool:
    return all(hilbert_symbol(p0, q0, v) == 1 for v in _bad_places(p0, q0))


def quaternary_isotropic_q(coeffs) -> bool:
    """Isotropy over Q of the diagonal form <c1, c2, c3, c4> (nonzero rationals)."""
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) != 4 or any(c == 0 for c in coeffs):
        raise PreconditionError("need four nonzero coefficients")
    if all(c > 0 for c in coeffs) or all(c < 0 for c in coeffs):
        return False
    d = math.prod(coeffs)
    for p in _bad_places(*coeffs)[1:]:
        if not is_local_square(d, p):
            continue
        eps = 1
        for i in range(4):
            for j in range(i + 1, 4):
                eps *= hilbert_symbol(coeffs[i], coeffs[j], p)
        if eps != hilbert_symbol(-1, -1, p):
            return False
    return True


def ternary_isotropic_q(a, b, c) -> bool:
    """Isotropy over Q of <a, b, c>."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    # a x^2 + b y^2 + c z^2 = 0  <=>  (a x)^2 = -ab y^2 - ac z^2
    return _norm_ok(-a * b, -a * c)


# ---------------------------------------------------------------------------
# Legendre descent

def _legendre(a: int, b: int):
    """Nonzero integer (x, y, z) with x^2 = a y^2 + b z^2; a, b squarefree, solvable."""
    if a == 1:
        return 1, 1, 0
    if b == 1:
        return 1, 0, 1
    if a + b == 0:
        return 0, 1, 1
    if abs(a) > abs(b):
        x, z, y = _legendre(b, a)
        return x, y, z
    n = abs(b)
    roots = sqrt_mod(a % n, n, all_roots=True)
    if not roots:
        raise ConsistencyError(f"descent failed: {a} is not a square mod {b}")
    t = min(roots, key=lambda r: abs(r if 2 * r <= n else r - n))
    if 2 * t > n:
        t -= n
    k = (t * t - a) // b
    k_sf = squarefree_part(k)
    m = math.isqrt(k // k_sf)
    X, Y, Z = _legendre(a, k_sf)
    x, y, z = X * t + a * Y, X + Y * t, k_sf * Z * m
    g = math.gcd(math.gcd(x, y), z)
    return x // g, y // g, z // g


def legendre_point(p0, q0):
    """(a, b, c) rational with p0 a^2 + q0 b^2 = c^2, assuming solvability."""
    p0, q0 = Fraction(p0), Fraction(q0)
    A, B = _sqf_int(p0), _sqf_int(q0)
    rp = rational_sqrt(p0 / A)
    rq = rational_sqrt(q0 / B)
    x, y, z = _legendre(A, B)
    a, b, c = Fraction(y) / rp, Fraction(z) / rq, Fraction(x)
    assert p0 * a * a + q0 * b * b == c * c and (a, b, c) != (0, 0, 0)
    return a, b, c


def ternary_point_q(a, b, c):
    """Nonzero rational (x, y, z) with a x^2 + b y^2 + c z^2 = 0, or None."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if not ternary_isotropic_q(a, b, c):
        return None
    y, z, X = legendre_point(-a * b, -a * c)
    x = X / a
    assert a * x * x + b * y * y + c * z * z == 0
    return x, y, z


# ---------------------------------------------------------------------------
# the conic over each field

def conic_has_nontrivial_point(p0: Elem, q0: Elem, search_bound: int = DEFAULT_SEARCH_BOUND) -> ConicResult:
    """Decide whether p0 a^2 + q0 b^2 = c^2 has a nonzero solution over the field of p0."""
    K = p0.field
    if q0.field != K:
        raise PreconditionError("conic coefficients from different fields")
    if p0.is_zero() or q0.is_zero():
        raise PreconditionError("conic coefficients must be nonzero")
    if isinstance(K, FiniteField):
        return _conic_finite(p0, q0)
    if isinstance(K, Rationals):
        return _conic_rational(p0, q0)
    if isinstance(K, QuadraticRationals):
        if K.is_rational(p0.value) and K.is_rational(q0.value):
            return conic_over_quadratic(p0.value[0], q0.value[0], K.d, search_bound)
        return _conic_quadratic_general(p0, q0, search_bound)
    raise UnsupportedFieldError(f"conic solvability over {K} is not supported")


def _conic_finite(p0: Elem, q0: Elem) -> ConicResult:
    K = p0.field
    for a in K.elements():
        v = K.add(K.mul(p0.value, K.mul(a, a)), q0.value)
        r = K.sqrt(v)
        if r is not None:
            return ConicResult(SOLVABLE, (K(a), K(1), Elem(K, r)), "every conic over a finite field has a point")
    raise ConsistencyError(f"no point on the conic ({p0}, {q0}) over {K}")


def _conic_rational(p0: Elem, q0: Elem) -> ConicResult:
    Q = p0.field
    p, q = p0.value, q0.value
    bad = [v for v in _bad_places(p, q) if hilbert_symbol(p, q, v) == -1]
    if bad:
        where = ", ".join("inf" if v == -1 else str(v) for v in bad)
        return ConicResult(UNSOLVABLE, None, f"local obstruction at {where}")
    a, b, c = legendre_point(p, q)
    return ConicResult(SOLVABLE, (Q(a), Q(b), Q(c)), "Legendre descent")


def conic_over_quadratic(p0, q0, d: int, search_bound: int = DEFAULT_SEARCH_BOUND) -> ConicResult:
    """p0 a^2 + q0 b^2 = c^2 over L = Q(sqrt d) for rational p0, q0."""
    L = QuadraticRationals(d)
    p0, q0 = Fraction(p0), Fraction(q0)
    ram = ramified_places(p0, q0)
    split = [v for v in ram if is_local_square(d, v)]
    if split:
        where = ", ".join("inf" if v == -1 else str(v) for v in split)
        return ConicResult(UNSOLVABLE, None, f"(p0, q0) ramifies at {where}, which splits in {L}")
    reason = "every ramified place of (p0, q0) is non-split in " + str(L)
    if not ram:
        a, b, c = legendre_point(p0, q0)
        return ConicResult(SOLVABLE, (L(a), L(b), L(c)), "already solvable over Q")
    for target in (p0, q0):
        s = L.sqrt(L.from_rational(target))
        if s is not None:
            pt = (L(1), L(0), Elem(L, s)) if target == p0 else (L(0), L(1), Elem(L, s))
            return ConicResult(SOLVABLE, pt, reason)
    w = _norm_form_witness(p0, q0, d, L, search_bound)
    if w is None:
        return ConicResult(SOLVABLE, None, reason + "; no witness within the search bound")
    return ConicResult(SOLVABLE, w, reason)


def _norm_form_witness(p0, q0, d, L, bound):
    """Witness from rationals x, y, z with p0 x^2 + q0 y^2 - p0 q0 z^2 = d.

    Then sqrt(d) + x i + y j + z k has reduced norm 0, which rewrites as
    q0 = e^2 - p0 f^2 with e, f in L, i.e. the point (f, 1, e).
    """
    for z in _small_rationals(bound):
        N = d + p0 * q0 * z * z
        if N == 0:
            continue
        pt = ternary_point_q(p0, q0, -N)
        if pt is None:
            continue
        X, Y, W = pt
        if W == 0:
            continue
        x, y = X / W, Y / W
        n = y * y - p0 * z * z
        if n == 0:
            continue
        w = L.convert((0, 1))
        e = L.mul(L.sub(L.mul(w, L.from_rational(y)), L.from_rational(p0 * x * z)), L.from_rational(1 / n))
        f = L.mul(L.sub(L.from_rational(x * y), L.mul(w, L.from_rational(z))), L.from_rational(1 / n))
        lhs = L.add(L.mul(L.from_rational(p0), L.mul(f, f)), L.from_rational(q0))
        if lhs != L.mul(e, e):
            raise ConsistencyError("norm-form witness failed to verify")
        return Elem(L, f), L(1), Elem(L, e)
    return None


def _small_rationals(bound):
    yield Fraction(0)
    for h in range(1, bound + 1):
        for num in range(1, h + 1):
            den = h - num + 1
            if math.gcd(num, den) == 1:
                yield Fraction(num, den)
                yield Fraction(-num, den)


def _conic_quadratic_general(p0: Elem, q0: Elem, bound: int) -> ConicResult:
    L = p0.field
    d = L.d
    if d > 0:
        for sign in (1, -1):
            if _real_sign(p0.value, d, sign) < 0 and _real_sign(q0.value, d, sign) < 0:
                return ConicResult(UNSOLVABLE, None, "both coefficients negative at a real place")
    rng = range(-min(bound, 6), min(bound, 6) + 1)
    for a0, a1, b0, b1 in product(rng, repeat=4):
        a, b = (Fraction(a0), Fraction(a1)), (Fraction(b0), Fraction(b1))
        if a == L.zero and b == L.zero:
            continue
        v = L.add(L.mul(p0.value, L.mul(a, a)), L.mul(q0.value, L.mul(b, b)))
        r = L.sqrt(v)
        if r is not None:
            return ConicResult(SOLVABLE, (Elem(L, a), Elem(L, b), Elem(L, r)), "bounded search")
    return ConicResult(UNKNOWN, None, f"no local obstruction at real places and no point with coordinates in [-{min(bound, 6)}, {min(bound, 6)}]")


def _real_sign(v, d, sign) -> int:
    """Sign of v[0] + sign*v[1]*sqrt(d) computed exactly."""
    a, b = v[0], sign * v[1]
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if (a > 0) == (b > 0):
        return 1 if a > 0 else -1
    # opposite signs: compare a^2 with b^2 d
    if a * a > b * b * d:
        return 1 if a > 0 else -1
    return 1 if b > 0 else -1


def quaternary_isotropic(coeffs, search_bound: int = DEFAULT_SEARCH_BOUND) -> str:
    """SOLVABLE / UNSOLVABLE / UNKNOWN for isotropy of a diagonal 4-form given as Elems."""
    K = coeffs[0].field
    if isinstance(K, FiniteField):
        return SOLVABLE
    if isinstance(K, Rationals):
        return SOLVABLE if quaternary_isotropic_q([c.value for c in coeffs]) else UNSOLVABLE
    if isinstance(K, QuadraticRationals):
        if all(K.is_rational(c.value) for c in coeffs):
            cs = [c.value[0] for c in coeffs]
            if quaternary_isotropic_q(cs):
                return SOLVABLE
        rng = range(-3, 4)
        for v in product(rng, repeat=4):
            if not any(v):
                continue
            acc = K.zero
            for c, t in zip(coeffs, v):
                acc = K.add(acc, K.mul(c.value, K.from_int(t * t)))
            if acc == K.zero:
                return SOLVABLE
        return UNKNOWN
    raise UnsupportedFieldError(f"quadratic forms over {K} are not supported")
