"""Complete factorization over F_q, Q and Q(sqrt d).

Finite fields use the classical squarefree / distinct-degree /
Cantor-Zassenhaus pipeline.  Over Q a squarefree primitive integer
polynomial is factored modulo a good prime, Hensel lifted along a binary
factor tree and recombined by subset search.  Over Q(sqrt d) Trager's norm
trick reduces to Q.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from sympy import nextprime

from . import _dense
from .fields import Elem, FiniteField, PrimeField, QuadraticRationals, Rationals
from .poly import Poly
from ..errors import FactorizationBoundError, PreconditionError, UnsupportedFieldError

DEFAULT_QQ_DEGREE_BOUND = 24
DEFAULT_SEED = 0


@dataclass(frozen=True)
class Factorization:
    unit: Elem
    factors: tuple  # ((monic irreducible Poly, multiplicity), ...)

    def expand(self) -> Poly:
        field = self.unit.field
        out = Poly.const(field, self.unit)
        for g, e in self.factors:
            out = out * g ** e
        return out

    def irreducibles(self) -> list:
        return [g for g, _ in self.factors]

    @property
    def count(self) -> int:
        return len(self.factors)

    def degrees(self) -> list:
        return sorted(g.degree for g, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)


def factor(f: Poly, seed: int = DEFAULT_SEED, bound: int = DEFAULT_QQ_DEGREE_BOUND) -> Factorization:
    if f.is_zero():
        raise PreconditionError("cannot factor the zero polynomial")
    return _factor_cached(f, seed, bound)


@lru_cache(maxsize=65536)
def _factor_cached(f: Poly, seed: int, bound: int) -> Factorization:
    K = f.field
    unit = f.lc()
    if f.degree == 0:
        return Factorization(unit, ())
    g = list(f.monic().coeffs)
    if isinstance(K, FiniteField):
        rng = random.Random(seed)
        raw = []
        for h, e in _sqf_finite(g, K):
            raw.extend((p, e) for p in _factor_sqf_finite(h, K, rng))
    elif isinstance(K, Rationals):
        if f.degree > bound:
            raise FactorizationBoundError(
                f"degree {f.degree} exceeds the factorization bound {bound} over Q")
        raw = []
        for h, e in _sqf_char0(g, K):
            raw.extend((p, e) for p in _factor_sqf_rational(h))
    elif isinstance(K, QuadraticRationals):
        if 2 * f.degree > bound:
            raise FactorizationBoundError(
                f"norm degree {2 * f.degree} exceeds the factorization bound {bound} over Q")
        raw = []
        for h, e in _sqf_char0(g, K):
            raw.extend((p, e) for p in _factor_sqf_quadratic(h, K, bound))
    else:
        raise UnsupportedFieldError(f"factorization over {K} is not supported")
    factors = sorted(((Poly(K, p), e) for p, e in raw), key=lambda t: (t[0].degree, str(t[0]), t[1]))
    return Factorization(unit, tuple(factors))


def is_irreducible(f: Poly, seed: int = DEFAULT_SEED) -> bool:
    fac = factor(f, seed)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1 and f.degree >= 1


# ---------------------------------------------------------------------------
# squarefree decomposition

def _sqf_char0(f, K):
    """Yun's algorithm; f monic."""
    out = []
    fp = _dense.deriv(f, K)
    a = _dense.gcd(f, fp, K)
    b = _dense.divmod_(f, a, K)[0]
    c = _dense.divmod_(fp, a, K)[0]
    d = _dense.sub(c, _dense.deriv(b, K), K)
    i = 1
    while len(b) > 1:
        a = _dense.gcd(b, d, K)
        b = _dense.divmod_(b, a, K)[0]
        c = _dense.divmod_(d, a, K)[0]
        d = _dense.sub(c, _dense.deriv(b, K), K)
        if len(a) > 1:
            out.append((a, i))
        i += 1
    return out


def _poly_pth_root(f, K):
    p = K.characteristic
    return [K.pth_root(f[i]) for i in range(0, len(f), p)]


def _sqf_finite(f, K):
    """Squarefree decomposition in characteristic p; f monic."""
    out = []
    p = K.characteristic
    fp = _dense.deriv(f, K)
    if not fp:
        return [(g, e * p) for g, e in _sqf_finite(_poly_pth_root(f, K), K)]
    c = _dense.gcd(f, fp, K)
    w = _dense.divmod_(f, c, K)[0]
    i = 1
    while len(w) > 1:
        y = _dense.gcd(w, c, K)
        z = _dense.divmod_(w, y, K)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = _dense.divmod_(c, y, K)[0]
    if len(c) > 1:
        out.extend((g, e * p) for g, e in _sqf_finite(_poly_pth_root(c, K), K))
    merged = {}
    for g, e in out:
        merged[tuple(g)] = merged.get(tuple(g), 0) + e
    return [(list(g), e) for g, e in merged.items()]


# ---------------------------------------------------------------------------
# finite fields

def _factor_sqf_finite(f, K, rng):
    out = []
    for g, d in _ddf(f, K):
        out.extend(_edf(g, d, K, rng))
    return out


def _ddf(f, K):
    x = [K.zero, K.one]
    q = K.order
    h = x
    out = []
    d = 0
    while 2 * (d + 1) <= len(f) - 1:
        d += 1
        h = _dense.powmod(h, q, f, K)
        g = _dense.gcd(f, _dense.sub(h, x, K), K)
        if len(g) > 1:
            out.append((g, d))
            f = _dense.divmod_(f, g, K)[0]
            h = _dense.rem(h, f, K)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(f, d, K, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    e = (K.order ** d - 1) // 2
    while True:
        a = _dense.strip([K.random(rng) for _ in range(n)], K)
        if len(a) < 2:
            continue
        b = _dense.sub(_dense.powmod(a, e, f, K), [K.one], K)
        g = _dense.gcd(f, b, K)
        if 1 < len(g) < len(f):
            return _edf(g, d, K, rng) + _edf(_dense.divmod_(f, g, K)[0], d, K, rng)


# ---------------------------------------------------------------------------
# integer polynomial helpers (lists of ints, low degree first)

def _istrip(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def _imul(a, b, m=None):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    if m is not None:
        out = [c % m for c in out]
    return _istrip(out)


def _isub(a, b, m):
    n = max(len(a), len(b))
    return _istrip([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _iadd(a, b, m):
    n = max(len(a), len(b))
    return _istrip([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _idivmod_monic(a, b, m):
    """Division by a monic b modulo m."""
    a = [c % m for c in a]
    db = len(b) - 1
    if len(a) <= db:
        return [], _istrip(a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] % m
        if c:
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % m
    return _istrip(q), _istrip(a[:db])


def _symmetric(a, m):
    half = m // 2
    return _istrip([c - m if c > half else c for c in (x % m for x in a)])


def _content(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _primitive_integer(f):
    """Rational monic list -> primitive integer list with positive lc."""
    den = 1
    for c in f:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    g = _content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _iexact_div(a, b):
    """Exact division over Z, or None."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return None if a else []
    q = [0] * (len(a) - db)
    lb = b[-1]
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c % lb:
            return None
        c //= lb
        q[k - db] = c
        if c:
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    if any(a[:db]):
        return None
    return _istrip(q)


# ---------------------------------------------------------------------------
# Hensel lifting

def _hensel_step(f, g, h, s, t, m):
    """One quadratic lift: f = g*h, s*g + t*h = 1 mod m  ->  same mod m^2 (h monic)."""
    m2 = m * m
    e = _isub(f, _imul(g, h, m2), m2)
    q, r = _idivmod_monic(_imul(s, e, m2), h, m2)
    g1 = _iadd(_iadd(g, _imul(t, e, m2), m2), _imul(q, g, m2), m2)
    h1 = _iadd(h, r, m2)
    b = _isub(_iadd(_imul(s, g1, m2), _imul(t, h1, m2), m2), [1], m2)
    c, d = _idivmod_monic(_imul(s, b, m2), h1, m2)
    s1 = _isub(s, d, m2)
    t1 = _isub(_isub(t, _imul(t, b, m2), m2), _imul(c, g1, m2), m2)
    return g1, h1, s1, t1


def _multifactor_lift(f, factors, p, k):
    """Lift f = lc * prod(factors) mod p to mod p^k; factors monic."""
    if len(factors) == 1:
        M = p ** k
        inv = pow(f[-1], -1, M)
        return [[c * inv % M for c in f]]
    K = PrimeField(p)
    half = len(factors) // 2
    lc = f[-1] % p
    g = [lc]
    for fa in factors[:half]:
        g = _dense.mul(g, fa, K)
    h = [1]
    for fa in factors[half:]:
        h = _dense.mul(h, fa, K)
    one, s, t = _dense.gcdex(g, h, K)
    assert one == [1]
    m = p
    j = 1
    while j < k:
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m *= m
        j *= 2
    M = p ** k
    g = [c % M for c in g]
    h = [c % M for c in h]
    return _multifactor_lift(g, factors[:half], p, k) + _multifactor_lift(h, factors[half:], p, k)


def _good_primes(F, count=5):
    lc = F[-1]
    dF = _dense.deriv([Fraction(c) for c in F], Rationals())
    p = 2
    found = 0
    while found < count:
        p = nextprime(p)
        if lc % p == 0:
            continue
        K = PrimeField(p)
        fp = _dense.strip([c % p for c in F], K)
        dp = _dense.strip([int(c) % p for c in dF], K)
        if len(dp) == 0 or _dense.gcd(fp, dp, K) != [1]:
            continue
        found += 1
        yield p, K, fp


def _factor_sqf_rational(f):
    """f monic squarefree over Q (list of Fractions) -> monic irreducible factors."""
    if len(f) <= 2:
        return [f]
    F = _primitive_integer(f)
    n = len(F) - 1
    rng = random.Random(n)
    best = None
    for p, K, fp in _good_primes(F):
        mods = _factor_sqf_finite(_dense.monic(fp, K), K, rng)
        if best is None or len(mods) < len(best[1]):
            best = (p, mods)
        if len(mods) == 1:
            return [f]
    p, mods = best
    norm2 = math.isqrt(sum(c * c for c in F)) + 1
    bound = 2 * abs(F[-1]) * (2 ** n) * norm2
    k = 1
    while p ** k <= bound:
        k += 1
    M = p ** k
    lifted = _multifactor_lift(F, [list(m) for m in mods], p, k)
    return [_to_monic_rational(g) for g in _recombine(F, lifted, M)]


def _recombine(F, lifted, M):
    factors = []
    remaining = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(remaining):
        found = False
        for S in combinations(remaining, size):
            lc = F[-1]
            g = [lc % M]
            for i in S:
                g = _imul(g, lifted[i], M)
            g = _symmetric(g, M)
            cg = _content(g)
            g = [c // cg for c in g]
            q = _iexact_div(F, g)
            if q is None:
                continue
            factors.append(g)
            F = q
            remaining = [i for i in remaining if i not in S]
            found = True
            break
        if not found:
            size += 1
    factors.append(F)
    return factors


def _to_monic_rational(g):
    lc = g[-1]
    return [Fraction(c, lc) for c in g]


# ---------------------------------------------------------------------------
# Q(sqrt d) via Trager

def _split_quadratic(f, K):
    return [c[0] for c in f], [c[1] for c in f]


def _factor_sqf_quadratic(f, K, bound):
    if len(f) <= 2:
        return [f]
    Q = Rationals()
    for shift in range(0, 64):
        # g(x) = f(x - shift*sqrt d)
        g = _dense.compose(f, [K.convert((0, -shift)), K.one], K)
        g0, g1 = _split_quadratic(g, K)
        g0, g1 = _dense.strip(g0, Q), _dense.strip(g1, Q)
        norm = _dense.sub(_dense.mul(g0, g0, Q), _dense.scale(_dense.mul(g1, g1, Q), Fraction(K.d), Q), Q)
        if len(norm) - 1 > bound:
            raise FactorizationBoundError(f"norm degree {len(norm) - 1} exceeds the factorization bound {bound}")
        if _dense.gcd(norm, _dense.deriv(norm, Q), Q) != [Fraction(1)]:
            continue
        out = []
        back = [K.convert((0, shift)), K.one]
        for h in _factor_sqf_rational(_dense.monic(norm, Q)):
            hk = [K.from_rational(c) for c in h]
            common = _dense.gcd(g, hk, K)
            if len(common) > 1:
                out.append(_dense.monic(_dense.compose(common, back, K), K))
        return out
    raise AssertionError("no separating shift found for the Trager norm")
