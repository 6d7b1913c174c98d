"""Triples A^2 P + B^2 Q = C^2 and the rational parametrization they give.

A triple makes z^2 = P y^2 + Q rational over k(x): with u = (Bz + C)/(By + A),

    y = (-A u^2 + 2 C u - A P) / (B (u^2 - P))
    z = (C u^2 - 2 A P u + C P) / (B (u^2 - P)).

Two triples give the fiber map u -> u1 = (D u + E P)/(E u + D); its
exceptional fibers sit over zeros of B B1 P Q and possibly at infinity.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import product

from .algebra.factor import factor
from .algebra.fields import Elem, FiniteField, PrimeField, Rationals
from .algebra.poly import Poly
from .errors import ConsistencyError, PreconditionError

RETRY_BUDGET = 64


@dataclass(frozen=True)
class Triple:
    A: Poly
    B: Poly
    C: Poly
    P: Poly | None = dc_field(default=None, compare=False, repr=False)
    Q: Poly | None = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.P is not None and self.Q is not None and not verify_triple(self.P, self.Q, self):
            raise PreconditionError(f"A^2 P + B^2 Q != C^2 for ({self.A}, {self.B}, {self.C})")

    def register(self, P: Poly, Q: Poly) -> "Triple":
        return Triple(self.A, self.B, self.C, P, Q)

    def scaled(self, c) -> "Triple":
        return Triple(self.A * c, self.B * c, self.C * c, self.P, self.Q)

    def to_dict(self) -> dict:
        return {"A": str(self.A), "B": str(self.B), "C": str(self.C)}


def verify_triple(P: Poly, Q: Poly, t: Triple) -> bool:
    return (t.A * t.A * P + t.B * t.B * Q - t.C * t.C).is_zero()


# -- polynomials in u with coefficients in k[x] ----------------------------------

def _u_strip(a):
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return tuple(a)


def _u_add(a, b, K):
    n = max(len(a), len(b))
    z = Poly(K)
    return _u_strip((a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n))


def _u_neg(a):
    return tuple(-c for c in a)


def _u_mul(a, b, K):
    if not a or not b:
        return ()
    out = [Poly(K)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _u_strip(out)


def _u_scale(a, p: Poly):
    return _u_strip(c * p for c in a)


def _u_eval(a, x0, u0, K):
    acc = Elem(K, K.zero)
    for c in reversed(a):
        acc = acc * u0 + c(x0)
    return acc


def _u_str(a) -> str:
    terms = []
    for i, c in enumerate(a):
        if c.is_zero():
            continue
        mono = "" if i == 0 else ("*u" if i == 1 else f"*u^{i}")
        terms.append(f"({c}){mono}")
    return " + ".join(terms) or "0"


@dataclass(frozen=True)
class RationalFunction:
    num: tuple  # coefficients in u, each a Poly in x
    den: tuple

    def evaluate(self, x0: Elem, u0: Elem):
        K = x0.field
        d = _u_eval(self.den, x0, u0, K)
        if d.is_zero():
            return None
        return _u_eval(self.num, x0, u0, K) / d

    def __str__(self):
        return f"[{_u_str(self.num)}] / [{_u_str(self.den)}]"


@dataclass(frozen=True)
class BiRational:
    y: RationalFunction
    z: RationalFunction
    triple: Triple

    def evaluate(self, x0: Elem, u0: Elem):
        y, z = self.y.evaluate(x0, u0), self.z.evaluate(x0, u0)
        if y is None or z is None:
            return None
        return y, z

    def recover_u(self, x0: Elem, y: Elem, z: Elem):
        t = self.triple
        den = t.B(x0) * y + t.A(x0)
        if den.is_zero():
            return None
        return (t.B(x0) * z + t.C(x0)) / den

    def to_dict(self) -> dict:
        return {"y": str(self.y), "z": str(self.z), "u": "(B*z + C)/(B*y + A)", **self.triple.to_dict()}


def _content_reduce(num, den):
    g = Poly(den[0].field)
    for c in num + den:
        g = g.gcd(c)
        if g.degree == 0:
            return num, den
    return tuple(c.exquo(g) for c in num), tuple(c.exquo(g) for c in den)


def parametrize(P: Poly, Q: Poly, t: Triple) -> BiRational:
    if t.B.is_zero():
        raise PreconditionError("B must be nonzero to parametrize")
    if not verify_triple(P, Q, t):
        raise PreconditionError("the triple does not satisfy A^2 P + B^2 Q = C^2")
    K = P.field
    A, B, C = t.A, t.B, t.C
    zero = Poly(K)
    den = _u_strip((-(B * P), zero, B))
    yn = _u_strip((-(A * P), C * 2, -A))
    zn = _u_strip((C * P, -(A * P) * 2, C))
    # identities as polynomials in (x, u): zn^2 - P yn^2 - Q den^2 = 0 and u (B yn + A den) = B zn + C den
    lhs = _u_add(_u_mul(zn, zn, K), _u_neg(_u_scale(_u_mul(yn, yn, K), P)), K)
    lhs = _u_add(lhs, _u_neg(_u_scale(_u_mul(den, den, K), Q)), K)
    if lhs:
        raise ConsistencyError("parametrization does not satisfy z^2 = P y^2 + Q")
    back_den = _u_add(_u_scale(yn, B), _u_scale(den, A), K)
    back_num = _u_add(_u_scale(zn, B), _u_scale(den, C), K)
    if _u_add(_u_mul((zero, Poly.const(K, K.one)), back_den, K), _u_neg(back_num), K):
        raise ConsistencyError("u = (Bz + C)/(By + A) does not invert the parametrization")
    yn_r, yd_r = _content_reduce(yn, den)
    zn_r, zd_r = _content_reduce(zn, den)
    return BiRational(RationalFunction(yn_r, yd_r), RationalFunction(zn_r, zd_r), t.register(P, Q))


# -- evolution and normalization ----------------------------------------------------

def evolve_triple(t: Triple, f: Poly, Q: Poly) -> Triple:
    A, B, C = t.A, t.B, t.C
    f2 = f * f
    A1 = A * (f2 - Q)
    B1 = B * f2 + C * f * 2 + B * Q
    C1 = C * f2 + B * Q * f * 2 + C * Q
    out = Triple(A1, B1, C1)
    if t.P is not None:
        if not verify_triple(t.P, Q, out):
            raise ConsistencyError("evolved triple fails A^2 P + B^2 Q = C^2")
        out = out.register(t.P, Q)
    return out


def _divide_gcd(t: Triple) -> Triple:
    g = t.A.gcd(t.B).gcd(t.C)
    if g.degree <= 0:
        return t
    return Triple(t.A.exquo(g), t.B.exquo(g), t.C.exquo(g), t.P, t.Q)


def _monic(t: Triple) -> Triple:
    return t.scaled(t.B.lc().inverse())


def triple_conditions(t: Triple, P: Poly, Q: Poly) -> dict:
    A, B, C = t.A, t.B, t.C
    target = max(P.degree, Q.degree) + 1
    return {
        "coprime": all(x.gcd(y).degree == 0 for x, y in ((A, B), (A, C), (B, C))),
        "deg_B": B.degree > target,
        "B_Q_coprime": B.gcd(Q).degree == 0,
        "B_squarefree": B.is_squarefree(),
        "B_monic": B.lc() == 1,
    }


def _random_scalar(K, rng):
    if isinstance(K, FiniteField):
        while True:
            a = K.random(rng)
            if a != K.zero:
                return Elem(K, a)
    return K(rng.choice([i for i in range(-20, 21) if i]))


def normalize_triple(t: Triple, P: Poly, Q: Poly, seed: int = 0) -> Triple:
    """Evolve t until A, B, C are pairwise coprime, deg B > max(deg P, deg Q) + 1,
    gcd(B, Q) = 1, B squarefree and monic."""
    if not verify_triple(P, Q, t):
        raise PreconditionError("the triple does not satisfy A^2 P + B^2 Q = C^2")
    K = P.field
    rng = random.Random(seed)
    t = _divide_gcd(t.register(P, Q))
    target = max(P.degree, Q.degree) + 1
    attempts = 0

    def ok(c):
        return all(c.values())

    # deg B large, with B and C coprime
    n0 = max(1, (target - t.B.degree) // 2 + 1, Q.degree // 2 + 1, t.C.degree - t.B.degree + 1)
    while t.B.degree <= target:
        if attempts >= RETRY_BUDGET:
            raise PreconditionError(f"normalize_triple: retry budget {RETRY_BUDGET} exhausted raising deg B")
        n = n0 + 2 * (attempts // 8)
        f = Poly.monomial(K, _random_scalar(K, rng).value, n)
        cand = _divide_gcd(evolve_triple(t, f, Q))
        attempts += 1
        if cand.B.degree > target and cand.B.gcd(cand.C).degree == 0:
            t = cand
    # constants alpha until gcd(B, Q) = 1 and B is squarefree
    while True:
        c = triple_conditions(_monic(t), P, Q)
        if ok(c):
            return _monic(t)
        if attempts >= RETRY_BUDGET:
            bad = [k for k, v in c.items() if not v]
            raise PreconditionError(f"normalize_triple: retry budget {RETRY_BUDGET} exhausted ({', '.join(bad)})")
        cand = _divide_gcd(evolve_triple(t, Poly.const(K, _random_scalar(K, rng)), Q))
        attempts += 1
        cc = triple_conditions(_monic(cand), P, Q)
        if cc["deg_B"] and cc["coprime"]:
            t = cand


# -- the fiber map between two triples ----------------------------------------------

@dataclass(frozen=True)
class InvolutionData:
    D: Poly
    E: Poly

    def to_dict(self) -> dict:
        return {"D": str(self.D), "E": str(self.E)}


def involution(t1: Triple, t2: Triple, P: Poly) -> InvolutionData:
    """(D, E) with u2 = (D u1 + E P)/(E u1 + D), u_i = (B_i z + C_i)/(B_i y + A_i)."""
    A, B, C = t1.A, t1.B, t1.C
    A1, B1, C1 = t2.A, t2.B, t2.C
    n1, d1 = B1 * C + B * C1, A1 * B - A * B1
    n2, d2 = (A1 * B + A * B1) * P, B * C1 - B1 * C
    if not (n1.is_zero() and d1.is_zero()):
        num, den = n1, d1
    elif not (n2.is_zero() and d2.is_zero()):
        num, den = n2, d2
    else:
        raise ConsistencyError("both defining fractions for D/E are 0/0")
    g = num.gcd(den)
    D, E = num.exquo(g), den.exquo(g)
    unit = D.lc() if not D.is_zero() else E.lc()
    D, E = D * unit.inverse(), E * unit.inverse()
    for nn, dd in ((n1, d1), (n2, d2)):
        if not (D * dd - E * nn).is_zero():
            raise ConsistencyError("D/E fails one of the cross-ratio identities")
    if D.gcd(E).degree > 0:
        raise ConsistencyError("D and E are not coprime")
    return InvolutionData(D, E)


def compose_involutions(i1: InvolutionData, i2: InvolutionData, P: Poly):
    """Matrix of u -> T2(T1(u)) as ((a, b), (c, d)) meaning (a u + b)/(c u + d)."""
    m1 = ((i1.D, i1.E * P), (i1.E, i1.D))
    m2 = ((i2.D, i2.E * P), (i2.E, i2.D))
    return tuple(tuple(m2[i][0] * m1[0][j] + m2[i][1] * m1[1][j] for j in range(2)) for i in range(2))


# -- exceptional fibers --------------------------------------------------------------

P_ZERO_SIGN = "PZero-sign"
COMMON_ZERO_SIGN = "CommonZero-sign"
Q_ZERO_SIGN = "QZero-sign"
B_ZERO_ONE_SIDED = "BZero-one-sided"
B_ZERO_BOTH = "BZero-both-order2"
NOT_EXCEPTIONAL = "NotExceptional"

MAPS_TO_F_INF = "MapsToF∞"
CASE_I = "Case(i)"
CASE_II = "Case(ii)"
CASE_III = "Case(iii)"


@dataclass(frozen=True)
class FiberClassification:
    finite: tuple  # ((m, tag), ...)
    infinity: str

    def exceptional(self) -> list:
        return [(m, tag) for m, tag in self.finite if tag != NOT_EXCEPTIONAL]

    def to_dict(self) -> dict:
        return {"finite": [[str(m), tag] for m, tag in self.finite], "infinity": self.infinity}


def _vanishes(f: Poly, m: Poly) -> bool:
    return (f % m).is_zero()


def exceptional_fibers(inv: InvolutionData, P: Poly, Q: Poly, t1: Triple, t2: Triple,
                       seed: int = 0) -> FiberClassification:
    A, B, C = t1.A, t1.B, t1.C
    A1, B1, C1 = t2.A, t2.B, t2.C
    W = inv.D * inv.D - inv.E * inv.E * P
    bound = B * B * B1 * B1 * P * Q * 2
    if W.is_zero():
        raise ConsistencyError("D^2 - E^2 P vanishes identically")
    if not W.divides(bound):
        raise ConsistencyError("D^2 - E^2 P does not divide 2 B^2 B1^2 P Q")
    exc = set(factor(W, seed).irreducibles()) if W.degree > 0 else set()
    places = sorted(set(factor(B * B1 * P * Q, seed).irreducibles()), key=lambda m: (m.degree, str(m)))
    out = []
    for m in places:
        inP, inQ, inB, inB1 = (m.divides(X) for X in (P, Q, B, B1))
        if inB or inB1:
            if inB != inB1:
                tag, predicted = B_ZERO_ONE_SIDED, True
            else:
                tag, predicted = B_ZERO_BOTH, _vanishes(C * A1 + C1 * A, m)
        elif inP and inQ:
            tag, predicted = COMMON_ZERO_SIGN, _vanishes(A * B1 + A1 * B, m)
        elif inP:
            tag, predicted = P_ZERO_SIGN, _vanishes(C * B1 + C1 * B, m)
        else:
            tag, predicted = Q_ZERO_SIGN, _vanishes(C * A1 + C1 * A, m)
        actual = m in exc
        if predicted != actual:
            raise ConsistencyError(f"fiber over {m}: predicted exceptional={predicted}, found {actual}")
        out.append((m, tag if actual else NOT_EXCEPTIONAL))
    stray = [m for m in exc if m not in places]
    if stray:
        raise ConsistencyError(f"exceptional fibers outside the zeros of B B1 P Q: {stray}")
    dP, dQ = P.degree % 2, Q.degree % 2
    a0, c0, a10, c10 = A.lc(), C.lc(), A1.lc(), C1.lc()
    if dP == 0 and dQ == 1 and a0 / c0 == -(a10 / c10):
        inf = CASE_I
    elif dP == 1 and dQ == 0 and c0 == -c10:
        inf = CASE_II
    elif dP == 1 and dQ == 1 and a0 == -a10:
        inf = CASE_III
    else:
        inf = MAPS_TO_F_INF
    return FiberClassification(tuple(out), inf)


# -- bounded search -------------------------------------------------------------------

def poly_sqrt(f: Poly):
    """Square root in k[x] computed from the top coefficient down, or None."""
    K = f.field
    if f.is_zero():
        return f
    if f.degree % 2:
        return None
    n = f.degree // 2
    r = K.sqrt(f.coeffs[-1])
    if r is None:
        return None
    r = _canonical_root(K, r)
    s = [K.zero] * (n + 1)
    s[n] = r
    two_r = K.mul(K.from_int(2), r)
    for k in range(n - 1, -1, -1):
        acc = f.coeffs[n + k]
        for i in range(k + 1, n):
            j = n + k - i
            if k < j <= n:
                acc = K.sub(acc, K.mul(s[i], s[j]))
        s[k] = K.div(acc, two_r)
    g = Poly(K, s)
    return g if g * g == f else None


def _canonical_root(K, r):
    if isinstance(K, PrimeField):
        return min(r, (-r) % K.p)
    if isinstance(K, Rationals):
        return abs(r)
    return r


def _polys(K, deg, box):
    if isinstance(K, FiniteField):
        total = K.order ** (deg + 1)
        for idx in range(total):
            coeffs, i = [], idx
            for _ in range(deg + 1):
                i, r = divmod(i, K.order)
                coeffs.append(K.element_from_index(r))
            yield Poly(K, coeffs)
    else:
        vals = sorted(range(-box, box + 1), key=lambda v: (abs(v), v < 0))
        for cs in product(vals, repeat=deg + 1):
            yield Poly.from_ints(K, list(cs))


def search_triple(P: Poly, Q: Poly, degA: int, degB: int, box: int = 3):
    """First (A, B, C) in lexicographic scan order with A^2 P + B^2 Q = C^2, or None."""
    K = P.field
    if not isinstance(K, (FiniteField, Rationals)):
        raise PreconditionError(f"search_triple supports finite fields and Q, not {K}")
    Bs = [B for B in _polys(K, degB, box) if not B.is_zero()]
    for A in _polys(K, degA, box):
        if A.is_zero():
            continue
        AP = A * A * P
        for B in Bs:
            C = poly_sqrt(AP + B * B * Q)
            if C is not None:
                return Triple(A, B, C, P, Q)
    return None
