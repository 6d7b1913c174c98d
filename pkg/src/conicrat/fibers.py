"""Degenerate fibers of z^2 = P(x) y^2 + Q(x) and the s-invariant.

A closed point of the x-line with minimal polynomial m carries a degenerate
fiber when m divides P or Q.  The fiber contributes deg m to s when the
relevant test value is a nonsquare in k(c):

* P(c) = 0, Q(c) != 0  -> Q(c)                   (s1)
* Q(c) = 0, P(c) != 0  -> P(c)                   (s2)
* P(c) = Q(c) = 0      -> -(Q/m)(c) / (P/m)(c)   (s3)

and the point at infinity contributes 1 (s4) depending on the parities of
deg P, deg Q and the squareness of p0, q0 or -q0/p0.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from sympy import primefactors

from .algebra.factor import factor
from .algebra.fields import Elem, FiniteField, QuotientField, first_irreducible
from .algebra.poly import Poly
from .algebra.residue import residue
from .errors import PreconditionError, UnsupportedFieldError

AT_INFINITY = "AtInfinity"

P_ZERO = "PZero"
Q_ZERO = "QZero"
COMMON_ZERO = "CommonZero"
INFINITY = "Infinity"


@dataclass(frozen=True)
class DegenerateFiber:
    place: object  # monic irreducible Poly, or AT_INFINITY
    kind: str
    residue: Elem
    contributes: bool
    weight: int
    # representative of the square class of the residue inside k, when the
    # residue field is quadratic and the norm of the residue is a square
    base_class: Elem | None = None
    disc: Elem | None = None

    def to_dict(self) -> dict:
        return {
            "place": self.place if self.place == AT_INFINITY else str(self.place),
            "kind": self.kind,
            "residue": str(self.residue),
            "contributes": self.contributes,
            "weight": self.weight,
        }


@dataclass(frozen=True)
class SInvariant:
    s1: int
    s2: int
    s3: int
    s4: int
    fibers: tuple = ()
    pi1: Elem | None = None
    pi1_candidates: tuple = dc_field(default=())

    @property
    def total(self) -> int:
        return self.s1 + self.s2 + self.s3 + self.s4

    def counts(self) -> tuple:
        return self.s1, self.s2, self.s3, self.s4

    def contributing(self) -> list:
        return [f for f in self.fibers if f.contributes]

    def to_dict(self) -> dict:
        out = {"s1": self.s1, "s2": self.s2, "s3": self.s3, "s4": self.s4, "total": self.total,
               "fibers": [f.to_dict() for f in self.fibers]}
        if self.pi1_candidates:
            out["pi1_candidates"] = [str(e) for e in self.pi1_candidates]
        return out


def check_pair(P: Poly, Q: Poly) -> None:
    if P.field != Q.field:
        raise PreconditionError("P and Q must share a coefficient field")
    if P.is_zero() or Q.is_zero():
        raise PreconditionError("P and Q must be nonzero")
    if P.degree < 1 or Q.degree < 1:
        raise PreconditionError("P and Q must both have degree >= 1")
    if not P.is_squarefree():
        raise PreconditionError(f"P = {P} is not separable")
    if not Q.is_squarefree():
        raise PreconditionError(f"Q = {Q} is not separable")
    if P * Q.lc() == Q * P.lc():
        raise PreconditionError("P/Q is constant")


def s_invariant(P: Poly, Q: Poly, seed: int = 0) -> SInvariant:
    check_pair(P, Q)
    K = P.field
    G = P.gcd(Q)
    fibers = []
    for m in factor(P, seed).irreducibles():
        if G.degree >= 1 and m.divides(G):
            continue
        r = residue(m, Q)
        fibers.append(DegenerateFiber(m, P_ZERO, r.value, not r.is_square, m.degree, r.base_class, r.disc))
    for m in factor(Q, seed).irreducibles():
        if G.degree >= 1 and m.divides(G):
            continue
        r = residue(m, P)
        fibers.append(DegenerateFiber(m, Q_ZERO, r.value, not r.is_square, m.degree, r.base_class, r.disc))
    if G.degree >= 1:
        for m in factor(G, seed).irreducibles():
            Pt, Qt = P.exquo(m), Q.exquo(m)
            g, s, _ = (Pt % m).gcdex(m)
            assert g.degree == 0
            value = (-(Qt * s)) % m
            r = residue(m, value)
            fibers.append(DegenerateFiber(m, COMMON_ZERO, r.value, not r.is_square, m.degree,
                                          r.base_class, r.disc))
    inf = _infinity_fiber(P, Q)
    if inf is not None:
        fibers.append(inf)
    sums = {P_ZERO: 0, Q_ZERO: 0, COMMON_ZERO: 0, INFINITY: 0}
    for f in fibers:
        if f.contributes:
            sums[f.kind] += f.weight
    pi1, cands = _pi1(fibers, K)
    return SInvariant(sums[P_ZERO], sums[Q_ZERO], sums[COMMON_ZERO], sums[INFINITY],
                      tuple(fibers), pi1, cands)


def _infinity_fiber(P: Poly, Q: Poly):
    K = P.field
    p0, q0 = P.lc(), Q.lc()
    dp, dq = P.degree % 2, Q.degree % 2
    if dp == 0 and dq == 1:
        v = p0
    elif dp == 1 and dq == 0:
        v = q0
    elif dp == 1 and dq == 1:
        v = -q0 / p0
    else:
        return None
    return DegenerateFiber(AT_INFINITY, INFINITY, v, not K.is_square(v.value), 1, v)


def _pi1(fibers, K):
    """Candidate square classes in k for the s = 2 extension k(sqrt pi1).

    Only meaningful when s = 2 comes from a single quadratic orbit: the
    residue then lies in e * k(c)^2 for some e in k, determined up to the
    discriminant of k(c), so both e and e*disc are returned.
    """
    contrib = [f for f in fibers if f.contributes]
    if len(contrib) != 1 or contrib[0].weight != 2:
        return None, ()
    f = contrib[0]
    if f.base_class is None or f.disc is None:
        return None, ()
    e = f.base_class
    return e, (e, e * f.disc)


# ---------------------------------------------------------------------------
# brute-force oracle over finite fields

def s_invariant_bruteforce(P: Poly, Q: Poly, max_ext_degree: int) -> SInvariant:
    """Pointwise recount over every F_{q^d}, d <= max_ext_degree."""
    K = P.field
    if not isinstance(K, FiniteField):
        raise UnsupportedFieldError("the brute-force oracle needs a finite base field")
    check_pair(P, Q)
    needed = max(g.degree for g in factor(P * Q).irreducibles())
    if needed > max_ext_degree:
        raise PreconditionError(
            f"extension bound {max_ext_degree} too small: P*Q has an irreducible factor of degree {needed}")
    counts = [0, 0, 0, 0]
    for d in range(1, max_ext_degree + 1):
        Z = _zech_table(K, d)
        Pl, Ql = Z.lift(P.coeffs), Z.lift(Q.coeffs)
        dPl = [Z.scale_int(i, Pl[i]) for i in range(1, len(Pl))]
        dQl = [Z.scale_int(i, Ql[i]) for i in range(1, len(Ql))]
        for c in Z.elements_of_exact_degree(d):
            pc, qc = Z.ev(Pl, c), Z.ev(Ql, c)
            if pc is None and qc is None:
                # -Q~/P~ at a simple common root equals -Q'(c)/P'(c)
                v = Z.neg(Z.div(Z.ev(dQl, c), Z.ev(dPl, c)))
                counts[2] += not Z.is_square(v)
            elif pc is None:
                counts[0] += not Z.is_square(qc)
            elif qc is None:
                counts[1] += not Z.is_square(pc)
    counts[3] = _infinity_direct(P, Q)
    return SInvariant(*counts)


class _ZechTable:
    """F_{q^d} in logarithmic form: an element is its discrete log, zero is None."""

    def __init__(self, K: FiniteField, d: int):
        E = K if d == 1 else QuotientField(K, first_irreducible(K, d))
        self.q = K.order
        self.d = d
        N = E.order - 1
        self.N = N
        g = _primitive_element(E, N)
        log = {}
        x = E.one
        for i in range(N):
            log[x] = i
            x = E.mul(x, g)
        self.log = log
        self.zech = [None] * N  # log(1 + g^n)
        x = E.one
        for n in range(N):
            y = E.add(E.one, x)
            self.zech[n] = None if y == E.zero else log[y]
            x = E.mul(x, g)
        self.minus_one = log[E.neg(E.one)]
        self.embed = (lambda c: c) if d == 1 else E.from_base
        self.K = K

    def lift(self, coeffs):
        return [None if c == self.K.zero else self.log[self.embed(c)] for c in coeffs]

    def add(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        z = self.zech[(b - a) % self.N]
        return None if z is None else (a + z) % self.N

    def mul(self, a, b):
        if a is None or b is None:
            return None
        return (a + b) % self.N

    def neg(self, a):
        return None if a is None else (a + self.minus_one) % self.N

    def div(self, a, b):
        if b is None:
            raise ZeroDivisionError("division by zero in the oracle field")
        return None if a is None else (a - b) % self.N

    def scale_int(self, n, a):
        acc = None
        for _ in range(n % self.K.characteristic):
            acc = self.add(acc, a)
        return acc

    def is_square(self, a):
        return a is None or a % 2 == 0

    def ev(self, coeffs, c):
        acc = None
        for a in reversed(coeffs):
            acc = self.add(self.mul(acc, c), a)
        return acc

    def elements_of_exact_degree(self, d):
        # g^i lies in F_{q^j} iff (q^d - 1)/(q^j - 1) divides i
        steps = [self.N // (self.q ** j - 1) for j in range(1, d) if d % j == 0]
        if d == 1:
            yield None
        for i in range(self.N):
            if not any(i % s == 0 for s in steps):
                yield i


def _primitive_element(E, N):
    ps = primefactors(N) if N > 1 else []
    for x in E.elements():
        if x == E.zero:
            continue
        if all(E.pow(x, N // r) != E.one for r in ps):
            return x
    raise AssertionError("no primitive element")


@lru_cache(maxsize=64)
def _zech_table(K, d):
    return _ZechTable(K, d)


def _infinity_direct(P, Q):
    # fiber at infinity from the substitution x = 1/t: P~(t) = t^(2n) P(1/t), etc.
    K = P.field
    dp, dq = P.degree, Q.degree
    p0, q0 = P.coeffs[-1], Q.coeffs[-1]
    n = max(dp, dq)
    n += n % 2
    # z^2 = t^(n-dp) p0 y^2 + t^(n-dq) q0 at t -> 0 after rescaling
    ep, eq = (n - dp) % 2, (n - dq) % 2
    if ep == 0 and eq == 0:
        return 0
    if ep == 1 and eq == 0:
        return int(not K.is_square(q0))
    if ep == 0 and eq == 1:
        return int(not K.is_square(p0))
    return int(not K.is_square(K.neg(K.div(q0, p0))))
