"""Values of polynomials at roots of irreducible factors, with square tests.

For an irreducible monic m over k and a polynomial g, ``residue(m, g)``
returns g(c) for a root c of m as an element of a concrete model of k(c),
together with whether it is a square there.
"""
from __future__ import annotations

from dataclasses import dataclass

from .fields import (Elem, FiniteField, QuadraticRationals, QuotientField, Rationals,
                     rational_sqrt, squarefree_part)
from .poly import Poly, resultant_raw
from ..errors import UnsupportedFieldError


@dataclass(frozen=True)
class Residue:
    value: Elem
    is_square: bool
    # square class of N(value) is trivial; a representative e in k with
    # value in e * k(c)^2, when such an e exists and is computable
    base_class: Elem | None = None
    disc: Elem | None = None  # for quadratic residue fields: k(c) = k(sqrt disc)


def residue(m: Poly, g: Poly) -> Residue:
    K = m.field
    r = g % m
    if m.degree == 1:
        v = Elem(K, r.coeffs[0] if r.coeffs else K.zero)
        return Residue(v, K.is_square(v.value), v)
    if isinstance(K, FiniteField):
        R = QuotientField(K, m.coeffs, check=False)
        v = Elem(R, R._pad(r.coeffs))
        # v is a square in F_{q^n} iff its norm Res(m, r) is a square in F_q
        norm = resultant_raw(list(m.coeffs), list(r.coeffs), K)
        return Residue(v, K.is_square(norm))
    if m.degree == 2:
        return _quadratic_residue(m, r)
    if r.degree <= 0 and m.degree % 2 == 1:
        v = Elem(K, r.coeffs[0] if r.coeffs else K.zero)
        return Residue(v, K.is_square(v.value), v)
    raise UnsupportedFieldError(
        f"unsupported residue field: {K}[x]/({m}) of degree {m.degree} with a non-constant value {r}")


def _quadratic_residue(m: Poly, r: Poly) -> Residue:
    K = m.field
    c0, c1 = m.coeffs[0], m.coeffs[1]
    disc = K.sub(K.mul(c1, c1), K.mul(K.from_int(4), c0))
    if r.degree <= 0:
        v = r.coeffs[0] if r.coeffs else K.zero
        sq = K.is_square(v) or K.is_square(K.div(v, disc))
        return Residue(Elem(K, v), sq, Elem(K, v), Elem(K, disc))
    if not isinstance(K, Rationals):
        raise UnsupportedFieldError(
            f"unsupported residue field: {K}[x]/({m}) is a degree-4 extension of Q")
    # root c = (-c1 + f*sqrt(D))/2 with disc = f^2 D
    D = squarefree_part(disc.numerator * disc.denominator)
    f = rational_sqrt(disc / D)
    L = QuadraticRationals(D)
    u, w = r.coeffs[0], r.coeffs[1]
    val = (u - w * c1 / 2, w * f / 2)
    sq = L.is_square(val)
    base = _base_class(val, L)
    return Residue(Elem(L, val), sq, None if base is None else Elem(K, base), Elem(K, disc))


def _base_class(val, L: QuadraticRationals):
    """e in Q with val in e * L^2 (requires a square norm), else None."""
    x, y = val
    if y == 0:
        return x
    t = rational_sqrt(L.norm(val))
    if t is None:
        return None
    e = 2 * (x + t) if x + t != 0 else 2 * (x - t)
    # (x + t + y sqrt D)^2 = 2 (x + t) val
    return e
