"""Immutable dense univariate polynomials over a :class:`Field`."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import _dense
from .fields import Elem, Field, _raw_to_str
from ..errors import PreconditionError

NEG_INF = float("-inf")


class Poly:
    """Polynomial with raw coefficients, lowest degree first.

    The zero polynomial has no coefficients and degree ``-inf``.
    """

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: Field, coeffs: Iterable = ()):
        self.field = field
        coeffs = [c.value if isinstance(c, Elem) else c for c in coeffs]
        self.coeffs = tuple(_dense.strip(coeffs, field))
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_ints(cls, field: Field, coeffs: Sequence[int]) -> "Poly":
        return cls(field, [field.from_int(c) if isinstance(c, int) else field.convert(c)
                           for c in coeffs])

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls(field, [field.zero, field.one])

    @classmethod
    def const(cls, field: Field, c) -> "Poly":
        if isinstance(c, Elem):
            c = c.value
        elif isinstance(c, int):
            c = field.from_int(c)
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: Field, c, n: int) -> "Poly":
        if isinstance(c, Elem):
            c = c.value
        return cls(field, [field.zero] * n + [c])

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def lc(self) -> Elem:
        if not self.coeffs:
            return Elem(self.field, self.field.zero)
        return Elem(self.field, self.coeffs[-1])

    def coeff(self, i: int) -> Elem:
        v = self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero
        return Elem(self.field, v)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == tuple(_dense.strip([self.field.from_int(other)], self.field))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.coeffs))
        return self._hash

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> list:
        if isinstance(other, Poly):
            if other.field != self.field:
                raise PreconditionError(f"mixing polynomials over {self.field} and {other.field}")
            return list(other.coeffs)
        if isinstance(other, Elem):
            if other.field != self.field:
                raise PreconditionError(f"mixing {other.field} scalar into {self.field} polynomial")
            return _dense.strip([other.value], self.field)
        if isinstance(other, int):
            return _dense.strip([self.field.from_int(other)], self.field)
        if isinstance(other, Fraction):
            return _dense.strip([self.field.convert(other)], self.field)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def _new(self, coeffs) -> "Poly":
        return Poly(self.field, coeffs)

    def __add__(self, other):
        return self._new(_dense.add(list(self.coeffs), self._coerce(other), self.field))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(_dense.sub(list(self.coeffs), self._coerce(other), self.field))

    def __rsub__(self, other):
        return self._new(_dense.sub(self._coerce(other), list(self.coeffs), self.field))

    def __neg__(self):
        return self._new(_dense.neg(list(self.coeffs), self.field))

    def __mul__(self, other):
        return self._new(_dense.mul(list(self.coeffs), self._coerce(other), self.field))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = [self.field.one]
        base = list(self.coeffs)
        while e:
            if e & 1:
                result = _dense.mul(result, base, self.field)
            e >>= 1
            if e:
                base = _dense.mul(base, base, self.field)
        return self._new(result)

    def __divmod__(self, other):
        q, r = _dense.divmod_(list(self.coeffs), self._coerce(other), self.field)
        return self._new(q), self._new(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other: "Poly") -> bool:
        return not (other % self)

    def scale(self, c) -> "Poly":
        return self * c

    def monic(self) -> "Poly":
        return self._new(_dense.monic(list(self.coeffs), self.field))

    def gcd(self, other: "Poly") -> "Poly":
        return self._new(_dense.gcd(list(self.coeffs), self._coerce(other), self.field))

    def gcdex(self, other: "Poly"):
        g, s, t = _dense.gcdex(list(self.coeffs), self._coerce(other), self.field)
        return self._new(g), self._new(s), self._new(t)

    def derivative(self) -> "Poly":
        return self._new(_dense.deriv(list(self.coeffs), self.field))

    def __call__(self, x):
        """Evaluate at a scalar (Elem / int / raw value) or compose with a Poly."""
        if isinstance(x, Poly):
            return self.compose(x)
        if isinstance(x, Elem):
            return Elem(self.field, _dense.evaluate(self.coeffs, x.value, self.field))
        if isinstance(x, int):
            return Elem(self.field, _dense.evaluate(self.coeffs, self.field.from_int(x), self.field))
        return Elem(self.field, _dense.evaluate(self.coeffs, self.field.convert(x), self.field))

    def eval_raw(self, x):
        return _dense.evaluate(self.coeffs, x, self.field)

    def compose(self, other: "Poly") -> "Poly":
        return self._new(_dense.compose(list(self.coeffs), self._coerce(other), self.field))

    def powmod(self, e: int, m: "Poly") -> "Poly":
        return self._new(_dense.powmod(list(self.coeffs), e, self._coerce(m), self.field))

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return True
        return self.gcd(self.derivative()).degree == 0

    def reverse(self, n: int | None = None) -> "Poly":
        """x^n * f(1/x); n defaults to deg f."""
        if n is None:
            n = len(self.coeffs) - 1
        c = list(self.coeffs) + [self.field.zero] * (n + 1 - len(self.coeffs))
        return self._new(list(reversed(c)))

    def map_coeffs(self, field: Field, fn) -> "Poly":
        return Poly(field, [fn(c) for c in self.coeffs])

    def resultant(self, other: "Poly"):
        return Elem(self.field, resultant_raw(list(self.coeffs), self._coerce(other), self.field))

    # -- display ------------------------------------------------------------
    def __str__(self):
        return _raw_to_str(list(self.coeffs), self.field, "x")

    def __repr__(self):
        return f"Poly({self.field}, {self})"


def resultant_raw(a, b, K):
    """Resultant over a field by the Euclidean remainder sequence."""
    if not a or not b:
        return K.zero
    da, db = len(a) - 1, len(b) - 1
    if da == 0:
        return K.pow(a[0], db)
    if db == 0:
        return K.pow(b[0], da)
    res = K.one
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return K.mul(res, K.pow(b[0], da))
        r = _dense.rem(a, b, K)
        if not r:
            return K.zero
        dr = len(r) - 1
        # res(a, b) = (-1)^(da*db) lc(b)^(da-dr) res(b, r)
        factor = K.pow(b[-1], da - dr)
        if (da * db) % 2:
            factor = K.neg(factor)
        res = K.mul(res, factor)
        a, b = b, r


def prod(polys: Iterable[Poly], field: Field) -> Poly:
    out = Poly.const(field, 1)
    for p in polys:
        out = out * p
    return out
