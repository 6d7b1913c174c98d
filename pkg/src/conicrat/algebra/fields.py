"""Coefficient fields: Q, Q(sqrt d), F_p and finite extensions of them.

A field object doubles as the ``FieldDesc`` of the public API.  Elements are
carried as raw values (``Fraction``, ``int``, tuples) so polynomial inner
loops stay cheap; :class:`Elem` wraps a raw value together with its field
for user-facing code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Iterator

from sympy import factorint, isprime

from . import _dense
from ..errors import PreconditionError, UnsupportedFieldError


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel of a nonzero integer."""
    if n == 0:
        raise ValueError("squarefree part of 0")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def is_int_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


class Field:
    """Common protocol.  Subclasses define the raw arithmetic."""

    zero: Any
    one: Any
    is_finite = False

    # -- derived arithmetic -------------------------------------------------
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def from_int(self, n: int):
        raise NotImplementedError

    def __call__(self, value) -> "Elem":
        if isinstance(value, Elem):
            if value.field != self:
                raise PreconditionError(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, int):
            return Elem(self, self.from_int(value))
        return Elem(self, self.convert(value))

    def convert(self, value):
        raise PreconditionError(f"cannot convert {value!r} into {self}")

    def is_square(self, a) -> bool:
        raise NotImplementedError

    def sqrt(self, a):
        """A square root of ``a`` or None."""
        raise NotImplementedError

    def to_str(self, a) -> str:
        return str(a)

    def random(self, rng, bound: int = 10):
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise UnsupportedFieldError(f"{self} is infinite")


class Rationals(Field):
    characteristic = 0

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"

    __str__ = __repr__

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def div(self, a, b):
        return a / b

    def from_int(self, n):
        return Fraction(n)

    def convert(self, value):
        if isinstance(value, (Fraction, int)):
            return Fraction(value)
        return super().convert(value)

    def is_square(self, a):
        return a == 0 or rational_sqrt(a) is not None

    def sqrt(self, a):
        return rational_sqrt(a)

    def to_str(self, a):
        return str(a)

    def random(self, rng, bound=10):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


class QuadraticRationals(Field):
    """Q(sqrt d); raw values are pairs (a, b) meaning a + b*sqrt(d)."""

    characteristic = 0

    def __init__(self, d: int):
        if d in (0, 1) or squarefree_part(d) != d:
            raise PreconditionError(f"Q(sqrt({d})): d must be squarefree and not 0 or 1")
        self.d = d
        self.zero = (Fraction(0), Fraction(0))
        self.one = (Fraction(1), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, QuadraticRationals) and other.d == self.d

    def __hash__(self):
        return hash(("Qsqrt", self.d))

    def __repr__(self):
        return f"Q(sqrt({self.d}))"

    __str__ = __repr__

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        return (a[0] * b[0] + self.d * a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def norm(self, a) -> Fraction:
        return a[0] * a[0] - self.d * a[1] * a[1]

    def conj(self, a):
        return (a[0], -a[1])

    def inv(self, a):
        n = self.norm(a)
        if n == 0:
            raise ZeroDivisionError("inverse of 0")
        return (a[0] / n, -a[1] / n)

    def from_int(self, n):
        return (Fraction(n), Fraction(0))

    def from_rational(self, q):
        return (Fraction(q), Fraction(0))

    def convert(self, value):
        if isinstance(value, (Fraction, int)):
            return (Fraction(value), Fraction(0))
        if isinstance(value, tuple) and len(value) == 2:
            return (Fraction(value[0]), Fraction(value[1]))
        return super().convert(value)

    def is_rational(self, a) -> bool:
        return a[1] == 0

    def is_square(self, a):
        x, y = a
        if y == 0:
            return x == 0 or rational_sqrt(x) is not None or rational_sqrt(x / self.d) is not None
        t = rational_sqrt(self.norm(a))
        if t is None:
            return False
        return rational_sqrt((x + t) / 2) is not None or rational_sqrt((x - t) / 2) is not None

    def sqrt(self, a):
        x, y = a
        if y == 0:
            if x == 0:
                return self.zero
            r = rational_sqrt(x)
            if r is not None:
                return (r, Fraction(0))
            r = rational_sqrt(x / self.d)
            return None if r is None else (Fraction(0), r)
        t = rational_sqrt(self.norm(a))
        if t is None:
            return None
        for cand in ((x + t) / 2, (x - t) / 2):
            u = rational_sqrt(cand)
            if u:
                return (u, y / (2 * u))
        return None

    def to_str(self, a):
        x, y = a
        if y == 0:
            return str(x)
        root = f"sqrt({self.d})"
        ys = root if y == 1 else f"-{root}" if y == -1 else f"{y}*{root}"
        if x == 0:
            return ys
        return f"({x}{'' if ys.startswith('-') else '+'}{ys})"

    def random(self, rng, bound=10):
        return (Fraction(rng.randint(-bound, bound), rng.randint(1, bound)),
                Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))


class FiniteField(Field):
    is_finite = True
    order: int
    characteristic: int

    def is_square(self, a):
        if a == self.zero:
            return True
        return self.pow(a, (self.order - 1) // 2) == self.one

    def nonsquare(self):
        for a in self.elements():
            if a != self.zero and not self.is_square(a):
                return a
        raise AssertionError("no nonsquare in a field of odd order")

    def sqrt(self, a):
        """Tonelli-Shanks in an arbitrary field of odd order."""
        if a == self.zero:
            return self.zero
        if not self.is_square(a):
            return None
        q = self.order
        s, t = 0, q - 1
        while t % 2 == 0:
            s += 1
            t //= 2
        z = self.pow(self.nonsquare(), t)
        x = self.pow(a, (t + 1) // 2)
        b = self.pow(a, t)
        m = s
        while b != self.one:
            i, bb = 0, b
            while bb != self.one:
                bb = self.mul(bb, bb)
                i += 1
            w = self.pow(z, 1 << (m - i - 1))
            x = self.mul(x, w)
            z = self.mul(w, w)
            b = self.mul(b, z)
            m = i
        return x

    def pth_root(self, a):
        return self.pow(a, self.order // self.characteristic)

    def random(self, rng, bound=10):
        return self.element_from_index(rng.randrange(self.order))

    def element_from_index(self, i: int):
        raise NotImplementedError


class PrimeField(FiniteField):
    def __init__(self, p: int):
        if p == 2 or not isprime(p):
            raise PreconditionError(f"GF({p}): p must be an odd prime")
        self.p = p
        self.order = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    __str__ = __repr__

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        return pow(a, e, self.p)

    def from_int(self, n):
        return n % self.p

    def convert(self, value):
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.p, value.denominator % self.p)
        return super().convert(value)

    def is_square(self, a):
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def elements(self):
        return iter(range(self.p))

    def element_from_index(self, i):
        return i % self.p

    def pth_root(self, a):
        return a


class QuotientField(FiniteField):
    """base[t]/(modulus) for a monic irreducible modulus over a finite base.

    Raw values are tuples of base values of length deg(modulus).
    """

    var = "t"

    def __init__(self, base: FiniteField, modulus, check: bool = True):
        modulus = _dense.strip(list(modulus), base)
        if len(modulus) < 3:
            raise PreconditionError("extension modulus must have degree >= 2")
        if modulus[-1] != base.one:
            raise PreconditionError("extension modulus must be monic")
        if check and not is_irreducible_raw(modulus, base):
            raise PreconditionError("extension modulus is not irreducible")
        self.base = base
        self.modulus = tuple(modulus)
        self.degree = len(modulus) - 1
        self.order = base.order ** self.degree
        self.characteristic = base.characteristic
        self.zero = (base.zero,) * self.degree
        self.one = (base.one,) + (base.zero,) * (self.degree - 1)

    def _key(self):
        return (self.base, self.modulus)

    def __eq__(self, other):
        return isinstance(other, QuotientField) and self._key() == other._key()

    def __hash__(self):
        return hash(("quot",) + self._key())

    def __repr__(self):
        mod = _raw_to_str(list(self.modulus), self.base, self.var)
        return f"{self.base}[{self.var}]/({mod})"

    __str__ = __repr__

    def _pad(self, c):
        c = list(c)
        return tuple(c + [self.base.zero] * (self.degree - len(c)))

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        prod = _dense.mul(_dense.strip(list(a), B), _dense.strip(list(b), B), B)
        return self._pad(_dense.rem(prod, list(self.modulus), B))

    def inv(self, a):
        B = self.base
        g, s, _ = _dense.gcdex(_dense.strip(list(a), B), list(self.modulus), B)
        if g != [B.one]:
            raise ZeroDivisionError("inverse of 0")
        return self._pad(s)

    def from_int(self, n):
        return self._pad([self.base.from_int(n)])

    def from_base(self, c):
        return self._pad([c])

    def generator(self):
        return self._pad([self.base.zero, self.base.one])

    def convert(self, value):
        if isinstance(value, Fraction):
            return self.div(self.from_int(value.numerator), self.from_int(value.denominator))
        if isinstance(value, (tuple, list)) and len(value) <= self.degree:
            return self._pad([self.base.convert(c) if isinstance(c, Fraction) else c for c in value])
        return super().convert(value)

    def elements(self):
        for coeffs in product(list(self.base.elements()), repeat=self.degree):
            yield tuple(coeffs)

    def element_from_index(self, i):
        out = []
        for _ in range(self.degree):
            i, r = divmod(i, self.base.order)
            out.append(self.base.element_from_index(r))
        return tuple(out)

    def to_str(self, a):
        s = _raw_to_str(_dense.strip(list(a), self.base), self.base, self.var)
        return s if len(s) <= 1 or s.isdigit() else f"({s})"


class ExtensionField(QuotientField):
    """GF(p^d) presented as F_p[t]/(modulus)."""

    def __init__(self, p: int, modulus=None):
        base = PrimeField(p)
        if modulus is None:
            raise PreconditionError("ExtensionField needs a modulus (see first_irreducible)")
        super().__init__(base, [m % p for m in modulus])
        self.p = p

    def __repr__(self):
        mod = _raw_to_str(list(self.modulus), self.base, self.var)
        return f"GF({self.p}^{self.degree};{mod})"

    __str__ = __repr__


def _raw_to_str(coeffs, K, var="x") -> str:
    if not coeffs:
        return "0"
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == K.zero:
            continue
        cs = K.to_str(c)
        if i == 0:
            terms.append(cs)
            continue
        mon = var if i == 1 else f"{var}^{i}"
        if cs == "1":
            terms.append(mon)
        elif cs == "-1":
            terms.append("-" + mon)
        else:
            terms.append(f"{cs}*{mon}")
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def is_irreducible_raw(f, K: FiniteField) -> bool:
    """Rabin's irreducibility test over a finite field."""
    f = _dense.monic(f, K)
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [K.zero, K.one]
    q = K.order

    def frob_power(k):
        return _dense.powmod(x, q ** k, f, K)

    for r in factorint(n):
        h = _dense.sub(frob_power(n // r), x, K)
        if _dense.gcd(f, h, K) != [K.one]:
            return False
    return _dense.sub(frob_power(n), x, K) == []


def first_irreducible(base: FiniteField, degree: int):
    """Lexicographically first monic irreducible of the given degree."""
    elems = list(base.elements())
    for tail in product(elems, repeat=degree):
        f = list(tail) + [base.one]
        if f[0] == base.zero:
            continue
        if is_irreducible_raw(f, base):
            return f
    raise AssertionError("no irreducible polynomial found")


@dataclass(frozen=True)
class Elem:
    """A field element together with its field."""

    field: Field
    value: Any

    def _other(self, other):
        if isinstance(other, Elem):
            if other.field != self.field:
                raise PreconditionError(f"mixing elements of {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return self.field.convert(other)

    def __add__(self, other):
        return Elem(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Elem(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Elem(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Elem(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Elem(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Elem(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Elem(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Elem(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, Elem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def is_zero(self) -> bool:
        return self.value == self.field.zero

    def inverse(self) -> "Elem":
        return Elem(self.field, self.field.inv(self.value))

    def __str__(self):
        return self.field.to_str(self.value)

    def __repr__(self):
        return f"Elem({self.field}, {self})"
