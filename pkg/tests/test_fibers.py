import random

import pytest

from conicrat.algebra.poly import Poly
from conicrat.errors import PreconditionError, UnsupportedFieldError
from conicrat.fibers import (COMMON_ZERO, INFINITY, P_ZERO, s_invariant, s_invariant_bruteforce)

from conftest import F3, F5, F7, poly


def test_examples_over_q():
    s = s_invariant(poly("x^2-3"), poly("x-1"))
    assert s.counts() == (2, 1, 0, 0) and s.total == 3
    s = s_invariant(poly("x"), poly("x+1"))
    assert s.counts() == (0, 1, 0, 1)
    s = s_invariant(poly("x^2-3"), poly("x^2-5"))
    assert s.counts() == (2, 2, 0, 0)


def test_common_zero():
    # P = x(x-1), Q = x(x+2): -Q~/P~ at 0 is -2/-1 = 2, not a square in Q
    s = s_invariant(poly("x*(x-1)"), poly("x*(x+2)"))
    kinds = {f.kind for f in s.contributing()}
    assert COMMON_ZERO in kinds and s.s3 == 1


def test_fiber_records():
    s = s_invariant(poly("x^2-3"), poly("x-1"))
    for f in s.fibers:
        assert f.weight == (1 if f.kind == INFINITY else f.place.degree)
    assert sum(f.weight for f in s.fibers if f.kind == P_ZERO) <= 2


def test_preconditions():
    with pytest.raises(PreconditionError):
        s_invariant(poly("x"), poly("x"))
    with pytest.raises(PreconditionError):
        s_invariant(poly("x"), poly("2*x"))
    with pytest.raises(PreconditionError):
        s_invariant(poly("x^2"), poly("x+1"))
    with pytest.raises(PreconditionError):
        s_invariant(poly("x"), poly("3"))


def test_unsupported_residue_field():
    # a cubic place over Q whose residue is not rational
    with pytest.raises(UnsupportedFieldError):
        s_invariant(poly("x^3-2"), poly("x+5"))


def test_oracle_examples():
    assert s_invariant_bruteforce(poly("x", F5), poly("x+1", F5), 1).total == 0
    P, Q = poly("x^2+1", F3), poly("x-2", F3)
    assert s_invariant_bruteforce(P, Q, 2).counts() == s_invariant(P, Q).counts()
    with pytest.raises(PreconditionError):
        s_invariant_bruteforce(poly("x", F5), poly("x", F5), 1)
    with pytest.raises(PreconditionError):
        s_invariant_bruteforce(poly("x^3+x+1", F5), poly("x", F5), 2)
    with pytest.raises(UnsupportedFieldError):
        s_invariant_bruteforce(poly("x"), poly("x+1"), 1)


def test_oracle_over_extension_base():
    from conicrat.algebra.parse import parse_field, parse_poly
    E = parse_field("GF(3^2;t^2+1)")
    P, Q = parse_poly("x^2+t", E), parse_poly("x+1", E)
    assert s_invariant_bruteforce(P, Q, 2).counts() == s_invariant(P, Q).counts()


def test_swap_symmetry():
    rng = random.Random(2)
    n = 0
    while n < 60:
        K = rng.choice([F5, F7])
        P = Poly(K, [K.random(rng) for _ in range(rng.randint(2, 4))] + [K.one])
        Q = Poly(K, [K.random(rng) for _ in range(rng.randint(2, 4))] + [K.random(rng) or K.one])
        try:
            a = s_invariant(P, Q)
        except PreconditionError:
            continue
        b = s_invariant(Q, P)
        assert (a.s1, a.s2, a.s3, a.s4) == (b.s2, b.s1, b.s3, b.s4)
        n += 1


def test_pi1_candidates_quadratic_orbit():
    # only x^2 - 2 contributes: P = -1 at sqrt 2; candidates -1 and -1 * disc = -8
    s = s_invariant(poly("x^2-3"), poly("x^2-2"))
    assert s.counts() == (0, 2, 0, 0)
    assert [str(e) for e in s.pi1_candidates] == ["-1", "-8"]
    # two contributing orbits: no single pi1
    assert s_invariant(poly("x^2-3"), poly("x^2-2*x+4")).pi1_candidates == ()
