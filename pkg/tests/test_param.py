import json
import random

import pytest

from conicrat.algebra.poly import Poly
from conicrat.errors import PreconditionError
from conicrat.param import (CASE_III, P_ZERO_SIGN, Triple, compose_involutions,
                            evolve_triple, exceptional_fibers, involution, normalize_triple, parametrize,
                            poly_sqrt, search_triple, triple_conditions, verify_triple)

from conftest import F3, F5, F7, QQ, poly


def one(K):
    return Poly.const(K, K.one)


def base(K=F7):
    P, Q = poly("x", K), poly("1-x", K)
    return P, Q, Triple(one(K), one(K), one(K), P, Q)


def random_poly(K, rng, deg):
    return Poly(K, [K.random(rng) for _ in range(deg + 1)])


def test_verify_triple():
    P, Q, t = base(QQ)
    assert verify_triple(P, Q, t)
    assert not verify_triple(P, Q, Triple(one(QQ), one(QQ), poly("x")))
    with pytest.raises(PreconditionError):
        Triple(one(QQ), one(QQ), poly("x"), P, Q)


def test_parametrize_example():
    P, Q, t = base(QQ)
    bi = parametrize(P, Q, t)
    assert str(bi.y) == "[(-x) + (2)*u + (-1)*u^2] / [(-x) + (1)*u^2]"
    assert str(bi.z) == "[(x) + (-2*x)*u + (1)*u^2] / [(-x) + (1)*u^2]"
    with pytest.raises(PreconditionError):
        parametrize(poly("x^2+1"), poly("-x^2"), Triple(poly("x"), Poly(QQ), poly("x^2+1") * poly("x")))


def test_round_trip_specializations():
    P, Q, t = base(F7)
    bi = parametrize(P, Q, t)
    rng = random.Random(0)
    hits = 0
    while hits < 50:
        x0, u0 = F7(rng.randrange(7)), F7(rng.randrange(7))
        pt = bi.evaluate(x0, u0)
        if pt is None:
            continue
        y, z = pt
        assert z * z == P(x0) * y * y + Q(x0)
        u = bi.recover_u(x0, y, z)
        if u is None:  # (y, z) lies on the indeterminacy line C u = A P
            continue
        assert u == u0
        hits += 1


def test_evolve_examples():
    P, Q, t = base(QQ)
    t1 = evolve_triple(t, poly("x"), Q)
    assert (t1.A, t1.B, t1.C) == (poly("x^2+x-1"), poly("x^2+x+1"), poly("-x^2+x+1"))
    t0 = evolve_triple(t, Poly(QQ), Q)
    assert (t0.A, t0.B, t0.C) == (-Q, Q, Q) and verify_triple(P, Q, t0)


def test_evolve_random():
    P, Q, t = base(F7)
    rng = random.Random(1)
    for _ in range(100):
        f = random_poly(F7, rng, rng.randint(0, 3))
        assert verify_triple(P, Q, evolve_triple(t, f, Q))


def test_normalize():
    P, Q, t = base(F7)
    n = normalize_triple(t, P, Q, seed=0)
    assert verify_triple(P, Q, n)
    assert all(triple_conditions(n, P, Q).values())
    again = normalize_triple(n, P, Q, seed=5)
    assert (again.A, again.B, again.C) == (n.A, n.B, n.C)


def test_normalize_divides_common_factor():
    P, Q, t = base(F7)
    x = poly("x", F7)
    big = normalize_triple(t, P, Q, seed=1)
    scaled = Triple(big.A * x, big.B * x, big.C * x)
    n = normalize_triple(scaled, P, Q)
    assert (n.A, n.B, n.C) == (big.A, big.B, big.C)


def test_normalize_budget():
    # over F3 every alpha may be bad for some pair; the error must be explicit, never silent
    P, Q = poly("x", F3), poly("1-x", F3)
    t = Triple(one(F3), one(F3), one(F3))
    try:
        n = normalize_triple(t, P, Q)
        assert all(triple_conditions(n, P, Q).values())
    except PreconditionError as exc:
        assert "budget" in str(exc)


def test_involution_identity():
    P, Q, t = base(F7)
    inv = involution(t, t, P)
    assert inv.E.is_zero()


def test_involution_evolved_pair():
    P, Q, t = base(QQ)
    t2 = evolve_triple(t, poly("x"), Q)
    inv = involution(t, t2, P)
    A, B, C, A1, B1, C1 = t.A, t.B, t.C, t2.A, t2.B, t2.C
    assert (inv.D * (A1 * B - A * B1) - inv.E * (B1 * C + B * C1)).is_zero()
    assert (inv.D * (B * C1 - B1 * C) - inv.E * (A1 * B + A * B1) * P).is_zero()
    assert not inv.E.is_zero()


def test_involution_inverse():
    P, Q, t = base(F7)
    rng = random.Random(2)
    for _ in range(50):
        t2 = evolve_triple(t, random_poly(F7, rng, rng.randint(1, 3)), Q)
        a, b = involution(t, t2, P), involution(t2, t, P)
        assert a.D.gcd(a.E).degree == 0
        assert (b.D, b.E) == (a.D, -a.E)
        m = compose_involutions(a, b, P)
        assert m[0][1].is_zero() and m[1][0].is_zero() and m[0][0] == m[1][1]


def test_involution_maps_fiber_coordinates():
    P, Q, t = base(F7)
    t2 = evolve_triple(t, poly("x+2", F7), Q)
    inv = involution(t, t2, P)
    bi = parametrize(P, Q, t)
    checked = 0
    for x0 in range(7):
        for u0 in range(7):
            x0e, u0e = F7(x0), F7(u0)
            pt = bi.evaluate(x0e, u0e)
            if pt is None:
                continue
            y, z = pt
            d1 = t2.B(x0e) * y + t2.A(x0e)
            d2 = inv.E(x0e) * u0e + inv.D(x0e)
            if d1.is_zero() or d2.is_zero():
                continue
            u1 = (t2.B(x0e) * z + t2.C(x0e)) / d1
            assert u1 == (inv.D(x0e) * u0e + inv.E(x0e) * P(x0e)) / d2
            checked += 1
    assert checked > 10


def _normalized_pairs(P, Q, count, rng):
    t = search_triple(P, Q, 1, 1)
    t1 = normalize_triple(t, P, Q, seed=0)
    for i in range(count):
        f = random_poly(P.field, rng, rng.randint(1, 3))
        t2 = normalize_triple(evolve_triple(t1, f, Q), P, Q, seed=i)
        yield t1, t2


def test_exceptional_fibers_divisibility():
    P, Q = poly("x", F7), poly("1-x", F7)
    rng = random.Random(3)
    for t1, t2 in _normalized_pairs(P, Q, 20, rng):
        inv = involution(t1, t2, P)
        fc = exceptional_fibers(inv, P, Q, t1, t2)
        W = inv.D * inv.D - inv.E * inv.E * P
        bound = t1.B * t1.B * t2.B * t2.B * P * Q * 2
        for m, tag in fc.exceptional():
            assert m.divides(W) and m.divides(bound)
        json.dumps(fc.to_dict())


def test_pzero_sign_tag():
    # scan normalized pairs until P(c) = 0 with C/B = -C1/B1 at c
    P, Q = poly("x", F7), poly("1-x", F7)
    rng = random.Random(9)
    found = False
    for t1, t2 in _normalized_pairs(P, Q, 200, rng):
        c = F7(0)
        if (t1.C(c) * t2.B(c) + t2.C(c) * t1.B(c)).is_zero():
            fc = exceptional_fibers(involution(t1, t2, P), P, Q, t1, t2)
            assert dict((str(m), tag) for m, tag in fc.finite)["x"] == P_ZERO_SIGN
            found = True
            break
    assert found


def test_infinity_case_iii():
    # both degrees odd; look for a0 = -a10
    P, Q = poly("x", F7), poly("1-x", F7)
    rng = random.Random(5)
    seen = set()
    for t1, t2 in _normalized_pairs(P, Q, 120, rng):
        fc = exceptional_fibers(involution(t1, t2, P), P, Q, t1, t2)
        seen.add(fc.infinity)
        if t1.A.lc() == -t2.A.lc():
            assert fc.infinity == CASE_III
        else:
            assert fc.infinity != CASE_III
    assert CASE_III in seen


def test_poly_sqrt():
    f = poly("x^2+2*x+1")
    assert poly_sqrt(f) == poly("x+1")
    assert poly_sqrt(poly("x^2+2")) is None
    assert poly_sqrt(poly("2*x^2")) is None
    assert poly_sqrt(poly("x^3")) is None
    g = poly("3*x^3-x+5", F7)
    r = poly_sqrt(g * g)
    assert r * r == g * g


def test_search_triple():
    P, Q = poly("x", F3), poly("1-x", F3)
    t = search_triple(P, Q, 0, 0)
    assert (t.A, t.B, t.C) == (one(F3), one(F3), one(F3))
    t = search_triple(poly("x", F5), poly("x+1", F5), 2, 2)
    assert t is not None and verify_triple(poly("x", F5), poly("x+1", F5), t)


def test_search_triple_absent():
    # z^2 = x y^2 + (x+2) over F3 with constant A, B: A^2 x + B^2 (x+2) = (A^2+B^2) x + 2 B^2
    # is a square only if A^2 + B^2 = 0 (impossible, -1 is a nonsquare) and B = 0
    assert search_triple(poly("x", F3), poly("x+2", F3), 0, 0) is None


def test_search_over_q():
    t = search_triple(poly("x"), poly("1-x"), 0, 0, box=1)
    assert verify_triple(poly("x"), poly("1-x"), t)


def test_json():
    P, Q, t = base(QQ)
    d = parametrize(P, Q, t).to_dict()
    assert json.loads(json.dumps(d))["A"] == "1"
