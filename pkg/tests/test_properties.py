"""Randomized properties driven by hypothesis."""
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from conicrat.algebra.factor import factor
from conicrat.algebra.fields import ExtensionField, PrimeField, QuadraticRationals, Rationals
from conicrat.algebra.poly import Poly
from conicrat.errors import PreconditionError
from conicrat.fibers import s_invariant
from conicrat.param import Triple, evolve_triple, verify_triple
from conicrat.piclattice import blow_down, blow_up, elementary_transformation, yrs_lattice
from conicrat.verdict import SWAP, AnalyzeOptions, analyze, transform_pair

QQ = Rationals()
FIELDS = [PrimeField(3), PrimeField(5), PrimeField(7), ExtensionField(5, [2, 0, 1]), QQ, QuadraticRationals(-5)]

fast = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def elem(K, n):
    if isinstance(K, (Rationals, QuadraticRationals)):
        return K(Fraction(n, 3))
    return K(n)


fields = st.sampled_from(FIELDS)
small = st.integers(-20, 20)


@fast
@given(fields, small, small, small)
def test_field_axioms(K, a, b, c):
    a, b, c = elem(K, a), elem(K, b), elem(K, c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == K(0)
    if b != K(0):
        assert (a / b) * b == a
    assert K.is_square((a * a).value)


@st.composite
def polys(draw, K=None, max_deg=4):
    K = K or draw(fields)
    cs = draw(st.lists(small, min_size=1, max_size=max_deg + 1))
    return Poly(K, [elem(K, c) for c in cs])


@st.composite
def poly_pair(draw, max_deg=4):
    K = draw(fields)
    return draw(polys(K, max_deg)), draw(polys(K, max_deg))


@fast
@given(poly_pair())
def test_division_and_gcd(fg):
    f, g = fg
    assume(not g.is_zero())
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree
    d = f.gcd(g)
    assert d.divides(f) and d.divides(g)


@fast
@given(polys(max_deg=6))
def test_factor_expands_back(f):
    assume(f.degree >= 1)
    fac = factor(f)
    assert fac.expand() == f
    assert all(g.degree >= 1 for g in fac.irreducibles())


finite = st.sampled_from(FIELDS[:3])


@st.composite
def analyzable(draw):
    K = draw(finite)
    P = draw(polys(K, 3))
    Q = draw(polys(K, 3))
    assume(P.degree >= 1 and Q.degree >= 1)
    return P, Q


@fast
@given(analyzable())
def test_s_invariant_swap_symmetric(pq):
    P, Q = pq
    try:
        a = s_invariant(P, Q)
    except PreconditionError:
        assume(False)
    b = s_invariant(Q, P)
    assert a.total == b.total
    assert a.total != 1


@fast
@given(analyzable())
def test_verdict_swap_invariant(pq):
    P, Q = pq
    opts = AnalyzeOptions(witness_deg_bound=-1)
    try:
        a = analyze(P, Q, opts)
    except PreconditionError:
        assume(False)
    b = analyze(*transform_pair(P, Q, SWAP), opts)
    assert a.verdict.tag == b.verdict.tag


@fast
@given(finite.flatmap(lambda K: st.tuples(st.just(K), polys(K, 3), polys(K, 1), polys(K, 2), polys(K, 2))))
def test_evolve_keeps_identity(data):
    K, P, A, C, f = data
    Q = C * C - A * A * P
    assume(P.degree >= 1 and not Q.is_zero() and not A.is_zero())
    t = Triple(A, Poly.const(K, K.one), C, P, Q)
    t2 = evolve_triple(t, f, Q)
    assume(not (t2.A.is_zero() and t2.B.is_zero() and t2.C.is_zero()))
    assert verify_triple(P, Q, t2)


@fast
@given(st.integers(0, 3), st.integers(0, 4), st.lists(st.sampled_from("ube"), max_size=8),
       st.lists(st.integers(0, 1), min_size=16, max_size=16))
def test_lattice_ledger(r, s, ops, tang):
    L = yrs_lattice(r, s)
    for op in ops:
        w2, det = L.omega_squared(), L.det()
        if op == "u":
            L, _ = blow_up(L)
            assert (L.omega_squared(), L.det()) == (w2 - 1, -det)
        elif op == "b":
            E = L.basis_vector(L.labels[-1])
            if L.dot(E, E) != -1 or L.dot(E, L.canonical) != -1 or L.dot(E, L.basis_vector("F")) != 0:
                continue
            L, _ = blow_down(L, E)
            assert (L.omega_squared(), L.det()) == (w2 + 1, -det)
        else:
            L = elementary_transformation(L, L.basis_vector("F"), tang[:L.rank])
            assert (L.omega_squared(), L.det()) == (w2, det)
        assert L.gram.is_symmetric()
