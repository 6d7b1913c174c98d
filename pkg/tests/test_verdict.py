import random

import pytest

from conicrat.algebra.poly import Poly
from conicrat.errors import PreconditionError
from conicrat.report import NOT_RATIONAL, RATIONAL, UNKNOWN, Report, Verdict
from conicrat.verdict import NEG_PQ, SWAP, AnalyzeOptions, Twist, analyze, transform_pair

from conftest import F3, F5, F7, QQ, poly


@pytest.mark.parametrize("P,Q,s,tag,branch", [
    ("x^2-3", "x-1", 3, RATIONAL, "s = 3"),
    ("x^2-3", "x^2-5", 4, NOT_RATIONAL, "s >= 4"),
    ("x", "x+1", 2, RATIONAL, "s = 2, condition (I) fails"),
    ("-(x^2+1)", "-(x^2+2)", 0, NOT_RATIONAL, "s = 0, conditions (I) and (II) hold"),
])
def test_examples(P, Q, s, tag, branch):
    r = analyze(poly(P), poly(Q))
    assert r.s["total"] == s
    assert r.verdict.tag == tag and r.verdict.branch == branch


def test_s0_conic_solvable():
    r = analyze(poly("-(x^2+1)"), poly("x^2+2"))
    assert r.s["total"] == 0 and r.verdict.tag == RATIONAL
    assert r.certificates["conic"]["status"] == "Solvable"


def test_s2_rational_places():
    r = analyze(poly("x^2-3"), poly("2*x^2-2"))
    assert r.verdict.branch == "s = 2, c1, c2 in k"


def test_s2_pi1_candidates():
    r = analyze(poly("x^2-3"), poly("x^2-2"))
    assert r.verdict.tag == RATIONAL
    assert [c["pi1"] for c in r.certificates["pi1"]] == ["-1", "-8"]


def test_s2_one_candidate_unsolvable():
    # conic (-1, -3) ramifies at infinity and 3; 3 splits in Q(sqrt -2)
    r = analyze(poly("-x^2+3"), poly("-3*x^2-3*x+3"))
    assert r.s["total"] == 2
    assert r.verdict.tag == NOT_RATIONAL
    assert {c["status"] for c in r.certificates["pi1"]} == {"Solvable", "Unsolvable"}


def test_witness_attached_and_verified():
    K = F5
    r = analyze(poly("x", K), poly("x+1", K), AnalyzeOptions(witness_deg_bound=0))
    assert r.verdict.tag == RATIONAL and r.witness is not None
    assert r.witness["u"] == "(B*z + C)/(B*y + A)"


def test_finite_fields_s02_always_rational():
    rng = random.Random(0)
    for _ in range(100):
        K = rng.choice([F3, F5, F7])
        P = Poly(K, [K.random(rng) for _ in range(rng.choice([2, 4]) + 1)])
        Q = Poly(K, [K.random(rng) for _ in range(rng.choice([2, 4]) + 1)])
        try:
            r = analyze(P, Q, AnalyzeOptions(witness_deg_bound=-1))
        except PreconditionError:
            continue
        if r.s and r.s["total"] in (0, 2):
            assert r.verdict.tag == RATIONAL


def test_routing_to_chatelet():
    r = analyze(poly("x^5+x+1"), poly("4"))
    assert r.verdict.tag == RATIONAL and "deg Q = 0" in r.notes[0]
    r = analyze(poly("2*x^2-2"), poly("x^2-1"))
    assert "P = 2 Q" in r.notes[0]


def test_unsupported_is_unknown():
    r = analyze(poly("x^3-2"), poly("x+5"))
    assert r.verdict.tag == UNKNOWN and r.verdict.branch == "unsupported field"


def test_preconditions():
    with pytest.raises(PreconditionError):
        analyze(poly("x^2"), poly("x+1"))
    with pytest.raises(PreconditionError):
        analyze(poly("x", F5), poly("x", F7))


def test_report_round_trip():
    r = analyze(poly("x^2-3"), poly("x-1"))
    assert Report.from_json(r.to_json()) == r
    assert "verdict" in r.summary()
    with pytest.raises(ValueError):
        Verdict("Maybe")


def test_transforms():
    P, Q = poly("x^2-3"), poly("x-1")
    assert transform_pair(P, Q, SWAP) == (Q, P)
    assert transform_pair(poly("x"), poly("x+1"), NEG_PQ) == (poly("x"), poly("-x^2-x"))
    assert transform_pair(P, Q, Twist(Poly(QQ), poly("1"))) == transform_pair(P, Q, NEG_PQ)
    with pytest.raises(PreconditionError):
        transform_pair(poly("x"), poly("x"), NEG_PQ)  # -x^2 is not separable


def test_transform_verdicts_agree():
    for P, Q in (("x^2-3", "x-1"), ("x", "x+1"), ("x^2-3", "x^2-5")):
        P, Q = poly(P), poly(Q)
        base = analyze(P, Q).verdict.tag
        assert analyze(*transform_pair(P, Q, SWAP)).verdict.tag == base
        P2, Q2 = transform_pair(P, Q, NEG_PQ)
        r = analyze(P2, Q2)
        if r.verdict.tag != UNKNOWN:
            assert r.verdict.tag == base
