import pytest

from conicrat.algebra.fields import QuadraticRationals
from conicrat.algebra.parse import parse_poly
from conicrat.chatelet import (BaseCase, ChateletInput, DegreeParityFlip, NormFactorRemoved, SquareA,
                               SquarefreeReduction, chatelet_verdict, normalize, theorem_a_j)
from conicrat.errors import PreconditionError
from conicrat.report import NOT_RATIONAL, RATIONAL, UNKNOWN

from conftest import F5, F7, QQ, poly


def inp(a, P, K=QQ):
    return ChateletInput(K(a), poly(P, K))


def test_square_a():
    tr = normalize(inp(4, "x^5+x+1"))
    assert tr.early and isinstance(tr.steps[0], SquareA)
    assert tr.result.verdict.tag == RATIONAL


def test_norm_factor_removed():
    tr = normalize(inp(2, "x^2-2"))
    step = next(s for s in tr.steps if isinstance(s, NormFactorRemoved))
    assert step.P1 == poly("x^2-2")
    assert step.A * step.A - step.B * step.B * 2 == step.P1
    assert tr.early and tr.result.verdict.tag == RATIONAL
    Y, X, Z = tr.result.witness
    assert Z * Z == 2 * Y * Y + 1 or Z * Z == QQ(2) * Y * Y + QQ(1)


def test_deg2_base_case():
    # z^2 = -y^2 - x^2 + 1: 1 = 1^2 + 0 + 0
    tr = normalize(inp(-1, "1-x^2"))
    assert tr.early and tr.result.verdict.tag == RATIONAL
    assert any(isinstance(s, BaseCase) for s in tr.steps)


def test_deg0_unsolvable():
    # z^2 = -y^2 - 1 has no real point
    tr = normalize(inp(-1, "-1"))
    assert tr.result.verdict.tag == NOT_RATIONAL


def test_squarefree_reduction():
    tr = normalize(inp(3, "(x^2+1)^2*(x^3-2)"))
    red = next(s for s in tr.steps if isinstance(s, SquarefreeReduction))
    assert red.after == poly("x^3-2")


def test_parity_flip_replays():
    tr = normalize(inp(5, "x^3-x+1"))
    assert any(isinstance(s, DegreeParityFlip) for s in tr.steps)
    assert tr.result.P.degree % 2 == 0
    assert tr.replay() == tr.result.P


def test_parity_flip_shift_when_p0_zero():
    tr = normalize(inp(3, "x^3-2*x"))
    flip = next(s for s in tr.steps if isinstance(s, DegreeParityFlip))
    assert flip.shift == 1


def test_normalize_idempotent():
    tr = normalize(inp(2, "(x^2+1)*(x^2+3)"))
    again = normalize(ChateletInput(tr.result.a, tr.result.P))
    assert again.result.P == tr.result.P


def test_verdict_examples():
    r = chatelet_verdict(inp(5, "x^3-x+1"))
    assert r.verdict.tag == NOT_RATIONAL and r.h1 == []
    assert "Manin" in r.verdict.branch  # disc -23 does not lie in the class of 5
    r = chatelet_verdict(inp(4, "x^5+x+1"))
    assert r.verdict.tag == RATIONAL and r.verdict.reason == "a is a square"
    r = chatelet_verdict(inp(2, "(x^2+1)*(x^2+3)"))
    assert r.verdict.tag == NOT_RATIONAL and r.h1 == [2]


def test_c3_holds_branch():
    # sqrt(-3) lies in the splitting field of x^3 - 2
    r = chatelet_verdict(inp(-3, "x^3-2"))
    assert r.verdict.tag == NOT_RATIONAL
    assert r.certificates["conditions"]["C3"] is True
    assert r.verdict.branch.startswith("main theorem")


def test_quadratic_norm_factor_then_base_case():
    # x^2 + x - 1 has discriminant 5, so it is a norm from Q(sqrt 5)
    tr = normalize(inp(5, "(x^2+x-1)*(x^2+3)"))
    assert any(isinstance(s, NormFactorRemoved) and s.P1 == poly("x^2+x-1") for s in tr.steps)
    assert tr.early


def test_finite_field_residual_factors_odd():
    from conicrat.algebra.factor import factor
    for P in ("x^4+x+1", "x^2+3", "x^6+x+3", "x^3+x+1", "x^5+x+3", "(x^2+1)*(x^3+x+1)"):
        tr = normalize(inp(3, P, F7))
        if not tr.early:
            assert all(d % 2 for d in factor(tr.result.P).degrees())
            assert tr.result.conditions["C3"] is False  # every extension of F_q is cyclic
    assert chatelet_verdict(inp(2, "x^4+1", F5)).verdict.tag == RATIONAL


def test_theorem_a_examples():
    assert theorem_a_j(poly("x^3-2"), QQ(3)) == (0, [])
    assert theorem_a_j(poly("(x^2+1)*(x^2-3)"), QQ(2)) == (1, [2])
    assert theorem_a_j(poly("x*(x^2+2)*(x^3-2)"), QQ(5)) == (1, [2])
    with pytest.raises(PreconditionError):
        theorem_a_j(poly("x^2-2"), QQ(2))  # splits over Q(sqrt 2): C4 fails
    with pytest.raises(PreconditionError):
        theorem_a_j(poly("x^3-2"), QQ(4))


def test_quadratic_base_unknown_or_decided():
    L = QuadraticRationals(-1)
    r = chatelet_verdict(ChateletInput(L(3), parse_poly("x^4+x+1", L)))
    assert r.verdict.tag in (NOT_RATIONAL, UNKNOWN)


def test_input_validation():
    with pytest.raises(PreconditionError):
        ChateletInput(QQ(0), poly("x"))
    with pytest.raises(PreconditionError):
        ChateletInput(QQ(2), poly("0"))
