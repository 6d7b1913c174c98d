"""Rationality verdicts for conic bundles z^2 = P(x) y^2 + Q(x).

The verdict is read off the s-invariant:

    s >= 4        not rational
    s == 3        rational
    s == 1        cannot occur
    s in {0, 2}   rational unless deg P, deg Q are both even and the conic
                  p0 a^2 + q0 b^2 = c^2 has no point over k (s = 0) or over
                  k(sqrt pi1) (s = 2)

A bounded search for a triple (A, B, C) runs alongside and, when it hits,
attaches an explicit parametrization.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .algebra.conic import (DEFAULT_SEARCH_BOUND, SOLVABLE, UNSOLVABLE, conic_has_nontrivial_point,
                            conic_over_quadratic)
from .algebra.fields import FiniteField, Rationals, squarefree_part
from .algebra.poly import Poly
from .chatelet import ChateletInput, chatelet_verdict
from .errors import ConsistencyError, PreconditionError, UnsupportedFieldError
from .fibers import AT_INFINITY, s_invariant
from .param import parametrize, search_triple
from .report import IMPOSSIBLE, NOT_RATIONAL, RATIONAL, UNKNOWN, Report, Verdict


@dataclass(frozen=True)
class AnalyzeOptions:
    seed: int = 0
    witness_deg_bound: int = 1  # negative disables the witness search
    conic_search_bound: int = DEFAULT_SEARCH_BOUND
    box: int = 2  # coefficient box for the witness search over Q


def _echo(P: Poly, Q: Poly) -> dict:
    return {"field": str(P.field), "P": str(P), "Q": str(Q)}


def _elapsed(t0) -> float:
    return (time.perf_counter() - t0) * 1000


def _route_to_chatelet(P: Poly, Q: Poly, opts: AnalyzeOptions):
    """Degenerate pairs that are really Chatelet surfaces z^2 = a y^2 + R(x)."""
    if Q.degree == 0 and P.degree >= 1:
        # y -> 1/w, then (zw)^2 = q0 w^2 + P
        return Q.lc(), P, f"deg Q = 0: rewritten as Z^2 = {Q.lc()} W^2 + P(x)"
    if P.degree == 0 and Q.degree >= 1:
        return P.lc(), Q, f"deg P = 0: already of the form z^2 = {P.lc()} y^2 + Q(x)"
    if P.degree >= 1 and P * Q.lc() == Q * P.lc():
        # z^2 = Q (c y^2 + 1); z = z'(c y^2 + 1), Y = z' y gives z'^2 = -c Y^2 + Q
        c = P.lc() / Q.lc()
        return -c, Q, f"P = {c} Q: rewritten as Z^2 = {-c} Y^2 + Q(x)"
    return None


def _conic_over(p0, q0, e, opts):
    """p0 a^2 + q0 b^2 = c^2 over k(sqrt e); returns (status, description)."""
    K = p0.field
    if K.is_square(e.value):
        r = conic_has_nontrivial_point(p0, q0, opts.conic_search_bound)
        return r.status, f"conic over k: {r.reason}"
    if isinstance(K, FiniteField):
        return SOLVABLE, "every conic over a finite field has a point"
    if isinstance(K, Rationals):
        v = Fraction(e.value)
        d = squarefree_part(v.numerator * v.denominator)
        r = conic_over_quadratic(p0.value, q0.value, d, opts.conic_search_bound)
        return r.status, f"conic over Q(sqrt({d})): {r.reason}"
    raise UnsupportedFieldError(f"conic solvability over a quadratic extension of {K} is not supported")


def _decide(sinv, P: Poly, Q: Poly, opts: AnalyzeOptions, certs: dict, notes: list) -> Verdict:
    s = sinv.total
    if s >= 4:
        return Verdict(NOT_RATIONAL, f"s = {s} >= 4", "s >= 4")
    if s == 3:
        return Verdict(RATIONAL, "s = 3", "s = 3")
    if s == 1:
        raise ConsistencyError("s = 1 computed; this value cannot occur")
    if P.degree % 2 or Q.degree % 2:
        return Verdict(RATIONAL, f"s = {s}, deg P = {P.degree} and deg Q = {Q.degree} not both even",
                       f"s = {s}, condition (I) fails")
    p0, q0 = P.lc(), Q.lc()
    if s == 0:
        r = conic_has_nontrivial_point(p0, q0, opts.conic_search_bound)
        certs["conic"] = {"p0": str(p0), "q0": str(q0), "over": "k", "status": r.status, "reason": r.reason}
        if r.witness is not None:
            certs["conic"]["point"] = [str(c) for c in r.witness]
        if r.status == SOLVABLE:
            return Verdict(RATIONAL, "s = 0, leading-coefficient conic has a point over k", "s = 0, condition (II) fails")
        if r.status == UNSOLVABLE:
            return Verdict(NOT_RATIONAL, "s = 0, both degrees even, conic has no point over k",
                           "s = 0, conditions (I) and (II) hold")
        return Verdict(UNKNOWN, f"s = 0 conic undecided: {r.reason}", "s = 0")
    # s == 2
    contrib = sinv.contributing()
    if len(contrib) == 2 and all(f.weight == 1 for f in contrib):
        # c1, c2 in k or at infinity
        where = ", ".join("inf" if f.place == AT_INFINITY else str(f.place) for f in contrib)
        return Verdict(RATIONAL, f"s = 2 from two k-rational places ({where})", "s = 2, c1, c2 in k")
    if not sinv.pi1_candidates:
        notes.append("pi1 could not be determined from the contributing places")
        return Verdict(UNKNOWN, "s = 2 but pi1 is not determined", "s = 2")
    outcomes = []
    for e in sinv.pi1_candidates:
        st, why = _conic_over(p0, q0, e, opts)
        outcomes.append((str(e), st, why))
    certs["pi1"] = [{"pi1": e, "status": st, "reason": why} for e, st, why in outcomes]
    notes.append("pi1 candidates: " + ", ".join(e for e, _, _ in outcomes))
    # rational over k implies rational over each k(sqrt e), where s drops to 0,
    # so one unsolvable candidate already settles the question
    bad = [e for e, st, _ in outcomes if st == UNSOLVABLE]
    if bad:
        return Verdict(NOT_RATIONAL, f"s = 2, both degrees even, conic has no point over k(sqrt {bad[0]})",
                       "s = 2, conditions (I) and (II) hold")
    if all(st == SOLVABLE for _, st, _ in outcomes):
        return Verdict(RATIONAL, "s = 2, conic has a point over k(sqrt pi1) for every candidate pi1",
                       "s = 2, condition (II) fails")
    return Verdict(UNKNOWN, "s = 2 conic over k(sqrt pi1) undecided", "s = 2")


def analyze(P: Poly, Q: Poly, opts: AnalyzeOptions | None = None) -> Report:
    opts = opts or AnalyzeOptions()
    t0 = time.perf_counter()
    if P.field != Q.field:
        raise PreconditionError("P and Q must share a coefficient field")
    if P.field.characteristic == 2:
        raise PreconditionError("characteristic 2 is not supported")
    if P.is_zero() or Q.is_zero():
        raise PreconditionError("P and Q must be nonzero")
    routed = _route_to_chatelet(P, Q, opts)
    if routed is not None:
        a, R, note = routed
        rep = chatelet_verdict(ChateletInput(a, R), opts.seed, opts.conic_search_bound)
        rep.input = _echo(P, Q) | {"chatelet": rep.input}
        rep.notes.insert(0, note)
        rep.ms = _elapsed(t0)
        return rep
    notes, certs = [], {}
    try:
        sinv = s_invariant(P, Q, opts.seed)
    except UnsupportedFieldError as exc:
        return Report(_echo(P, Q), Verdict(UNKNOWN, str(exc), "unsupported field"), notes=[str(exc)],
                      ms=_elapsed(t0))
    try:
        verdict = _decide(sinv, P, Q, opts, certs, notes)
    except UnsupportedFieldError as exc:
        notes.append(str(exc))
        verdict = Verdict(UNKNOWN, str(exc), "unsupported field")
    witness = None
    if opts.witness_deg_bound >= 0:
        witness = _witness(P, Q, opts)
        if witness is not None:
            if verdict.tag == NOT_RATIONAL:
                raise ConsistencyError(f"explicit triple found for a NotRational verdict ({verdict.branch})")
            if verdict.tag != RATIONAL:
                notes.append(f"verdict upgraded from {verdict.tag} by an explicit triple")
                verdict = Verdict(RATIONAL, "explicit triple found", "explicit parametrization")
        elif verdict.tag == RATIONAL:
            notes.append(f"no triple within degree bound {opts.witness_deg_bound}; verdict only")
    if verdict.tag == IMPOSSIBLE:
        raise ConsistencyError("Impossible verdict reached")
    return Report(_echo(P, Q), verdict, s=sinv.to_dict(), witness=witness, notes=notes,
                  ms=_elapsed(t0), certificates=certs)


def _witness(P: Poly, Q: Poly, opts: AnalyzeOptions):
    K = P.field
    if not isinstance(K, (FiniteField, Rationals)):
        return None
    d = opts.witness_deg_bound
    t = search_triple(P, Q, d, d, opts.box)
    if t is None:
        return None
    bi = parametrize(P, Q, t)  # raises if the identities fail
    return bi.to_dict()


# -- equivalence transforms -----------------------------------------------------

SWAP = "Swap"
NEG_PQ = "NegPQ"


@dataclass(frozen=True)
class Twist:
    F: Poly
    G: Poly

    name = "Twist"


def transform_pair(P: Poly, Q: Poly, kind) -> tuple:
    """Pairs with the same rationality answer: (Q, P), (P, -PQ), (P, Q (F^2 - P G^2))."""
    if kind == SWAP:
        return Q, P
    if kind == NEG_PQ:
        kind = Twist(Poly(P.field), Poly.const(P.field, P.field.one))
    if not isinstance(kind, Twist):
        raise PreconditionError(f"unknown transform {kind!r}")
    N = kind.F * kind.F - P * kind.G * kind.G
    if N.is_zero():
        raise PreconditionError("F^2 - P G^2 vanishes")
    Q2 = Q * N
    if not Q2.is_squarefree():
        raise PreconditionError(f"transformed Q = {Q2} is not separable")
    return P, Q2
