import json
import random

import pytest

from conicrat.algebra.intmat import IntMatrix
from conicrat.chatelet import theorem_a_j
from conicrat.errors import LatticeError, ParityViolation
from conicrat.piclattice import (AbGroup, Chatelet, ConicBundle, Feasible, GroupAction, blow_down,
                                 blow_up, build_action, chatelet_cyclic, chatelet_diagonal, chatelet_direct,
                                 cohomology, conic_bundle_swap, curve_class_feasible, elementary_transformation,
                                 invariant_sublattice, yrs_lattice)


def test_yrs_examples():
    L = yrs_lattice(0, 0)
    assert L.gram.tolist() == [[0, 1], [1, 0]] and L.canonical == (-2, -2) and L.omega_squared() == 8
    L = yrs_lattice(1, 0)
    assert L.dot(L.basis_vector("F'"), L.basis_vector("F'")) == 1
    assert L.canonical == (-1, -2) and L.omega_squared() == 8
    assert yrs_lattice(2, 3).omega_squared() == 5
    for r in range(5):
        for s in range(6):
            assert yrs_lattice(r, s).omega_squared() == 8 - s


def test_blow_up():
    L, pb = blow_up(yrs_lattice(0, 0))
    assert L.rank == 3 and L.omega_squared() == 7
    E = L.basis_vector("E1")
    assert L.dot(E, E) == -1
    for D in ((1, 0), (0, 1), (3, -2)):
        assert L.dot(pb.vecmul(D), E) == 0


def test_blow_down_line():
    L, _ = blow_up(yrs_lattice(0, 0))
    # the class F - E of the strict transform of the fiber through the point
    M, push = blow_down(L, (1, 0, -1))
    assert M.gram.tolist() in ([[0, 1], [1, 1]], [[1, 1], [1, 0]])
    assert M.omega_squared() == 8
    with pytest.raises(LatticeError, match="not a \\(-1\\)-class"):
        blow_down(L, (1, 0, 0))


def test_blow_round_trip():
    L0 = yrs_lattice(2, 2)
    L1, _ = blow_up(L0)
    L2, _ = blow_down(L1, L1.basis_vector(L1.labels[-1]))
    assert L2 == L0


def test_elementary_transformation():
    L = yrs_lattice(0, 0)
    M = elementary_transformation(L, L.basis_vector("F"), [0, 0])
    Y = yrs_lattice(1, 0)
    assert M.gram == Y.gram and M.canonical == Y.canonical
    F = M.basis_vector("F")
    assert M.dot(F, F) == 0 and M.dot(F, M.canonical) == -2
    with pytest.raises(LatticeError):
        elementary_transformation(L, (1, 1), [0, 0])


def test_lattice_json():
    L = yrs_lattice(3, 2)
    assert type(L).from_dict(json.loads(json.dumps(L.to_dict()))) == L


def test_chatelet_c2xc2_matrices():
    # {1, n, sigma, n sigma} with n = (12)(34) in N and sigma trivial on the roots
    act = build_action(chatelet_diagonal((2, 2)))
    assert act.order == 4
    L = act.lattice
    assert L.canonical == (1, 1, 1, 1, 0, -2)
    for _, g in act.elements:
        assert g @ L.gram @ g.T == L.gram
        assert g.vecmul(L.canonical) == L.canonical
    assert dict(act.elements)["1"] == IntMatrix.identity(6)


def test_outside_n_fprime_row():
    # the F' row of an element outside N is (-1, ..., -1, r/2, 1)
    act = build_action(chatelet_direct((2,)))
    outside = [g for lab, g in act.elements if g != IntMatrix.identity(4) and g[0, 0] <= 0]
    assert any(g.row(3) == (-1, -1, 1, 1) for g in outside)


def test_parity_violation():
    with pytest.raises(ParityViolation):
        build_action(ConicBundle(([[1, 0], [0, 1]], [[1, 0], [0, -1]]), 0, 2))


def test_not_closed():
    with pytest.raises(LatticeError):
        build_action(Chatelet((2, 2), (((0, 1, 2, 3), True), ((1, 0, 3, 2), False), ((1, 0, 2, 3), True))))


def test_invariant_sublattice():
    for kind in (chatelet_diagonal((2, 2)), chatelet_direct((2, 2)), chatelet_diagonal((1, 3)), conic_bundle_swap(0), conic_bundle_swap(3)):
        act = build_action(kind)
        inv = invariant_sublattice(act)
        assert len(inv) == 2
        L = act.lattice
        F, W = L.basis_vector("F"), L.canonical
        assert L.dot(F, F) == 0 and L.dot(F, W) == -2
    act = GroupAction(yrs_lattice(0, 1), (("1", IntMatrix.identity(3)),))
    assert len(invariant_sublattice(act)) == 3


def test_cohomology_examples():
    c = cohomology(build_action(chatelet_direct((2, 2))))
    assert c["h_minus1"] == AbGroup((2,)) and c["h1"] == AbGroup((2,))
    c = cohomology(build_action(chatelet_diagonal((1, 3))))
    assert c["h_minus1"].is_trivial() and c["h1"].is_trivial()
    act = GroupAction(yrs_lattice(0, 1), (("1", IntMatrix.identity(3)),))
    assert cohomology(act)["h_minus1"].is_trivial()


@pytest.mark.parametrize("blocks", [(2,), (4,), (1, 1), (2, 2), (1, 3), (3, 3), (1, 1, 2), (2, 2, 2)])
def test_theorem_a_matches_cohomology(blocks):
    c = cohomology(build_action(chatelet_diagonal(blocks)))
    odd = any(b % 2 for b in blocks)
    j = len(blocks) - (2 if odd else 1)
    assert c["h_minus1"] == c["h1"] == AbGroup((2,) * max(j, 0))


def test_theorem_a_j_matches_lattice():
    from conftest import QQ, poly
    # blocks (2, 2): two quadratic factors inert over Q(sqrt 2)
    j, h = theorem_a_j(poly("(x^2+1)*(x^2+3)"), QQ(2))
    assert AbGroup(tuple(h)) == cohomology(build_action(chatelet_direct((2, 2))))["h1"]


def test_cyclic_construction():
    act = build_action(chatelet_cyclic((3, 3)))
    assert act.order == 6
    assert cohomology(act)["h1"].is_trivial()
    with pytest.raises(LatticeError):
        chatelet_cyclic((2,))


def test_action_json_round_trip():
    act = build_action(chatelet_diagonal((2, 2)))
    again = GroupAction.from_dict(json.loads(act.to_json()))
    assert again.elements == act.elements and again.lattice == act.lattice


def test_feasibility_examples():
    assert curve_class_feasible(8, 0, 1) == Feasible(())
    for nu in range(-20, 21):
        assert not curve_class_feasible(0, 1, nu).feasible
    r = curve_class_feasible(4, 1, 0)
    assert r == Feasible((2,))


def test_feasibility_short_circuit_is_sound():
    # the search without the short-circuit reaches the same answers
    for omega in range(-3, 4):
        for m in range(1, 4):
            for nu in range(-3, 8):
                a = curve_class_feasible(omega, m, nu)
                b = curve_class_feasible(omega, m, nu, short_circuit=False)
                assert a.feasible == b.feasible, (omega, m, nu)


def test_feasible_multisets_verify():
    rng = random.Random(4)
    for _ in range(50):
        omega, m, nu = rng.randint(1, 8), rng.randint(1, 3), rng.randint(0, 6)
        r = curve_class_feasible(omega, m, nu)
        if r.feasible:
            ms = r.multiset
            assert sum(ms) == 2 * nu + m * omega - 2
            assert sum(x * x for x in ms) == 4 * m * nu + omega * m * m
            assert all(1 <= x <= 2 * m for x in ms)
