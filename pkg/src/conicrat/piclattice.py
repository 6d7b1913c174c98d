"""Picard lattices, their birational calculus, and Galois cohomology.

Conventions: a class is a row vector of integer coordinates over the basis
``labels``; a group element acts by a matrix whose row i is the image of
basis element i, so D -> D @ g.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Sequence

from .algebra.intmat import IntMatrix, invariant_factors, left_kernel, rank, solve_in_basis
from .errors import ConsistencyError, LatticeError, ParityViolation


def _dot(u, G: IntMatrix, v) -> int:
    return sum(u[i] * G[i, j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j])


@dataclass(frozen=True)
class Lattice:
    labels: tuple
    gram: IntMatrix
    canonical: tuple

    def __post_init__(self):
        n = len(self.labels)
        if self.gram.shape != (n, n):
            raise LatticeError("gram shape does not match the basis")
        if not self.gram.is_symmetric():
            raise LatticeError("gram matrix must be symmetric")
        if len(self.canonical) != n:
            raise LatticeError("canonical class has the wrong length")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "canonical", tuple(int(c) for c in self.canonical))

    @property
    def rank(self) -> int:
        return len(self.labels)

    def dot(self, u, v) -> int:
        return _dot(u, self.gram, v)

    def omega_squared(self) -> int:
        return self.dot(self.canonical, self.canonical)

    def basis_vector(self, label) -> tuple:
        i = self.index(label)
        return tuple(int(j == i) for j in range(self.rank))

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LatticeError(f"no basis element {label!r}") from None

    def det(self) -> int:
        return self.gram.det() if self.rank else 1

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "gram": self.gram.tolist(), "canonical": list(self.canonical)}

    @classmethod
    def from_dict(cls, d) -> "Lattice":
        n = len(d["labels"])
        return cls(tuple(d["labels"]), IntMatrix(d["gram"], n), tuple(d["canonical"]))


@dataclass(frozen=True)
class DivClass:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __len__(self):
        return len(self.coords)


@dataclass(frozen=True)
class AbGroup:
    """Finite abelian group given by invariant factors d1 | d2 | ... (each >= 2)."""

    factors: tuple = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors if d != 1)
        if any(d < 2 for d in fs):
            raise ValueError("invariant factors must be >= 2 (the group must be finite)")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"invariant factors {fs} do not form a divisibility chain")
        object.__setattr__(self, "factors", fs)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    def is_trivial(self) -> bool:
        return not self.factors

    def __str__(self):
        return " x ".join(f"Z/{d}" for d in self.factors) or "0"


def _coords(D, n) -> tuple:
    c = D.coords if isinstance(D, DivClass) else tuple(D)
    if len(c) != n:
        raise LatticeError(f"class of length {len(c)} on a rank {n} lattice")
    return c


# -- constructions -------------------------------------------------------------

def yrs_lattice(r: int, s: int) -> Lattice:
    """Pic(Y_rs): basis E_1..E_s, F, F'."""
    if r < 0 or s < 0:
        raise LatticeError("r and s must be nonnegative")
    n = s + 2
    G = [[0] * n for _ in range(n)]
    for i in range(s):
        G[i][i] = -1
    G[s][s + 1] = G[s + 1][s] = 1
    G[s + 1][s + 1] = r
    labels = tuple(f"E{i + 1}" for i in range(s)) + ("F", "F'")
    return Lattice(labels, IntMatrix(G, n), (1,) * s + (r - 2, -2))


def _fresh_label(labels, stem="E"):
    i = 1
    while f"{stem}{i}" in labels:
        i += 1
    return f"{stem}{i}"


def blow_up(L: Lattice, label: str | None = None):
    """Blow up a point: new E with E.E = -1, orthogonal to the pulled-back classes."""
    n = L.rank
    label = label or _fresh_label(L.labels)
    G = [list(r) + [0] for r in L.gram.rows] + [[0] * n + [-1]]
    new = Lattice(L.labels + (label,), IntMatrix(G, n + 1), L.canonical + (1,))
    pullback = IntMatrix([[int(i == j) for j in range(n + 1)] for i in range(n)], n + 1)
    return new, pullback


def blow_down(L: Lattice, Lclass):
    """Contract a (-1)-class; returns the new lattice and the pushforward (rows = images of old basis)."""
    l = _coords(Lclass, L.rank)
    if L.dot(l, l) != -1 or L.dot(l, L.canonical) != -1:
        raise LatticeError(f"not a (-1)-class: L.L = {L.dot(l, l)}, L.Omega = {L.dot(l, L.canonical)}")
    units = [i for i, c in enumerate(l) if abs(c) == 1]
    if not units:
        raise LatticeError("the contracted class has no coefficient +-1; cannot choose a basis of its complement")
    j = units[-1]
    eps = l[j]
    n = L.rank
    keep = [i for i in range(n) if i != j]
    Gl = [sum(L.gram[i, k] * l[k] for k in range(n)) for i in range(n)]  # b_i . L
    G = [[L.gram[i, k] + Gl[i] * Gl[k] for k in keep] for i in keep]
    # D = sum d_i b_i  ->  coordinates d_i - eps * l_i * d_j on the kept basis
    push = []
    for i in range(n):
        if i == j:
            push.append([-eps * l[k] for k in keep])
        else:
            push.append([int(k == i) for k in keep])
    push = IntMatrix(push, n - 1)
    canon = push.vecmul(L.canonical)
    new = Lattice(tuple(L.labels[i] for i in keep), IntMatrix(G, n - 1), canon)
    return new, push


def elementary_transformation(L: Lattice, Fclass, tangency: Sequence[int], label: str | None = None) -> Lattice:
    """Blow up a point P on the fiber F and contract the strict transform of F.

    ``Fclass`` must be a basis element.  ``tangency[i]`` is the multiplicity
    at P of the curve representing basis element i (ignored for F itself);
    the new basis consists of the strict transforms of those curves and the
    image of E_P, which takes the place of F.
    """
    n = L.rank
    f = _coords(Fclass, n)
    if sorted(f) != [0] * (n - 1) + [1]:
        raise LatticeError("the fiber class must be one of the basis elements")
    if L.dot(f, f) != 0 or L.dot(f, L.canonical) != -2:
        raise LatticeError(f"not a fiber class: F.F = {L.dot(f, f)}, F.Omega = {L.dot(f, L.canonical)}")
    if len(tangency) != n:
        raise LatticeError("tangency vector has the wrong length")
    jf = f.index(1)
    m = [0 if i == jf else int(tangency[i]) for i in range(n)]
    fi = [sum(L.gram[i, k] * f[k] for k in range(n)) for i in range(n)]  # b_i . F
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if i == jf or k == jf:
                G[i][k] = 0 if i == k else fi[k if i == jf else i]
            else:
                G[i][k] = L.gram[i, k] + fi[i] * fi[k] - fi[i] * m[k] - m[i] * fi[k]
    w = list(L.canonical)
    w[jf] = L.canonical[jf] + 1 + sum(L.canonical[i] * m[i] for i in range(n) if i != jf)
    labels = list(L.labels)
    if label:
        labels[jf] = label
    return Lattice(tuple(labels), IntMatrix(G, n), tuple(w))


# -- group actions ---------------------------------------------------------------

@dataclass(frozen=True)
class GroupAction:
    lattice: Lattice
    elements: tuple  # ((label, IntMatrix), ...)
    identity: str = "1"
    meta: dict = dc_field(default_factory=dict, compare=False)

    @property
    def matrices(self) -> list:
        return [g for _, g in self.elements]

    @property
    def order(self) -> int:
        return len(self.elements)

    def validate(self) -> None:
        L = self.lattice
        n = L.rank
        I = IntMatrix.identity(n)
        labels = [lab for lab, _ in self.elements]
        if self.identity not in labels or dict(self.elements)[self.identity] != I:
            raise LatticeError("the designated identity element is missing or not the identity matrix")
        mats = set()
        for lab, g in self.elements:
            if g.shape != (n, n):
                raise LatticeError(f"element {lab}: wrong matrix shape {g.shape}")
            if g @ L.gram @ g.T != L.gram:
                raise LatticeError(f"element {lab} does not preserve the intersection form")
            if g.vecmul(L.canonical) != L.canonical:
                raise LatticeError(f"element {lab} does not fix the canonical class")
            mats.add(g)
        if len(mats) != len(self.elements):
            raise LatticeError("repeated matrices in the element list")
        for _, g in self.elements:
            for _, h in self.elements:
                if g @ h not in mats:
                    raise LatticeError("element set is not closed under composition")

    def to_dict(self) -> dict:
        return {"lattice": self.lattice.to_dict(), "identity": self.identity,
                "elements": [[lab, g.tolist()] for lab, g in self.elements]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d) -> "GroupAction":
        L = Lattice.from_dict(d["lattice"])
        els = tuple((lab, IntMatrix(m, L.rank)) for lab, m in d["elements"])
        act = cls(L, els, d.get("identity", "1"))
        act.validate()
        return act


@dataclass(frozen=True)
class Chatelet:
    """Group given by (permutation of the roots, in N) pairs; N fixes sqrt(a)."""

    blocks: tuple
    elements: tuple  # ((perm tuple, in_N bool), ...)
    labels: tuple = ()


@dataclass(frozen=True)
class ConicBundle:
    """Group given by signed permutation matrices A_sigma on E_1..E_s."""

    signed_perms: tuple  # IntMatrix or nested lists
    r: int
    s: int
    labels: tuple = ()


def _perm_matrix(perm) -> list:
    n = len(perm)
    return [[int(perm[i] == j) for j in range(n)] for i in range(n)]


def _compose(p, q):
    # first p then q
    return tuple(q[p[i]] for i in range(len(p)))


def build_action(kind) -> GroupAction:
    if isinstance(kind, Chatelet):
        act = _build_chatelet(kind)
    elif isinstance(kind, ConicBundle):
        act = _build_conic_bundle(kind)
    else:
        raise TypeError(f"unknown action kind {type(kind).__name__}")
    act.validate()
    return act


def _build_chatelet(kind: Chatelet) -> GroupAction:
    blocks = tuple(kind.blocks)
    r = sum(blocks)
    if r % 2:
        raise LatticeError(f"r = {r} must be even (apply the parity flip first)")
    block_of = []
    for b, size in enumerate(blocks):
        block_of += [b] * size
    els = [(tuple(p), bool(inN)) for p, inN in kind.elements]
    for p, _ in els:
        if sorted(p) != list(range(r)):
            raise LatticeError(f"{p} is not a permutation of {r} roots")
        if any(block_of[p[i]] != block_of[i] for i in range(r)):
            raise LatticeError(f"permutation {p} does not respect the blocks {list(blocks)}")
    elset = set(els)
    for g in els:
        for h in els:
            if (_compose(g[0], h[0]), g[1] == h[1]) not in elset:
                raise LatticeError("element set is not closed under composition")
    ident = (tuple(range(r)), True)
    if ident not in elset:
        raise LatticeError("identity element missing")
    L = yrs_lattice(r // 2, r)
    n = r + 2
    labels = list(kind.labels) or [_chatelet_label(g, i) for i, g in enumerate(els)]
    out = []
    for (p, inN), lab in zip(els, labels):
        A = _perm_matrix(p)
        M = [[0] * n for _ in range(n)]
        if inN:
            for i in range(r):
                M[i][:r] = A[i]
            M[r][r] = M[r + 1][r + 1] = 1
        else:
            for i in range(r):
                M[i][:r] = [-v for v in A[i]]
                M[i][r] = 1
            M[r][r] = 1
            M[r + 1][:r] = [-1] * r
            M[r + 1][r] = r // 2
            M[r + 1][r + 1] = 1
        out.append(("1" if (p, inN) == ident else lab, IntMatrix(M, n)))
    meta = {"kind": "chatelet", "blocks": list(blocks)}
    return GroupAction(L, tuple(out), "1", meta)


def _chatelet_label(g, i):
    return f"g{i}"


def _as_signed(A, s):
    if isinstance(A, IntMatrix):
        rows = A.tolist()
    else:
        rows = [list(r) for r in A]
    if len(rows) != s or any(len(r) != s for r in rows):
        raise LatticeError(f"A_sigma must be {s}x{s}")
    for r in rows:
        if sorted(abs(v) for v in r) != [0] * (s - 1) + [1]:
            raise LatticeError("A_sigma must be a signed permutation matrix")
    cols = list(zip(*rows))
    for c in cols:
        if sorted(abs(v) for v in c) != [0] * (s - 1) + [1]:
            raise LatticeError("A_sigma must be a signed permutation matrix")
    return rows


def _build_conic_bundle(kind: ConicBundle) -> GroupAction:
    s, r = kind.s, kind.r
    L = yrs_lattice(r, s)
    n = s + 2
    out = []
    labels = list(kind.labels) or [f"g{i}" for i in range(len(kind.signed_perms))]
    ident = None
    for A, lab in zip(kind.signed_perms, labels):
        rows = _as_signed(A, s)
        neg = sum(1 for row in rows for v in row if v == -1)
        if neg % 2:
            raise ParityViolation(f"parity violation (n_sigma must be even): element {lab} has n_sigma = {neg}")
        M = [[0] * n for _ in range(n)]
        for i in range(s):
            M[i][:s] = rows[i]
            M[i][s] = int(-1 in rows[i])
        M[s][s] = 1
        cols = list(zip(*rows))
        M[s + 1][:s] = [-1 if -1 in cols[j] else 0 for j in range(s)]
        M[s + 1][s] = neg // 2
        M[s + 1][s + 1] = 1
        g = IntMatrix(M, n)
        if g == IntMatrix.identity(n):
            ident = lab
        out.append((lab, g))
    if ident is None:
        raise LatticeError("identity element missing")
    return GroupAction(L, tuple(out), ident, {"kind": "conic_bundle", "r": r, "s": s})


# -- standard groups for tests and the CLI ------------------------------------------

def _cycle_perm(blocks, shifts):
    p, start = [], 0
    for size, k in zip(blocks, shifts):
        p += [start + (i + k) % size for i in range(size)]
        start += size
    return tuple(p)


def chatelet_direct(blocks) -> Chatelet:
    """N = product of cyclic groups rotating each block, G = N x <sigma>, sigma trivial on roots."""
    blocks = tuple(blocks)
    els = []
    for shifts in product(*[range(b) for b in blocks]):
        p = _cycle_perm(blocks, shifts)
        els.append((p, True))
        els.append((p, False))
    return Chatelet(blocks, tuple(els))


def chatelet_diagonal(blocks) -> Chatelet:
    """N = <n> with n rotating every block at once, G = N x <sigma>."""
    blocks = tuple(blocks)
    order = math.lcm(*blocks)
    els = []
    for k in range(order):
        p = _cycle_perm(blocks, [k] * len(blocks))
        els += [(p, True), (p, False)]
    return Chatelet(blocks, tuple(dict.fromkeys(els)))


def chatelet_cyclic(blocks) -> Chatelet:
    """G = <tau> of order 2*lcm, tau rotating every block and moving sqrt(a); needs odd blocks."""
    blocks = tuple(blocks)
    if any(b % 2 == 0 for b in blocks):
        raise LatticeError("the cyclic construction needs every block odd (N must stay transitive)")
    order = 2 * math.lcm(*blocks)
    els = []
    for k in range(order):
        els.append((_cycle_perm(blocks, [k] * len(blocks)), k % 2 == 0))
    return Chatelet(blocks, tuple(dict.fromkeys(els)))


def conic_bundle_swap(r: int = 0) -> ConicBundle:
    """s = 2: C2 x C2 generated by the swap of E1, E2 and by sigma negating both."""
    mats = ([[1, 0], [0, 1]], [[0, 1], [1, 0]], [[-1, 0], [0, -1]], [[0, -1], [-1, 0]])
    return ConicBundle(mats, r, 2, ("1", "tau", "sigma", "tau*sigma"))


# -- invariants and cohomology -------------------------------------------------------

def invariant_sublattice(act: GroupAction) -> list:
    n = act.lattice.rank
    I = IntMatrix.identity(n)
    diffs = [g - I for g in act.matrices if g != I]
    if not diffs:
        return [DivClass(r) for r in I.rows]
    K = left_kernel(IntMatrix.hstack(diffs))
    return [DivClass(r) for r in K.rows]


def _h_minus1(mats, n) -> AbGroup:
    I = IntMatrix.identity(n)
    S = IntMatrix.zeros(n, n)
    for g in mats:
        S = S + g
    return _quotient(S, [g - I for g in mats], n)


def _quotient(S, diffs, n) -> AbGroup:
    """ker(S) / span of the rows of diffs, as invariant factors."""
    Z = left_kernel(S)
    if Z.nrows == 0:
        return AbGroup()
    gens = [row for D in diffs for row in D.rows if any(row)]
    if not gens:
        raise ConsistencyError("Z is nonzero but B = 0; the quotient would be infinite")
    C = solve_in_basis(Z, IntMatrix(gens, n))
    if rank(C) < Z.nrows:
        raise ConsistencyError("B has smaller rank than Z; the quotient would be infinite")
    return AbGroup(tuple(d for d in invariant_factors(C) if d > 1))


def _int_inverse(g: IntMatrix) -> IntMatrix:
    inv = g.to_sympy().inv()
    return IntMatrix([[int(v) for v in inv.row(i)] for i in range(g.nrows)], g.ncols)


def _cyclic_generator(act: GroupAction):
    n = act.lattice.rank
    I = IntMatrix.identity(n)
    N = act.order
    for _, g in act.elements:
        x, k = g, 1
        while x != I and k <= N:
            x = x @ g
            k += 1
        if k == N:
            return g
    return None


def _cyclic_h1(g: IntMatrix, N: int) -> AbGroup:
    # H^1(C_N, M) = ker(norm) / im(g - 1)
    n = g.nrows
    I = IntMatrix.identity(n)
    S, x = IntMatrix.zeros(n, n), I
    for _ in range(N):
        S = S + x
        x = x @ g
    return _quotient(S, [g - I], n)


def cohomology(act: GroupAction) -> dict:
    """{'h_minus1': Z/B, 'h1': H^1 via the dual action g -> transpose(g^-1)}."""
    n = act.lattice.rank
    mats = act.matrices
    hm1 = _h_minus1(mats, n)
    dual = [_int_inverse(g).T for g in mats]
    h1 = _h_minus1(dual, n)
    g = _cyclic_generator(act)
    if g is not None and act.order > 1:
        direct = _cyclic_h1(g, act.order)
        if direct != h1:
            raise ConsistencyError(f"H^1 via the dual action ({h1}) disagrees with the cyclic formula ({direct})")
    return {"h_minus1": hm1, "h1": h1}


# -- curve classes C = nu F - m Omega -------------------------------------------------

@dataclass(frozen=True)
class Feasible:
    multiset: tuple

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    reason: str = ""

    feasible = False


def curve_class_feasible(omega: int, m: int, nu: int, cap: int = 64, short_circuit: bool = True):
    """Is there a multiset {m_j} in [1, 2m] with sum m_j^2 = 4m nu + omega m^2 and sum m_j = 2 nu + m omega - 2?"""
    if m < 0:
        raise ValueError("m must be nonnegative")
    S2 = 4 * m * nu + omega * m * m
    S1 = 2 * nu + m * omega - 2
    if short_circuit and m >= 1 and omega * m * m < 4 * m:
        return Infeasible(f"omega*m^2 = {omega * m * m} < 4m = {4 * m}")
    if S1 < 0 or S2 < 0 or S1 > S2:
        return Infeasible("sums out of range")
    if m == 0:
        return Feasible(()) if S1 == 0 and S2 == 0 else Infeasible("m = 0 forces an empty multiset")
    if S2 > 2 * m * S1:
        return Infeasible("sum of squares exceeds 2m times the sum")
    # breadth-first over the number of parts; state (sum, sum of squares) -> parent
    parts = range(2 * m, 0, -1)
    start = (0, 0)
    seen = {start: None}
    frontier = [start]
    for _ in range(cap):
        nxt = []
        for st in frontier:
            s1, s2 = st
            for p in parts:
                t = (s1 + p, s2 + p * p)
                if t[0] > S1 or t[1] > S2 or t in seen:
                    continue
                seen[t] = (st, p)
                if t == (S1, S2):
                    return Feasible(tuple(_unwind(seen, t)))
                nxt.append(t)
        if not nxt:
            break
        frontier = nxt
    if (S1, S2) == start:
        return Feasible(())
    return Infeasible(f"no multiset with at most {cap} parts")


def _unwind(seen, t):
    out = []
    while seen[t] is not None:
        t, p = seen[t]
        out.append(p)
    return sorted(out, reverse=True)
