"""Ribbon graphs with parametrized SL(2,C) jump matrices.

A graph is a set of vertices, each holding the counterclockwise cyclic list
of its half-edge germs (the cilium is the list head), plus edges carrying a
jump word for their canonical orientation.  Jump words are small closed
expressions over the coordinate environment, so graphs survive rewriting
(merge/zip) and serialize to text.

The local no-monodromy condition at a vertex reads: the ordered product of
outgoing-oriented jumps, counterclockwise from the cilium, is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .jets import Jet
from .mat2 import (
    Mat2,
    a_matrix,
    b_matrix,
    deviation_from_identity,
    diag_lower,
    identity,
    shear_matrix,
)

__all__ = [
    "Monomial",
    "Factor",
    "Word",
    "Germ",
    "Vertex",
    "Edge",
    "PathSpec",
    "AdmissiblePair",
    "JumpEval",
    "validate_admissible",
    "path_monodromy",
    "merge_vertices",
    "zip_edges",
    "drop_identity_loop",
]


# ---------------------------------------------------------------------------
# jump words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """Signed monomial sign * prod(coord^power) in multiplicative coordinates."""

    sign: int
    powers: tuple[tuple[str, int], ...]

    def eval(self, env):
        acc = None
        for name, p in self.powers:
            x = env[name]
            for _ in range(p):
                acc = x if acc is None else acc * x
        if acc is None:
            acc = 1.0 + 0j
        return acc * self.sign if self.sign != 1 else acc

    def names(self):
        return [n for n, _ in self.powers]


@dataclass(frozen=True)
class Factor:
    """One letter of a jump word.

    kinds: "S" shear(coord) | "A" face constant | "B" Weyl flip |
    "LAM" diag(-m, -1/m) for a monomial m | "DIAG" diag(1/b, b) |
    "CONST" literal matrix | "CLOWER" unit-lower diagonalizer of a subword.
    """

    kind: str
    name: str | None = None
    mono: Monomial | None = None
    word: tuple["Factor", ...] | None = None
    matrix: tuple[complex, complex, complex, complex] | None = None
    inv: bool = False

    def inverse(self) -> "Factor":
        return replace(self, inv=not self.inv)


def S(name, inv=False) -> Factor:
    return Factor(kind="S", name=name, inv=inv)


def A(inv=False) -> Factor:
    return Factor(kind="A", inv=inv)


def B(inv=False) -> Factor:
    return Factor(kind="B", inv=inv)


def LAM(mono: Monomial, inv=False) -> Factor:
    return Factor(kind="LAM", mono=mono, inv=inv)


def DIAG(name, inv=False) -> Factor:
    return Factor(kind="DIAG", name=name, inv=inv)


def CONST(matrix, inv=False) -> Factor:
    return Factor(kind="CONST", matrix=tuple(complex(x) for x in matrix), inv=inv)


def CLOWER(word: "Word | tuple[Factor, ...]", inv=False) -> Factor:
    factors = word.factors if isinstance(word, Word) else tuple(word)
    return Factor(kind="CLOWER", word=factors, inv=inv)


@dataclass(frozen=True)
class Word:
    """Product of factors, left to right."""

    factors: tuple[Factor, ...] = ()

    def inverse(self) -> "Word":
        return Word(tuple(f.inverse() for f in reversed(self.factors)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.factors + other.factors).simplified()

    def simplified(self) -> "Word":
        out: list[Factor] = []
        for f in self.factors:
            if out and out[-1] == f.inverse():
                out.pop()
            else:
                out.append(f)
        return Word(tuple(out))

    def coordinate_names(self) -> set[str]:
        names: set[str] = set()

        def visit(f: Factor):
            if f.kind in ("S", "DIAG"):
                names.add(f.name)
            elif f.kind == "LAM":
                names.update(f.mono.names())
            elif f.kind == "CLOWER":
                for g in f.word:
                    visit(g)

        for f in self.factors:
            visit(f)
        return names


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


class JumpEval:
    """Evaluates jump words over one coordinate environment, with caching.

    env maps coordinate names to multiplicative values (plain complex arrays
    or jets).  Factor results are cached by structural identity, so shared
    subwords (a stem word and the diagonalizer built from it) evaluate once.
    """

    def __init__(self, pair: "AdmissiblePair", env: dict, tol: float = 1e-8):
        self.pair = pair
        self.env = env
        self.tol = tol
        self._factor_cache: dict = {}
        self._edge_cache: dict[tuple[str, int], Mat2] = {}

    def factor(self, f: Factor) -> Mat2:
        key = f
        hit = self._factor_cache.get(key)
        if hit is not None:
            return hit
        if f.kind == "S":
            m = shear_matrix(self.env[f.name])
        elif f.kind == "A":
            m = a_matrix()
        elif f.kind == "B":
            m = b_matrix()
        elif f.kind == "LAM":
            lam = f.mono.eval(self.env)
            zero = _zero_like(lam)
            m = Mat2(-lam, zero, zero, -_reciprocal(lam))
        elif f.kind == "DIAG":
            # toric reparametrization of the eigenvector matrix; the sign of
            # the exponent is pinned by the constant-coefficient targets
            b = self.env[f.name]
            zero = _zero_like(b)
            m = Mat2(b, zero, zero, _reciprocal(b))
        elif f.kind == "CONST":
            m = Mat2(*f.matrix)
        elif f.kind == "CLOWER":
            sub = self.word(Word(f.word))
            m = diag_lower(sub, tol=self.tol).C
        else:
            raise ValueError(f"unknown factor kind {f.kind}")
        if f.inv:
            m = m.inv()
        self._factor_cache[key] = m
        return m

    def word(self, w: Word) -> Mat2:
        key = ("word", w.factors)
        hit = self._factor_cache.get(key)
        if hit is not None:
            return hit
        m = identity()
        for f in w.factors:
            m = m @ self.factor(f)
        self._factor_cache[key] = m
        return m

    def edge(self, name: str, sign: int = 1) -> Mat2:
        key = (name, sign)
        hit = self._edge_cache.get(key)
        if hit is not None:
            return hit
        w = self.pair.edges[name].jump
        m = self.word(w if sign > 0 else w.inverse())
        self._edge_cache[key] = m
        return m

    def outgoing(self, germ: "Germ") -> Mat2:
        return self.edge(germ.edge, 1 if germ.end == 0 else -1)

    def outgoing_word(self, germ: "Germ") -> Word:
        w = self.pair.edges[germ.edge].jump
        return w if germ.end == 0 else w.inverse()

    def vertex_product(self, vname: str) -> Mat2:
        # concatenate first: exact inverse pairs between adjacent germ words
        # cancel structurally, which keeps long conjugated products stable
        w = Word()
        for g in self.pair.vertices[vname].germs:
            w = w * self.outgoing_word(g)
        return self.word(w)


def _zero_like(x):
    if isinstance(x, Jet):
        return Jet.constant(np.zeros(np.shape(x.value)), x.ndir)
    return np.zeros_like(np.asarray(x, dtype=complex))


def _reciprocal(x):
    if isinstance(x, Jet):
        return x.reciprocal()
    return 1.0 / x


# ---------------------------------------------------------------------------
# graph structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Germ:
    """One end of an edge at a vertex: end 0 is the tail, end 1 the head."""

    edge: str
    end: int


@dataclass
class Vertex:
    name: str
    germs: tuple[Germ, ...]  # counterclockwise, cilium first


@dataclass
class Edge:
    name: str
    tail: str
    head: str
    jump: Word


@dataclass
class PathSpec:
    """Transversal closed loop, as its ordered edge crossings with signs."""

    crossings: tuple[tuple[str, int], ...]


class AdmissiblePair:
    """Ribbon graph plus jump assignment (admissibility is checked, not assumed)."""

    def __init__(self, vertices, edges, coordinates=()):
        self.vertices: dict[str, Vertex] = {v.name: v for v in vertices}
        self.edges: dict[str, Edge] = {e.name: e for e in edges}
        self.coordinates = tuple(coordinates)
        self._germ_home: dict[Germ, str] = {}
        for v in self.vertices.values():
            for g in v.germs:
                if g in self._germ_home:
                    raise ValueError(f"germ {g} listed twice")
                self._germ_home[g] = v.name
        for e in self.edges.values():
            for end, vn in ((0, e.tail), (1, e.head)):
                g = Germ(e.name, end)
                if g not in self._germ_home:
                    raise ValueError(f"missing germ {g}")
                if self._germ_home[g] != vn:
                    raise ValueError(f"germ {g} listed at wrong vertex")
        if len(self._germ_home) != 2 * len(self.edges):
            raise ValueError("stray germs present")

    def germ_vertex(self, g: Germ) -> str:
        return self._germ_home[g]

    def valence(self, vname: str) -> int:
        return len(self.vertices[vname].germs)

    def evaluator(self, env, tol: float = 1e-8) -> JumpEval:
        return JumpEval(self, env, tol=tol)

    def copy_with(self, vertices=None, edges=None) -> "AdmissiblePair":
        vs = vertices if vertices is not None else list(self.vertices.values())
        es = edges if edges is not None else list(self.edges.values())
        return AdmissiblePair(vs, es, self.coordinates)

    def __eq__(self, other):
        if not isinstance(other, AdmissiblePair):
            return NotImplemented
        return (
            self.coordinates == other.coordinates
            and {v: (w.germs,) for v, w in self.vertices.items()}
            == {v: (w.germs,) for v, w in other.vertices.items()}
            and {e: (f.tail, f.head, f.jump) for e, f in self.edges.items()}
            == {e: (f.tail, f.head, f.jump) for e, f in other.edges.items()}
        )


# ---------------------------------------------------------------------------
# admissibility and monodromy
# ---------------------------------------------------------------------------


def validate_admissible(pair: AdmissiblePair, env, tol: float = 1e-10):
    """Per-vertex max residual of the local no-monodromy condition.

    Returns (ok, {vertex: residual}); ok iff every residual is below tol.
    """
    ev = pair.evaluator(env)
    report = {}
    for vname in pair.vertices:
        report[vname] = deviation_from_identity(ev.vertex_product(vname))
    return all(r < tol for r in report.values()), report


def path_monodromy(pair: AdmissiblePair, path: PathSpec, env) -> Mat2:
    """Ordered product of crossed jumps J(e)^sign along the loop."""
    ev = pair.evaluator(env)
    w = Word()
    for edge, sign in path.crossings:
        if edge not in pair.edges:
            raise KeyError(f"unknown edge {edge}")
        if sign not in (1, -1):
            raise ValueError("crossing signs must be +1 or -1")
        jw = pair.edges[edge].jump
        w = w * (jw if sign > 0 else jw.inverse())
    return ev.word(w)


# ---------------------------------------------------------------------------
# admissible moves (persistent: inputs are never mutated)
# ---------------------------------------------------------------------------


def merge_vertices(pair: AdmissiblePair, edge_name: str) -> AdmissiblePair:
    """Contract a non-loop edge, splicing the far vertex's cyclic order in
    place of the removed germ.  Keeps the near vertex's name and cilium."""
    e = pair.edges[edge_name]
    if e.tail == e.head:
        raise ValueError("cannot merge along a loop edge")
    v1 = pair.vertices[e.tail]
    v2 = pair.vertices[e.head]
    g1, g2 = Germ(edge_name, 0), Germ(edge_name, 1)
    p1 = v1.germs.index(g1)
    p2 = v2.germs.index(g2)
    spliced = v2.germs[p2 + 1 :] + v2.germs[:p2]
    new_germs = v1.germs[:p1] + spliced + v1.germs[p1 + 1 :]
    vertices = [
        Vertex(v1.name, new_germs) if v.name == v1.name else v
        for v in pair.vertices.values()
        if v.name != v2.name
    ]
    edges = []
    for f in pair.edges.values():
        if f.name == edge_name:
            continue
        tail = v1.name if f.tail == v2.name else f.tail
        head = v1.name if f.head == v2.name else f.head
        edges.append(Edge(f.name, tail, head, f.jump))
    return pair.copy_with(vertices, edges)


def _germ_of_dart(dart) -> Germ:
    edge, sign = dart
    return Germ(edge, 0 if sign > 0 else 1)


def zip_edges(pair: AdmissiblePair, dart1, dart2, new_name: str | None = None) -> AdmissiblePair:
    """Fuse two parallel adjacent edges into one with the product jump.

    Both darts must be co-oriented u -> v; the tail germs must be cyclically
    consecutive (dart1 then dart2) at u and the head germs consecutive in the
    opposite order at v.  The fused jump is J(dart1) J(dart2).
    """
    e1, s1 = dart1
    e2, s2 = dart2
    if e1 == e2 and s1 == s2:
        raise ValueError("cannot zip a dart with itself")
    if e1 == e2:
        return _zip_self_reverse(pair, (e1, s1), new_name)
    ed1, ed2 = pair.edges[e1], pair.edges[e2]
    u1 = ed1.tail if s1 > 0 else ed1.head
    v1 = ed1.head if s1 > 0 else ed1.tail
    u2 = ed2.tail if s2 > 0 else ed2.head
    v2 = ed2.head if s2 > 0 else ed2.tail
    if (u1, v1) != (u2, v2):
        raise ValueError("edges do not join the same two vertices co-oriented")
    gu1, gu2 = _germ_of_dart(dart1), _germ_of_dart(dart2)
    gv1, gv2 = _germ_of_dart((e1, -s1)), _germ_of_dart((e2, -s2))
    U = pair.vertices[u1].germs
    V = pair.vertices[v1].germs
    iu = U.index(gu1)
    if U[(iu + 1) % len(U)] != gu2:
        raise ValueError("tail germs are not adjacent in cyclic order")
    iv = V.index(gv2)
    if V[(iv + 1) % len(V)] != gv1:
        raise ValueError("head germs are not adjacent in cyclic order")
    if new_name is None:
        new_name = _fresh_name(pair, "zip")
    w1 = ed1.jump if s1 > 0 else ed1.jump.inverse()
    w2 = ed2.jump if s2 > 0 else ed2.jump.inverse()
    new_edge = Edge(new_name, u1, v1, w1 * w2)

    def rebuild(germs, first, second, repl):
        # replace `first` by repl, drop `second` (which sits right after it)
        germs2 = list(germs)
        germs2[germs2.index(first)] = repl
        germs2.remove(second)
        return tuple(germs2)

    new_vertices = []
    for v in pair.vertices.values():
        germs = v.germs
        if v.name == u1:
            germs = rebuild(germs, gu1, gu2, Germ(new_name, 0))
        if v.name == v1:
            germs = rebuild(germs, gv2, gv1, Germ(new_name, 1))
        new_vertices.append(Vertex(v.name, germs))
    new_edges = [f for f in pair.edges.values() if f.name not in (e1, e2)]
    new_edges.append(new_edge)
    return pair.copy_with(new_vertices, new_edges)


def _zip_self_reverse(pair: AdmissiblePair, dart, new_name: str | None) -> AdmissiblePair:
    """Zip an edge with its own reverse: yields a curl with identity jump."""
    e, s = dart
    ed = pair.edges[e]
    if ed.tail != ed.head:
        raise ValueError("self-reverse zip needs a loop edge")
    g1 = _germ_of_dart((e, s))
    g2 = _germ_of_dart((e, -s))
    v = pair.vertices[ed.tail]
    i1 = v.germs.index(g1)
    if v.germs[(i1 + 1) % len(v.germs)] != g2:
        raise ValueError("loop germs are not adjacent in cyclic order")
    if new_name is None:
        new_name = _fresh_name(pair, "zip")
    germs = list(v.germs)
    germs[i1] = Germ(new_name, 0)
    germs[(i1 + 1) % len(germs)] = Germ(new_name, 1)
    w = ed.jump if s > 0 else ed.jump.inverse()
    new_edge = Edge(new_name, ed.tail, ed.tail, w * w.inverse())
    vertices = [Vertex(v.name, tuple(germs)) if x.name == v.name else x for x in pair.vertices.values()]
    edges = [f for f in pair.edges.values() if f.name != e]
    edges.append(new_edge)
    return pair.copy_with(vertices, edges)


def drop_identity_loop(pair: AdmissiblePair, edge_name: str) -> AdmissiblePair:
    """Remove a contractible loop whose jump word simplifies to the empty
    word; its two germs must be cyclically adjacent."""
    e = pair.edges[edge_name]
    if e.tail != e.head:
        raise ValueError("not a loop edge")
    if e.jump.simplified().factors != ():
        raise ValueError("loop jump is not structurally the identity")
    v = pair.vertices[e.tail]
    g0, g1 = Germ(edge_name, 0), Germ(edge_name, 1)
    i0 = v.germs.index(g0)
    n = len(v.germs)
    if v.germs[(i0 + 1) % n] != g1 and v.germs[i0 - 1] != g1:
        raise ValueError("loop germs are not adjacent")
    germs = tuple(g for g in v.germs if g not in (g0, g1))
    vertices = [Vertex(v.name, germs) if w.name == v.name else w for w in pair.vertices.values()]
    edges = [f for f in pair.edges.values() if f.name != edge_name]
    return pair.copy_with(vertices, edges)


def _fresh_name(pair: AdmissiblePair, base: str) -> str:
    k = 0
    while f"{base}{k}" in pair.edges:
        k += 1
    return f"{base}{k}"
