"""Builders for the graph families and their coordinate systems.

One amalgamation engine covers every contour system: each boundary vertex of
a triangulated piece gets a stem to a small plumbing gadget (normalized
eigenvector loop, diagonal edge, Weyl-flip loop) and each cutting contour
contributes one gadget joining its two sides.  Specializations produce the
one-contour separating/non-separating graphs, multi-contour systems, and
complete trinion decompositions, together with exact constraint data and
the constant target matrix transcribed from the statement formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coords import Combo, CoordinateSystem, Relation, WedgeBuilder, solve_affine
from .mat2 import Mat2, DiagPair, diag_lower
from .ribbon import (
    CLOWER,
    DIAG,
    LAM,
    A,
    AdmissiblePair,
    B,
    CONST,
    Edge,
    Factor,
    Germ,
    Monomial,
    S,
    Vertex,
    Word,
)
from .surfaces import Triangulation
from .twoform import TwoFormMatrix

__all__ = [
    "PieceBlueprint",
    "GraphSystem",
    "build_contour_system",
    "build_gamma2_separating",
    "build_gamma2_nonseparating",
    "build_multicontour",
    "TrinionGraph",
    "build_trinion_decomposition",
    "build_trinion_rep",
    "toric_shift",
    "toric_shift_multiplicative",
    "build_gamma0",
    "build_gamma1",
    "glue_separating_words",
    "boundary_monodromy",
]


# ---------------------------------------------------------------------------
# pieces
# ---------------------------------------------------------------------------


@dataclass
class BoundaryInfo:
    """Stem data for one boundary vertex of a triangulated piece."""

    vertex: str
    stem_edge: str
    stem_word: Word
    lam_mono: Monomial
    slot_names: list[str]  # coordinate names in slot order (repeats allowed)
    slot_mults: dict[str, int]
    ipi_units: int  # ell = sum mu zeta + ipi_units * i*pi


@dataclass
class PieceBlueprint:
    """A triangulated piece turned into graph components (pre-amalgamation)."""

    tri: Triangulation
    prefix: str
    vertices: list[Vertex]
    edges: list[Edge]
    coord_names: list[str]
    coord_of_edge: dict[str, str]
    boundaries: dict[str, BoundaryInfo]  # triangulation vertex -> info
    corner_edges: dict[tuple[str, int], str] | None = None  # (vertex, rot index) -> spoke


def build_piece(
    tri: Triangulation,
    prefix: str,
    starts: dict[str, int] | None = None,
    naming: str = "appearance",
) -> PieceBlueprint:
    """Attach internal face vertices, choose stems, and name coordinates.

    At each triangulation vertex the cyclic order is: stem, then alternating
    internal-edge and triangulation germs, so the no-monodromy condition
    forces the stem jump to be the inverted alternating product.  `starts`
    picks which triangulation germ comes first after the stem (default 0);
    with `naming` = "appearance" coordinates are numbered in order of first
    appearance, so the eliminated coordinate of each relation is always the
    piece's first one.
    """
    starts = starts or {}
    # coordinate names
    coord_of_edge: dict[str, str] = {}
    order: list[str] = []
    for v in tri.vertices:
        s = starts.get(v, 0)
        rot = tri.rotations[v]
        for k in range(len(rot)):
            e = rot[(s + k) % len(rot)][0]
            if e not in coord_of_edge:
                if naming == "appearance":
                    coord_of_edge[e] = f"z{prefix}{len(order) + 1}"
                else:
                    coord_of_edge[e] = "z" + e
                order.append(coord_of_edge[e])
    # edges: shear jumps on triangulation edges
    edges = [
        Edge(e, t, h, Word((S(coord_of_edge[e]),))) for e, (t, h) in tri.edges.items()
    ]
    # one internal vertex per face, one internal edge per corner
    corner_edge: dict[tuple[str, int], str] = {}
    face_corners: dict[int, list[str]] = {f: [] for f in range(len(tri.faces))}
    for v in tri.vertices:
        for i, f in enumerate(tri.corner_faces[v]):
            name = f"a{prefix}_{v}_{i}"
            corner_edge[(v, i)] = name
            face_corners[f].append(name)
            edges.append(Edge(name, v, f"w{prefix}{f}", Word((A(),))))
    w_vertices = [
        Vertex(f"w{prefix}{f}", tuple(Germ(n, 1) for n in face_corners[f]))
        for f in range(len(tri.faces))
    ]
    # boundary vertices with stems
    vertices: list[Vertex] = []
    boundaries: dict[str, BoundaryInfo] = {}
    for v in tri.vertices:
        s = starts.get(v, 0)
        rot = tri.rotations[v]
        n = len(rot)
        stem = f"stem_{v}"
        germs: list[Germ] = [Germ(stem, 0)]
        word: list[Factor] = []
        slot_names: list[str] = []
        mults: dict[str, int] = {}
        negs = 0
        for k in range(n):
            idx = (s + k) % n
            dart = rot[idx]
            corner_before = (s + k - 1) % n  # corner between previous germ and this one
            germs.append(Germ(corner_edge[(v, corner_before)], 0))
            germs.append(Germ(dart[0], 0 if dart[1] > 0 else 1))
            word.append(A())
            word.append(S(coord_of_edge[dart[0]], inv=dart[1] < 0))
            cname = coord_of_edge[dart[0]]
            slot_names.append(cname)
            mults[cname] = mults.get(cname, 0) + 1
            if dart[1] < 0:
                negs += 1
        stem_word = Word(tuple(word)).inverse()
        # lambda = -(product of signed slot coordinates)
        sign = -1 if (negs % 2 == 0) else 1
        lam = Monomial(sign=sign, powers=tuple(sorted(mults.items())))
        ipi_units = 0 if sign == 1 else 1  # exp(i*pi) = -1 makes exp(ell) = lam
        vertices.append(Vertex(v, tuple(germs)))
        boundaries[v] = BoundaryInfo(
            vertex=v,
            stem_edge=stem,
            stem_word=stem_word,
            lam_mono=lam,
            slot_names=slot_names,
            slot_mults=mults,
            ipi_units=ipi_units,
        )
    vertices.extend(w_vertices)
    return PieceBlueprint(
        tri=tri,
        prefix=prefix,
        vertices=vertices,
        edges=edges,
        coord_names=order,
        coord_of_edge=coord_of_edge,
        boundaries=boundaries,
        corner_edges=corner_edge,
    )


# ---------------------------------------------------------------------------
# amalgamation
# ---------------------------------------------------------------------------


@dataclass
class ContourInfo:
    ell: str
    beta: str
    side_a: str  # triangulation vertex name
    side_b: str
    toric_a: str
    toric_b: str
    gadget_edges: dict[str, str]


@dataclass
class GraphSystem:
    """Assembled admissible pair plus its coordinate system and audit data."""

    pair: AdmissiblePair
    csys: CoordinateSystem
    pieces: list[PieceBlueprint]
    contours: list[ContourInfo]
    genus: int
    target: TwoFormMatrix

    def boundary(self, vertex: str) -> BoundaryInfo:
        for p in self.pieces:
            if vertex in p.boundaries:
                return p.boundaries[vertex]
        raise KeyError(vertex)


def build_contour_system(
    pieces: list[PieceBlueprint],
    contours: list[tuple[str, str]],
    free_style: str = "shear",
) -> GraphSystem:
    """Amalgamate pieces along cutting contours.

    `contours` lists (vertex_a, vertex_b) pairs of boundary vertices (the
    two sides may live on the same piece).  With free_style="shear" the free
    coordinates are the leftover shear logs plus one length and one toric
    log per contour; "lengths" instead presents only lengths and torics,
    which requires the relations to determine every shear (the complete
    trinion decomposition).
    """
    boundary_of: dict[str, BoundaryInfo] = {}
    piece_coords: dict[str, list[str]] = {}
    for p in pieces:
        boundary_of.update(p.boundaries)
        for v in p.boundaries:
            piece_coords[v] = p.coord_names
    used = [v for pair_ in contours for v in pair_]
    if sorted(used) != sorted(boundary_of):
        raise ValueError("contours must use every boundary vertex exactly once")

    vertices: list[Vertex] = []
    edges: list[Edge] = []
    env_names: list[str] = []
    for p in pieces:
        vertices.extend(p.vertices)
        edges.extend(p.edges)
        env_names.extend(p.coord_names)

    genus_pieces = sum(p.tri.genus for p in pieces)
    n_pieces = len(pieces)
    m = len(contours)
    genus = genus_pieces + m - n_pieces + 1
    total_edges = sum(len(p.tri.edges) for p in pieces)
    if total_edges != 6 * genus - 6:
        raise ValueError(
            f"edge count {total_edges} inconsistent with genus {genus} (expected {6 * genus - 6})"
        )

    relations: list[Relation] = []
    derived: dict[str, Combo] = {}
    constraints: list[Combo] = []
    contour_infos: list[ContourInfo] = []
    lambda_monos: list[Monomial] = []
    free_ells: list[str] = []
    free_betas: list[str] = []

    for k, (va, vb) in enumerate(contours, start=1):
        ia, ib = boundary_of[va], boundary_of[vb]
        ell, beta = f"ell{k}", f"beta{k}"
        ta, tb = f"b{k}t", f"b{k}h"
        qa, qb, qm = f"q{k}t", f"q{k}h", f"q{k}m"
        la, lb = f"c{k}t", f"c{k}h"
        ea, eb = f"t{k}t", f"t{k}h"
        wb = f"w{k}"
        env_names.extend([ta, tb])
        # stems now point at the gadget vertices
        edges.append(Edge(ia.stem_edge, ia.vertex, qa, ia.stem_word))
        edges.append(Edge(ib.stem_edge, ib.vertex, qb, ib.stem_word))
        # eigenvector loops, diagonal edges, Weyl-flip loop
        edges.append(Edge(la, qa, qa, Word((CLOWER(ia.stem_word.factors), DIAG(ta)))))
        edges.append(Edge(lb, qb, qb, Word((CLOWER(ib.stem_word.factors), DIAG(tb)))))
        edges.append(Edge(ea, qa, qm, Word((LAM(ia.lam_mono),))))
        edges.append(Edge(eb, qb, qm, Word((LAM(ib.lam_mono),))))
        edges.append(Edge(wb, qm, qm, Word((B(),))))
        vertices.append(
            Vertex(qa, (Germ(ia.stem_edge, 1), Germ(la, 0), Germ(ea, 0), Germ(la, 1)))
        )
        vertices.append(
            Vertex(qb, (Germ(ib.stem_edge, 1), Germ(lb, 0), Germ(eb, 0), Germ(lb, 1)))
        )
        vertices.append(
            Vertex(qm, (Germ(ea, 1), Germ(wb, 0), Germ(eb, 1), Germ(wb, 1)))
        )
        # log-linear relations: ell = sum mu zeta + (i*pi units) on both sides
        for info in (ia, ib):
            combo = Combo.of(
                {**{n: Fraction(c) for n, c in info.slot_mults.items()}, ell: Fraction(-1)},
                ipi=Fraction(info.ipi_units),
            )
            # pivot preference: this vertex's slots in cyclic order, then the
            # rest of its piece (elimination cascades can exhaust the slots)
            cands = list(dict.fromkeys(info.slot_names))
            cands += [n for n in piece_coords[info.vertex] if n not in cands]
            relations.append(Relation(combo, pivots=tuple(cands)))
        # symmetric section of the toric fibration: beta = 2(b_a + b_b)
        relations.append(Relation(Combo.of({ta: 1, beta: Fraction(-1, 4)}), pivots=(ta,)))
        relations.append(Relation(Combo.of({tb: 1, beta: Fraction(-1, 4)}), pivots=(tb,)))
        derived[ell] = Combo.of(
            {n: Fraction(c) for n, c in ia.slot_mults.items()}, ipi=Fraction(ia.ipi_units)
        )
        derived[beta] = Combo.of({ta: 2, tb: 2})
        # multiplicative constraint: side products agree (integer exponents)
        diff = Combo.of(
            {
                **{n: Fraction(c) for n, c in ia.slot_mults.items()},
            },
            ipi=Fraction(ia.ipi_units),
        ).add(
            Combo.of(
                {n: -Fraction(c) for n, c in ib.slot_mults.items()},
                ipi=-Fraction(ib.ipi_units),
            )
        )
        constraints.append(diff)
        lambda_monos.append(ia.lam_mono)
        contour_infos.append(
            ContourInfo(
                ell=ell,
                beta=beta,
                side_a=va,
                side_b=vb,
                toric_a=ta,
                toric_b=tb,
                gadget_edges={"loop_a": la, "loop_b": lb, "t_a": ea, "t_b": eb, "flip": wb},
            )
        )
        free_ells.append(ell)
        free_betas.append(beta)

    free_extra = free_ells + free_betas
    solution, free_shears = solve_affine(relations, env_names, reserved_free=free_extra)
    free_names = tuple(free_shears + free_ells + free_betas)
    if free_style == "lengths" and free_shears:
        raise ValueError("length-only presentation requires all shears eliminated")
    if len(free_names) != 6 * genus - 6:
        raise ValueError(
            f"free coordinate count {len(free_names)} != 6g-6 = {6 * genus - 6}"
        )

    domains = {n: "shear" for n in free_shears}
    domains.update({n: "length" for n in free_ells})
    domains.update({n: "toric" for n in free_betas})
    # keep lambda monomials well conditioned: scale shear walk width by the
    # largest monomial degree the coordinate feeds
    re_scale = {}
    for n in free_names:
        if domains[n] == "shear":
            deg = max(
                (sum(p for _, p in mono.powers) for mono in lambda_monos if n in mono.names()),
                default=6,
            )
            re_scale[n] = 0.69 / max(1.0, deg / 2.0)
        elif domains[n] == "length":
            re_scale[n] = 0.5
        else:
            re_scale[n] = 0.69

    csys = CoordinateSystem(
        env_names=tuple(env_names),
        free_names=free_names,
        solution=solution,
        derived=derived,
        constraints=tuple(constraints),
        domains=domains,
        re_scale=re_scale,
        lambda_monos=tuple(lambda_monos),
    )
    pair = AdmissiblePair(vertices, edges, coordinates=tuple(env_names))
    target = _theorem_target(csys, pieces, contour_infos)
    return GraphSystem(
        pair=pair,
        csys=csys,
        pieces=pieces,
        contours=contour_infos,
        genus=genus,
        target=target,
    )


def _theorem_target(csys, pieces, contour_infos) -> TwoFormMatrix:
    """Constant matrix of the statement right-hand side in the free basis.

    Per triangulation vertex: sum over later slot pairs of the wedge of the
    two slot differentials; plus one beta-length wedge per contour.  Built
    with exact rational arithmetic on the constraint-solved differentials,
    entirely independent of the jet evaluation route.
    """
    wb = WedgeBuilder(csys.free_names)
    for p in pieces:
        for info in p.boundaries.values():
            names = info.slot_names
            for i in range(len(names)):
                for j in range(i + 1, len(names)):
                    wb.add(
                        wb.free_differential(csys, names[i]),
                        wb.free_differential(csys, names[j]),
                    )
    for c in contour_infos:
        wb.add({c.beta: Fraction(1)}, {c.ell: Fraction(1)})
    return TwoFormMatrix(csys.free_names, wb.matrix())


# ---------------------------------------------------------------------------
# named builders
# ---------------------------------------------------------------------------


def trinion_piece(prefix: str, naming: str = "appearance") -> PieceBlueprint:
    """Trinion piece with stems in the cap-bearing face, so that the slots
    after the stems run (e3,e2), (e1,e3), (e2,e1) at the three vertices."""
    tri = Triangulation.trinion(prefix)
    v1, v2, v3 = tri.vertices
    e1, e2, e3 = (f"{prefix}e{k}" for k in (1, 2, 3))
    starts = {
        v1: tri.rotations[v1].index((e3, 1)),
        v2: tri.rotations[v2].index((e1, 1)),
        v3: tri.rotations[v3].index((e2, 1)),
    }
    return build_piece(tri, prefix, starts=starts, naming=naming)


def build_gamma2_separating(g_tilde: int = 1, g_hat: int = 1) -> GraphSystem:
    """One separating contour; pieces are one-vertex triangulated handles."""
    tilde = build_piece(_one_vertex_piece(g_tilde, "t"), "t")
    hat = build_piece(_one_vertex_piece(g_hat, "h"), "h")
    return build_contour_system(
        [tilde, hat], [(tilde.tri.vertices[0], hat.tri.vertices[0])]
    )


def build_gamma2_nonseparating(g: int = 2) -> GraphSystem:
    """One non-separating contour; single piece of genus g-1 with two
    boundary vertices."""
    if g != 2:
        raise ValueError("only the genus-2 instance is built in")
    piece = build_piece(Triangulation.two_vertex_torus("n"), "n")
    p, q = piece.tri.vertices
    return build_contour_system([piece], [(p, q)])


def _one_vertex_piece(genus: int, prefix: str) -> Triangulation:
    if genus == 1:
        return Triangulation.one_vertex_torus(prefix)
    if genus == 2:
        return Triangulation.one_vertex_genus2(prefix)
    raise ValueError("one-vertex pieces available for genus 1 and 2")


def build_multicontour(spec: str, genus: int = None) -> GraphSystem:
    """Catalogued multi-contour systems.

    spec: "g2-sep" | "g2-two" | "g3-m1" | "g3-m2" | "g3-m3" | "g3-m4".
    """
    if spec == "g2-sep":
        return build_gamma2_separating(1, 1)
    if spec == "g2-two":
        tilde = build_piece(Triangulation.one_vertex_torus("t"), "t")
        pants = trinion_piece("h")
        v1, v2, v3 = pants.tri.vertices
        return build_contour_system(
            [tilde, pants], [(tilde.tri.vertices[0], v1), (v2, v3)]
        )
    if spec == "g3-m1":
        tilde = build_piece(Triangulation.one_vertex_torus("t"), "t")
        hat = build_piece(Triangulation.one_vertex_genus2("o"), "o")
        return build_contour_system(
            [tilde, hat], [(tilde.tri.vertices[0], hat.tri.vertices[0])]
        )
    if spec == "g3-m2":
        a = build_piece(Triangulation.one_vertex_torus("a"), "a")
        mid = build_piece(Triangulation.two_vertex_torus("n"), "n")
        b = build_piece(Triangulation.one_vertex_torus("b"), "b")
        p, q = mid.tri.vertices
        return build_contour_system(
            [a, mid, b], [(a.tri.vertices[0], p), (b.tri.vertices[0], q)]
        )
    if spec == "g3-m3":
        a = build_piece(Triangulation.one_vertex_torus("a"), "a")
        b = build_piece(Triangulation.one_vertex_torus("b"), "b")
        s = build_piece(Triangulation.four_holed_sphere("s"), "s")
        v1, v2, v3, v4 = s.tri.vertices
        return build_contour_system(
            [a, b, s], [(a.tri.vertices[0], v1), (b.tri.vertices[0], v2), (v3, v4)]
        )
    if spec == "g3-m4":
        p = trinion_piece("p")
        b = build_piece(Triangulation.one_vertex_torus("b"), "b")
        s = build_piece(Triangulation.four_holed_sphere("s"), "s")
        pv1, pv2, pv3 = p.tri.vertices
        sv1, sv2, sv3, sv4 = s.tri.vertices
        return build_contour_system(
            [p, b, s],
            [(pv1, sv1), (b.tri.vertices[0], sv2), (sv3, sv4), (pv2, pv3)],
        )
    raise ValueError(f"unknown multicontour spec {spec!r}")


# ---------------------------------------------------------------------------
# trinion decomposition
# ---------------------------------------------------------------------------


@dataclass
class TrinionGraph:
    """Trivalent ribbon graph: vertices are trinions (outlets cyclically
    ordered 1,2,3), edges glue outlet a of trinion j to outlet b of k."""

    n_trinions: int
    gluings: list[tuple[int, int, int, int]]  # (j, a, k, b), outlets 1..3

    def __post_init__(self):
        seen = set()
        for (j, a, k, b) in self.gluings:
            for t, o in ((j, a), (k, b)):
                if not (0 <= t < self.n_trinions and 1 <= o <= 3):
                    raise ValueError("outlet out of range")
                if (t, o) in seen:
                    raise ValueError(f"outlet {(t, o)} glued twice")
                seen.add((t, o))
        if len(seen) != 3 * self.n_trinions:
            raise ValueError("dangling trinion outlet")
        if len(self.gluings) * 2 != 3 * self.n_trinions:
            raise ValueError("trinion graph must be trivalent")

    @property
    def genus(self) -> int:
        return self.n_trinions // 2 + 1


def build_trinion_decomposition(tg: TrinionGraph) -> GraphSystem:
    """Complete trinion decomposition: coordinates are one length and one
    toric log per trinion-graph edge; all shears are determined."""
    pieces = [trinion_piece(f"p{j}", naming="natural") for j in range(tg.n_trinions)]
    contours = [
        (pieces[j].tri.vertices[a - 1], pieces[k].tri.vertices[b - 1])
        for (j, a, k, b) in tg.gluings
    ]
    return build_contour_system(pieces, contours, free_style="lengths")


def trinion_local_monodromies(lam1, lam2, lam3):
    """Explicit trinion monodromies around the three boundary vertices.

    M1 M2 M3 = I and tr M_j = -lam_j - 1/lam_j; M1 is lower and M3 upper
    triangular.
    """
    l1, l2, l3 = (complex(x) for x in (lam1, lam2, lam3))
    for l in (l1, l2, l3):
        if abs(l * l - 1.0) < 1e-12 or l == 0:
            raise ValueError("trinion eigenvalue must avoid 0 and +-1")
    M1 = Mat2(-l1, 0j, (l1 * l2 + l3) / (l1 * l3), -1.0 / l1)
    M2 = Mat2(
        l3 / l1,
        (-l2 * l3 - l1) / (l1 * l2),
        (l1 * l2 + l3) / l1,
        (-l1 * l2 ** 2 - l2 * l3 - l1) / (l1 * l2),
    )
    M3 = Mat2(-1.0 / l3, (-l2 * l3 - l1) / l2, 0j, -l3)
    return M1, M2, M3


def build_trinion_rep(lam1, lam2, lam3):
    """Trinion representation data: monodromies, normalized diagonalizers of
    the local boundary monodromies, and the shear values (principal roots)."""
    lams = [complex(lam1), complex(lam2), complex(lam3)]
    Ms = trinion_local_monodromies(*lams)
    z = [
        np.sqrt(lams[2] * lams[1] / lams[0]),
        np.sqrt(lams[0] * lams[2] / lams[1]),
        np.sqrt(lams[0] * lams[1] / lams[2]),
    ]
    Cs = []
    for j in range(3):
        lj, lj1, lj2 = lams[j], lams[(j + 1) % 3], lams[(j + 2) % 3]
        Mloc = Mat2(-lj, 0j, (lj * lj1 + lj2) / (lj2 * lj), -1.0 / lj)
        Cs.append(diag_lower(Mloc).C)
    return Ms, Cs, z


def toric_shift(betas, ells):
    """Toric relabeling shift for the opposite cyclic order of a trinion.

    Returns (new_beta_3, new_beta_2, new_beta_1) as listed in the source
    order: new3 = b1 + (l3-l1-l2)/2, new2 = b2 + (l1-l2-l3)/2,
    new1 = b3 + (l2-l1-l3)/2.
    """
    b1, b2, b3 = betas
    l1, l2, l3 = ells
    nb3 = b1 + 0.5 * (l3 - l1 - l2)
    nb2 = b2 + 0.5 * (l1 - l2 - l3)
    nb1 = b3 + 0.5 * (l2 - l1 - l3)
    return nb1, nb2, nb3


def toric_shift_multiplicative(bs, lams):
    """Multiplicative form of the relabeling shift (principal roots)."""
    b1, b2, b3 = (complex(x) for x in bs)
    l1, l2, l3 = (complex(x) for x in lams)
    nb3 = np.sqrt(l3 / (l1 * l2)) * b1
    nb2 = np.sqrt(l1 / (l2 * l3)) * b2
    nb1 = np.sqrt(l2 / (l3 * l1)) * b3
    return nb1, nb2, nb3


# ---------------------------------------------------------------------------
# canonical dissection and gluing
# ---------------------------------------------------------------------------


def build_gamma0(handle_jumps: list[tuple[Word, Word]], coordinates=()) -> AdmissiblePair:
    """One-vertex canonical dissection graph from handle monodromy words.

    handle_jumps[j] = (word for M_alpha_j, word for M_beta_j); the edge
    named alpha_j carries the beta monodromy and vice versa, with the germ
    sequence giving the product of commutators around the vertex.
    """
    g = len(handle_jumps)
    edges = []
    germs = []
    for j, (wa, wb) in enumerate(handle_jumps, start=1):
        ea, eb = f"alpha{j}", f"beta{j}"
        edges.append(Edge(ea, "v0", "v0", wb))
        edges.append(Edge(eb, "v0", "v0", wa))
        germs.extend([Germ(eb, 0), Germ(ea, 1), Germ(eb, 1), Germ(ea, 0)])
    return AdmissiblePair([Vertex("v0", tuple(germs))], edges, coordinates=tuple(coordinates))


def build_gamma0_numeric(monodromies: list[tuple[Mat2, Mat2]]) -> AdmissiblePair:
    """Canonical dissection graph with constant (point) jump matrices."""
    words = [
        (Word((CONST(tuple(ma.entries())),)), Word((CONST(tuple(mb.entries())),)))
        for (ma, mb) in monodromies
    ]
    return build_gamma0(words)


@dataclass
class HandleWords:
    """Parametrized handle monodromies of a one-vertex piece, plus the
    boundary data used to glue it."""

    alpha_beta: list[tuple[Word, Word]]
    stem_word: Word
    lam_mono: Monomial
    coords: list[str]


def glue_separating_words(tilde: HandleWords, hat: HandleWords, bt: str, bh: str):
    """Monodromy words for the glued surface: tilde handles conjugated by
    G = C_hat' b^-1 C_tilde'^-1, hat handles unchanged."""
    g_word = Word(
        (CLOWER(hat.stem_word.factors), DIAG(bh), B(inv=True), DIAG(bt, inv=True), CLOWER(tilde.stem_word.factors, inv=True))
    )
    g_inv = g_word.inverse()
    out = []
    for (wa, wb) in tilde.alpha_beta:
        out.append((g_word * wa * g_inv, g_word * wb * g_inv))
    out.extend(hat.alpha_beta)
    return out


def build_gamma1(tilde: HandleWords, hat: HandleWords, bt: str, bh: str, system: GraphSystem) -> AdmissiblePair:
    """Five-vertex gluing graph: canonical dissections of the two capped
    pieces joined through the plumbing gadget, sharing the separating
    system's coordinates."""
    c = system.contours[0]
    edges: list[Edge] = []
    verts: list[Vertex] = []
    for side, (hw, b, vq, vv) in {
        "t": (tilde, bt, "q1t", "vt"),
        "h": (hat, bh, "q1h", "vh"),
    }.items():
        germs = []
        for j, (wa, wb) in enumerate(hw.alpha_beta, start=1):
            ea, eb = f"{side}alpha{j}", f"{side}beta{j}"
            edges.append(Edge(ea, vv, vv, wb))
            edges.append(Edge(eb, vv, vv, wa))
            germs.extend([Germ(eb, 0), Germ(ea, 1), Germ(eb, 1), Germ(ea, 0)])
        stem = f"stem1{side}"
        edges.append(Edge(stem, vv, vq, hw.stem_word))
        germs.append(Germ(stem, 0))
        verts.append(Vertex(vv, tuple(germs)))
        loop, tedge = f"c1{side}", f"t1{side}"
        edges.append(Edge(loop, vq, vq, Word((CLOWER(hw.stem_word.factors), DIAG(b)))))
        edges.append(Edge(tedge, vq, "q1m", Word((LAM(hw.lam_mono),))))
        verts.append(Vertex(vq, (Germ(stem, 1), Germ(loop, 0), Germ(tedge, 0), Germ(loop, 1))))
    edges.append(Edge("w1", "q1m", "q1m", Word((B(),))))
    verts.append(Vertex("q1m", (Germ("t1t", 1), Germ("w1", 0), Germ("t1h", 1), Germ("w1", 1))))
    return AdmissiblePair(verts, edges, coordinates=system.pair.coordinates)


def solve_commutator(K: Mat2, rng: np.random.Generator, tries: int = 50) -> tuple[Mat2, Mat2]:
    """Solve A B^-1 A^-1 B = K for SL(2) matrices A, B.

    B is sampled on the trace-matching slice tr((I-K) B^-1) = 0, then A is
    the change of basis aligning B^-1 with K B^-1 (a 4x4 null-space solve).
    """
    Km = np.array([[complex(K.a), complex(K.b)], [complex(K.c), complex(K.d)]])
    for _ in range(tries):
        # random X with tr((I-K)X) = 0 and det X = 1
        W = np.eye(2) - Km
        X = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        t = np.trace(W @ X)
        denom = np.trace(W @ np.eye(2))
        if abs(denom) > 1e-9:
            X = X - (t / denom) * np.eye(2)
        else:
            corr = np.array([[W[1, 1], -W[0, 1]], [-W[1, 0], W[0, 0]]])  # tr(W corr') ...
            nrm = np.trace(W @ corr)
            if abs(nrm) < 1e-9:
                continue
            X = X - (t / nrm) * corr
        d = np.linalg.det(X)
        if abs(d) < 1e-6:
            continue
        X = X / np.sqrt(d)
        # A X = (K X) A  as a linear system on A's entries
        KX = Km @ X
        M = np.zeros((4, 4), dtype=complex)
        # row index (i,j) for equation sum_k A_ik X_kj - (KX)_ik A_kj = 0
        def idx(i, j):
            return 2 * i + j
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    M[idx(i, j), idx(i, k)] += X[k, j]
                    M[idx(i, j), idx(k, j)] -= KX[i, k]
        _, s, vh = np.linalg.svd(M)
        if s[-1] > 1e-8 * s[0]:
            continue
        # the null space is the 2-dim conjugator coset; pick a non-singular
        # combination of its basis vectors (rows of vh conjugated)
        n1 = vh[-1].conj()
        n2 = vh[-2].conj() if s[-2] < 1e-8 * s[0] else np.zeros(4, dtype=complex)
        A = None
        for coeff in (0.0, 1.0, 0.5, 2.0, 1j):
            cand = (n1 + coeff * n2).reshape(2, 2)
            dA = np.linalg.det(cand)
            if abs(dA) > 1e-6:
                A = cand / np.sqrt(dA)
                break
        if A is None:
            continue
        Am = Mat2(A[0, 0], A[0, 1], A[1, 0], A[1, 1])
        Bm = Mat2(*np.linalg.inv(X).flatten())
        res = Am @ Bm.inv() @ Am.inv() @ Bm
        err = max(abs(complex(np.asarray(x)) - y) for x, y in zip(res.entries(), Km.flatten()))
        if err < 1e-9:
            return Am, Bm
    raise RuntimeError("commutator solve failed")


def sample_h12(rng: np.random.Generator):
    """Random point of the genus-1 two-boundary extended variety with equal
    diagonal parts: matrices (Ma, Mb, C1, C2, Lam, lam) satisfying
    C1 Lam C1^-1 C2 Lam C2^-1 [Ma, Mb] = I."""
    while True:
        lam = np.exp(rng.uniform(0.15, 0.6) * rng.choice([-1, 1]) + 1j * rng.uniform(-np.pi, np.pi))
        if abs(lam * lam - 1.0) > 0.5:
            break
    Lam = Mat2(-lam, 0j, 0j, -1.0 / lam)

    def rand_c():
        c = rng.standard_normal() + 1j * rng.standard_normal()
        b = np.exp(rng.uniform(-0.3, 0.3) + 1j * rng.uniform(-np.pi, np.pi))
        return Mat2(b, 0j, 0.7 * c * b, 1.0 / b)

    C1, C2 = rand_c(), rand_c()
    K = (C1 @ Lam @ C1.inv() @ C2 @ Lam @ C2.inv()).inv()
    Ma, Mb = solve_commutator(K, rng)
    return Ma, Mb, C1, C2, Lam, complex(lam)


def glue_nonseparating(Ma: Mat2, Mb: Mat2, C1: Mat2, C2: Mat2, Lam: Mat2):
    """Monodromy tuple of the closed genus-2 surface glued along a
    non-separating contour: the last handle comes from the boundary data."""
    from .mat2 import b_matrix

    M_alpha_g = C1 @ Lam @ C1.inv()
    M_beta_g = C1 @ b_matrix() @ C2.inv()
    return (Ma, Mb, M_alpha_g, M_beta_g)


def boundary_monodromy(system: GraphSystem, vertex: str, point: dict) -> DiagPair:
    """Evaluate and diagonalize the stem jump at a boundary vertex; checks
    the eigenvalue against the slot-product formula."""
    info = system.boundary(vertex)
    ev = system.pair.evaluator(point)
    m = ev.word(info.stem_word)
    dp = diag_lower(m)
    lam = info.lam_mono.eval(point)
    got = -np.asarray(dp.lam, dtype=complex)
    if float(np.max(np.abs(got - lam))) > 1e-9 * max(1.0, float(np.max(np.abs(lam)))):
        raise AssertionError("boundary eigenvalue disagrees with the slot product")
    return dp
