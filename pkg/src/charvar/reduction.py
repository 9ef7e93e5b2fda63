"""Scripted move sequences on admissible pairs.

The two admissible moves (merge, zip) drive everything here.  A chain
contracts the internal face vertices, fuses the face matrices into the
shear jumps, collapses the plumbing, and zips the gluing loops into the
single conjugating edge, producing at every step an equivalent graph whose
two-form can be compared against the original.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ribbon import (
    AdmissiblePair,
    Germ,
    Vertex,
    Word,
    drop_identity_loop,
    merge_vertices,
    zip_edges,
)

__all__ = [
    "Move",
    "apply_move",
    "merge_internal_vertices",
    "zip_sweep",
    "piece_without_stem",
]


@dataclass(frozen=True)
class Move:
    kind: str  # "merge" | "zip" | "drop"
    args: tuple

    def describe(self) -> str:
        if self.kind == "merge":
            return f"merge along {self.args[0]}"
        if self.kind == "zip":
            d1, d2, name = self.args
            return f"zip {d1} with {d2} -> {name}"
        return f"drop identity loop {self.args[0]}"


def apply_move(pair: AdmissiblePair, move: Move) -> AdmissiblePair:
    if move.kind == "merge":
        return merge_vertices(pair, move.args[0])
    if move.kind == "zip":
        d1, d2, name = move.args
        return zip_edges(pair, d1, d2, new_name=name)
    if move.kind == "drop":
        return drop_identity_loop(pair, move.args[0])
    raise ValueError(move.kind)


def merge_internal_vertices(pair: AdmissiblePair, prefix: str = "w") -> tuple[AdmissiblePair, list[Move]]:
    """Contract every internal face vertex into its triangulation vertex."""
    moves = []
    while True:
        target = next(
            (v for v in pair.vertices.values() if v.name.startswith(prefix)), None
        )
        if target is None:
            break
        edge = target.germs[0].edge
        move = Move("merge", (edge,))
        pair = apply_move(pair, move)
        moves.append(move)
    return pair, moves


def _dart_of(germ: Germ):
    return (germ.edge, 1 if germ.end == 0 else -1)


def _germ_of(dart):
    return Germ(dart[0], 0 if dart[1] > 0 else 1)


def _legal_zips(pair: AdmissiblePair, vname: str, allow_wrap: bool = False):
    """Consecutive same-vertex germ pairs whose far germs are also adjacent."""
    germs = pair.vertices[vname].germs
    n = len(germs)
    out = []
    rng = range(n) if allow_wrap else range(n - 1)
    for i in rng:
        g1, g2 = germs[i], germs[(i + 1) % n]
        d1, d2 = _dart_of(g1), _dart_of(g2)
        if g1.edge == g2.edge:
            if g2 == _germ_of((d1[0], -d1[1])):
                out.append((d1, d2))  # self-reverse curl
            continue
        a2 = _germ_of((d2[0], -d2[1]))
        a1 = _germ_of((d1[0], -d1[1]))
        try:
            j = germs.index(a2)
        except ValueError:
            continue  # far end on another vertex
        if germs[(j + 1) % n] == a1 and (allow_wrap or j + 1 < n):
            if {i, (i + 1) % n} & {j, (j + 1) % n}:
                continue
            out.append((d1, d2))
    return out


def zip_sweep(pair: AdmissiblePair, fresh: str = "r") -> tuple[AdmissiblePair, list[Move]]:
    """Apply legal zips and identity-curl drops until none remain.

    Deterministic (first legal move in scan order); every intermediate graph
    is a valid admissible pair, so callers can compare the form per step.
    """
    moves: list[Move] = []
    counter = 0
    while True:
        progressed = False
        for vname in list(pair.vertices):
            # drop structurally trivial curls first
            for e in list(pair.edges.values()):
                if (
                    e.tail == e.head
                    and e.jump.simplified().factors == ()
                    and e.tail == vname
                ):
                    germs = pair.vertices[vname].germs
                    i0 = germs.index(Germ(e.name, 0))
                    if germs[(i0 + 1) % len(germs)] == Germ(e.name, 1) or germs[i0 - 1] == Germ(e.name, 1):
                        move = Move("drop", (e.name,))
                        pair = apply_move(pair, move)
                        moves.append(move)
                        progressed = True
                        break
            if progressed:
                break
            zips = _legal_zips(pair, vname)
            if zips:
                d1, d2 = zips[0]
                name = f"{fresh}{counter}"
                counter += 1
                move = Move("zip", (d1, d2, name))
                pair = apply_move(pair, move)
                moves.append(move)
                progressed = True
                break
        if not progressed:
            return pair, moves


def piece_without_stem(blueprint) -> AdmissiblePair:
    """Standalone piece graph of a one-vertex blueprint, stem germ removed.

    The single triangulation vertex keeps its cilium where the stem was, so
    the cyclic product from the cilium equals the inverse boundary monodromy
    throughout any non-wrapping move sequence.
    """
    if len(blueprint.tri.vertices) != 1:
        raise ValueError("standalone extraction expects a one-vertex piece")
    vname = blueprint.tri.vertices[0]
    vertices = []
    for v in blueprint.vertices:
        if v.name == vname:
            germs = tuple(g for g in v.germs if not g.edge.startswith("stem"))
            vertices.append(Vertex(v.name, germs))
        else:
            vertices.append(v)
    return AdmissiblePair(vertices, blueprint.edges, coordinates=tuple(blueprint.coord_names))
