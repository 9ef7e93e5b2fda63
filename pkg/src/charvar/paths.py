"""Transversal loops on triangulated pieces, as combinatorial region walks.

Adding the internal spokes cuts each triangle into three subregions, one per
side.  A loop avoiding all vertices is a walk on these subregions; each move
crosses either a spoke or a triangulation edge, contributing the jump (or
its inverse, by the orientation of the crossing) to the monodromy word.

Cutting the surface open along a designated cut system (the polygon sides of
the one-vertex models) leaves a disk, so any two interior return routes give
the same monodromy value; that makes the loops dual to the cut edges well
defined, and a small search assembles them into handle pairs whose commutator
product is the inverse boundary monodromy.
"""

from __future__ import annotations

from collections import deque
from itertools import permutations, product

import numpy as np

from .mat2 import max_abs_diff
from .ribbon import JumpEval, PathSpec, Word

__all__ = ["RegionWalker", "handle_words_for_piece"]

Region = tuple[int, int]  # (face index, side position 0..2)


class RegionWalker:
    """Region-adjacency structure of a piece with spokes installed."""

    def __init__(self, blueprint):
        self.bp = blueprint
        self.tri = blueprint.tri
        # spoke at the corner between side k and side k+1 of face f
        self._spoke: dict[Region, str] = {}
        for f, cycle in enumerate(self.tri.faces):
            for k, dart in enumerate(cycle):
                flipped = (dart[0], -dart[1])
                v = self.tri.dart_tail(flipped)
                rot = self.tri.rotations[v]
                n = len(rot)
                i = next(j for j in range(n) if rot[(j + 1) % n] == flipped)
                self._spoke[(f, k)] = blueprint.corner_edges[(v, i)]

    def regions(self):
        return [(f, k) for f in range(len(self.tri.faces)) for k in range(3)]

    def moves_from(self, region: Region, cut: set[str]):
        """Yield (crossing, next_region) moves; cut edges are not crossed."""
        f, k = region
        # spokes (always interior)
        yield ((self._spoke[(f, k)], -1), (f, (k + 1) % 3))
        yield ((self._spoke[(f, (k - 1) % 3)], 1), (f, (k - 1) % 3))
        # the side edge
        dart = self.tri.faces[f][k]
        edge = dart[0]
        if edge not in cut:
            flipped = (edge, -dart[1])
            f2 = self.tri.face_of(flipped)
            k2 = self.tri.faces[f2].index(flipped)
            yield ((edge, -dart[1]), (f2, k2))

    def interior_route(self, start: Region, goal: Region, cut: set[str]):
        """Breadth-first crossing sequence from start to goal avoiding cut."""
        if start == goal:
            return []
        prev = {start: None}
        queue = deque([start])
        while queue:
            r = queue.popleft()
            for crossing, nxt in self.moves_from(r, cut):
                if nxt not in prev:
                    prev[nxt] = (r, crossing)
                    if nxt == goal:
                        out = []
                        cur = nxt
                        while prev[cur] is not None:
                            r0, cr = prev[cur]
                            out.append(cr)
                            cur = r0
                        return list(reversed(out))
                    queue.append(nxt)
        raise ValueError("no interior route (cut system disconnects the disk)")

    def dual_loop(self, edge: str, base: Region, cut: set[str]) -> PathSpec:
        """Loop based at `base` crossing `edge` exactly once (positively) and
        returning through the cut-open disk."""
        dart = (edge, 1)
        f = self.tri.face_of(dart)
        k = self.tri.faces[f].index(dart)
        flipped = (edge, -1)
        f2 = self.tri.face_of(flipped)
        k2 = self.tri.faces[f2].index(flipped)
        inner_cut = cut | {edge}
        out = list(self.interior_route(base, (f, k), inner_cut))
        out.append((edge, -1))
        out.extend(self.interior_route((f2, k2), base, inner_cut))
        return PathSpec(tuple(out))

    def word_of(self, path: PathSpec) -> Word:
        """Monodromy word of a crossing sequence (jump words concatenated)."""
        edges = {e.name: e for e in self.bp.edges}
        w = Word()
        for name, sign in path.crossings:
            jw = edges[name].jump
            w = w * (jw if sign > 0 else jw.inverse())
        return w


def _inverse_path(path: PathSpec) -> PathSpec:
    return PathSpec(tuple((e, -s) for (e, s) in reversed(path.crossings)))


def handle_words_for_piece(blueprint, cut_edges, seed: int = 12):
    """Handle monodromy words of a one-vertex piece.

    Builds the loops dual to the cut edges and searches the (small) space of
    orderings/inversions for the combination whose commutator product equals
    the inverse boundary monodromy exactly.  The search is decided on random
    probe values and the winning combination is returned as jump words.
    """
    if len(blueprint.tri.vertices) != 1:
        raise ValueError("handle extraction expects a one-vertex piece")
    vname = blueprint.tri.vertices[0]
    genus = blueprint.tri.genus
    if genus != 1:
        # the raw dual loops need corner-corridor conjugations beyond genus 1
        raise ValueError("handle extraction supports genus-1 pieces")
    if len(cut_edges) != 2 * genus:
        raise ValueError("cut system size must be twice the genus")
    walker = RegionWalker(blueprint)
    rng = np.random.default_rng(seed)
    probes = []
    for _ in range(2):
        env = {
            n: np.exp(rng.uniform(-0.2, 0.2) + 1j * rng.uniform(-3.0, 3.0))
            for n in blueprint.coord_names
        }
        probes.append(env)
    stem = blueprint.boundaries[vname].stem_word
    cut = set(cut_edges)

    fake_pair = _PieceWords(blueprint)
    for base in walker.regions():
        loops = {}
        try:
            for e in cut_edges:
                loops[e] = walker.word_of(walker.dual_loop(e, base, cut))
        except ValueError:
            continue
        values = {}
        targets = []
        ok_probe = True
        for env in probes:
            ev = JumpEval(fake_pair, env)
            targets.append(ev.word(stem).inv())
            for e in cut_edges:
                values[(e, id(env))] = ev.word(loops[e])
        for assignment in permutations(cut_edges):
            for signs in product((1, -1), repeat=2 * genus):
                good = True
                for env, target in zip(probes, targets):
                    acc = None
                    for h in range(genus):
                        X = values[(assignment[2 * h], id(env))]
                        Y = values[(assignment[2 * h + 1], id(env))]
                        if signs[2 * h] < 0:
                            X = X.inv()
                        if signs[2 * h + 1] < 0:
                            Y = Y.inv()
                        K = X @ Y @ X.inv() @ Y.inv()
                        acc = K if acc is None else acc @ K
                    if max_abs_diff(acc, target) > 1e-8:
                        good = False
                        break
                if good:
                    out = []
                    for h in range(genus):
                        X = loops[assignment[2 * h]]
                        Y = loops[assignment[2 * h + 1]]
                        if signs[2 * h] < 0:
                            X = X.inverse()
                        if signs[2 * h + 1] < 0:
                            Y = Y.inverse()
                        out.append((X, Y.inverse()))
                    return out
    raise RuntimeError("no handle combination reproduces the boundary monodromy")


class _PieceWords:
    """Minimal evaluator host: only needs .edges for JumpEval.word."""

    def __init__(self, blueprint):
        self.edges = {e.name: e for e in blueprint.edges}
