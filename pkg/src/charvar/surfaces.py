"""Oriented combinatorial maps: triangulations of capped surfaces.

A triangulation is given by its triangles, each listed as a cycle of darts
(directed edges) with the face interior on the left.  From that data the
counterclockwise cyclic order of darts around every vertex is derived, along
with the face sitting in each corner between consecutive darts.  These
rotations drive the ribbon-graph builders.

Darts are pairs (edge_name, sign); sign +1 travels tail -> head.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Dart", "Triangulation"]

Dart = tuple[str, int]


def flip(d: Dart) -> Dart:
    return (d[0], -d[1])


@dataclass
class Triangulation:
    """Closed oriented surface triangulation with derived vertex rotations."""

    vertices: list[str]
    edges: dict[str, tuple[str, str]]  # name -> (tail vertex, head vertex)
    faces: list[tuple[Dart, ...]]
    rotations: dict[str, list[Dart]] = field(init=False)
    corner_faces: dict[str, list[int]] = field(init=False)

    def __post_init__(self):
        self._face_of_dart: dict[Dart, int] = {}
        self._next_in_face: dict[Dart, Dart] = {}
        self._prev_in_face: dict[Dart, Dart] = {}
        for fi, cycle in enumerate(self.faces):
            if len(cycle) != 3:
                raise ValueError("faces must be triangles")
            for n, d in enumerate(cycle):
                if d in self._face_of_dart:
                    raise ValueError(f"dart {d} appears twice in face data")
                self._face_of_dart[d] = fi
                self._next_in_face[d] = cycle[(n + 1) % 3]
                self._prev_in_face[d] = cycle[n - 1]
        for e in self.edges:
            for s in (1, -1):
                if (e, s) not in self._face_of_dart:
                    raise ValueError(f"dart {(e, s)} missing from face data")
        for cycle in self.faces:
            for d in cycle:
                here = self.dart_head(self._prev_in_face[d])
                if self.dart_tail(d) != here:
                    raise ValueError("face cycle is not a closed walk")
        self.rotations = {}
        self.corner_faces = {}
        seen: set[Dart] = set()
        for v in self.vertices:
            start = self._some_dart_at(v)
            rot = [start]
            d = self._ccw_next(start)
            while d != start:
                rot.append(d)
                d = self._ccw_next(d)
            self.rotations[v] = rot
            # corner_faces[i] = face in the wedge between rot[i] and rot[i+1]
            self.corner_faces[v] = [
                self._face_of_dart[flip(rot[(i + 1) % len(rot)])] for i in range(len(rot))
            ]
            seen.update(rot)
        if len(seen) != 2 * len(self.edges):
            raise ValueError("rotation orbits do not cover all darts")
        chi = len(self.vertices) - len(self.edges) + len(self.faces)
        if chi % 2 != 0:
            raise ValueError("odd Euler characteristic")
        self.genus = (2 - chi) // 2

    # -- basic queries --------------------------------------------------

    def dart_tail(self, d: Dart) -> str:
        t, h = self.edges[d[0]]
        return t if d[1] > 0 else h

    def dart_head(self, d: Dart) -> str:
        return self.dart_tail(flip(d))

    def _some_dart_at(self, v: str):
        for e, (t, h) in self.edges.items():
            if t == v:
                return (e, 1)
            if h == v:
                return (e, -1)
        raise ValueError(f"isolated vertex {v}")

    def _ccw_next(self, d: Dart) -> Dart:
        # With faces traversed interior-on-the-left, the next dart
        # counterclockwise around tail(d) is alpha(phi^-1(d)).
        return flip(self._prev_in_face[d])

    def face_of(self, d: Dart) -> int:
        return self._face_of_dart[d]

    def multiplicity(self, v: str, e: str) -> int:
        """Number of endpoints of edge e at vertex v (1 or 2)."""
        t, h = self.edges[e]
        return (t == v) + (h == v)

    def valence(self, v: str) -> int:
        return len(self.rotations[v])

    # -- canned surfaces -------------------------------------------------

    @classmethod
    def one_vertex_torus(cls, prefix: str = "t") -> "Triangulation":
        """Square torus: one vertex, three edges, two triangles."""
        v = prefix + "v"
        a, d, b = prefix + "a", prefix + "d", prefix + "b"
        return cls(
            vertices=[v],
            edges={a: (v, v), d: (v, v), b: (v, v)},
            faces=[((a, 1), (b, 1), (d, -1)), ((d, 1), (a, -1), (b, -1))],
        )

    @classmethod
    def one_vertex_genus2(cls, prefix: str = "o") -> "Triangulation":
        """Octagon with identification a b a' b' c d c' d', fan-triangulated.

        One vertex, nine edges (four sides plus five fan diagonals), six
        triangles.
        """
        v = prefix + "v"
        a, b, c, e = (prefix + s for s in "abce")
        sides = [(a, 1), (b, 1), (a, -1), (b, -1), (c, 1), (e, 1), (c, -1), (e, -1)]
        diag = {k: prefix + f"f{k}" for k in range(2, 7)}
        edges = {n: (v, v) for n in (a, b, c, e)}
        edges.update({diag[k]: (v, v) for k in diag})
        faces = [(sides[0], sides[1], (diag[2], -1))]
        for k in range(2, 6):
            faces.append(((diag[k], 1), sides[k], (diag[k + 1], -1)))
        faces.append(((diag[6], 1), sides[6], sides[7]))
        return cls(vertices=[v], edges=edges, faces=faces)

    @classmethod
    def two_vertex_torus(cls, prefix: str = "n") -> "Triangulation":
        """Torus with two vertices and six edges, one loop at each vertex.

        The loop at P misses Q and vice versa, so the two boundary relations
        of the induced two-boundary piece involve the square of exactly one
        loop coordinate each.
        """
        p, q = prefix + "P", prefix + "Q"
        a1, a2, vp, vq, d1, d2 = (prefix + s for s in ("a1", "a2", "vP", "vQ", "d1", "d2"))
        edges = {
            a1: (p, q),
            a2: (q, p),
            vp: (p, p),
            vq: (q, q),
            d1: (p, q),
            d2: (q, p),
        }
        faces = [
            ((d1, 1), (a1, -1), (vp, -1)),
            ((a1, 1), (vq, 1), (d1, -1)),
            ((d2, 1), (a2, -1), (vq, -1)),
            ((a2, 1), (vp, 1), (d2, -1)),
        ]
        return cls(vertices=[p, q], edges=edges, faces=faces)

    @classmethod
    def trinion(cls, prefix: str = "p") -> "Triangulation":
        """Capped three-holed sphere: three vertices, three edges, two faces.

        Edge e_a joins the two vertices other than v_a; one face is the bare
        triangle, the other carries all three caps.
        """
        v1, v2, v3 = (prefix + f"v{k}" for k in (1, 2, 3))
        e1, e2, e3 = (prefix + f"e{k}" for k in (1, 2, 3))
        edges = {e1: (v2, v3), e2: (v3, v1), e3: (v1, v2)}
        faces = [
            ((e3, 1), (e1, 1), (e2, 1)),
            ((e3, -1), (e2, -1), (e1, -1)),
        ]
        return cls(vertices=[v1, v2, v3], edges=edges, faces=faces)

    @classmethod
    def four_holed_sphere(cls, prefix: str = "s") -> "Triangulation":
        """Tetrahedron: four vertices, six edges, four faces."""
        v = [prefix + f"v{k}" for k in (1, 2, 3, 4)]
        def E(i, j):
            return prefix + f"e{i}{j}"
        edges = {
            E(1, 2): (v[0], v[1]),
            E(1, 3): (v[0], v[2]),
            E(1, 4): (v[0], v[3]),
            E(2, 3): (v[1], v[2]),
            E(2, 4): (v[1], v[3]),
            E(3, 4): (v[2], v[3]),
        }
        faces = [
            ((E(1, 2), 1), (E(2, 3), 1), (E(1, 3), -1)),
            ((E(1, 3), 1), (E(3, 4), 1), (E(1, 4), -1)),
            ((E(1, 4), 1), (E(2, 4), -1), (E(1, 2), -1)),
            ((E(2, 4), 1), (E(3, 4), -1), (E(2, 3), -1)),
        ]
        return cls(vertices=v, edges=edges, faces=faces)
