"""2x2 special-linear matrices over plain complex scalars or jets.

Holds the structural constant matrices of the construction (the antidiagonal
shear S(z), the order-three face matrix A, the Weyl flip), adjugate
inversion, and normalized diagonalization of lower-triangular matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import Jet

__all__ = [
    "Mat2",
    "DiagPair",
    "shear_matrix",
    "a_matrix",
    "b_matrix",
    "identity",
    "diag_lower",
    "toric_conjugate",
]


def _value(x):
    """Numeric value part of a scalar entry (identity on plain numbers)."""
    return x.value if isinstance(x, Jet) else np.asarray(x, dtype=complex)


class Mat2:
    """2x2 matrix with entries in a scalar ring (complex or Jet).

    Inverses always go through the adjugate divided by the determinant so
    that a violation of det = 1 surfaces as a residual instead of silently
    corrupting downstream products.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def inv(self) -> "Mat2":
        det = self.det()
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def value(self) -> "Mat2":
        """Matrix of plain value parts (drops derivative data)."""
        return Mat2(*(_value(x) for x in self.entries()))

    def as_array(self) -> np.ndarray:
        va, vb, vc, vd = (_value(x) for x in self.entries())
        return np.stack(
            [np.stack([va, vb], axis=-1), np.stack([vc, vd], axis=-1)], axis=-2
        )

    def map(self, fn) -> "Mat2":
        return Mat2(fn(self.a), fn(self.b), fn(self.c), fn(self.d))

    def __repr__(self):
        return f"Mat2({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


def identity() -> Mat2:
    return Mat2(1.0 + 0j, 0j, 0j, 1.0 + 0j)


def deviation_from_identity(m: Mat2) -> float:
    """Max-abs distance of the value part from the identity matrix."""
    va, vb, vc, vd = (_value(x) for x in m.entries())
    return float(
        max(
            np.max(np.abs(va - 1.0)),
            np.max(np.abs(vb)),
            np.max(np.abs(vc)),
            np.max(np.abs(vd - 1.0)),
        )
    )


def max_abs_diff(m: Mat2, n: Mat2) -> float:
    return float(
        max(
            np.max(np.abs(_value(x) - _value(y)))
            for x, y in zip(m.entries(), n.entries())
        )
    )


def shear_matrix(z) -> Mat2:
    """Antidiagonal jump [[0, z], [-1/z, 0]] attached to a triangulation edge.

    The shear coordinate must stay away from zero; S(z)^-1 = -S(z) = S(-z).
    """
    zval = z.value if isinstance(z, Jet) else np.asarray(z, dtype=complex)
    if float(np.min(np.abs(zval))) == 0.0:
        raise ValueError("shear coordinate must be nonzero")
    if isinstance(z, Jet):
        zero_entry = Jet.constant(0.0, z.ndir)
        return Mat2(zero_entry, z, -z.reciprocal(), zero_entry)
    z = np.asarray(z, dtype=complex)
    return Mat2(np.zeros_like(z), z, -1.0 / z, np.zeros_like(z))


def a_matrix() -> Mat2:
    """Constant jump [[0, -1], [1, -1]] on internal face edges; A^3 = I."""
    return Mat2(0j, -1.0 + 0j, 1.0 + 0j, -1.0 + 0j)


def b_matrix() -> Mat2:
    """Weyl flip [[0, 1], [-1, 0]]; conjugation by it inverts a diagonal."""
    return Mat2(0j, 1.0 + 0j, -1.0 + 0j, 0j)


@dataclass
class DiagPair:
    """Normalized diagonalization M = C Lambda C^-1 with C unit lower
    triangular.  `lam` is read off the (1,1) entry of Lambda and reported
    raw: each builder fixes its own sign convention for the eigenvalue."""

    C: Mat2
    Lam: Mat2
    lam: object


def diag_lower(m: Mat2, tol: float = 1e-9) -> DiagPair:
    """Diagonalize a lower-triangular matrix with distinct diagonal entries.

    Only the lower-triangular case arising from the graph constructions is
    supported; a general eigensolver is deliberately out of scope.
    """
    if float(np.max(np.abs(_value(m.b)))) > tol:
        raise ValueError("matrix is not lower triangular within tolerance")
    gap = np.abs(_value(m.a) - _value(m.d))
    if float(np.min(gap)) <= tol:
        raise ValueError("non-diagonalizable within tolerance (lambda^2 = 1)")
    # M = C Lam C^-1 with C = [[1,0],[c,1]]: the single unknown solves
    # m21 = c * (m11 - m22).
    c = m.c / (m.a - m.d)
    if isinstance(c, Jet):
        one = Jet.constant(1.0, c.ndir)
        zero = Jet.constant(0.0, c.ndir)
    else:
        one = np.ones_like(c)
        zero = np.zeros_like(c)
    C = Mat2(one, zero, c, one)
    Lam = Mat2(m.a, zero, zero, m.d)
    return DiagPair(C=C, Lam=Lam, lam=m.a)


def toric_conjugate(C: Mat2, b) -> Mat2:
    """Right-multiply an eigenvector matrix by diag(1/b, b) (toric action)."""
    bval = b.value if isinstance(b, Jet) else np.asarray(b, dtype=complex)
    if float(np.min(np.abs(bval))) == 0.0:
        raise ValueError("toric variable must be nonzero")
    if isinstance(b, Jet) or any(isinstance(x, Jet) for x in C.entries()):
        binv = b.reciprocal() if isinstance(b, Jet) else 1.0 / b
        return Mat2(C.a * binv, C.b * b, C.c * binv, C.d * b)
    return Mat2(C.a / b, C.b * b, C.c / b, C.d * b)
