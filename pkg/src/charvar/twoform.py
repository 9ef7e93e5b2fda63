"""Canonical two-form of an admissible pair, via directional jets.

The contribution of a vertex with outgoing jumps J_1..J_n (counterclockwise)
is

    1/2 * sum_{l=1}^{n-1} tr( P_l^-1 D_u P_l * J_l^-1 D_v J_l ) - (u <-> v),

with P_l the ordered partial product J_1..J_l.  Directional derivatives come
from jet-valued coordinate environments, so the form is evaluated exactly
(no finite-difference error) at any admitted point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import Jet
from .mat2 import Mat2
from .ribbon import AdmissiblePair, validate_admissible

__all__ = [
    "TwoFormMatrix",
    "PoissonMatrix",
    "NonAdmissibleError",
    "DegenerateFormError",
    "omega_eval",
    "omega_jet",
    "omega_matrix",
    "closedness_residual",
    "invert_to_poisson",
    "bracket_trace_functions",
]


class NonAdmissibleError(ValueError):
    """The pair fails the local no-monodromy condition at the given point."""


class DegenerateFormError(ValueError):
    """The two-form matrix is singular on the probed subspace.

    This is a reportable outcome, not a bug: restricted to non-symplectic
    subspaces the form is expected to degenerate.
    """


@dataclass
class TwoFormMatrix:
    """Antisymmetric coefficient matrix of the form in a free-coordinate basis."""

    basis: tuple[str, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)

    def entry(self, row: str, col: str):
        return self.coeffs[self.basis.index(row), self.basis.index(col)]

    def max_deviation(self, other: "TwoFormMatrix") -> float:
        if self.basis != other.basis:
            raise ValueError("basis mismatch")
        return float(np.max(np.abs(self.coeffs - other.coeffs)))

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.basis)]
        for name, row in zip(self.basis, self.coeffs):
            cells = [_fmt_complex(x) for x in row]
            lines.append(name + "," + ",".join(cells))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "basis": list(self.basis),
            "coeffs": [[[float(x.real), float(x.imag)] for x in row] for row in self.coeffs],
        }


@dataclass
class PoissonMatrix:
    """Inverse of a TwoFormMatrix, with the inversion residual recorded."""

    basis: tuple[str, ...]
    coeffs: np.ndarray
    residual: float
    condition: float

    def to_csv(self) -> str:
        return TwoFormMatrix(self.basis, self.coeffs).to_csv()


def _fmt_complex(x: complex) -> str:
    if abs(x.imag) < 5e-16 * max(1.0, abs(x.real)):
        return repr(x.real)
    return f"{x.real!r}{x.imag:+}j"


def _d(entry, i: int):
    if isinstance(entry, Jet):
        return entry.d(i)
    return 0.0


def _dmat(m: Mat2, i: int) -> Mat2:
    return Mat2(_d(m.a, i), _d(m.b, i), _d(m.c, i), _d(m.d, i))


def _tr_prod(x: Mat2, y: Mat2):
    return x.a * y.a + x.b * y.c + x.c * y.b + x.d * y.d


def _as_value(x):
    return x.value if isinstance(x, Jet) else np.asarray(x, dtype=complex)


def omega_jet(pair: AdmissiblePair, env, i: int = 0, j: int = 1, vertices=None):
    """Value of the form on directions (i, j), keeping jet structure.

    The returned scalar still carries first derivatives along the remaining
    directions, which is what the closedness residual consumes.
    """
    ev = pair.evaluator(env)
    total = None
    names = vertices if vertices is not None else list(pair.vertices)
    for vname in names:
        germs = pair.vertices[vname].germs
        if len(germs) < 3:
            continue  # two-valent vertices contribute tr(a^a) = 0
        jumps = [ev.outgoing(g) for g in germs]
        P = jumps[0]
        for l in range(1, len(germs) - 1):
            P = P @ jumps[l]
            Pinv = P.inv()
            Jl = jumps[l]
            Jlinv = Jl.inv()
            ai = Pinv @ _dmat(P, i)
            aj = Pinv @ _dmat(P, j)
            bi = Jlinv @ _dmat(Jl, i)
            bj = Jlinv @ _dmat(Jl, j)
            term = _tr_prod(ai, bj) - _tr_prod(aj, bi)
            total = term if total is None else total + term
    if total is None:
        return 0.0 + 0j
    return total * 0.5


def omega_eval(
    pair: AdmissiblePair,
    env,
    i: int = 0,
    j: int = 1,
    vertices=None,
    check_admissible: bool = True,
    tol: float = 1e-8,
):
    """Complex value of the form on the jet environment's directions (i, j).

    Refuses non-admissible input: the per-vertex formula is only meaningful
    when every local monodromy is trivial.
    """
    if check_admissible:
        values = {k: _as_value(v) for k, v in env.items()}
        ok, report = validate_admissible(pair, values, tol=tol)
        if not ok:
            worst = max(report.values())
            raise NonAdmissibleError(f"pair not admissible at point (max residual {worst:.3e})")
    return _as_value(omega_jet(pair, env, i, j, vertices=vertices))


def omega_matrix(pair: AdmissiblePair, csys, point, check_admissible: bool = True) -> TwoFormMatrix:
    """Coefficient matrix in the coordinate system's free basis at `point`.

    `point` maps the pair's multiplicative coordinates to values (scalars or
    equal-length arrays).  All basis pairs are evaluated in one batched jet
    pass; the result is antisymmetric by construction.
    """
    basis = csys.free_names
    m = len(basis)
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    npairs = len(pairs)
    lifts = [csys.lift(name) for name in basis]
    point_shape = np.broadcast_shapes(*(np.shape(v) for v in point.values()))
    env = {}
    for name in pair.coordinates:
        value = np.asarray(point[name], dtype=complex)
        r0 = np.zeros((npairs,) + (1,) * len(point_shape), dtype=complex)
        r1 = np.zeros_like(r0)
        for k, (a, b) in enumerate(pairs):
            r0[k] = lifts[a].get(name, 0.0)
            r1[k] = lifts[b].get(name, 0.0)
        env[name] = Jet.exp_variable(value, [r0, r1])
    if check_admissible:
        values = {k: np.asarray(point[k], dtype=complex) for k in pair.coordinates}
        ok, report = validate_admissible(pair, values, tol=1e-8)
        if not ok:
            worst = max(report.values())
            raise NonAdmissibleError(f"pair not admissible at point (max residual {worst:.3e})")
    vals = _as_value(omega_jet(pair, env, 0, 1))
    coeffs = np.zeros((m, m) + point_shape, dtype=complex)
    for k, (a, b) in enumerate(pairs):
        coeffs[a, b] = vals[k]
        coeffs[b, a] = -coeffs[a, b]
    return TwoFormMatrix(tuple(basis), coeffs)


def closedness_residual(pair: AdmissiblePair, point, u, v, w, check_admissible: bool = True):
    """Exterior-derivative residual D_u O(v,w) - D_v O(u,w) + D_w O(u,v).

    u, v, w are log-rate dictionaries over the pair's coordinates.  Uses
    order-two jets in three simultaneous directions; vanishes identically
    for admissible pairs.
    """
    env = {}
    for name in pair.coordinates:
        value = np.asarray(point[name], dtype=complex)
        rates = [np.asarray(t.get(name, 0.0), dtype=complex) for t in (u, v, w)]
        env[name] = Jet.exp_variable(value, rates)
    if check_admissible:
        values = {k: np.asarray(point[k], dtype=complex) for k in pair.coordinates}
        ok, report = validate_admissible(pair, values, tol=1e-8)
        if not ok:
            raise NonAdmissibleError("pair not admissible at point")
    o_vw = omega_jet(pair, env, 1, 2)
    o_uw = omega_jet(pair, env, 0, 2)
    o_uv = omega_jet(pair, env, 0, 1)

    def dval(o, k):
        return o.d(k).value if isinstance(o, Jet) else 0.0

    return dval(o_vw, 0) - dval(o_uw, 1) + dval(o_uv, 2)


def invert_to_poisson(form: TwoFormMatrix, tol: float = 1e-9) -> PoissonMatrix:
    """Invert the coefficient matrix; degeneracy is reported, not hidden."""
    m = np.asarray(form.coeffs, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square coefficient matrix")
    n = m.shape[0]
    if n % 2 == 1:
        raise DegenerateFormError("odd-dimensional antisymmetric matrix is singular")
    cond = float(np.linalg.cond(m)) if n else 1.0
    if not np.isfinite(cond) or cond > 1e12:
        raise DegenerateFormError(f"two-form degenerate within tolerance (cond {cond:.3e})")
    inv = np.linalg.inv(m)
    residual = float(np.max(np.abs(inv @ m - np.eye(n))))
    if residual > tol:
        raise DegenerateFormError(f"inversion residual {residual:.3e} above {tol:.1e}")
    return PoissonMatrix(form.basis, inv, residual=residual, condition=cond)


def trace_gradient(pair: AdmissiblePair, csys, point, loop):
    """Gradient of tr(monodromy(loop)) in the free basis, via batched jets."""
    from .ribbon import path_monodromy

    basis = csys.free_names
    lifts = [csys.lift(name) for name in basis]
    env = {}
    for name in pair.coordinates:
        value = np.asarray(point[name], dtype=complex)
        r = np.array([lift.get(name, 0.0) for lift in lifts], dtype=complex)
        env[name] = Jet.exp_variable(value, [r])
    mono = path_monodromy(pair, loop, env)
    tr = mono.trace()
    if isinstance(tr, Jet):
        grad = np.asarray(tr.d(0).value, dtype=complex)
        value = complex(np.asarray(tr.value).flat[0])
    else:
        grad = np.zeros(len(basis), dtype=complex)
        value = complex(tr)
    return grad, value


def bracket_trace_functions(pair, csys, point, loop1, loop2, poisson: PoissonMatrix | None = None):
    """Poisson bracket {tr M(loop1), tr M(loop2)} through the inverted form."""
    if poisson is None:
        poisson = invert_to_poisson(omega_matrix(pair, csys, point))
    g1, _ = trace_gradient(pair, csys, point, loop1)
    g2, _ = trace_gradient(pair, csys, point, loop2)
    return complex(g1 @ poisson.coeffs @ g2)
