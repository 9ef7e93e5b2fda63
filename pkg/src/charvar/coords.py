"""Log-linear coordinate systems: constraints, sampling, tangent lifts.

All relations among logarithmic coordinates are handled with exact rational
coefficients plus a rational multiple of i*pi, and points are synthesized by
exponentiating solved logs.  Multiplicative constraints therefore hold to
machine rounding at every sampled point, and logarithm branches never enter
any comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ribbon import Monomial

__all__ = ["Combo", "Relation", "CoordinateSystem", "WedgeBuilder", "solve_affine"]

IPI = complex(0.0, np.pi)


@dataclass(frozen=True)
class Combo:
    """Rational-linear combination of named logs plus a multiple of i*pi."""

    terms: tuple[tuple[str, Fraction], ...] = ()
    ipi: Fraction = Fraction(0)

    @classmethod
    def of(cls, mapping, ipi=Fraction(0)) -> "Combo":
        terms = tuple(
            sorted((n, Fraction(c)) for n, c in mapping.items() if Fraction(c) != 0)
        )
        return cls(terms, Fraction(ipi))

    def coeff(self, name: str) -> Fraction:
        for n, c in self.terms:
            if n == name:
                return c
        return Fraction(0)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.terms)

    def names(self):
        return [n for n, _ in self.terms]

    def add(self, other: "Combo") -> "Combo":
        d = self.as_dict()
        for n, c in other.terms:
            d[n] = d.get(n, Fraction(0)) + c
        return Combo.of(d, self.ipi + other.ipi)

    def scale(self, k) -> "Combo":
        k = Fraction(k)
        return Combo.of({n: c * k for n, c in self.terms}, self.ipi * k)

    def substitute(self, name: str, combo: "Combo") -> "Combo":
        c = self.coeff(name)
        if c == 0:
            return self
        d = self.as_dict()
        del d[name]
        return Combo.of(d, self.ipi).add(combo.scale(c))

    def value(self, logs: dict) -> np.ndarray:
        acc = complex(self.ipi) * IPI
        for n, c in self.terms:
            acc = acc + float(c) * logs[n]
        return acc


@dataclass
class Relation:
    """combo == 0, with an ordered pivot preference for elimination."""

    combo: Combo
    pivots: tuple[str, ...]


def solve_affine(relations, env_names, reserved_free=()):
    """Express every coordinate log as a Combo over free names.

    Eliminates, per relation, the first usable pivot in its stated order
    (the first-in-cyclic-order triangulation edge by construction); Gaussian
    substitution handles cascades.  Names in `reserved_free` are never
    pivoted.  Returns (solution, free_env_names): the env names left
    unpivoted are free, and every solved combo references only free names.
    """
    reserved = set(reserved_free)
    solution: dict[str, Combo] = {}
    for rel in relations:
        combo = rel.combo
        for n in list(combo.names()):
            if n in solution:
                combo = combo.substitute(n, solution[n])
        pivot = None
        for cand in rel.pivots:
            if cand in reserved or cand in solution:
                continue
            if combo.coeff(cand) != 0:
                pivot = cand
                break
        if pivot is None:
            raise ValueError(f"no usable pivot among {rel.pivots}")
        c = combo.coeff(pivot)
        rest = Combo.of(
            {n: v for n, v in combo.terms if n != pivot}, combo.ipi
        ).scale(Fraction(-1) / c)
        for known, expr in list(solution.items()):
            solution[known] = expr.substitute(pivot, rest)
        solution[pivot] = rest
    free_env = [n for n in env_names if n not in solution]
    allowed = set(free_env) | reserved
    for name in env_names:
        if name in solution:
            bad = [n for n in solution[name].names() if n not in allowed]
            if bad:
                raise ValueError(f"{name} still depends on pivoted names {bad}")
        else:
            solution[name] = Combo.of({name: 1})
    return solution, free_env


_DOMAIN_IM = {"shear": np.pi, "length": np.pi / 2, "toric": np.pi}


@dataclass
class CoordinateSystem:
    """Free basis, affine solution map, constraints, and sampling recipe."""

    env_names: tuple[str, ...]
    free_names: tuple[str, ...]
    solution: dict[str, Combo]
    derived: dict[str, Combo] = field(default_factory=dict)
    constraints: tuple[Combo, ...] = ()
    domains: dict[str, str] = field(default_factory=dict)
    re_scale: dict[str, float] = field(default_factory=dict)
    lambda_monos: tuple[Monomial, ...] = ()
    lam_margin: float = 0.1
    im_scale: float = 1.0

    def tightened(self, factor: float = 0.5, lam_margin: float = 0.5, im_scale: float = 0.25) -> "CoordinateSystem":
        """Copy with narrower sampling walks and a wider eigenvalue margin,
        for checks whose absolute tolerances need small conjugators."""
        from dataclasses import replace

        return replace(
            self,
            re_scale={k: v * factor for k, v in self.re_scale.items()},
            lam_margin=lam_margin,
            im_scale=im_scale,
        )

    def lift(self, free_name: str) -> dict[str, complex]:
        """Log-rate of every multiplicative coordinate per unit of the free one."""
        if free_name not in self.free_names:
            raise KeyError(f"not a free coordinate: {free_name}")
        out = {}
        for env in self.env_names:
            c = self.solution[env].coeff(free_name)
            if c != 0:
                out[env] = complex(float(c))
        return out

    def logs_from_free(self, free_logs: dict) -> dict:
        return {env: self.solution[env].value(free_logs) for env in self.env_names}

    def point_from_free(self, free_logs: dict) -> dict:
        return {env: np.exp(v) for env, v in self.logs_from_free(free_logs).items()}

    def sample(self, rng: np.random.Generator, n: int = 1):
        """Admitted points: constraint-exact, with ill-conditioned lambda
        values (|lambda^2 - 1| < 0.1) rejected and resampled."""
        free_logs = {name: np.zeros(n, dtype=complex) for name in self.free_names}
        pending = np.arange(n)
        for _ in range(200):
            for name in self.free_names:
                kind = self.domains.get(name, "shear")
                width = self.re_scale.get(name, 0.3)
                imw = _DOMAIN_IM[kind] * self.im_scale
                re = rng.uniform(-width, width, size=len(pending))
                im = rng.uniform(-imw, imw, size=len(pending))
                free_logs[name][pending] = re + 1j * im
            point = self.point_from_free(free_logs)
            bad = np.zeros(n, dtype=bool)
            for mono in self.lambda_monos:
                lam = np.asarray(mono.eval(point), dtype=complex)
                bad |= np.abs(lam * lam - 1.0) < self.lam_margin
                bad |= (np.abs(lam) < 0.2) | (np.abs(lam) > 5.0)
            for env, v in point.items():
                av = np.abs(np.asarray(v))
                bad |= (av < 0.05) | (av > 20.0)
            pending = np.nonzero(bad)[0]
            if len(pending) == 0:
                return point, free_logs
        raise RuntimeError("sampling failed to find admitted points")

    def constraint_residual(self, point: dict) -> float:
        """Max deviation of the multiplicative form of every constraint."""
        worst = 0.0
        for combo in self.constraints:
            lhs = np.ones_like(np.asarray(next(iter(point.values())), dtype=complex))
            for name, c in combo.terms:
                q = Fraction(c)
                if q.denominator != 1:
                    raise ValueError("non-integer constraint exponent")
                lhs = lhs * np.asarray(point[name], dtype=complex) ** int(q)
            phase = complex(combo.ipi) * IPI
            worst = max(worst, float(np.max(np.abs(lhs * np.exp(phase) - 1.0))))
        return worst

    def derived_logs(self, free_logs: dict) -> dict:
        env_logs = {env: self.solution[env].value(free_logs) for env in self.env_names}
        return {name: combo.value(env_logs) for name, combo in self.derived.items()}


class WedgeBuilder:
    """Accumulates sum_k c_k dX_k ^ dY_k into an exact antisymmetric matrix.

    Differentials are rational combinations of the free basis names; used to
    generate the constant target matrices straight from the statement
    formulas, independently of the jet evaluation path.
    """

    def __init__(self, basis):
        self.basis = tuple(basis)
        self.index = {n: i for i, n in enumerate(self.basis)}
        self.acc: dict[tuple[int, int], Fraction] = {}

    def add(self, dx: dict[str, Fraction], dy: dict[str, Fraction], coeff=1):
        coeff = Fraction(coeff)
        for a, ca in dx.items():
            for b, cb in dy.items():
                if a == b:
                    continue
                i, j = self.index[a], self.index[b]
                sgn = 1
                if i > j:
                    i, j, sgn = j, i, -1
                key = (i, j)
                self.acc[key] = self.acc.get(key, Fraction(0)) + sgn * coeff * Fraction(ca) * Fraction(cb)

    def free_differential(self, csys: CoordinateSystem, env_name: str) -> dict[str, Fraction]:
        return csys.solution[env_name].as_dict()

    def matrix(self) -> np.ndarray:
        m = len(self.basis)
        out = np.zeros((m, m), dtype=complex)
        for (i, j), c in self.acc.items():
            out[i, j] = complex(float(c))
            out[j, i] = -out[i, j]
        return out
