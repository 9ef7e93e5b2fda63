"""Truncated directional Taylor arithmetic (order 2, up to 3 directions).

A :class:`Jet` carries the value of a holomorphic expression together with
its first and mixed second directional derivatives along a fixed small set
of tangent directions.  This is exactly the amount of forward-mode data
needed to evaluate a two-form (two first derivatives) and its exterior
derivative (one more direction, mixed second derivatives).

Components are stored stacked in one complex ndarray so that whole families
of points/tangent pairs evaluate in a single vectorized pass.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Jet", "ncomps", "central_difference"]


def _pad_pair(a: np.ndarray, b: np.ndarray):
    """Left-pad batch axes (component axis leads) so a and b broadcast."""
    rank = max(a.ndim, b.ndim) - 1
    if a.ndim - 1 < rank:
        a = a.reshape(a.shape[:1] + (1,) * (rank - a.ndim + 1) + a.shape[1:])
    if b.ndim - 1 < rank:
        b = b.reshape(b.shape[:1] + (1,) * (rank - b.ndim + 1) + b.shape[1:])
    return a, b


def _h_pairs(ndir: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(ndir) for j in range(i, ndir)]


_H_PAIRS = {k: _h_pairs(k) for k in range(4)}
_H_OFFSET = {k: {pair: 1 + k + n for n, pair in enumerate(_H_PAIRS[k])} for k in range(4)}


def ncomps(ndir: int) -> int:
    """Number of stored components for a jet with `ndir` directions."""
    return 1 + ndir + ndir * (ndir + 1) // 2


class Jet:
    """Second-order directional jet over complex numbers.

    comps[0] is the value, comps[1:1+k] the first derivatives along the k
    directions, and the remaining entries the symmetric second derivatives
    h_ij (i <= j, row-major).  Trailing axes of `comps` are free batch axes;
    all arithmetic broadcasts over them.
    """

    __slots__ = ("ndir", "comps")

    def __init__(self, ndir: int, comps: np.ndarray):
        if not 1 <= ndir <= 3:
            raise ValueError("jets support 1 to 3 directions")
        comps = np.asarray(comps, dtype=complex)
        if comps.shape[0] != ncomps(ndir):
            raise ValueError(f"expected {ncomps(ndir)} components, got {comps.shape[0]}")
        self.ndir = ndir
        self.comps = comps

    # -- construction -------------------------------------------------

    @classmethod
    def constant(cls, value, ndir: int) -> "Jet":
        value = np.asarray(value, dtype=complex)
        comps = np.zeros((ncomps(ndir),) + value.shape, dtype=complex)
        comps[0] = value
        return cls(ndir, comps)

    @classmethod
    def variable(cls, value, rates) -> "Jet":
        """Jet of a coordinate moving linearly: value + sum_i t_i * rates[i].

        Second derivatives vanish.  `rates` is one array per direction.
        """
        rates = [np.asarray(r, dtype=complex) for r in rates]
        value = np.asarray(value, dtype=complex)
        shape = np.broadcast_shapes(value.shape, *(r.shape for r in rates))
        k = len(rates)
        comps = np.zeros((ncomps(k),) + shape, dtype=complex)
        comps[0] = value
        for i, r in enumerate(rates):
            comps[1 + i] = r
        return cls(k, comps)

    @classmethod
    def exp_variable(cls, value, log_rates) -> "Jet":
        """Jet of value * exp(sum_i t_i * log_rates[i]) at t = 0.

        This is the jet of a multiplicative coordinate whose logarithm moves
        linearly, which keeps every multiplicative constraint satisfied to
        all orders along the probe path.
        """
        rates = [np.asarray(r, dtype=complex) for r in log_rates]
        value = np.asarray(value, dtype=complex)
        shape = np.broadcast_shapes(value.shape, *(r.shape for r in rates))
        k = len(rates)
        comps = np.zeros((ncomps(k),) + shape, dtype=complex)
        comps[0] = value
        for i, r in enumerate(rates):
            comps[1 + i] = value * r
        for (i, j) in _H_PAIRS[k]:
            comps[_H_OFFSET[k][(i, j)]] = value * rates[i] * rates[j]
        return cls(k, comps)

    # -- accessors ----------------------------------------------------

    @property
    def value(self) -> np.ndarray:
        return self.comps[0]

    def first(self, i: int) -> np.ndarray:
        return self.comps[1 + i]

    def second(self, i: int, j: int) -> np.ndarray:
        if i > j:
            i, j = j, i
        return self.comps[_H_OFFSET[self.ndir][(i, j)]]

    def d(self, i: int) -> "Jet":
        """Directional derivative along direction i, demoted to order one.

        The result's first derivatives are the mixed seconds of self; its
        own second-order slots are zeroed and must not be relied on.
        """
        k = self.ndir
        comps = np.zeros_like(self.comps)
        comps[0] = self.comps[1 + i]
        for j in range(k):
            comps[1 + j] = self.second(i, j)
        return Jet(k, comps)

    # -- ring operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.ndir != self.ndir:
                raise ValueError("jets with different direction counts")
            return other
        return Jet.constant(other, self.ndir)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = _pad_pair(self.comps, other.comps)
        return Jet(self.ndir, a + b)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.ndir, -self.comps)

    def __sub__(self, other):
        other = self._coerce(other)
        a, b = _pad_pair(self.comps, other.comps)
        return Jet(self.ndir, a - b)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            o = np.asarray(other, dtype=complex)
            a, b = _pad_pair(self.comps, o[None, ...])
            return Jet(self.ndir, a * b)
        if other.ndir != self.ndir:
            raise ValueError("jets with different direction counts")
        k = self.ndir
        a, b = _pad_pair(self.comps, other.comps)
        out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
        out[0] = a[0] * b[0]
        for i in range(k):
            out[1 + i] = a[0] * b[1 + i] + a[1 + i] * b[0]
        off = _H_OFFSET[k]
        for (i, j) in _H_PAIRS[k]:
            n = off[(i, j)]
            out[n] = a[0] * b[n] + a[1 + i] * b[1 + j] + a[1 + j] * b[1 + i] + a[n] * b[0]
        return Jet(k, out)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        k = self.ndir
        a = self.comps
        w = 1.0 / a[0]
        out = np.empty_like(a)
        out[0] = w
        for i in range(k):
            out[1 + i] = -a[1 + i] * w * w
        off = _H_OFFSET[k]
        for (i, j) in _H_PAIRS[k]:
            n = off[(i, j)]
            out[n] = (2.0 * a[1 + i] * a[1 + j] * w - a[n]) * w * w
        return Jet(k, out)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            o = np.asarray(other, dtype=complex)
            a, b = _pad_pair(self.comps, o[None, ...])
            return Jet(self.ndir, a / b)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __repr__(self):
        return f"Jet(ndir={self.ndir}, value={self.value!r})"


def central_difference(f, x: complex, direction: complex, step: float = 1e-5) -> complex:
    """Central finite difference of a scalar map along a complex direction.

    Reference oracle for jet first derivatives; `f` maps complex -> complex.
    """
    return (f(x + step * direction) - f(x - step * direction)) / (2.0 * step)
