"""Brute-force ground truth and checks of the interpolation argument.

Everything here is exact (up to floating point) and exponential or cubic
in ``n``; it exists to cross-check the fast paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bounds import DominatingPair, _pair
from .core import ParamVec, Pmf, as_params, binom_pmf, fsum, moments, pb_pmf
from .errors import BadGrid, TooLarge

BRUTEFORCE_MAX_N = 20
FD_STEP = 1e-5


def _check_size(n: int) -> None:
    if n > BRUTEFORCE_MAX_N:
        raise TooLarge(f"brute force is capped at n={BRUTEFORCE_MAX_N}, got n={n}")


def product_tv_bruteforce(p, q) -> float:
    """``TV(Ber(p), Ber(q))`` summed over all ``2**n`` binary strings."""
    p, q = _pair(p, q)
    _check_size(p.n)
    return float(_kernels.product_tv(np.ascontiguousarray(p.values), np.ascontiguousarray(q.values)))


def pb_pmf_bruteforce(p) -> Pmf:
    """Law of the sum, accumulating outcome masses by popcount."""
    p = as_params(p)
    _check_size(p.n)
    return Pmf(_kernels.pb_pmf_enum(np.ascontiguousarray(p.values)), 0)


@dataclass(frozen=True)
class ProductSplit:
    full: float
    tv_i: float
    tv_j: float


def product_split(p, q, mask) -> ProductSplit:
    """Brute-force TV of the full product and of the two blocks selected by ``mask``."""
    p, q = _pair(p, q)
    mask = np.asarray(mask, dtype=bool)
    return ProductSplit(
        product_tv_bruteforce(p, q),
        product_tv_bruteforce(p.values[mask], q.values[mask]),
        product_tv_bruteforce(p.values[~mask], q.values[~mask]),
    )


class EventSet(frozenset):
    """A finite set of integers."""

    def __new__(cls, members=()):
        return super().__new__(cls, (int(k) for k in members))

    def indicator(self, lo: int, hi: int) -> np.ndarray:
        out = np.zeros(hi - lo + 1)
        for k in self:
            if lo <= k <= hi:
                out[k - lo] = 1.0
        return out


@dataclass(frozen=True, eq=False)
class InterpPath:
    """Straight line ``r(t) = (1 - t) q + t p`` between parameter vectors."""

    p: ParamVec
    q: ParamVec

    def __post_init__(self):
        p, q = _pair(self.p, self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.p.n

    def r(self, t: float) -> ParamVec:
        v = (1.0 - t) * self.q.values + t * self.p.values
        return ParamVec(np.clip(v, 0.0, 1.0))


def _prob(x: Pmf, A: EventSet) -> float:
    return fsum(float(x(k)) for k in A)


def f_A(path: InterpPath, t: float, A) -> float:
    """``P(S(t) in A)``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return _prob(pb_pmf(path.r(t)), EventSet(A))


def f_A_derivative(path: InterpPath, t: float, A) -> float:
    """Analytic derivative of ``f_A`` via the leave-one-out sums ``T_i(t)``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    A = EventSet(A)
    r = path.r(t).values
    d = path.p.values - path.q.values
    terms = []
    for i in range(path.n):
        if d[i] == 0.0:
            continue
        ti = pb_pmf(np.delete(r, i))
        terms.append(d[i] * (_prob(ti.shift(1), A) - _prob(ti, A)))
    return fsum(terms)


def f_A_central_difference(path: InterpPath, t: float, A, h: float = FD_STEP) -> float:
    return (f_A(path, t + h, A) - f_A(path, t - h, A)) / (2.0 * h)


@dataclass(frozen=True)
class VariancePath:
    var_t: float
    lower_hull: float

    @property
    def holds(self) -> bool:
        return self.var_t >= self.lower_hull - 1e-12


def variance_path_check(path: InterpPath, t: float) -> VariancePath:
    """Concavity of ``u(1-u)``: the path variance dominates the linear hull."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    var_t = moments(path.r(t)).variance
    hull = (1.0 - t) * moments(path.q).variance + t * moments(path.p).variance
    return VariancePath(var_t, hull)


def g_via_interpolation(dp: DominatingPair, k: int, quad_points: int | None = None) -> float:
    """``g(k) = int_0^1 sum_i Delta_i P(T_i(t) = k - 1) dt`` by Gauss-Legendre.

    The integrand is a polynomial of degree at most ``n - 1`` in ``t``, so the
    default ``ceil(n/2) + 1`` nodes integrate it exactly.
    """
    n = dp.n
    if quad_points is None:
        quad_points = -(-n // 2) + 1
    if quad_points < 1:
        raise ValueError("quad_points must be at least 1")
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    ts = 0.5 * (nodes + 1.0)
    ws = 0.5 * weights
    path = InterpPath(dp.p, dp.q)
    d = dp.deltas
    total = []
    for t, w in zip(ts, ws):
        r = path.r(t).values
        for i in range(n):
            if d[i] == 0.0:
                continue
            total.append(w * d[i] * pb_pmf(np.delete(r, i))(k - 1))
    return fsum(total)


@dataclass(frozen=True)
class AffinityProbe:
    values: tuple[float, ...]
    second_differences: tuple[float, ...]

    @property
    def non_affine(self) -> bool:
        return any(abs(d) > 1e-6 for d in self.second_differences)


def affinity_probe(n: int, t_grid) -> AffinityProbe:
    """``P(Z = 2)`` for ``Z ~ Bin(n, t/n)`` along ``t_grid``, with second differences."""
    if n < 2:
        raise BadGrid(f"need n >= 2, got {n}")
    t = np.asarray(t_grid, dtype=np.float64)
    if t.ndim != 1 or t.size < 3:
        raise BadGrid("grid needs at least 3 points")
    if t.min() < 0.0 or t.max() > 1.0:
        raise BadGrid("grid must lie inside [0, 1]")
    step = np.diff(t)
    if step[0] <= 0.0 or not np.allclose(step, step[0], rtol=1e-9, atol=1e-12):
        raise BadGrid("grid must be increasing and equally spaced")
    vals = np.array([binom_pmf(n, ti / n)(2) for ti in t])
    return AffinityProbe(tuple(vals.tolist()), tuple((vals[:-2] - 2.0 * vals[1:-1] + vals[2:]).tolist()))
