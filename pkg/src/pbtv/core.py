"""Exact Poisson-binomial laws, moments and total-variation distances."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvalidParams, InvalidPmf, NotUnimodal

#: rounding noise below zero that canonicalisation silently clamps
NEG_CLAMP = 1e-15
#: allowed deviation of the total mass from one
MASS_TOL = 1e-12
#: comparison slack for unimodality / log-concavity scans
SHAPE_TOL = 1e-12


def fsum(a) -> float:
    """Compensated sum; ``tolist`` first because fsum over numpy scalars is slow."""
    return math.fsum(a.tolist() if isinstance(a, np.ndarray) else a)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ParamVec:
    """Bernoulli success probabilities ``p_1, ..., p_n``, each in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        # NaN fails both comparisons
        if not np.all((v >= 0.0) & (v <= 1.0)):
            raise InvalidParams(f"parameters must lie in [0, 1]: {v.tolist()}")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, idx):
        if isinstance(idx, (int, np.integer)):
            return float(self.values[idx])
        return ParamVec(self.values[idx])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamVec):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return f"ParamVec({self.values.tolist()})"

    def tolist(self) -> list[float]:
        return self.values.tolist()


def as_params(x) -> ParamVec:
    return x if isinstance(x, ParamVec) else ParamVec(x)


@dataclass(frozen=True, eq=False)
class Pmf:
    """Finitely supported pmf on the integers.

    ``mass[j]`` is the probability of ``offset + j``.  Construction puts the
    pmf into canonical form: negatives in ``[-1e-15, 0)`` are clamped to zero
    and leading/trailing zeros are trimmed (shifting ``offset``).
    """

    mass: np.ndarray
    offset: int = 0

    def __post_init__(self):
        m = np.array(self.mass, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(np.isfinite(m)):
            raise InvalidPmf("pmf masses must be finite")
        if m.size and m.min() < -NEG_CLAMP:
            raise InvalidPmf(f"negative mass {m.min():.3e} is beyond rounding noise")
        m[m < 0.0] = 0.0
        nz = np.flatnonzero(m)
        if nz.size == 0:
            raise InvalidPmf("pmf has no mass")
        lo, hi = int(nz[0]), int(nz[-1])
        m = m[lo : hi + 1]
        total = fsum(m)
        if abs(total - 1.0) > MASS_TOL:
            raise InvalidPmf(f"total mass {total!r} differs from 1 by more than {MASS_TOL}")
        object.__setattr__(self, "mass", _frozen(m))
        object.__setattr__(self, "offset", int(self.offset) + lo)

    @classmethod
    def point(cls, k: int = 0) -> "Pmf":
        return cls(np.ones(1), k)

    @property
    def support_max(self) -> int:
        return self.offset + self.mass.shape[0] - 1

    def __len__(self) -> int:
        return self.mass.shape[0]

    def __call__(self, k: int) -> float:
        j = k - self.offset
        if 0 <= j < self.mass.shape[0]:
            return float(self.mass[j])
        return 0.0

    def shift(self, d: int) -> "Pmf":
        return Pmf(self.mass, self.offset + d)

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Masses on ``lo..hi`` inclusive, zero-padded."""
        out = np.zeros(hi - lo + 1)
        a = max(lo, self.offset)
        b = min(hi, self.support_max)
        if a <= b:
            out[a - lo : b - lo + 1] = self.mass[a - self.offset : b - self.offset + 1]
        return out

    def mean(self) -> float:
        k = np.arange(self.offset, self.support_max + 1, dtype=np.float64)
        return fsum(k * self.mass)

    def variance(self) -> float:
        mu = self.mean()
        k = np.arange(self.offset, self.support_max + 1, dtype=np.float64)
        return fsum((k - mu) ** 2 * self.mass)

    def to_dict(self) -> dict:
        return {"offset": self.offset, "mass": self.mass.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Pmf":
        return cls(d["mass"], d["offset"])

    def __repr__(self) -> str:
        return f"Pmf(offset={self.offset}, mass={self.mass.tolist()})"


@dataclass(frozen=True)
class Moments:
    mean: float
    variance: float


@dataclass(frozen=True)
class Constants:
    eta_bcv: float = 0.4688223555
    c_bcv: float = field(init=False)
    lower_c: float = 1.0 / 12.0
    homog_c: float = field(init=False)

    def __post_init__(self):
        c = math.sqrt(1.25 + self.eta_bcv**2)
        object.__setattr__(self, "c_bcv", c)
        object.__setattr__(self, "homog_c", 1.0 / (48.0 * c))


CONSTANTS = Constants()
ETA_BCV = CONSTANTS.eta_bcv
C_BCV = CONSTANTS.c_bcv


def pb_pmf(p) -> Pmf:
    """Law of ``S_p = X_1 + ... + X_n`` by the O(n^2) rolling recurrence."""
    p = as_params(p)
    return Pmf(_kernels.pb_pmf(np.ascontiguousarray(p.values)), 0)


def binom_pmf(n: int, theta: float) -> Pmf:
    if n < 0:
        raise InvalidParams(f"n must be nonnegative, got {n}")
    return pb_pmf(np.full(n, float(theta)))


def moments(p) -> Moments:
    v = as_params(p).values
    return Moments(fsum(v), fsum(v * (1.0 - v)))


def tv(a: Pmf, b: Pmf) -> float:
    lo = min(a.offset, b.offset)
    hi = max(a.support_max, b.support_max)
    return 0.5 * float(np.sum(np.abs(a.dense(lo, hi) - b.dense(lo, hi))))


def sup_distance(a: Pmf, b: Pmf) -> float:
    lo = min(a.offset, b.offset)
    hi = max(a.support_max, b.support_max)
    return float(np.max(np.abs(a.dense(lo, hi) - b.dense(lo, hi))))


def survival(x: Pmf, k: int) -> float:
    """``P(X >= k)``."""
    if k <= x.offset:
        return 1.0
    if k > x.support_max:
        return 0.0
    return fsum(x.mass[k - x.offset :])


def survival_array(x: Pmf, lo: int, hi: int) -> np.ndarray:
    """``P(X >= k)`` for ``k = lo..hi``; tails summed from the right."""
    dense = x.dense(min(lo, x.offset), max(hi, x.support_max))
    tail = np.cumsum(dense[::-1])[::-1]
    start = lo - min(lo, x.offset)
    out = tail[start : start + hi - lo + 1].copy()
    out[np.arange(lo, hi + 1) <= x.offset] = 1.0
    return out


def is_unimodal(x: Pmf, tol: float = SHAPE_TOL) -> bool:
    d = np.diff(x.mass)
    down = np.flatnonzero(d < -tol)
    if down.size == 0:
        return True
    return not np.any(d[down[0] :] > tol)


def is_log_concave(x: Pmf, tol: float = SHAPE_TOL) -> bool:
    m = x.mass
    # canonical form has positive end points, so an interior zero breaks the
    # contiguous support required of a log-concave law
    if np.any(m == 0.0):
        return False
    if m.shape[0] < 3:
        return True
    return bool(np.all(m[1:-1] ** 2 >= m[:-2] * m[2:] - tol))


def shift_tv(x: Pmf) -> float:
    """``TV(Z, Z + 1)`` for unimodal ``Z``, which is the peak mass."""
    if not is_unimodal(x):
        raise NotUnimodal(f"shift_tv needs a unimodal pmf: {x!r}")
    return float(np.max(x.mass))
