"""Homogenization of Bernoulli parameters and binomial TV quantities.

Homogenization replaces every ``p_i`` by the mean ``p_bar``.  It is not a
Markov kernel, yet

    TV(Ber(p), Ber(q)) >= c * TV(Bin(n, p_bar), Bin(n, q_bar)),  c >= 1/(48 C_BCV).

The pieces of that argument live here: the binomial split inequality
``delta_N <= 2 (delta_I + delta_J)``, the binomial mixture representation it
rests on, the trial-deletion kernel, and the end-to-end certificate.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .bounds import SLACK_TOL, _pair, tv_ber_lower
from .core import CONSTANTS, ParamVec, Pmf, as_params, binom_pmf, fsum, moments, tv
from .errors import BadPartition, BadSplit, EmptyPart, EmptyVector, SupportTooLarge, TooLargeForBruteforce
from .oracle import product_tv_bruteforce

BRUTEFORCE_MAX_N = 20


@dataclass(frozen=True)
class Partition:
    """Split of the 0-based indices ``0..n-1`` into disjoint sorted parts I and J."""

    n: int
    I: tuple[int, ...]
    J: tuple[int, ...]

    def __post_init__(self):
        I = tuple(sorted(int(i) for i in self.I))
        J = tuple(sorted(int(j) for j in self.J))
        if sorted(I + J) != list(range(self.n)):
            raise BadPartition(f"I={I}, J={J} do not partition range({self.n})")
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "J", J)

    @classmethod
    def from_mask(cls, mask) -> "Partition":
        mask = np.asarray(mask, dtype=bool)
        return cls(mask.shape[0], tuple(np.flatnonzero(mask).tolist()), tuple(np.flatnonzero(~mask).tolist()))


def homogenize(p) -> tuple[float, ParamVec]:
    p = as_params(p)
    if p.n == 0:
        raise EmptyVector("cannot homogenize an empty parameter vector")
    mean = min(1.0, max(0.0, fsum(p.values) / p.n))
    return mean, ParamVec(np.full(p.n, mean))


def _mean(v: np.ndarray) -> float:
    # fsum / n can overshoot 1 by an ulp
    return min(1.0, max(0.0, fsum(v) / v.shape[0]))


def binom_tv(n: int, a: float, b: float) -> float:
    if n == 0:
        return 0.0
    return tv(binom_pmf(n, a), binom_pmf(n, b))


@dataclass(frozen=True)
class SplitCheck:
    delta_N: float
    delta_I: float
    delta_J: float
    holds_factor2: bool
    conjecture_slack: float

    @property
    def factor2_slack(self) -> float:
        return 2.0 * (self.delta_I + self.delta_J) - self.delta_N


def split_bound_check(p, q, part: Partition, tol: float = SLACK_TOL) -> SplitCheck:
    """Compare ``delta_N`` with ``2 (delta_I + delta_J)``; the sharper
    ``delta_I + delta_J - delta_I delta_J`` is only recorded as a slack."""
    p, q = _pair(p, q)
    if part.n != p.n:
        raise BadPartition(f"partition is for n={part.n}, vectors have n={p.n}")
    if not part.I or not part.J:
        raise EmptyPart("both parts of the partition must be nonempty")
    pv, qv = p.values, q.values
    I, J = list(part.I), list(part.J)
    dN = binom_tv(p.n, _mean(pv), _mean(qv))
    dI = binom_tv(len(I), _mean(pv[I]), _mean(qv[I]))
    dJ = binom_tv(len(J), _mean(pv[J]), _mean(qv[J]))
    return SplitCheck(dN, dI, dJ, dN <= 2.0 * (dI + dJ) + tol, dI + dJ - dI * dJ - dN)


def mixture_weights(n: int, size_i: int) -> np.ndarray:
    """Law of ``M ~ Bin(n, size_i / n)`` on ``0..n``."""
    w = Fraction(size_i, n)
    return binom_pmf(n, float(w)).dense(0, n)


def mixture_law(n: int, size_i: int, p_i: float, p_j: float) -> Pmf:
    """Law of ``U_M + V_M`` with ``M ~ Bin(n, size_i/n)``, ``U_m ~ Bin(m, p_i)``
    and ``V_m ~ Bin(n - m, p_j)``, built by explicit convolve-and-mix.

    This equals ``Bin(n, (size_i p_i + (n - size_i) p_j) / n)``; the
    construction deliberately avoids that closed form.
    """
    if not 1 <= size_i <= n - 1:
        raise BadSplit(f"need 1 <= size_i <= n - 1, got size_i={size_i}, n={n}")
    as_params([p_i, p_j])
    weights = mixture_weights(n, size_i)
    rows_i = _kernels.binom_rows(n, float(p_i))
    rows_j = _kernels.binom_rows(n, float(p_j))
    return Pmf(_kernels.mix_convolve(weights, rows_i, rows_j), 0)


def pooled_mean(n: int, size_i: int, p_i: float, p_j: float) -> float:
    return min(1.0, (size_i * p_i + (n - size_i) * p_j) / n)


def delete_trial_kernel(x: Pmf, m: int) -> Pmf:
    """Drop one of ``m + 1`` trials uniformly at random.

    ``out(k) = x(k) (m+1-k)/(m+1) + x(k+1) (k+1)/(m+1)``.  The kernel does not
    depend on the success probability and sends ``Bin(m+1, t)`` to ``Bin(m, t)``.
    """
    if m < 0:
        raise SupportTooLarge(f"m must be nonnegative, got {m}")
    if x.offset < 0 or x.support_max > m + 1:
        raise SupportTooLarge(f"support [{x.offset}, {x.support_max}] is not inside [0, {m + 1}]")
    src = x.dense(0, m + 1)
    k = np.arange(m + 1, dtype=np.float64)
    out = src[:-1] * (m + 1 - k) / (m + 1) + src[1:] * (k + 1) / (m + 1)
    return Pmf(out, 0)


def binom_tv_family(theta: float, theta2: float, m_max: int) -> np.ndarray:
    """``f(m) = TV(Bin(m, theta), Bin(m, theta2))`` for ``m = 0..m_max``."""
    if m_max < 0:
        raise ValueError(f"m_max must be nonnegative, got {m_max}")
    as_params([theta, theta2])
    return _kernels.binom_tv_family(int(m_max), float(theta), float(theta2))


def averaged_family(theta: float, theta2: float, n: int, size: int) -> tuple[float, float]:
    """``(E f(M), 2 f(size))`` for ``M ~ Bin(n, size/n)``; the first never exceeds the second."""
    if not 1 <= size <= n:
        raise BadSplit(f"need 1 <= size <= n, got size={size}, n={n}")
    f = binom_tv_family(theta, theta2, n)
    w = mixture_weights(n, size)
    return fsum(w * f), 2.0 * float(f[size])


@dataclass(frozen=True)
class PhiMonotonicity:
    delta: float
    delta_hom: float
    sigma2: float
    sigma2_hom: float

    def holds(self, tol: float = 1e-12) -> bool:
        return self.delta >= self.delta_hom - tol and self.sigma2 <= self.sigma2_hom + tol


def phi_monotonicity(p, q) -> PhiMonotonicity:
    """Homogenizing cannot raise the l1 distance nor lower the variance."""
    p, q = _pair(p, q)
    pb, _ = homogenize(p)
    qb, _ = homogenize(q)
    return PhiMonotonicity(
        fsum(np.abs(p.values - q.values)),
        p.n * abs(pb - qb),
        moments(p).variance,
        p.n * pb * (1.0 - pb),
    )


#: column order of :meth:`HomogReport.csv_row`
HOMOG_CSV_COLUMNS = ("n", "p_bar", "q_bar", "path", "tv_product_lb", "tv_binom", "ratio", "slack", "constant_check")


@dataclass
class HomogReport:
    n: int
    p_bar: float
    q_bar: float
    path: str
    tv_product_lb: float
    tv_binom: float
    ratio: float | None
    slack: float
    constant_check: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_row(self) -> list:
        d = self.to_dict()
        return ["" if d[c] is None else d[c] for c in HOMOG_CSV_COLUMNS]


def homog_certificate(p, q, use_bruteforce: bool = True, tol: float = SLACK_TOL) -> HomogReport:
    """Check ``TV(Ber(p), Ber(q)) >= tv_binom / (48 C_BCV)``.

    The left side is the exact product TV when ``use_bruteforce`` (n <= 20),
    otherwise the analytic block lower bound.
    """
    p, q = _pair(p, q)
    if p.n == 0:
        raise EmptyVector("homogenization certificate needs n >= 1")
    if use_bruteforce and p.n > BRUTEFORCE_MAX_N:
        raise TooLargeForBruteforce(f"n={p.n} exceeds the brute-force cap {BRUTEFORCE_MAX_N}")
    pb, qb = _mean(p.values), _mean(q.values)
    if use_bruteforce:
        lhs, path = product_tv_bruteforce(p, q), "bruteforce"
    else:
        lhs, path = tv_ber_lower(p, q), "analytic"
    tvb = binom_tv(p.n, pb, qb)
    slack = lhs - CONSTANTS.homog_c * tvb
    ratio = lhs / tvb if tvb > 0.0 else None
    return HomogReport(p.n, pb, qb, path, lhs, tvb, ratio, slack, slack >= -tol)
