"""Two-sided TV control between Poisson binomials via the Phi functional.

``phi(p, q) = min(1, Delta / sqrt(sigma_p^2 + 1))`` with ``Delta`` the l1
distance of the parameter vectors.  For every pair,

    TV(S_p, S_q) <= C_BCV * min(phi(p, q), phi(q, p))

and for dominating pairs (``p >= q`` coordinatewise)

    TV(S_p, S_q) >= phi(p, q) / 12.

The lower bound runs through the survival-difference profile ``g`` and its
second moment ``J``; all intermediate quantities are exposed so they can be
certified one by one.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import C_BCV, CONSTANTS, ETA_BCV, ParamVec, Pmf, as_params, fsum, moments, pb_pmf, survival_array, tv
from .errors import LengthMismatch, NonPositiveMass, NotDominating

SLACK_TOL = 1e-9
ORACLE_TOL = 1e-12


def _pair(p, q) -> tuple[ParamVec, ParamVec]:
    p, q = as_params(p), as_params(q)
    if p.n != q.n:
        raise LengthMismatch(f"length mismatch: {p.n} != {q.n}")
    return p, q


@dataclass(frozen=True, eq=False)
class DominatingPair:
    """Parameter vectors with ``p[i] >= q[i]`` for every ``i`` (exact check)."""

    p: ParamVec
    q: ParamVec

    def __post_init__(self):
        p, q = _pair(self.p, self.q)
        if not np.all(p.values >= q.values):
            bad = np.flatnonzero(p.values < q.values).tolist()
            raise NotDominating(f"p < q at indices {bad}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.p.n

    @property
    def deltas(self) -> np.ndarray:
        return self.p.values - self.q.values

    @property
    def delta(self) -> float:
        return fsum(self.deltas)


def is_dominating(p, q) -> bool:
    p, q = _pair(p, q)
    return bool(np.all(p.values >= q.values))


def l1_distance(p, q) -> float:
    p, q = _pair(p, q)
    return fsum(np.abs(p.values - q.values))


def phi(p, q) -> float:
    """Note the asymmetry: the variance is that of the first argument."""
    p, q = _pair(p, q)
    delta = fsum(np.abs(p.values - q.values))
    return min(1.0, delta / math.sqrt(moments(p).variance + 1.0))


def upper_bound_thm1(p, q) -> float:
    return C_BCV * min(phi(p, q), phi(q, p))


def upper_bound_symmetric(p, q) -> float:
    p, q = _pair(p, q)
    delta = l1_distance(p, q)
    sp = math.sqrt(moments(p).variance + 1.0)
    sq = math.sqrt(moments(q).variance + 1.0)
    return 2.0 * C_BCV * delta / (sp + sq)


@dataclass(frozen=True, eq=False)
class GProfile:
    """``g(k) = P(S_p >= k) - P(S_q >= k)`` stored for ``k = offset, ...``."""

    offset: int
    g: np.ndarray
    G: float
    J: float
    m_p: float

    def at(self, k: int) -> float:
        j = k - self.offset
        return float(self.g[j]) if 0 <= j < self.g.shape[0] else 0.0

    @property
    def max_g(self) -> float:
        return float(self.g.max()) if self.g.size else 0.0

    @property
    def min_g(self) -> float:
        return float(self.g.min()) if self.g.size else 0.0


def _profile(dp: DominatingPair, xp, xq) -> GProfile:
    n = dp.n
    if n == 0:
        return GProfile(1, np.zeros(0), 0.0, 0.0, 0.0)
    g = survival_array(xp, 1, n) - survival_array(xq, 1, n)
    m_p = moments(dp.p).mean
    k = np.arange(1, n + 1, dtype=np.float64)
    return GProfile(1, g, fsum(g), fsum((k - m_p) ** 2 * g), m_p)


def g_profile(dp: DominatingPair) -> GProfile:
    """Survival-difference profile on ``k = 1..n`` (zero elsewhere)."""
    return _profile(dp, pb_pmf(dp.p), pb_pmf(dp.q))


def j_upper_bound(dp: DominatingPair) -> float:
    delta = dp.delta
    return 2.0 * delta * (moments(dp.p).variance + 1.0 + delta * delta)


def bcv_envelope(x) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of ``min(1, eta / sqrt((x - 1/4)_+)) <= C_BCV / sqrt(x + 1)``."""
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore"):
        lhs = np.minimum(1.0, ETA_BCV / np.sqrt(np.maximum(x - 0.25, 0.0)))
    return lhs, C_BCV / np.sqrt(x + 1.0)


def bcv_peak_gap(x: Pmf) -> float | None:
    """``eta / sqrt(v) - max_k P(X = k)``, or None when the variance is zero."""
    var = x.variance()
    if var <= 0.0:
        return None
    return ETA_BCV / math.sqrt(var) - float(x.mass.max())


def pigeonhole_lower(G: float, J: float) -> float:
    """Heaviest-atom lower bound for a positive measure of mass G and spread J."""
    if not G > 0.0:
        raise NonPositiveMass(f"G must be positive, got {G!r}")
    if not (J >= 0.0 and math.isfinite(J)):
        raise ValueError(f"J must be finite and nonnegative, got {J!r}")
    return 3.0 * G**1.5 / (16.0 * math.sqrt(J) + 4.0 * math.sqrt(G))


def lower_bound_thm2(dp: DominatingPair) -> float:
    return CONSTANTS.lower_c * phi(dp.p, dp.q)


@dataclass(frozen=True)
class Thm2Path:
    """Intermediate values of the dominating-pair lower bound argument.

    The chain is ``TV >= max_g >= pigeon_j >= pigeon_jbound >= phi / 12``.
    """

    max_g: float
    pigeon_j: float | None
    pigeon_jbound: float | None
    phi_over_12: float


def thm2_proof_path(dp: DominatingPair, profile: GProfile | None = None) -> Thm2Path:
    prof = profile if profile is not None else g_profile(dp)
    delta = dp.delta
    if delta > 0.0:
        pj = pigeonhole_lower(delta, max(prof.J, 0.0))
        pjb = pigeonhole_lower(delta, j_upper_bound(dp))
    else:
        pj = pjb = None
    return Thm2Path(prof.max_g, pj, pjb, lower_bound_thm2(dp))


def tv_ber_lower(p, q) -> float:
    """Lower bound on ``TV(Ber(p), Ber(q))`` from the split into p>=q and p<q blocks."""
    p, q = _pair(p, q)
    I = p.values >= q.values
    J = ~I
    phi_i = phi(p.values[I], q.values[I]) if I.any() else 0.0
    phi_j = phi(q.values[J], p.values[J]) if J.any() else 0.0
    return CONSTANTS.lower_c * max(phi_i, phi_j)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

#: column order of :meth:`BoundReport.csv_row`; stable across versions
BOUND_CSV_COLUMNS = (
    "n",
    "dominating",
    "tv_pb",
    "delta",
    "sigma2_p",
    "sigma2_q",
    "phi_pq",
    "phi_qp",
    "upper_thm1",
    "upper_symmetric",
    "lower_thm2",
    "max_g",
    "min_g",
    "g_sum",
    "pigeonhole_lower",
    "j_value",
    "j_bound",
    "slack_thm1",
    "slack_symmetric",
    "slack_thm2",
    "slack_supg",
    "slack_pigeonhole",
    "slack_j_bound",
    "slack_g_nonneg",
    "slack_g_sum",
    "all_pass",
)

# check name -> tolerance; a check passes iff slack >= -tolerance
BOUND_CHECKS = {
    "thm1": SLACK_TOL,
    "symmetric": SLACK_TOL,
    "thm2": SLACK_TOL,
    "supg": ORACLE_TOL,
    "pigeonhole": SLACK_TOL,
    "j_bound": SLACK_TOL,
    "g_nonneg": ORACLE_TOL,
    "g_sum": SLACK_TOL,
}


@dataclass
class BoundReport:
    n: int
    dominating: bool
    tv_pb: float
    delta: float
    sigma2_p: float
    sigma2_q: float
    phi_pq: float
    phi_qp: float
    upper_thm1: float
    upper_symmetric: float
    lower_thm2: float | None = None
    max_g: float | None = None
    min_g: float | None = None
    g_sum: float | None = None
    pigeonhole_lower: float | None = None
    j_value: float | None = None
    j_bound: float | None = None
    slacks: dict[str, float] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.flags.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["all_pass"] = self.all_pass
        return d

    def csv_row(self) -> list:
        d = self.to_dict()
        row = []
        for col in BOUND_CSV_COLUMNS:
            v = d["slacks"].get(col[6:]) if col.startswith("slack_") else d[col]
            row.append("" if v is None else v)
        return row


def certify_pair(p, q, tolerances: dict[str, float] | None = None) -> BoundReport:
    """Exact TV plus every bound and its slack; lower-bound fields need domination."""
    p, q = _pair(p, q)
    tols = {**BOUND_CHECKS, **(tolerances or {})}
    xp, xq = pb_pmf(p), pb_pmf(q)
    tv_pb = tv(xp, xq)
    mp, mq = moments(p), moments(q)
    delta = fsum(np.abs(p.values - q.values))
    phi_pq = min(1.0, delta / math.sqrt(mp.variance + 1.0))
    phi_qp = min(1.0, delta / math.sqrt(mq.variance + 1.0))
    up1 = C_BCV * min(phi_pq, phi_qp)
    ups = 2.0 * C_BCV * delta / (math.sqrt(mp.variance + 1.0) + math.sqrt(mq.variance + 1.0))
    rep = BoundReport(
        n=p.n,
        dominating=bool(np.all(p.values >= q.values)),
        tv_pb=tv_pb,
        delta=delta,
        sigma2_p=mp.variance,
        sigma2_q=mq.variance,
        phi_pq=phi_pq,
        phi_qp=phi_qp,
        upper_thm1=up1,
        upper_symmetric=ups,
    )
    slacks = {"thm1": up1 - tv_pb, "symmetric": ups - tv_pb}
    if rep.dominating:
        dp = DominatingPair(p, q)
        prof = _profile(dp, xp, xq)
        rep.lower_thm2 = CONSTANTS.lower_c * phi_pq
        rep.max_g = prof.max_g
        rep.min_g = prof.min_g
        rep.g_sum = prof.G
        rep.j_value = prof.J
        rep.j_bound = 2.0 * delta * (mp.variance + 1.0 + delta * delta)
        slacks["thm2"] = tv_pb - rep.lower_thm2
        slacks["supg"] = tv_pb - rep.max_g
        slacks["j_bound"] = rep.j_bound - rep.j_value
        slacks["g_nonneg"] = min(rep.min_g, 0.0)
        slacks["g_sum"] = 0.0 - abs(rep.g_sum - delta)
        if delta > 0.0:
            rep.pigeonhole_lower = pigeonhole_lower(delta, max(rep.j_value, 0.0))
            slacks["pigeonhole"] = rep.max_g - rep.pigeonhole_lower
    rep.slacks = slacks
    rep.flags = {k: v >= -tols[k] for k, v in slacks.items()}
    return rep
