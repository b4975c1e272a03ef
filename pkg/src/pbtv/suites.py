"""Randomized certification sweeps.

A suite maps one generated pair (plus an auxiliary per-instance generator
for partitions, events, interpolation times) to a list of named checks.
Each check carries a slack; it is violated when ``slack < -tolerance``.
Checks registered with tolerance ``None`` are conjectures: their extremes
are reported but they never count as violations.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

import numpy as np

from . import bounds, homog, oracle
from .core import ETA_BCV, ParamVec, binom_pmf, is_log_concave, is_unimodal, moments, pb_pmf, shift_tv, sup_distance, tv
from .errors import BadConfig, UnknownSuite
from .generate import STREAM_AUX, GenConfig, dominate, gen_pair, instance_rng


@dataclass(frozen=True)
class Tolerances:
    slack: float = 1e-9
    oracle: float = 1e-12
    derivative: float = 1e-6
    quadrature: float = 1e-10


@dataclass
class SearchRecord:
    p: list[float]
    q: list[float]
    objective: float
    objective_kind: str
    seed: int
    iteration: int
    timestamp: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "p": self.p,
            "q": self.q,
            "objective": self.objective,
            "objective_kind": self.objective_kind,
            "seed": self.seed,
            "iteration": self.iteration,
            "extra": self.extra,
        }
        if include_timing:
            d["timestamp"] = self.timestamp
        return d


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class Extreme:
    min_slack: float
    min_record: SearchRecord
    max_slack: float
    max_record: SearchRecord


@dataclass
class SuiteReport:
    suite: str
    config: dict
    instances: int
    violations: list[SearchRecord]
    extremes: dict[str, Extreme]
    conjectures: tuple[str, ...] = ()
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def min_slack(self) -> tuple[str | None, float | None]:
        """Smallest slack over asserted checks, as ``(check, slack)``."""
        best = (None, None)
        for name in sorted(self.extremes):
            if name in self.conjectures:
                continue
            s = self.extremes[name].min_slack
            if best[1] is None or s < best[1]:
                best = (name, s)
        return best


# (check name, slack, tolerance or None, extra metadata)
Check = tuple[str, float, "float | None", dict]


def _flag(ok: bool) -> float:
    return 0.0 if ok else -1.0


def _random_mask(rng: np.random.Generator, n: int) -> np.ndarray:
    """Both parts nonempty; needs n >= 2."""
    mask = rng.random(n) < 0.5
    if mask.all() or not mask.any():
        mask[int(rng.integers(n))] ^= True
    return mask


def suite_thm1(p, q, rng, tol):
    rep = bounds.certify_pair(p, q)
    return [
        ("thm1", rep.slacks["thm1"], tol.slack, {}),
        ("symmetric", rep.slacks["symmetric"], tol.slack, {}),
    ]


def _dominating_report(p, q):
    p, q = dominate(p, q)
    return p, q, bounds.certify_pair(p, q)


def suite_thm2(p, q, rng, tol):
    p, q, rep = _dominating_report(p, q)
    s = rep.slacks
    checks = [
        ("thm2", s["thm2"], tol.slack, {}),
        ("supg", s["supg"], tol.oracle, {}),
        ("g_nonneg", s["g_nonneg"], tol.oracle, {}),
        ("g_sum", s["g_sum"], tol.slack, {}),
    ]
    if rep.phi_pq > 0.0:
        checks.append(("tv_over_phi", rep.tv_pb / rep.phi_pq - 1.0 / 12.0, None, {}))
    return checks


def suite_j_bound(p, q, rng, tol):
    p, q, rep = _dominating_report(p, q)
    return [("j_bound", rep.slacks["j_bound"], tol.slack, {})]


def suite_pigeonhole(p, q, rng, tol):
    p, q, rep = _dominating_report(p, q)
    if rep.delta <= 0.0:
        return []
    pig_jb = bounds.pigeonhole_lower(rep.delta, rep.j_bound)
    return [
        ("pigeonhole", rep.slacks["pigeonhole"], tol.slack, {}),
        ("pigeonhole_jbound", rep.pigeonhole_lower - pig_jb, tol.slack, {}),
        ("pigeonhole_phi", pig_jb - rep.lower_thm2, tol.slack, {}),
    ]


def suite_thm3(p, q, rng, tol):
    if p.n > oracle.BRUTEFORCE_MAX_N:
        raise BadConfig(f"thm3 suite needs n <= {oracle.BRUTEFORCE_MAX_N}")
    if p.n == 0:
        return []
    full = oracle.product_tv_bruteforce(p, q)
    mask = p.values >= q.values
    if mask.all() or not mask.any():
        mask = _random_mask(rng, p.n) if p.n >= 2 else mask
    checks = [
        ("thm3", full - bounds.tv_ber_lower(p, q), tol.slack, {}),
        ("dpi", full - tv(pb_pmf(p), pb_pmf(q)), tol.oracle, {}),
    ]
    if 0 < mask.sum() < p.n:
        split = oracle.product_split(p, q, mask)
        extra = {"mask": mask.astype(int).tolist()}
        checks.append(("product_ge_max", full - max(split.tv_i, split.tv_j), tol.oracle, extra))
        checks.append(("product_le_sum", split.tv_i + split.tv_j - full, tol.oracle, extra))
    return checks


def suite_bcv_peak(p, q, rng, tol):
    checks = []
    for label, v in (("p", p), ("q", q)):
        var = moments(v).variance
        if var <= 0.0:
            continue
        peak = float(pb_pmf(v).mass.max())
        lhs, rhs = bounds.bcv_envelope(var)
        checks.append(("bcv_peak", ETA_BCV / math.sqrt(var) - peak, tol.oracle, {"side": label}))
        checks.append(("envelope", float(rhs - lhs), tol.oracle, {"side": label}))
    return checks


def suite_split_lemma(p, q, rng, tol):
    if p.n < 2:
        return []
    mask = _random_mask(rng, p.n)
    part = homog.Partition.from_mask(mask)
    chk = homog.split_bound_check(p, q, part, tol=tol.slack)
    extra = {"mask": mask.astype(int).tolist()}
    I = list(part.I)
    avg, twice = homog.averaged_family(
        homog._mean(p.values[I]), homog._mean(q.values[I]), p.n, len(I)
    )
    return [
        ("factor2", chk.factor2_slack, tol.slack, extra),
        ("averaging", twice - avg, tol.slack, extra),
        ("conjecture", chk.conjecture_slack, None, extra),
    ]


def suite_mixture(p, q, rng, tol):
    n = p.n
    if n < 2:
        return []
    size_i = int(rng.integers(1, n))
    p_i, p_j = float(p.values[0]), float(q.values[0])
    mix = homog.mixture_law(n, size_i, p_i, p_j)
    pooled = binom_pmf(n, homog.pooled_mean(n, size_i, p_i, p_j))
    extra = {"size_i": size_i, "p_i": p_i, "p_j": p_j}
    return [
        ("mixture_sup", -sup_distance(mix, pooled), tol.oracle, extra),
        ("mixture_mean", -abs(mix.mean() - (size_i * p_i + (n - size_i) * p_j)), tol.slack, extra),
    ]


def suite_homog_main(p, q, rng, tol):
    if p.n == 0:
        return []
    brute = p.n <= oracle.BRUTEFORCE_MAX_N
    rep = homog.homog_certificate(p, q, use_bruteforce=brute, tol=tol.slack)
    mono = homog.phi_monotonicity(p, q)
    checks = [
        ("homog_constant", rep.slack, tol.slack, {"path": rep.path}),
        ("delta_monotone", mono.delta - mono.delta_hom, tol.oracle, {}),
        ("sigma_monotone", mono.sigma2_hom - mono.sigma2, tol.oracle, {}),
    ]
    if brute and rep.ratio is not None:
        checks.append(("ratio_minus_8_9", rep.ratio - 8.0 / 9.0, None, {}))
    if p.n <= 16:
        hp = ParamVec(np.full(p.n, rep.p_bar))
        hq = ParamVec(np.full(p.n, rep.q_bar))
        checks.append(("sufficiency", -abs(oracle.product_tv_bruteforce(hp, hq) - rep.tv_binom), tol.slack, {}))
    return checks


def suite_unimodality(p, q, rng, tol):
    checks = []
    for label, v in (("p", p), ("q", q)):
        x = pb_pmf(v)
        uni = is_unimodal(x)
        checks.append(("unimodal", _flag(uni), 0.0, {"side": label}))
        checks.append(("log_concave", _flag(is_log_concave(x)), 0.0, {"side": label}))
        if uni:
            checks.append(("shift_tv", -abs(shift_tv(x) - tv(x, x.shift(1))), tol.oracle, {"side": label}))
    return checks


def suite_derivative(p, q, rng, tol):
    n = p.n
    if n == 0:
        return []
    h = oracle.FD_STEP
    t = float(rng.uniform(h, 1.0 - h))
    A = sorted(int(k) for k in np.flatnonzero(rng.random(n + 1) < 0.5))
    path = oracle.InterpPath(p, q)
    extra = {"t": t, "A": A}
    an = oracle.f_A_derivative(path, t, A)
    fd = oracle.f_A_central_difference(path, t, A, h)
    vp = oracle.variance_path_check(path, t)
    dp_, dq_ = dominate(p, q)
    dp = bounds.DominatingPair(dp_, dq_)
    k = int(rng.integers(1, n + 1))
    quad = oracle.g_via_interpolation(dp, k)
    return [
        ("derivative", -abs(an - fd), tol.derivative, extra),
        ("variance_path", vp.var_t - vp.lower_hull, tol.oracle, extra),
        ("g_quadrature", -abs(quad - bounds.g_profile(dp).at(k)), tol.quadrature, {"k": k}),
    ]


SUITES: dict[str, Callable] = {
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "thm3": suite_thm3,
    "j-bound": suite_j_bound,
    "pigeonhole": suite_pigeonhole,
    "bcv-peak": suite_bcv_peak,
    "split-lemma": suite_split_lemma,
    "mixture": suite_mixture,
    "homog-main": suite_homog_main,
    "unimodality": suite_unimodality,
    "derivative": suite_derivative,
}


def _record(p, q, slack, kind, seed, index, extra, stamp) -> SearchRecord:
    return SearchRecord(p.tolist(), q.tolist(), float(slack), kind, int(seed), int(index), stamp, dict(extra))


def _run_chunk(name: str, cfg: GenConfig, tol: Tolerances, lo: int, hi: int):
    """Evaluate instances ``lo..hi-1``; returns violations and per-check extremes."""
    fn = SUITES[name]
    stamp = now_iso()
    violations = []
    ext: dict[str, list] = {}
    conj = set()
    for i in range(lo, hi):
        p, q = gen_pair(cfg, i)
        for check, slack, ctol, extra in fn(p, q, instance_rng(cfg.seed, i, STREAM_AUX), tol):
            slack = float(slack)
            kind = f"{name}:{check}"
            if ctol is None:
                conj.add(check)
            elif slack < -ctol:
                violations.append(_record(p, q, slack, kind, cfg.seed, i, extra, stamp))
            e = ext.get(check)
            # strict comparisons keep the lowest index on ties
            if e is None:
                rec = _record(p, q, slack, kind, cfg.seed, i, extra, stamp)
                ext[check] = [slack, rec, slack, rec]
            else:
                if slack < e[0]:
                    e[0], e[1] = slack, _record(p, q, slack, kind, cfg.seed, i, extra, stamp)
                if slack > e[2]:
                    e[2], e[3] = slack, _record(p, q, slack, kind, cfg.seed, i, extra, stamp)
    return violations, ext, conj


def _chunks(count: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, count))
    edges = np.linspace(0, count, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]


def run_suite(name: str, cfg: GenConfig, workers: int = 1, tol: Tolerances | None = None) -> SuiteReport:
    """Run a named suite over the generated stream.

    Chunks are merged in instance-index order, so the report does not depend
    on ``workers``.
    """
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    tol = tol or Tolerances()
    start = time.perf_counter()
    if cfg.count == 0:
        parts = []
    elif workers <= 1:
        parts = [_run_chunk(name, cfg, tol, 0, cfg.count)]
    else:
        spans = _chunks(cfg.count, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run_chunk, name, cfg, tol, a, b) for a, b in spans]
            parts = [f.result() for f in futs]
    violations: list[SearchRecord] = []
    extremes: dict[str, Extreme] = {}
    conj: set[str] = set()
    for viol, ext, c in parts:
        violations.extend(viol)
        conj |= c
        for check, (mn, mnr, mx, mxr) in ext.items():
            cur = extremes.get(check)
            if cur is None:
                extremes[check] = Extreme(mn, mnr, mx, mxr)
                continue
            if mn < cur.min_slack:
                cur.min_slack, cur.min_record = mn, mnr
            if mx > cur.max_slack:
                cur.max_slack, cur.max_record = mx, mxr
    return SuiteReport(
        suite=name,
        config=cfg.to_dict(),
        instances=cfg.count,
        violations=violations,
        extremes=dict(sorted(extremes.items())),
        conjectures=tuple(sorted(conj)),
        duration=time.perf_counter() - start,
    )
