"""Extremal-instance search for the open constants.

Random multi-start, then derivative-free coordinate refinement: each round
runs a golden-section search on one coordinate at a time inside a window
that halves every round.  Objectives have ``min(1, .)`` kinks and absolute
values, so no gradients are used.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import bounds, homog
from .core import ParamVec, pb_pmf, tv
from .errors import BadConfig
from .generate import STREAM_AUX, GenConfig, dominate, gen_pair, instance_rng
from .suites import SearchRecord, _random_mask, now_iso

KINDS = ("homog-ratio", "tv-over-phi", "split-conjecture-slack")
HOMOG_MAX_N = 16

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def homog_ratio(p, q) -> float:
    """``TV(Ber(p), Ber(q)) / TV(Bin(n, p_bar), Bin(n, q_bar))``; inf if the denominator vanishes."""
    rep = homog.homog_certificate(p, q, use_bruteforce=True)
    return rep.ratio if rep.ratio is not None and rep.tv_binom > 1e-12 else math.inf


def tv_over_phi(p, q) -> float:
    ph = bounds.phi(p, q)
    if ph <= 1e-12:
        return math.inf
    return tv(pb_pmf(p), pb_pmf(q)) / ph


def split_conjecture_slack(p, q, mask) -> float:
    part = homog.Partition.from_mask(mask)
    return homog.split_bound_check(p, q, part).conjecture_slack


def objective(kind: str, p, q, extra: dict | None = None) -> float:
    """Recompute a search objective from stored parameters."""
    if kind == "homog-ratio":
        return homog_ratio(p, q)
    if kind == "tv-over-phi":
        return tv_over_phi(p, q)
    if kind == "split-conjecture-slack":
        return split_conjecture_slack(p, q, np.asarray(extra["mask"], dtype=bool))
    raise BadConfig(f"unknown search kind {kind!r}; expected one of {KINDS}")


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10, max_iter: int = 60):
    """Minimize ``f`` on ``[a, b]``; endpoints are evaluated too since extremes
    often sit on the boundary of the unit cube."""
    best_x, best_f = a, f(a)
    fb = f(b)
    if fb < best_f:
        best_x, best_f = b, fb
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def _setup(kind: str, p: ParamVec, q: ParamVec, rng) -> tuple[np.ndarray, Callable, Callable, dict]:
    """Search vector, objective on it, decoder back to (p, q), and extras."""
    n = p.n
    if kind == "homog-ratio":
        if not 1 <= n <= HOMOG_MAX_N:
            raise BadConfig(f"homog-ratio search needs 1 <= n <= {HOMOG_MAX_N}, got {n}")

        def decode(x):
            return ParamVec(x[:n]), ParamVec(x[n:])

        return np.concatenate([p.values, q.values]), lambda x: homog_ratio(*decode(x)), decode, {}
    if kind == "tv-over-phi":
        p, q = dominate(p, q)
        # q = p * u keeps the pair dominating under any coordinate move
        u = np.divide(q.values, p.values, out=np.zeros(n), where=p.values > 0)

        def decode(x):
            return ParamVec(x[:n]), ParamVec(x[:n] * x[n:])

        return np.concatenate([p.values, np.clip(u, 0.0, 1.0)]), lambda x: tv_over_phi(*decode(x)), decode, {}
    if kind == "split-conjecture-slack":
        if n < 2:
            raise BadConfig("split-conjecture-slack search needs n >= 2")
        mask = _random_mask(rng, n)

        def decode(x):
            return ParamVec(x[:n]), ParamVec(x[n:])

        return (
            np.concatenate([p.values, q.values]),
            lambda x: split_conjecture_slack(*decode(x), mask),
            decode,
            {"mask": mask.astype(int).tolist()},
        )
    raise BadConfig(f"unknown search kind {kind!r}; expected one of {KINDS}")


def refine(f: Callable, x: np.ndarray, steps: int, width: float = 0.25) -> tuple[np.ndarray, float, int]:
    """Coordinate-wise golden-section rounds; returns ``(x, f(x), last improving round)``."""
    x = x.copy()
    fx = f(x)
    last = 0
    for r in range(steps):
        w = width * 0.5**r
        for j in range(x.shape[0]):
            xj = x[j]

            def f1(v, j=j):
                y = x.copy()
                y[j] = v
                return f(y)

            v, fv = golden_section(f1, max(0.0, xj - w), min(1.0, xj + w), tol=max(1e-12, w * 1e-6))
            if fv < fx:
                x[j], fx, last = v, fv, r + 1
    return x, fx, last


def search_min_ratio(kind: str, cfg: GenConfig, refine_steps: int = 10, starts: int | None = None) -> SearchRecord:
    """Minimize the objective ``kind`` from ``starts`` seeded starting pairs.

    Start ``s`` is instance ``s`` of ``cfg`` (so an adversarial-family config
    starts on the family).  Deterministic given the config.
    """
    if kind not in KINDS:
        raise BadConfig(f"unknown search kind {kind!r}; expected one of {KINDS}")
    starts = cfg.count if starts is None else starts
    if starts < 1:
        raise BadConfig("need at least one start")
    best = None
    for s in range(starts):
        p, q = gen_pair(cfg, s)
        x0, f, decode, extra = _setup(kind, p, q, instance_rng(cfg.seed, s, STREAM_AUX))
        x, fx, rnd = refine(f, x0, refine_steps)
        if not math.isfinite(fx):
            continue
        if best is None or fx < best[0]:
            bp, bq = decode(x)
            best = (fx, bp, bq, s, rnd, extra)
    if best is None:
        raise BadConfig("every start has an undefined objective")
    fx, bp, bq, s, rnd, extra = best
    return SearchRecord(
        bp.tolist(), bq.tolist(), float(fx), kind, int(cfg.seed), int(s), now_iso(), {**extra, "round": rnd}
    )
