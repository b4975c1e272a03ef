"""Seeded instance generators.

Instance ``i`` of a config draws from its own generator keyed by
``(seed, i)`` through ``SeedSequence`` spawn keys, so any subset of the
stream can be produced in any order (or in parallel) with identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import ParamVec
from .errors import BadConfig

MODES = ("uniform", "dominating", "near-equal", "boundary-heavy", "adversarial-family")
FAMILIES = ("homog", "counterexample")

# stream ids under one instance key
STREAM_PAIR = 0
STREAM_AUX = 1


@dataclass(frozen=True)
class GenConfig:
    """``n`` is a fixed size or an inclusive ``(lo, hi)`` range.

    ``epsilon`` fixes the perturbation of the adversarial families; left
    as ``None`` it is drawn log-uniformly from ``[1e-4, 0.25]`` per instance.
    ``family`` picks which adversarial family: ``homog`` is
    ``p = (1 - 2e, 1/2), q = (1, 1/2 + e)`` and ``counterexample`` is
    ``p = (1, 0, 1/2), q = (0, 1, 1/2 + e)``.
    """

    n: int | tuple[int, int] = (1, 50)
    mode: str = "uniform"
    seed: int = 0
    count: int = 100
    epsilon: float | None = None
    boundary_fraction: float = 0.3
    family: str = "homog"

    def __post_init__(self):
        n = self.n
        if isinstance(n, (list, tuple)):
            if len(n) != 2:
                raise BadConfig(f"n range must be (lo, hi), got {n!r}")
            n = (int(n[0]), int(n[1]))
            if not 0 <= n[0] <= n[1]:
                raise BadConfig(f"bad n range {n}")
            object.__setattr__(self, "n", n)
        elif int(n) < 0:
            raise BadConfig(f"n must be nonnegative, got {n}")
        if self.mode not in MODES:
            raise BadConfig(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.family not in FAMILIES:
            raise BadConfig(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not 0 <= int(self.seed) < 2**64:
            raise BadConfig("seed must be an unsigned 64-bit integer")
        if int(self.count) < 0:
            raise BadConfig("count must be nonnegative")
        if self.epsilon is not None and not 0.0 < self.epsilon <= 0.5:
            raise BadConfig(f"epsilon must lie in (0, 1/2], got {self.epsilon}")
        if not 0.0 <= self.boundary_fraction <= 1.0:
            raise BadConfig("boundary_fraction must lie in [0, 1]")

    @property
    def n_range(self) -> tuple[int, int]:
        return self.n if isinstance(self.n, tuple) else (int(self.n), int(self.n))

    def to_dict(self) -> dict:
        return {
            "n": list(self.n_range),
            "mode": self.mode,
            "seed": int(self.seed),
            "count": int(self.count),
            "epsilon": self.epsilon,
            "boundary_fraction": self.boundary_fraction,
            "family": self.family,
        }


def instance_rng(seed: int, index: int, stream: int = STREAM_PAIR) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index), int(stream))))


def adversarial_pair(family: str, eps: float) -> tuple[ParamVec, ParamVec]:
    if family == "homog":
        return ParamVec([1.0 - 2.0 * eps, 0.5]), ParamVec([1.0, 0.5 + eps])
    if family == "counterexample":
        return ParamVec([1.0, 0.0, 0.5]), ParamVec([0.0, 1.0, 0.5 + eps])
    raise BadConfig(f"unknown family {family!r}")


def gen_pair(cfg: GenConfig, index: int) -> tuple[ParamVec, ParamVec]:
    rng = instance_rng(cfg.seed, index)
    if cfg.mode == "adversarial-family":
        eps = cfg.epsilon
        if eps is None:
            eps = 10.0 ** rng.uniform(-4.0, math.log10(0.25))
        return adversarial_pair(cfg.family, eps)
    lo, hi = cfg.n_range
    n = int(rng.integers(lo, hi + 1))
    p = rng.random(n)
    if cfg.mode == "uniform":
        q = rng.random(n)
    elif cfg.mode == "dominating":
        q = p * rng.random(n)
    elif cfg.mode == "near-equal":
        scale = 10.0 ** rng.uniform(-8.0, -1.0)
        q = np.clip(p + scale * rng.standard_normal(n), 0.0, 1.0)
    else:  # boundary-heavy
        q = rng.random(n)
        for v in (p, q):
            hit = rng.random(n) < cfg.boundary_fraction
            v[hit] = rng.integers(0, 2, size=int(hit.sum()))
    return ParamVec(p), ParamVec(q)


def gen_instances(cfg: GenConfig) -> Iterator[tuple[ParamVec, ParamVec]]:
    for i in range(cfg.count):
        yield gen_pair(cfg, i)


def dominate(p: ParamVec, q: ParamVec) -> tuple[ParamVec, ParamVec]:
    """Coordinatewise ``(max, min)``, turning any pair into a dominating one."""
    return ParamVec(np.maximum(p.values, q.values)), ParamVec(np.minimum(p.values, q.values))
