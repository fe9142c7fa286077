"""Seeded generation of agent populations.

Each agent draws, in this order: identity (Bernoulli ``p``), outreachability
(Bernoulli ``q``), then capacity (Normal ``tc_mu``, ``tc_sigma2`` rounded half
away from zero and clamped at 1). Agents are drawn in id order from a single
``numpy.random.Generator`` (PCG64), so ``(spec, seed)`` fixes the population.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Agent, IdentitySpace


@dataclass(frozen=True)
class PopulationSpec:
    n: int
    p: float
    q: float
    tc_mu: float
    tc_sigma2: float
    space: IdentitySpace = field(default_factory=IdentitySpace)

    def __post_init__(self):
        bad = self.invalid_fields()
        if bad:
            raise ValueError("invalid population spec: " + ", ".join(bad))

    def invalid_fields(self) -> list[str]:
        bad = []
        if not (isinstance(self.n, int) and self.n >= 2):
            bad.append(f"n={self.n!r}")
        if not 0.0 <= self.p <= 1.0:
            bad.append(f"p={self.p!r}")
        if not 0.0 <= self.q <= 1.0:
            bad.append(f"q={self.q!r}")
        if not self.tc_mu > 0:
            bad.append(f"tc_mu={self.tc_mu!r}")
        if not self.tc_sigma2 >= 0:
            bad.append(f"tc_sigma2={self.tc_sigma2!r}")
        return bad


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_si(spec: PopulationSpec, rng: np.random.Generator) -> int:
    return int(rng.random() < spec.p)


def sample_to(spec: PopulationSpec, rng: np.random.Generator) -> int:
    return int(rng.random() < spec.q)


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def sample_tc(spec: PopulationSpec, rng: np.random.Generator) -> int:
    draw = rng.normal(spec.tc_mu, math.sqrt(spec.tc_sigma2))
    return max(1, round_half_away(draw))


def sample_population(spec: PopulationSpec, rng: np.random.Generator) -> list[Agent]:
    """Draw ``spec.n`` agents with ids ``0..n-1``.

    Every identity dimension takes the same Bernoulli draw parameter; with the
    usual one-dimensional space this is the single minority indicator.
    """
    agents = []
    for i in range(spec.n):
        si = tuple(sample_si(spec, rng) for _ in range(spec.space.dims))
        to = sample_to(spec, rng)
        tc = sample_tc(spec, rng)
        agents.append(Agent(i, si, to, tc))
    return agents
