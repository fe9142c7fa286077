"""Stochastic friendship formation run until no further friendship is possible.

Three activation schedules are available. All of them only ever add a pair
that is eligible at that moment, and all stop exactly when no eligible pair
is left:

``random-initiator`` (default)
    A random agent that still has an eligible partner sends an invitation to
    one of its eligible partners, chosen uniformly.
``random-eligible-pair``
    One pair is drawn uniformly from every currently eligible pair.
``initiator-shuffle``
    Rounds in which every agent with free capacity, in shuffled order, invites
    one uniformly random agent; invitations to ineligible agents are dropped.
"""

from __future__ import annotations

import enum
from typing import Optional

import numpy as np

from .core import Agent, IdentitySpace, NetworkState, add_edge, distance_matrix, eligible_pairs


class SchedulerPolicy(enum.Enum):
    RANDOM_INITIATOR = "random-initiator"
    RANDOM_ELIGIBLE_PAIR = "random-eligible-pair"
    INITIATOR_SHUFFLE = "initiator-shuffle"


DEFAULT_POLICY = SchedulerPolicy.RANDOM_INITIATOR


def eligibility_matrix(state: NetworkState, dist: np.ndarray) -> np.ndarray:
    """Symmetric boolean matrix of currently eligible pairs."""
    to = np.array([a.to for a in state.agents])
    tc = np.array([a.tc for a in state.agents])
    free = np.asarray(state.degree) < tc
    mask = (dist <= np.minimum(to[:, None], to[None, :])) & free[:, None] & free[None, :]
    np.fill_diagonal(mask, False)
    for x, y in state.edges:
        mask[x, y] = mask[y, x] = False
    return mask


def step(
    state: NetworkState,
    space: IdentitySpace,
    rng: np.random.Generator,
    policy: SchedulerPolicy = DEFAULT_POLICY,
) -> Optional[tuple[int, int]]:
    """Perform one activation on ``state`` in place.

    Returns the added pair ``(x, y)`` with ``x < y``, or ``None`` when the
    state is already at equilibrium. Built on the exhaustive eligibility scan,
    so it is meant for inspection and tests, not bulk runs.
    """
    pairs = eligible_pairs(state, space)
    if not pairs:
        return None
    if policy is SchedulerPolicy.RANDOM_ELIGIBLE_PAIR:
        x, y = pairs[rng.integers(len(pairs))]
    elif policy is SchedulerPolicy.RANDOM_INITIATOR:
        partners: dict[int, list[int]] = {}
        for a, b in pairs:
            partners.setdefault(a, []).append(b)
            partners.setdefault(b, []).append(a)
        initiators = sorted(partners)
        x = initiators[rng.integers(len(initiators))]
        y = partners[x][rng.integers(len(partners[x]))]
        x, y = min(x, y), max(x, y)
    else:
        raise ValueError(f"step() is not defined for {policy.value}")
    add_edge(state, x, y, space)
    return (x, y)


def _add(state: NetworkState, x: int, y: int) -> None:
    state.edges.add((x, y) if x < y else (y, x))
    state.degree[x] += 1
    state.degree[y] += 1


def _run_random_initiator(state: NetworkState, dist: np.ndarray, rng: np.random.Generator) -> None:
    elig = eligibility_matrix(state, dist)
    tc = [a.tc for a in state.agents]
    deg = state.degree
    active = np.flatnonzero(elig.any(axis=1)).tolist()
    while active:
        k = int(rng.integers(len(active)))
        x = active[k]
        partners = np.flatnonzero(elig[x])
        if partners.size == 0:
            # eligibility never comes back, so x can leave the pool for good
            active[k] = active[-1]
            active.pop()
            continue
        y = int(partners[rng.integers(partners.size)])
        _add(state, x, y)
        elig[x, y] = elig[y, x] = False
        for z in (x, y):
            if deg[z] >= tc[z]:
                elig[z, :] = False
                elig[:, z] = False


def _run_random_pair(state: NetworkState, dist: np.ndarray, rng: np.random.Generator) -> None:
    # Eligibility only ever shrinks, so scanning one uniform permutation of the
    # initially eligible pairs and taking each pair still eligible when reached
    # draws every addition uniformly from the then-eligible set.
    xs, ys = np.nonzero(np.triu(eligibility_matrix(state, dist), k=1))
    order = rng.permutation(len(xs))
    tc = [a.tc for a in state.agents]
    deg = state.degree
    for x, y in zip(xs[order].tolist(), ys[order].tolist()):
        if deg[x] < tc[x] and deg[y] < tc[y]:
            _add(state, x, y)


def _run_initiator_shuffle(state: NetworkState, dist: np.ndarray, rng: np.random.Generator) -> None:
    n = state.n
    to = [a.to for a in state.agents]
    tc = [a.tc for a in state.agents]
    deg = state.degree
    edges = state.edges
    dist_l = dist.tolist()
    while eligibility_matrix(state, dist).any():
        for x in rng.permutation(n).tolist():
            if deg[x] >= tc[x]:
                continue
            y = int(rng.integers(n - 1))
            y += y >= x
            key = (x, y) if x < y else (y, x)
            if key not in edges and deg[y] < tc[y] and dist_l[x][y] <= min(to[x], to[y]):
                _add(state, x, y)


_RUNNERS = {
    SchedulerPolicy.RANDOM_INITIATOR: _run_random_initiator,
    SchedulerPolicy.RANDOM_ELIGIBLE_PAIR: _run_random_pair,
    SchedulerPolicy.INITIATOR_SHUFFLE: _run_initiator_shuffle,
}


def run_to_equilibrium(
    population: list[Agent] | NetworkState,
    space: IdentitySpace,
    rng: np.random.Generator,
    policy: SchedulerPolicy = DEFAULT_POLICY,
) -> NetworkState:
    """Form friendships until none can be added and return the terminal state.

    ``population`` is either a list of agents (start with no friendships) or
    an existing state, which is copied and left untouched.
    """
    if isinstance(population, NetworkState):
        state = population.copy()
    else:
        state = NetworkState(list(population))
    if state.n < 2:
        return state
    runner = _RUNNERS.get(SchedulerPolicy(policy))
    runner(state, distance_matrix(state.agents, space), rng)
    return state
