"""Agents in a social identity space, tie-length distance and friendship eligibility.

Agents sit at integer coordinates of an identity space. A friendship between
two agents is a tie whose length is their weighted Manhattan distance; each
agent can only generate ties up to its *tie outreachability* and keep at most
*tie capacity* friends at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class StructureError(ValueError):
    """Raised when an agent does not conform to its identity space."""


class ContractViolation(RuntimeError):
    """Raised when a network mutation would break the formation rule."""


@dataclass(frozen=True)
class IdentitySpace:
    """Number of identity dimensions and the weight of each one."""

    dims: int = 1
    weights: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.dims < 1:
            raise StructureError(f"dims must be >= 1, got {self.dims}")
        if len(self.weights) != self.dims:
            raise StructureError(
                f"expected {self.dims} weights, got {len(self.weights)}"
            )
        if any(w < 0 for w in self.weights):
            raise StructureError(f"weights must be non-negative: {self.weights}")


@dataclass(frozen=True)
class Agent:
    id: int
    si: tuple[int, ...]
    to: int
    tc: int

    def __post_init__(self):
        object.__setattr__(self, "si", tuple(int(s) for s in self.si))
        if self.id < 0:
            raise StructureError(f"agent id must be non-negative, got {self.id}")
        if self.to < 0 or self.tc < 0:
            raise StructureError(f"agent {self.id}: to/tc must be non-negative")
        if any(s < 0 for s in self.si):
            raise StructureError(f"agent {self.id}: negative identity coordinate")

    @property
    def is_minority(self) -> bool:
        # majority sits at the origin of the identity space
        return any(self.si)


def w_dist(x: Agent, y: Agent, space: IdentitySpace) -> float:
    """Weighted Manhattan distance between two agents' identity coordinates."""
    if len(x.si) != space.dims or len(y.si) != space.dims:
        raise StructureError(
            f"identity length mismatch: agents {x.id}/{y.id} have "
            f"{len(x.si)}/{len(y.si)} coordinates, space has {space.dims}"
        )
    return sum(w * abs(a - b) for w, a, b in zip(space.weights, x.si, y.si))


def distance_matrix(agents: Sequence[Agent], space: IdentitySpace) -> np.ndarray:
    """All pairwise ``w_dist`` values as an ``(n, n)`` float array."""
    coords = identity_array(agents, space)
    weights = np.asarray(space.weights)
    return np.abs(coords[:, None, :] - coords[None, :, :]) @ weights


def identity_array(agents: Sequence[Agent], space: IdentitySpace) -> np.ndarray:
    for a in agents:
        if len(a.si) != space.dims:
            raise StructureError(
                f"agent {a.id} has {len(a.si)} coordinates, space has {space.dims}"
            )
    return np.array([a.si for a in agents], dtype=np.int64).reshape(len(agents), space.dims)


def _edge_key(x: int, y: int) -> tuple[int, int]:
    return (x, y) if x < y else (y, x)


@dataclass
class NetworkState:
    """Undirected friendship edges over a population with dense ids ``0..n-1``.

    ``degree`` is kept incrementally; :meth:`check_degrees` reconciles it
    against the edge set.
    """

    agents: list[Agent]
    edges: set[tuple[int, int]] = field(default_factory=set)
    degree: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.agents = list(self.agents)
        for i, a in enumerate(self.agents):
            if a.id != i:
                raise StructureError(f"agent ids must be dense 0..n-1; position {i} has id {a.id}")
        if not self.degree:
            self.degree = [0] * len(self.agents)
            for x, y in self.edges:
                self.degree[x] += 1
                self.degree[y] += 1

    @classmethod
    def from_edges(cls, agents: Sequence[Agent], edges: Iterable[tuple[int, int]]) -> "NetworkState":
        """Build a state from an edge list without applying the formation rule.

        Used for loading external edge files; self-loops and duplicates are
        dropped here and should be caught beforehand by the caller if they matter.
        """
        state = cls(list(agents))
        for x, y in edges:
            if x == y:
                continue
            key = _edge_key(x, y)
            if key in state.edges:
                continue
            state.edges.add(key)
            state.degree[x] += 1
            state.degree[y] += 1
        return state

    @property
    def n(self) -> int:
        return len(self.agents)

    def has_edge(self, x: int, y: int) -> bool:
        return _edge_key(x, y) in self.edges

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.agents]
        for x, y in self.edges:
            adj[x].append(y)
            adj[y].append(x)
        return adj

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def check_degrees(self) -> list[int]:
        """Return ids whose stored degree disagrees with the edge set."""
        counts = [0] * self.n
        for x, y in self.edges:
            counts[x] += 1
            counts[y] += 1
        return [i for i, (c, d) in enumerate(zip(counts, self.degree)) if c != d]

    def copy(self) -> "NetworkState":
        return NetworkState(self.agents, set(self.edges), list(self.degree))


def eligible(x: Agent, y: Agent, state: NetworkState, space: IdentitySpace) -> bool:
    """Whether ``x`` and ``y`` can form a reciprocated friendship right now.

    Both must reach each other's position (distance within the smaller
    outreachability) and both must still have a free slot, ``num_f < tc``.
    """
    if x.id == y.id:
        raise ValueError(f"an agent cannot befriend itself (id {x.id})")
    if state.has_edge(x.id, y.id):
        return False
    if state.degree[x.id] >= x.tc or state.degree[y.id] >= y.tc:
        return False
    return w_dist(x, y, space) <= min(x.to, y.to)


def add_edge(state: NetworkState, x_id: int, y_id: int, space: IdentitySpace) -> NetworkState:
    """Add friendship ``(x_id, y_id)`` in place and return the state."""
    x, y = state.agents[x_id], state.agents[y_id]
    if not eligible(x, y, state, space):
        raise ContractViolation(f"pair ({x_id}, {y_id}) is not eligible")
    state.edges.add(_edge_key(x_id, y_id))
    state.degree[x_id] += 1
    state.degree[y_id] += 1
    return state


def eligible_pairs(state: NetworkState, space: IdentitySpace) -> list[tuple[int, int]]:
    """Exhaustive O(n^2) scan for every currently eligible pair, ``x < y``."""
    agents = state.agents
    out = []
    for i in range(len(agents)):
        for j in range(i + 1, len(agents)):
            if eligible(agents[i], agents[j], state, space):
                out.append((i, j))
    return out


def is_equilibrium(state: NetworkState, space: IdentitySpace) -> bool:
    """True iff no pair of agents could still become friends."""
    agents = state.agents
    for i in range(len(agents)):
        for j in range(i + 1, len(agents)):
            if eligible(agents[i], agents[j], state, space):
                return False
    return True
