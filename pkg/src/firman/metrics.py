"""Segregation and satisfaction statistics for one network and across trials."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .core import IdentitySpace, NetworkState, w_dist


class AggregationError(ValueError):
    pass


@dataclass(frozen=True)
class EgoSimilarity:
    per_ego: np.ndarray  # percent similar alters, NaN for isolates
    mean: float
    mean_majority: float
    mean_minority: float
    n_isolates: int


@dataclass
class TrialRecord:
    case_id: int
    scenario: str
    trial: int
    seed: int
    n_agents: int
    n_minority: int
    n_tolerant: int
    n_edges: int
    homo_dyads: int
    hetero_dyads: int
    hetero_pct: float
    mean_similarity: float
    mean_similarity_majority: float
    mean_similarity_minority: float
    pct_satisfied: float
    n_isolates: int

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)


# metrics averaged across trials in a ScenarioSummary
SUMMARY_METRICS = (
    "n_edges",
    "homo_dyads",
    "hetero_dyads",
    "hetero_pct",
    "mean_similarity",
    "mean_similarity_majority",
    "mean_similarity_minority",
    "pct_satisfied",
    "n_isolates",
    "minority_pct",
)


@dataclass
class ScenarioSummary:
    case_id: int
    scenario: str
    n_trials: int
    stats: dict[str, tuple[float, float]]  # metric -> (mean, sd)
    hetero_pct_pooled: float
    n_trials_unsatisfied: int

    def mean(self, metric: str) -> float:
        return self.stats[metric][0]

    def sd(self, metric: str) -> float:
        return self.stats[metric][1]

    @staticmethod
    def columns() -> list[str]:
        cols = ["case_id", "scenario", "n_trials"]
        for m in SUMMARY_METRICS:
            cols += [f"{m}_mean", f"{m}_sd"]
        return cols + ["hetero_pct_pooled", "n_trials_unsatisfied"]

    def row(self) -> dict:
        out = {"case_id": self.case_id, "scenario": self.scenario, "n_trials": self.n_trials}
        for m in SUMMARY_METRICS:
            out[f"{m}_mean"], out[f"{m}_sd"] = self.stats[m]
        out["hetero_pct_pooled"] = self.hetero_pct_pooled
        out["n_trials_unsatisfied"] = self.n_trials_unsatisfied
        return out


def dyad_counts(state: NetworkState, space: IdentitySpace) -> tuple[int, int]:
    """Split edges into (homogeneous, heterogeneous) by zero vs positive distance."""
    agents = state.agents
    homo = sum(1 for x, y in state.edges if w_dist(agents[x], agents[y], space) == 0)
    return homo, len(state.edges) - homo


def ego_alter_similarity(state: NetworkState, space: IdentitySpace) -> EgoSimilarity:
    """Percentage of each ego's alters at distance zero from it.

    Isolates have no defined percentage; they get NaN, are left out of every
    mean and are counted in ``n_isolates``. A group mean is NaN when the group
    has no ego with friends.
    """
    agents = state.agents
    same = np.zeros(state.n)
    for x, y in state.edges:
        if w_dist(agents[x], agents[y], space) == 0:
            same[x] += 1
            same[y] += 1
    deg = np.asarray(state.degree, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        per_ego = np.where(deg > 0, 100.0 * same / deg, np.nan)
    minority = np.array([a.is_minority for a in agents], dtype=bool)
    return EgoSimilarity(
        per_ego=per_ego,
        mean=_nanmean(per_ego),
        mean_majority=_nanmean(per_ego[~minority]),
        mean_minority=_nanmean(per_ego[minority]),
        n_isolates=int(np.sum(deg == 0)),
    )


def _nanmean(values: np.ndarray) -> float:
    values = np.asarray(values, dtype=float)
    values = values[~np.isnan(values)]
    return float(values.mean()) if values.size else math.nan


def is_satisfied(num_f: int, tc: int) -> bool:
    # at least half of capacity, compared exactly
    return 2 * num_f >= tc


def satisfaction(state: NetworkState) -> float:
    """Percentage of agents holding at least half of their tie capacity."""
    ok = sum(is_satisfied(d, a.tc) for a, d in zip(state.agents, state.degree))
    return 100.0 * ok / state.n


def fb_offline_ratio(fb_mean: float, off_mean: float) -> float:
    if off_mean == 0:
        raise ZeroDivisionError("offline mean is zero; ratio undefined")
    return fb_mean / off_mean


def trial_record(
    state: NetworkState,
    space: IdentitySpace,
    *,
    case_id: int,
    scenario: str,
    trial: int,
    seed: int,
) -> TrialRecord:
    homo, hetero = dyad_counts(state, space)
    sim = ego_alter_similarity(state, space)
    total = homo + hetero
    return TrialRecord(
        case_id=case_id,
        scenario=scenario,
        trial=trial,
        seed=seed,
        n_agents=state.n,
        n_minority=sum(a.is_minority for a in state.agents),
        n_tolerant=sum(a.to > 0 for a in state.agents),
        n_edges=len(state.edges),
        homo_dyads=homo,
        hetero_dyads=hetero,
        hetero_pct=100.0 * hetero / total if total else 0.0,
        mean_similarity=sim.mean,
        mean_similarity_majority=sim.mean_majority,
        mean_similarity_minority=sim.mean_minority,
        pct_satisfied=satisfaction(state),
        n_isolates=sim.n_isolates,
    )


def _mean_sd(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    arr = arr[~np.isnan(arr)]
    if arr.size == 0:
        return math.nan, math.nan
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), sd


def summarize(trials: list[TrialRecord]) -> ScenarioSummary:
    """Mean and sample SD of every per-trial metric for one (case, scenario).

    ``hetero_pct_pooled`` pools dyads over all trials; ``hetero_pct`` stats are
    over the per-trial percentages.
    """
    if not trials:
        raise AggregationError("no trials to summarize")
    keys = {(t.case_id, t.scenario) for t in trials}
    if len(keys) > 1:
        raise AggregationError(f"mixed case/scenario ids: {sorted(keys)}")
    columns = {m: [getattr(t, m) for t in trials] for m in SUMMARY_METRICS if m != "minority_pct"}
    columns["minority_pct"] = [100.0 * t.n_minority / t.n_agents for t in trials]
    stats = {m: _mean_sd(v) for m, v in columns.items()}
    hetero = sum(t.hetero_dyads for t in trials)
    total = sum(t.homo_dyads + t.hetero_dyads for t in trials)
    return ScenarioSummary(
        case_id=trials[0].case_id,
        scenario=trials[0].scenario,
        n_trials=len(trials),
        stats=stats,
        hetero_pct_pooled=100.0 * hetero / total if total else 0.0,
        n_trials_unsatisfied=sum(t.pct_satisfied < 100.0 for t in trials),
    )
