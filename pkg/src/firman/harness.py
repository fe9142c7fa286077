"""Scenario sweeps, per-trial seeding, CSV output and network validation.

Every trial is identified by ``(case_id, scenario, trial)`` and its seed is
``base_seed + blake2b64("case:scenario:trial") mod 2**64``; the seed is written
into every output row so a single trial can be rerun with ``run_single``.
"""

from __future__ import annotations

import copy
import csv
import hashlib
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .core import Agent, IdentitySpace, NetworkState, StructureError, eligible, is_equilibrium, w_dist
from .dynamics import DEFAULT_POLICY, SchedulerPolicy, run_to_equilibrium
from .metrics import ScenarioSummary, TrialRecord, fb_offline_ratio, summarize, trial_record
from .sampling import PopulationSpec, make_rng, sample_population

log = logging.getLogger(__name__)

# Ego-alter similarity reported by Hofstra et al. (2017, ASR 82(3)) for Dutch
# adolescents: friends in general vs Facebook friends without kin.
REFERENCE_OFFLINE_SIMILARITY = 76.218
REFERENCE_FACEBOOK_SIMILARITY = 75.974
REFERENCE_RATIO = 0.997

SCENARIOS = ("offline", "facebook")
U64 = 2**64

PAPER_PRESET = {
    "p": 0.22,
    "tc_sigma2": 0.25,
    "weights": [1],
    "trials": 100,
    "base_seed": 0,
    "out": "results",
    "workers": 1,
    "policy": DEFAULT_POLICY.value,
    "export_edges": False,
    "scenarios": {
        "offline": {"n": 30, "tc_mu": 3},
        "facebook": {"n": 300, "tc_mu": 30},
    },
    "cases": [
        {"case_id": 1, "q": 0.2},
        {"case_id": 2, "q": 0.5},
        {"case_id": 3, "q": 0.8},
    ],
}

PRESETS = {"paper": PAPER_PRESET}


class ConfigError(ValueError):
    """Invalid experiment configuration; ``fields`` lists the offending keys."""

    def __init__(self, fields: Sequence[str]):
        self.fields = list(fields)
        super().__init__("invalid config: " + "; ".join(self.fields))


@dataclass(frozen=True)
class CaseConfig:
    case_id: int
    q: float


@dataclass(frozen=True)
class ScenarioConfig:
    n: int
    tc_mu: float


@dataclass
class ExperimentConfig:
    cases: list[CaseConfig]
    scenarios: dict[str, ScenarioConfig]
    p: float = 0.22
    tc_sigma2: float = 0.25
    weights: tuple[float, ...] = (1.0,)
    trials: int = 100
    base_seed: int = 0
    out: Path = field(default_factory=lambda: Path("results"))
    workers: int = 1
    policy: SchedulerPolicy = DEFAULT_POLICY
    export_edges: bool = False

    @property
    def space(self) -> IdentitySpace:
        return IdentitySpace(len(self.weights), tuple(self.weights))

    def case(self, case_id: int) -> CaseConfig:
        for c in self.cases:
            if c.case_id == case_id:
                return c
        raise ConfigError([f"case {case_id} not in config (have {[c.case_id for c in self.cases]})"])

    def population_spec(self, case_id: int, scenario: str) -> PopulationSpec:
        if scenario not in self.scenarios:
            raise ConfigError([f"unknown scenario {scenario!r}"])
        sc = self.scenarios[scenario]
        return PopulationSpec(
            n=sc.n,
            p=self.p,
            q=self.case(case_id).q,
            tc_mu=sc.tc_mu,
            tc_sigma2=self.tc_sigma2,
            space=self.space,
        )

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "tc_sigma2": self.tc_sigma2,
            "weights": list(self.weights),
            "trials": self.trials,
            "base_seed": self.base_seed,
            "out": str(self.out),
            "workers": self.workers,
            "policy": self.policy.value,
            "export_edges": self.export_edges,
            "scenarios": {k: {"n": v.n, "tc_mu": v.tc_mu} for k, v in self.scenarios.items()},
            "cases": [{"case_id": c.case_id, "q": c.q} for c in self.cases],
        }


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def build_config(overrides: Optional[dict] = None, preset: str = "paper") -> ExperimentConfig:
    """Merge ``overrides`` over a named preset and validate every field.

    All problems are collected before raising, so one ``ConfigError`` names
    every offending field.
    """
    if preset not in PRESETS:
        raise ConfigError([f"preset={preset!r} (known: {sorted(PRESETS)})"])
    raw = copy.deepcopy(PRESETS[preset])
    bad: list[str] = []
    for key, value in (overrides or {}).items():
        if key not in raw:
            bad.append(f"unknown key {key!r}")
        elif key == "scenarios" and isinstance(value, dict):
            for name, cell in value.items():
                merged = dict(raw["scenarios"].get(name, {}))
                merged.update(cell if isinstance(cell, dict) else {"_invalid": cell})
                raw["scenarios"][name] = merged
        else:
            raw[key] = value

    if not (_is_num(raw["p"]) and 0 <= raw["p"] <= 1):
        bad.append(f"p={raw['p']!r} (must be in [0, 1])")
    if not (_is_num(raw["tc_sigma2"]) and raw["tc_sigma2"] >= 0):
        bad.append(f"tc_sigma2={raw['tc_sigma2']!r} (must be >= 0)")
    weights = raw["weights"]
    if not (isinstance(weights, list) and weights and all(_is_num(w) and w >= 0 for w in weights)):
        bad.append(f"weights={weights!r} (non-empty list of non-negative numbers)")
    if not (_is_int(raw["trials"]) and raw["trials"] >= 1):
        bad.append(f"trials={raw['trials']!r} (positive integer)")
    if not (_is_int(raw["base_seed"]) and 0 <= raw["base_seed"] < U64):
        bad.append(f"base_seed={raw['base_seed']!r} (unsigned 64-bit integer)")
    if not (_is_int(raw["workers"]) and raw["workers"] >= 1):
        bad.append(f"workers={raw['workers']!r} (positive integer)")
    if not isinstance(raw["export_edges"], bool):
        bad.append(f"export_edges={raw['export_edges']!r} (boolean)")
    try:
        policy = SchedulerPolicy(raw["policy"])
    except ValueError:
        policy = DEFAULT_POLICY
        bad.append(f"policy={raw['policy']!r} (one of {[p.value for p in SchedulerPolicy]})")

    scenarios = {}
    if not isinstance(raw["scenarios"], dict) or not raw["scenarios"]:
        bad.append("scenarios (non-empty mapping)")
    else:
        for name, cell in raw["scenarios"].items():
            n, mu = cell.get("n"), cell.get("tc_mu")
            extra = set(cell) - {"n", "tc_mu"}
            if extra:
                bad.append(f"scenarios.{name}: unknown keys {sorted(extra)}")
            if not (_is_int(n) and n >= 2):
                bad.append(f"scenarios.{name}.n={n!r} (integer >= 2)")
            if not (_is_num(mu) and mu > 0):
                bad.append(f"scenarios.{name}.tc_mu={mu!r} (> 0)")
            scenarios[name] = ScenarioConfig(n, mu)

    cases = []
    if not isinstance(raw["cases"], list) or not raw["cases"]:
        bad.append("cases (non-empty list)")
    else:
        seen = set()
        for i, c in enumerate(raw["cases"]):
            cid, q = (c.get("case_id"), c.get("q")) if isinstance(c, dict) else (None, None)
            if not _is_int(cid) or cid in seen:
                bad.append(f"cases[{i}].case_id={cid!r} (unique integer)")
            if not (_is_num(q) and 0 <= q <= 1):
                bad.append(f"cases[{i}].q={q!r} (must be in [0, 1])")
            seen.add(cid)
            cases.append(CaseConfig(cid, q))

    if bad:
        raise ConfigError(bad)
    return ExperimentConfig(
        cases=cases,
        scenarios=scenarios,
        p=raw["p"],
        tc_sigma2=raw["tc_sigma2"],
        weights=tuple(float(w) for w in weights),
        trials=raw["trials"],
        base_seed=raw["base_seed"],
        out=Path(raw["out"]),
        workers=raw["workers"],
        policy=policy,
        export_edges=raw["export_edges"],
    )


def load_config(path: os.PathLike | str | None = None, preset: str = "paper", **overrides) -> ExperimentConfig:
    """Read a JSON config file (keys override the preset), then apply ``overrides``."""
    data: dict = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError([f"{path}: not valid JSON ({exc})"]) from exc
        if not isinstance(data, dict):
            raise ConfigError([f"{path}: top level must be an object"])
    data.update({k: v for k, v in overrides.items() if v is not None})
    return build_config(data, preset)


def trial_seed(base_seed: int, case_id: int, scenario: str, trial: int) -> int:
    digest = hashlib.blake2b(f"{case_id}:{scenario}:{trial}".encode(), digest_size=8).digest()
    return (base_seed + int.from_bytes(digest, "little")) % U64


@dataclass
class TrialResult:
    record: TrialRecord
    state: NetworkState


def simulate(
    spec: PopulationSpec,
    seed: int,
    policy: SchedulerPolicy = DEFAULT_POLICY,
) -> NetworkState:
    """Sample a population and run it to equilibrium with one RNG stream."""
    rng = make_rng(seed)
    agents = sample_population(spec, rng)
    return run_to_equilibrium(agents, spec.space, rng, policy)


def _run_trial(args) -> TrialResult:
    spec, policy, case_id, scenario, trial, seed = args
    state = simulate(spec, seed, policy)
    record = trial_record(state, spec.space, case_id=case_id, scenario=scenario, trial=trial, seed=seed)
    return TrialResult(record, state)


# ---------------------------------------------------------------------------
# CSV I/O

def _write_csv(path: Path, columns: Sequence[str], rows: Iterable[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _si_str(si: Sequence[int]) -> str:
    return ";".join(str(s) for s in si)


def write_agents(path: Path, state: NetworkState) -> None:
    _write_csv(
        path,
        ["id", "si", "to", "tc", "degree"],
        (
            {"id": a.id, "si": _si_str(a.si), "to": a.to, "tc": a.tc, "degree": d}
            for a, d in zip(state.agents, state.degree)
        ),
    )


def write_edges(path: Path, state: NetworkState) -> None:
    agents = state.agents
    _write_csv(
        path,
        ["ego_id", "alter_id", "ego_si", "alter_si"],
        (
            {"ego_id": x, "alter_id": y, "ego_si": _si_str(agents[x].si), "alter_si": _si_str(agents[y].si)}
            for x, y in state.sorted_edges()
        ),
    )


def read_agents(path: os.PathLike | str) -> tuple[list[Agent], dict[int, int]]:
    """Load an agents file; returns agents and the recorded degree per id."""
    agents, degrees = [], {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                a = Agent(
                    int(row["id"]),
                    tuple(int(s) for s in row["si"].split(";")),
                    int(row["to"]),
                    int(row["tc"]),
                )
            except (KeyError, ValueError, AttributeError) as exc:
                raise StructureError(f"{path}: malformed agent row {row!r}") from exc
            agents.append(a)
            if row.get("degree") not in (None, ""):
                degrees[a.id] = int(row["degree"])
    agents.sort(key=lambda a: a.id)
    return agents, degrees


def read_edges(path: os.PathLike | str) -> list[tuple[int, int]]:
    with open(path, newline="", encoding="utf-8") as fh:
        try:
            return [(int(r["ego_id"]), int(r["alter_id"])) for r in csv.DictReader(fh)]
        except (KeyError, ValueError) as exc:
            raise StructureError(f"{path}: malformed edge row") from exc


def _fmt(x):
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(x)
    return x


def _fmt_row(row: dict) -> dict:
    return {k: _fmt(v) for k, v in row.items()}


# ---------------------------------------------------------------------------
# validation

@dataclass
class Violation:
    invariant: str
    ids: tuple[int, ...]
    detail: str

    def __str__(self) -> str:
        return f"{self.invariant}: ids={list(self.ids)} {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation]
    n_agents: int
    n_edges: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def failed(self) -> set[str]:
        return {v.invariant for v in self.violations}

    def lines(self) -> list[str]:
        if self.ok:
            return [f"OK: {self.n_agents} agents, {self.n_edges} edges, equilibrium holds"]
        return [f"FAIL {v}" for v in self.violations]


def validate(
    agents: Sequence[Agent],
    edges: Iterable[tuple[int, int]],
    space: IdentitySpace = IdentitySpace(),
    recorded_degree: Optional[dict[int, int]] = None,
) -> ValidationReport:
    """Audit a terminal network against every formation invariant.

    Checks ids, self-loops, duplicate edges, capacity, outreach, the recorded
    degree column (if given) and, when the edge set itself is sound, that no
    further friendship could be added.
    """
    agents = list(agents)
    edges = list(edges)
    out: list[Violation] = []
    ids = [a.id for a in agents]
    if ids != list(range(len(agents))):
        out.append(Violation("dense_ids", tuple(sorted(set(range(len(agents))) ^ set(ids))), "ids must be 0..n-1"))
        return ValidationReport(out, len(agents), len(edges))
    for a in agents:
        if len(a.si) != space.dims:
            out.append(Violation("dimension", (a.id,), f"si has {len(a.si)} coordinates, space has {space.dims}"))
    if out:
        return ValidationReport(out, len(agents), len(edges))

    seen: set[tuple[int, int]] = set()
    clean: list[tuple[int, int]] = []
    for x, y in edges:
        if not (0 <= x < len(agents) and 0 <= y < len(agents)):
            out.append(Violation("unknown_agent", (x, y), "edge endpoint not in population"))
            continue
        if x == y:
            out.append(Violation("self_loop", (x,), "edge joins an agent to itself"))
            continue
        key = (min(x, y), max(x, y))
        if key in seen:
            out.append(Violation("duplicate_edge", key, "edge listed more than once"))
            continue
        seen.add(key)
        clean.append(key)

    state = NetworkState.from_edges(agents, clean)
    for x, y in clean:
        d = w_dist(agents[x], agents[y], space)
        reach = min(agents[x].to, agents[y].to)
        if d > reach:
            out.append(Violation("outreach", (x, y), f"distance {d:g} exceeds min outreachability {reach}"))
    for a, deg in zip(agents, state.degree):
        if deg > a.tc:
            out.append(Violation("capacity", (a.id,), f"degree {deg} exceeds capacity {a.tc}"))
    if state.check_degrees():
        out.append(Violation("degree", tuple(state.check_degrees()), "incremental degree disagrees with edges"))
    if recorded_degree is not None:
        bad = [i for i, d in recorded_degree.items() if 0 <= i < len(agents) and state.degree[i] != d]
        if bad:
            out.append(Violation("degree", tuple(bad), "recorded degree disagrees with edge list"))

    if not out and not is_equilibrium(state, space):
        open_pairs = [
            (i, j)
            for i in range(state.n)
            for j in range(i + 1, state.n)
            if eligible(agents[i], agents[j], state, space)
        ]
        out.append(Violation("equilibrium", open_pairs[0], f"{len(open_pairs)} pair(s) could still befriend"))
    return ValidationReport(out, len(agents), len(clean))


def validate_files(
    agents_path: os.PathLike | str,
    edges_path: os.PathLike | str,
    space: IdentitySpace = IdentitySpace(),
) -> ValidationReport:
    agents, degrees = read_agents(agents_path)
    return validate(agents, read_edges(edges_path), space, recorded_degree=degrees or None)


# ---------------------------------------------------------------------------
# runs

def run_single(
    case_id: int,
    scenario: str,
    seed: int,
    export_edges: bool = False,
    config: Optional[ExperimentConfig] = None,
    out_dir: Optional[os.PathLike | str] = None,
    trial: int = 0,
) -> tuple[TrialRecord, Optional[Path]]:
    """Run one simulation; optionally write ``agents_<id>.csv`` and ``edges_<id>.csv``.

    Returns the trial record and the edge-file path (``None`` without export).
    """
    config = config or build_config()
    if not 0 <= seed < U64:
        raise ConfigError([f"seed={seed!r} (unsigned 64-bit integer)"])
    spec = config.population_spec(case_id, scenario)
    result = _run_trial((spec, config.policy, case_id, scenario, trial, seed))
    if not export_edges:
        return result.record, None
    out = Path(out_dir if out_dir is not None else config.out)
    out.mkdir(parents=True, exist_ok=True)
    tag = f"case{case_id}_{scenario}_seed{seed}"
    write_agents(out / f"agents_{tag}.csv", result.state)
    edges_path = out / f"edges_{tag}.csv"
    write_edges(edges_path, result.state)
    return result.record, edges_path


@dataclass
class SweepResult:
    trials: list[TrialRecord]
    summaries: list[ScenarioSummary]
    ratios: list[dict]
    out: Path
    states: Optional[list[NetworkState]] = None


RATIO_COLUMNS = [
    "case_id",
    "q",
    "offline_mean_similarity",
    "facebook_mean_similarity",
    "ratio",
    "reference_ratio",
    "delta",
]


def ratio_rows(config: ExperimentConfig, summaries: Sequence[ScenarioSummary]) -> list[dict]:
    by_key = {(s.case_id, s.scenario): s for s in summaries}
    rows = []
    for case in config.cases:
        off = by_key.get((case.case_id, "offline"))
        fb = by_key.get((case.case_id, "facebook"))
        if off is None or fb is None:
            continue
        ratio = fb_offline_ratio(fb.mean("mean_similarity"), off.mean("mean_similarity"))
        rows.append(
            {
                "case_id": case.case_id,
                "q": case.q,
                "offline_mean_similarity": off.mean("mean_similarity"),
                "facebook_mean_similarity": fb.mean("mean_similarity"),
                "ratio": ratio,
                "reference_ratio": REFERENCE_RATIO,
                "delta": ratio - REFERENCE_RATIO,
            }
        )
    return rows


def run_sweep(config: ExperimentConfig, write: bool = True, keep_states: bool = False) -> SweepResult:
    """Run every (case, scenario, trial) in the config.

    Writes ``trials.csv``, ``summary.csv``, ``ratios.csv`` and ``metadata.json``
    to ``config.out`` (plus per-trial agent/edge files with ``export_edges``).
    With ``keep_states`` the terminal networks are kept on the result, in the
    same order as ``trials``.
    """
    jobs = []
    for case in config.cases:
        for scenario in config.scenarios:
            spec = config.population_spec(case.case_id, scenario)
            for t in range(config.trials):
                seed = trial_seed(config.base_seed, case.case_id, scenario, t)
                jobs.append((spec, config.policy, case.case_id, scenario, t, seed))

    log.info("running %d simulations with %d worker(s)", len(jobs), config.workers)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * config.workers))))
    else:
        results = [_run_trial(job) for job in jobs]

    records = [r.record for r in results]
    summaries = []
    for case in config.cases:
        for scenario in config.scenarios:
            group = [r for r in records if r.case_id == case.case_id and r.scenario == scenario]
            summaries.append(summarize(group))
    ratios = ratio_rows(config, summaries)
    states = [r.state for r in results] if keep_states else None
    sweep = SweepResult(records, summaries, ratios, Path(config.out), states)

    if write:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "trials.csv", TrialRecord.columns(), (_fmt_row(r.as_dict()) for r in records))
        _write_csv(out / "summary.csv", ScenarioSummary.columns(), (_fmt_row(s.row()) for s in summaries))
        _write_csv(out / "ratios.csv", RATIO_COLUMNS, (_fmt_row(r) for r in ratios))
        meta = {
            "config": config.to_dict(),
            "seed_rule": "base_seed + blake2b-64('case:scenario:trial') mod 2**64",
            "rng": "numpy PCG64; per agent draws si, to, tc in id order",
            "similarity_isolates": "agents without friends are excluded from similarity means and counted in n_isolates",
            "satisfied": "2 * degree >= tc",
            "reference": {
                "offline_similarity": REFERENCE_OFFLINE_SIMILARITY,
                "facebook_similarity": REFERENCE_FACEBOOK_SIMILARITY,
                "ratio": REFERENCE_RATIO,
            },
        }
        (out / "metadata.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        if config.export_edges:
            for r in results:
                tag = f"case{r.record.case_id}_{r.record.scenario}_t{r.record.trial}"
                write_agents(out / f"agents_{tag}.csv", r.state)
                write_edges(out / f"edges_{tag}.csv", r.state)
    return sweep
