"""Agent-based model of friendship formation under tie-length and tie-number limits."""

from .core import (
    Agent,
    ContractViolation,
    IdentitySpace,
    NetworkState,
    StructureError,
    add_edge,
    eligible,
    is_equilibrium,
    w_dist,
)
from .dynamics import SchedulerPolicy, run_to_equilibrium, step
from .harness import ExperimentConfig, build_config, run_single, run_sweep, validate
from .metrics import dyad_counts, ego_alter_similarity, fb_offline_ratio, satisfaction, summarize
from .sampling import PopulationSpec, make_rng, sample_population

__version__ = "0.1.0"
