"""
Does the activation order matter?
=================================

The model says pairs form in random order but not how that order is
drawn. Compare the three available schedules on the most tolerant
Facebook cell.
"""

import numpy as np

from firman import IdentitySpace, PopulationSpec, SchedulerPolicy, make_rng, run_to_equilibrium, sample_population
from firman.metrics import ego_alter_similarity, satisfaction

space = IdentitySpace()
spec = PopulationSpec(n=300, p=0.22, q=0.8, tc_mu=30, tc_sigma2=0.25, space=space)

for policy in SchedulerPolicy:
    sims, unsatisfied = [], 0
    for seed in range(20):
        rng = make_rng(seed)
        state = run_to_equilibrium(sample_population(spec, rng), space, rng, policy)
        sims.append(ego_alter_similarity(state, space).mean)
        unsatisfied += satisfaction(state) < 100
    print(f"{policy.value:<22} similarity {np.mean(sims):6.2f} (sd {np.std(sims, ddof=1):.2f}), "
          f"trials with unsatisfied agents: {unsatisfied}/20")
