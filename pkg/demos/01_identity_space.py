"""
Distances, eligibility and equilibrium on six agents
====================================================

Four majority agents (A-D, identity 0) and two minority agents (E, F,
identity 1) with hand-picked outreachability and capacity.
"""

from firman import Agent, IdentitySpace, NetworkState, add_edge, eligible, is_equilibrium, w_dist

space = IdentitySpace()  # one dimension, weight 1

names = "ABCDEF"
# (identity, outreachability, capacity)
params = [(0, 0, 3), (0, 1, 2), (0, 0, 2), (0, 1, 3), (1, 1, 2), (1, 1, 3)]
agents = [Agent(i, (si,), to, tc) for i, (si, to, tc) in enumerate(params)]
A, B, C, D, E, F = agents

# same group -> zero-length tie, different group -> length one
print("dist(A, C) =", w_dist(A, C, space))
print("dist(B, E) =", w_dist(B, E, space))

###############################################################################
# Build the network one friendship at a time. Every add is checked.
state = NetworkState(agents)
for x, y in ["AC", "AD", "BD", "CD", "BE", "EF"]:
    add_edge(state, names.index(x), names.index(y), space)

print("degrees:", dict(zip(names, state.degree)))

###############################################################################
# F still has two free slots, but nobody can take it:
# A cannot reach F's position and D is full.
print("F-A eligible:", eligible(F, A, state, space))
print("F-D eligible:", eligible(F, D, state, space))
print("equilibrium:", is_equilibrium(state, space))
