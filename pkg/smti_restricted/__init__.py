"""
Stable marriage with ties and restricted edges: solvers, oracles and reductions.
"""
