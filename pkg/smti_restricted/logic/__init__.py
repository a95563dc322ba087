"""
Logic components: stability checks, solvers, oracles, reductions and file formats
"""
