"""Certify the computed ground state by sampling the Weinstein functional.

Every random field should have W(u) >= W(Q), so the ratio W(u)/W(Q) stays
above one. The printed histogram shows how far typical fields sit from the
optimum.
"""
import numpy as np

from mixedgn import GridSpec, Params, SolverConfig, petviashvili_solve
from mixedgn.verify import gn_sample_details

params = Params(3, 0.5, 4.0)
u, rep = petviashvili_solve(params, GridSpec(64, 12.0), SolverConfig())
sample = gn_sample_details(rep.final_triple, params, u.grid, seed=0, count=100)

ratios = np.asarray(sample.ratios)
print(f"min W(u)/W(Q) over {ratios.size} fields: {ratios.min():.4f}")
counts, edges = np.histogram(ratios, bins=10)
for c, lo, hi in zip(counts, edges, edges[1:]):
    print(f"  [{lo:6.2f}, {hi:6.2f})  {'#' * int(c)}")
