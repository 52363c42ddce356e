"""How the identity defects respond to grid refinement and to a larger box.

Refining the grid at fixed L barely moves the Pohozaev residual or the a/b ratio.
Enlarging the box does, which shows that the defects come from truncating the
domain, not from resolution.
"""
from mixedgn import GridSpec, Params, SolverConfig, petviashvili_solve

params = Params(3, 0.5, 4.0)
print(f"{'n':>4} {'L':>5} {'iters':>5} {'C_best':>14} {'a/b':>8} {'pohozaev':>10} {'time':>6}")
for n, L in [(32, 12.0), (64, 12.0), (128, 12.0), (64, 16.0), (128, 24.0)]:
    u, rep = petviashvili_solve(params, GridSpec(n, L), SolverConfig())
    t = rep.final_triple
    print(f"{n:>4} {L:>5.0f} {rep.iterations:>5} {rep.best_constant:>14.10f} {t.a / t.b:>8.4f} "
          f"{rep.identity_report.pohozaev_residual:>10.3e} {rep.wall_time:>5.1f}s")
