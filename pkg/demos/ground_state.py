"""Solve for the ground state at N=3, s=1/2, p=4 and read off the best constant."""
from mixedgn import GridSpec, Params, SolverConfig, build_Q, petviashvili_solve

params = Params(3, 0.5, 4.0)
u, rep = petviashvili_solve(params, GridSpec(64, 12.0), SolverConfig())

t = rep.final_triple
ident = rep.identity_report
print(f"converged={rep.converged} after {rep.iterations} iterations ({rep.wall_time:.2f} s)")
print(f"triple a={t.a:.6f} b={t.b:.6f} m={t.m:.6f}  (a/b = {t.a / t.b:.4f}, exactly 1 in the whole space)")
print(f"energy c = {rep.energy_c:.6f}")
print(f"best constant from Q {ident.best_constant_from_Q:.12f}")
print(f"best constant from c {ident.best_constant_from_c:.12f}")
print(f"equation residual {ident.equation_residual:.2e}, Nehari {ident.nehari_residual:.2e}, Pohozaev {ident.pohozaev_residual:.2e}")
print(f"most negative iterate value {min(rep.min_history):.3e}")

q = build_Q(u, params)
print(f"\nmapping onto Q: lambda1={q.lambda1:.4f} lambda2={q.lambda2:.4f}")
print(f"  predicted triple {tuple(round(x, 3) for x in q.predicted.as_tuple())}")
print(f"  measured triple  {tuple(round(x, 3) for x in q.measured.as_tuple())}")
