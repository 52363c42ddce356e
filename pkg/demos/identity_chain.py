"""Walk the algebraic identity chain on exact optimizer triples.

For a triple built from the closed-form ratios, the Nehari and Pohozaev
functionals vanish, and the two routes to the best constant agree to round-off.
"""
from mixedgn import (
    Params,
    best_constant_from_Q,
    best_constant_from_c,
    check_identities,
    cramer_dets,
    exponents,
    optimizer_triple,
    weinstein,
)

for params in (Params(3, 0.5, 4.0), Params(3, 0.25, 3.5), Params(5, 0.8, 3.1)):
    e = exponents(params)
    t = optimizer_triple(1.0, params)
    c = (params.p - 2) / (2 * params.p) * t.m
    rep = check_identities(t, params)
    print(f"N={params.N} s={params.s} p={params.p}")
    print(f"  alpha={e.alpha:.6f} beta={e.beta:.6f}  r_a={e.r_a:.6f} r_b={e.r_b:.6f}")
    print(f"  C from Q {best_constant_from_Q(t.m, params):.15f}")
    print(f"  1 / W    {1 / weinstein(t, params):.15f}")
    print(f"  C from c {best_constant_from_c(c, params):.15f}")
    print(f"  nehari {rep.nehari_residual:.1e}  pohozaev {rep.pohozaev_residual:.1e}  route gap {rep.route_gap:.1e}")

res = cramer_dets(Params(3, 0.5, 4.0), 1.0)
print("\nCramer determinants at N=3, s=1/2, p=4, k=1")
print("  closed  ", res.closed)
print("  numeric ", tuple(round(x, 12) for x in res.numeric))
