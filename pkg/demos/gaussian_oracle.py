"""Compare the spectral norms of a unit Gaussian with their closed forms.

The gradient and Lebesgue norms are exact to round-off. The fractional
seminorm carries a lattice error from the |xi|^(2s) cusp at the origin, which
shrinks only as the box grows. This script shows both effects.
"""
from mixedgn import GridSpec, Params, gaussian_oracle

params = Params(3, 0.5, 4.0)

print("unit Gaussian on n=64, L=10")
for row in gaussian_oracle(params, GridSpec(64, 10.0)):
    print(f"  {row['quantity']:>4}  computed {row['computed']:.12f}  exact {row['exact']:.12f}  rel {row['rel_error']:.2e}")

print("\nfractional seminorm error against box size (n scales with L, spacing fixed)")
for n, L in [(64, 10.0), (128, 20.0), (256, 40.0)]:
    ds2 = gaussian_oracle(params, GridSpec(n, L))[1]
    print(f"  n={n:>3} L={L:>4}  rel error {ds2['rel_error']:.3e}")
