"""The exponential cutoff: closed form against the mode sum, and the sign flip near s = A."""

import numpy as np

from scalecasimir import casimir as cs
from scalecasimir import wavelets as wv

fam = wv.exponential()
print(" s/A      exact F          mode-sum F       rel. diff")
for s in [1.0, 1.05, 1.2, 1.5, 2.0, 3.0, 5.0, 10.0]:
    exact = cs.exact_force_exponential(s, 1.0)
    numeric = cs.force_numeric(cs.CasimirConfig(s, 1.0), fam)
    print(f"{s:5.2f}  {exact: .9e}  {numeric: .9e}  {abs(numeric / exact - 1):.1e}")

grid = np.linspace(1.0, 3.0, 2001)
F = np.array([cs.exact_force_exponential(s, 1.0) for s in grid])
crossing = grid[np.argmax(F < 0)]
print(f"\nforce turns attractive at s/A ~ {crossing:.3f}")
