"""Flat (non-analytic) cutoffs: the finite-A correction comes from the remainder alone.

Every Taylor coefficient of the bump and non-analytic cutoffs vanishes at 0, so
the asymptotic series stops at the continuum term. The correction
F + pi^2/15 s^4 is computed from the Bernoulli remainder and its sign changes
are located.
"""

import numpy as np

from scalecasimir import casimir as cs
from scalecasimir import wavelets as wv

s = np.linspace(1.5, 12.0, 211)
for fam in (wv.bump(), wv.nonanalytic()):
    corr = np.array([cs.force_via_remainder(fam, x, 1.0) - cs.continuum_force(x) for x in s])
    flips = s[1:][np.sign(corr[1:]) != np.sign(corr[:-1])]
    print(f"{str(fam):12s} sign changes at s/A ~", ", ".join(f"{x:.2f}" for x in flips))
    print(f"{'':12s} relative correction at s = 3, 6, 9:",
          ", ".join(f"{corr[np.argmin(abs(s - x))] / cs.continuum_force(x):+.2e}" for x in (3, 6, 9)))
