"""A sampled 1D continuous wavelet transform preserves inner products.

Gaussian signals, Mexican-hat wavelet; the grid is refined twice.
"""

import math

import numpy as np

from scalecasimir.acceptance import MEXICAN_HAT_PROFILE, mexican_hat
from scalecasimir.cwt import ScaleGrid, admissibility_constant, cwt_forward_1d, cwt_inverse_1d, wavelet_inner_product_1d

c = admissibility_constant(MEXICAN_HAT_PROFILE).radial_integral
phi = lambda x: np.exp(-x * x / 2)
psi = lambda x: np.exp(-((x - 0.7) ** 2) / 2)
exact = math.sqrt(math.pi) * math.exp(-0.7**2 / 4)

grid = ScaleGrid.log_uniform()
for level in range(3):
    wp, wq = cwt_forward_1d(phi, mexican_hat, grid), cwt_forward_1d(psi, mexican_hat, grid)
    ip = wavelet_inner_product_1d(wp, wq, grid, c)
    rec = cwt_inverse_1d(wp, mexican_hat, grid, c)(np.array([0.0, 1.0]))
    print(f"level {level}: {grid.scales.size} scales, <phi,psi> rel. error {abs(ip / exact - 1):.1e}, "
          f"reconstruction error at 0, 1: {abs(rec[0] - 1):.1e}, {abs(rec[1] - phi(1.0)):.1e}")
    grid = grid.refine()
