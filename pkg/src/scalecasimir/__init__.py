"""Casimir energy and force for a scalar field restricted to wavelet scales above a cutoff.

Modules
-------
numerics   special functions, quadrature, finite differences
cwt        admissibility, cutoff functions and a 1D continuous wavelet transform
wavelets   the wavelet families and their cutoff functions
casimir    mode sums, asymptotic series, closed forms and the Bernoulli remainder
acceptance the verification suite run by ``scalecasimir verify``
cli        command-line front end
"""

__version__ = "0.1.0"

from .casimir import (  # noqa: F401
    BoundaryCondition,
    CasimirConfig,
    EnergyResult,
    Method,
    force,
    force_numeric,
    force_series,
    force_via_remainder,
    rho_renormalized,
)
from .wavelets import WaveletFamily, parse_family  # noqa: F401
