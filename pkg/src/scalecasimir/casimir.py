"""Scale-limited Casimir energy and force between two plates.

A massless scalar field between plates a distance ``s`` apart is summed
over its allowed modes with each mode weighted by the wavelet cutoff
``f~(A k)``. Integrating out the parallel momenta reduces every mode to
one number,

    F(n; A) = M(2 pi n A / s) / (2 pi A^3),   M(x) = int_x^inf u^2 f~(u) du,

and the energy density per unit area and length is

    periodic:   rho0 = (1/s) [F(0) + 2 sum_{n>=1} F(n)]
    Dirichlet:  rho0 = (1/s) sum_{n>=1} F(n/2)

Four evaluation routes are provided: direct mode sums, the Euler-Maclaurin
asymptotic series, closed forms for the exponential family, and the exact
Bernoulli-remainder integral ``R_4`` (the only route that sees the
oscillatory force of flat cutoffs). Lengths carry no fixed unit; energies
and forces scale as length^-4.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from fractions import Fraction

import numpy as np

from . import wavelets as wv
from .numerics import (
    ConvergenceError,
    DiffSpec,
    QuadratureSpec,
    bernoulli_number,
    differentiate,
    incomplete_gamma_half,
    integrate,
    integrate_periodized_weight,
)
from .wavelets import WaveletFamily

__all__ = [
    "BoundaryCondition",
    "Method",
    "CasimirConfig",
    "EnergyResult",
    "SeriesCoefficients",
    "ForceSample",
    "ForceCurve",
    "TruncationWarning",
    "AsymptoticSeriesWarning",
    "moment_integral",
    "aux_F",
    "ModeSum",
    "rho0_direct",
    "bulk_energy",
    "rho_renormalized",
    "series_coefficients",
    "SeriesExpansion",
    "force_expansion",
    "energy_expansion",
    "adaptive_truncation",
    "rho_series",
    "force_series",
    "force_numeric",
    "force",
    "force_curve",
    "continuum_energy",
    "continuum_force",
    "exact_rho0_exponential",
    "exact_rho_exponential",
    "exact_force_exponential",
    "remainder_R4",
    "rho_via_remainder",
    "force_via_remainder",
]

PI2 = math.pi**2


class BoundaryCondition(enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


class Method(enum.Enum):
    SUM = "sum"
    SERIES = "series"
    EXACT = "exact"
    REMAINDER = "remainder"


class TruncationWarning(UserWarning):
    """A mode sum was cut off while its last mode was still significant."""


class AsymptoticSeriesWarning(UserWarning):
    """The truncated asymptotic series has stopped improving."""


@dataclass(frozen=True)
class CasimirConfig:
    """Plate geometry and evaluation settings.

    ``truncation`` fixes the number of modes of a direct sum (``None``
    chooses it adaptively); ``series_order`` is the largest ``m`` kept in
    the asymptotic series.
    """

    s: float
    A: float
    bc: BoundaryCondition = BoundaryCondition.PERIODIC
    method: Method = Method.SUM
    truncation: int | None = None
    series_order: int = 3
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not (self.s > 0 and math.isfinite(self.s)):
            raise ValueError("plate separation s must be positive")
        if not (self.A >= 0 and math.isfinite(self.A)):
            raise ValueError("scale cutoff A must be non-negative")
        if self.truncation is not None and self.truncation < 1:
            raise ValueError("truncation must be a positive integer")
        if not 1 <= self.series_order <= 10:
            raise ValueError("series_order must lie in [1, 10]")
        object.__setattr__(self, "bc", BoundaryCondition(self.bc))
        object.__setattr__(self, "method", Method(self.method))

    def scaled(self, lam: float) -> "CasimirConfig":
        return replace(self, s=self.s * lam, A=self.A * lam)


@dataclass(frozen=True)
class EnergyResult:
    """Energy densities of one configuration.

    ``rho0`` is the regularized mode energy and ``rho = rho0 - bulk``. For
    Dirichlet plates ``rho0`` excludes the separation-independent
    ``boundary_shift = -F(0)/(2s)`` carried by the raw mode sum (its
    product with ``s`` is constant, so it exerts no force); the raw sum is
    ``rho0 + boundary_shift``.
    """

    rho0: float
    bulk: float
    rho: float
    method: Method
    truncation_diagnostic: float = 0.0
    modes: int = 0
    boundary_shift: float = 0.0
    notes: tuple[str, ...] = ()

    @property
    def raw_rho0(self) -> float:
        return self.rho0 + self.boundary_shift


@dataclass(frozen=True)
class SeriesCoefficients:
    """Coefficients ``a_m`` (m = 2..M) of the asymptotic force series.

    Values are ``Fraction`` whenever the cutoff's Taylor data are exact.
    """

    family: WaveletFamily
    a: dict

    def leading_energy(self, bc=BoundaryCondition.PERIODIC) -> float:
        """Continuum energy coefficient ``c`` in ``rho = c / s^4``."""
        return -PI2 / 45 if BoundaryCondition(bc) is BoundaryCondition.PERIODIC else -PI2 / 720

    def leading_force(self, bc=BoundaryCondition.PERIODIC) -> float:
        return -PI2 / 15 if BoundaryCondition(bc) is BoundaryCondition.PERIODIC else -PI2 / 240

    def energy_coefficient(self, m: int):
        """Coefficient of ``(8 pi^2 / s^4) (2 pi A / s)^(2m-2)`` in ``rho``."""
        return self.a[m] / (2 * m + 1)


@dataclass(frozen=True)
class ForceSample:
    s: float
    F: float
    F_continuum: float
    flagged: bool = False

    @property
    def correction(self) -> float:
        return self.F - self.F_continuum


@dataclass(frozen=True)
class ForceCurve:
    family: WaveletFamily
    config: CasimirConfig
    samples: tuple[ForceSample, ...]

    def as_arrays(self):
        s = np.array([p.s for p in self.samples])
        F = np.array([p.F for p in self.samples])
        Fc = np.array([p.F_continuum for p in self.samples])
        return s, F, Fc


# ---------------------------------------------------------------------------
# Mode function
# ---------------------------------------------------------------------------

def _numeric_moment(family, x, spec):
    f = lambda u: u * u * wv.cutoff(family, u)
    hi = family.support
    if hi is not None:
        if x >= hi:
            return 0.0
        pts = [p for p in family.seams if x < p < hi]
        return integrate(f, x, hi, spec, points=pts)
    knee = max(family.flat_below, 1.0)
    pts = [knee] if x < knee else []
    return integrate(f, x, math.inf, spec, points=pts)


def moment_integral(family: WaveletFamily, x, spec: QuadratureSpec | None = None):
    """``M(x) = int_x^inf u^2 f~(u) du``; closed form where one exists."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("x must be non-negative")
    if family.kind == wv.EXPONENTIAL:
        out = (xs * xs + 2 * xs + 2) * np.exp(-xs)
    elif family.kind == wv.HERMITIAN:
        x2 = xs * xs
        out = sum(incomplete_gamma_half(l + 1, x2) / (2 * math.factorial(l)) for l in range(family.n))
        out = np.asarray(out, dtype=float)
    else:
        spec = spec or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12)
        out = np.array([_numeric_moment(family, float(v), spec) for v in xs.ravel()]).reshape(xs.shape)
    return out if out.ndim else float(out)


def aux_F(family: WaveletFamily, n, s: float, A: float, spec: QuadratureSpec | None = None):
    """Energy of mode ``n`` integrated over parallel momenta, ``M(2 pi n A/s)/(2 pi A^3)``.

    ``n`` may be fractional (Dirichlet modes are ``F(n/2)``).
    """
    if A <= 0:
        raise ValueError("A must be positive; the unregularized mode energy diverges")
    x = 2 * math.pi * np.asarray(n, dtype=float) * A / s
    out = np.asarray(moment_integral(family, x, spec)) / (2 * math.pi * A**3)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ModeSum:
    """Direct sum result. ``rho0`` already excludes any Dirichlet shift."""

    rho0: float
    modes: int
    last_mode: float
    boundary_shift: float
    converged: bool


def _mode_step(bc):
    return 1.0 if bc is BoundaryCondition.PERIODIC else 0.5


def _sum_modes(family, s, A, bc, N, spec):
    step = _mode_step(bc)
    F0 = aux_F(family, 0.0, s, A, spec)
    terms = np.asarray(aux_F(family, step * np.arange(1, N + 1), s, A, spec), dtype=float)
    if bc is BoundaryCondition.PERIODIC:
        # (1/s)[F(0) + 2 sum F(n)]
        total = math.fsum([F0, *(2.0 * terms)]) / s
        shift = 0.0
    else:
        # (1/s)[F(0)/2 + sum F(n/2)], reported shift -F(0)/(2s)
        total = math.fsum([0.5 * F0, *terms]) / s
        shift = -0.5 * F0 / s
    last = abs(terms[-1]) * (2.0 if bc is BoundaryCondition.PERIODIC else 1.0) / s
    return total, last, shift


def adaptive_truncation(family, s, A, bc=BoundaryCondition.PERIODIC, rel_tol=1e-12, spec=None, n_max=2**22):
    """Smallest power-of-two mode count whose last mode is below ``rel_tol``."""
    bc = BoundaryCondition(bc)
    step = _mode_step(bc)
    if family.support is not None:
        # modes beyond the support vanish identically
        return max(int(math.ceil(family.support * s / (2 * math.pi * A * step))) + 1, 1)
    F0 = aux_F(family, 0.0, s, A, spec)
    N = 16
    while N <= n_max:
        if abs(aux_F(family, step * N, s, A, spec)) <= rel_tol * abs(F0):
            return N
        N *= 2
    return n_max


def rho0_direct(
    config: CasimirConfig,
    family: WaveletFamily,
    rel_tol: float = 1e-12,
) -> ModeSum:
    """Regularized mode sum, truncated at ``config.truncation`` or adaptively.

    A fixed truncation whose last mode still exceeds ``rel_tol`` of the
    total triggers a :class:`TruncationWarning`; the value is returned
    regardless.
    """
    s, A, bc = config.s, config.A, config.bc
    if A <= 0:
        raise ValueError("direct sums need A > 0")
    spec = config.quad
    N = config.truncation or adaptive_truncation(family, s, A, bc, rel_tol, spec)
    total, last, shift = _sum_modes(family, s, A, bc, N, spec)
    converged = last <= rel_tol * abs(total) or last == 0.0
    if not converged:
        warnings.warn(
            f"mode sum truncated at N={N} with last mode {last:.3e} "
            f"({last / abs(total):.1e} of the total)",
            TruncationWarning,
            stacklevel=2,
        )
    return ModeSum(total, N, last, shift, converged)


def bulk_energy(
    family: WaveletFamily,
    A: float,
    spec: QuadratureSpec | None = None,
    closed_form: bool = True,
) -> float:
    """Free-space energy density ``(1/2 pi^2) int_0^inf kappa^3 f~(A kappa) dkappa``."""
    if A <= 0:
        raise ValueError("A must be positive")
    if closed_form and family.kind == wv.EXPONENTIAL:
        return 3.0 / (PI2 * A**4)
    if closed_form and family.kind == wv.HERMITIAN:
        n = family.n
        return n * (n + 1) / (8 * PI2 * A**4)
    spec = spec or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12)
    f = lambda u: u**3 * wv.cutoff(family, u)
    hi = family.support
    if hi is not None:
        val = integrate(f, 0.0, hi, spec, points=list(family.seams)[:-1] or None)
    else:
        knee = max(family.flat_below, 1.0)
        val = integrate(f, 0.0, math.inf, spec, points=[knee])
    return val / (2 * PI2 * A**4)


# ---------------------------------------------------------------------------
# Continuum references and asymptotic series
# ---------------------------------------------------------------------------

def continuum_energy(s: float, bc=BoundaryCondition.PERIODIC) -> float:
    bc = BoundaryCondition(bc)
    return (-PI2 / 45 if bc is BoundaryCondition.PERIODIC else -PI2 / 720) / s**4


def continuum_force(s: float, bc=BoundaryCondition.PERIODIC) -> float:
    bc = BoundaryCondition(bc)
    return (-PI2 / 15 if bc is BoundaryCondition.PERIODIC else -PI2 / 240) / s**4


def series_coefficients(family: WaveletFamily, M: int) -> SeriesCoefficients:
    """``a_m = B_{2m+2}/(2m+2) * f~^(2m-2)(0)/(2m-2)!`` for ``m = 2..M``."""
    if not 2 <= M <= 10:
        raise ValueError("M must lie in [2, 10]")
    derivs = wv.derivatives_at_zero(family, 2 * M - 2)
    a = {}
    for m in range(2, M + 1):
        b = bernoulli_number(2 * m + 2) / (2 * m + 2)
        d = derivs[2 * m - 2]
        if isinstance(d, Fraction):
            a[m] = b * d / math.factorial(2 * m - 2)
        else:
            a[m] = float(b) * d / math.factorial(2 * m - 2)
    return SeriesCoefficients(family, a)


@dataclass(frozen=True)
class SeriesExpansion:
    """Exact description of an asymptotic series in ``pi A / s``.

    The quantity equals
    ``(pi^2/s^4) [leading + sum_m prefactor_m (argument * pi A/s)^(2m-2)]``.
    """

    leading: Fraction
    terms: tuple[tuple[int, object, Fraction], ...]

    def at_scaled_separation(self, lam) -> "SeriesExpansion":
        """The same series written for separation ``lam * s`` in powers of ``pi A/s``."""
        lam = Fraction(lam)
        return SeriesExpansion(
            self.leading / lam**4,
            tuple((m, p / lam**4, arg / lam) for m, p, arg in self.terms),
        )

    def evaluate(self, s: float, A: float) -> tuple[float, list[float]]:
        x = math.pi * A / s
        parts = [float(p) * (float(arg) * x) ** (2 * m - 2) for m, p, arg in self.terms]
        return PI2 / s**4 * (float(self.leading) + math.fsum(parts)), parts


def force_expansion(family: WaveletFamily, M: int, bc=BoundaryCondition.PERIODIC) -> SeriesExpansion:
    """Force series: periodic ``8 a_m (2 pi A/s)^(2m-2)``, Dirichlet ``(a_m/2) (pi A/s)^(2m-2)``."""
    bc = BoundaryCondition(bc)
    a = series_coefficients(family, M).a if M >= 2 else {}
    if bc is BoundaryCondition.PERIODIC:
        return SeriesExpansion(Fraction(-1, 15), tuple((m, 8 * a[m], Fraction(2)) for m in sorted(a)))
    return SeriesExpansion(Fraction(-1, 240), tuple((m, a[m] / 2, Fraction(1)) for m in sorted(a)))


def energy_expansion(family: WaveletFamily, M: int, bc=BoundaryCondition.PERIODIC) -> SeriesExpansion:
    """Energy series; term ``m`` is the force term divided by ``2m + 1``."""
    bc = BoundaryCondition(bc)
    a = series_coefficients(family, M).a if M >= 2 else {}
    if bc is BoundaryCondition.PERIODIC:
        return SeriesExpansion(
            Fraction(-1, 45), tuple((m, 8 * a[m] / (2 * m + 1), Fraction(2)) for m in sorted(a))
        )
    return SeriesExpansion(
        Fraction(-1, 720), tuple((m, a[m] / (2 * (2 * m + 1)), Fraction(1)) for m in sorted(a))
    )


def _check_series(terms, A, s, stacklevel=3):
    flagged = False
    if A / s > 0.3:
        flagged = True
        warnings.warn(f"A/s = {A / s:.3g} > 0.3: asymptotic series unreliable", AsymptoticSeriesWarning, stacklevel=stacklevel)
    nz = [abs(float(t)) for t in terms if t != 0]
    if len(nz) >= 2 and nz[-1] > 0.5 * nz[-2]:
        flagged = True
        warnings.warn(
            "last series term exceeds half the previous one; the truncated series is not converging",
            AsymptoticSeriesWarning,
            stacklevel=stacklevel,
        )
    return flagged


def rho_series(config: CasimirConfig, family: WaveletFamily) -> float:
    """Asymptotic series for the renormalized energy, terms up to ``series_order``."""
    value, parts = energy_expansion(family, config.series_order, config.bc).evaluate(config.s, config.A)
    _check_series(parts, config.A, config.s)
    return value


def force_series(config: CasimirConfig, family: WaveletFamily, full_output: bool = False):
    """Asymptotic force series.

    Periodic: ``-pi^2/15s^4 + (8 pi^2/s^4) sum a_m (2 pi A/s)^(2m-2)``;
    Dirichlet: ``-pi^2/240s^4 + (pi^2/2s^4) sum a_m (pi A/s)^(2m-2)``. With
    ``full_output`` returns ``(F, flagged)`` where ``flagged`` marks a
    series that stopped converging or an ``A/s`` above 0.3.
    """
    F, parts = force_expansion(family, config.series_order, config.bc).evaluate(config.s, config.A)
    flagged = _check_series(parts, config.A, config.s)
    return (F, flagged) if full_output else F


# ---------------------------------------------------------------------------
# Exponential closed forms
# ---------------------------------------------------------------------------

# Below x = pi A/s = 1 the closed forms for rho and F lose digits to
# cancellation (O(1) terms leaving an O(x^4) result). There they are replaced
# by their Taylor series, which for the exponential cutoff is the convergent
# Euler-Maclaurin series itself (radius pi): the coefficient of x^(2m+2) in
# pi^2 A^4 F is 8 a_m 4^(m-1), and the energy term is that over 2m + 1.
_SMALL_X = 1.0
_EXP_TERMS = 29


@lru_cache(maxsize=None)
def _exponential_taylor() -> tuple[np.ndarray, np.ndarray]:
    a = {m: bernoulli_number(2 * m + 2) / ((2 * m + 2) * math.factorial(2 * m - 2)) for m in range(2, _EXP_TERMS + 1)}
    force = [Fraction(-1, 15)] + [8 * a[m] * 4 ** (m - 1) for m in range(2, _EXP_TERMS + 1)]
    rho = [Fraction(-1, 45)] + [8 * a[m] * 4 ** (m - 1) / (2 * m + 1) for m in range(2, _EXP_TERMS + 1)]
    return np.array([float(c) for c in rho]), np.array([float(c) for c in force])


def _even_series(coeffs, x):
    x2 = x * x
    return x2 * x2 * np.polynomial.polynomial.polyval(x2, coeffs)


def _check_exact_args(s, A):
    if not (s > 0 and A > 0):
        raise ValueError("s and A must be positive")


def exact_rho0_exponential(s: float, A: float) -> float:
    """``coth(x)/(pi A^3 s) + (pi A coth x + s)/(A^2 s^3 sinh^2 x)``, ``x = pi A/s``."""
    _check_exact_args(s, A)
    x = math.pi * A / s
    if x < _SMALL_X:
        return (3.0 + _even_series(_exponential_taylor()[0], x)) / (PI2 * A**4)
    coth = 1.0 / math.tanh(x)
    sh = math.sinh(x)
    return coth / (math.pi * A**3 * s) + (math.pi * A * coth + s) / (A**2 * s**3 * sh * sh)


def exact_rho_exponential(s: float, A: float) -> float:
    """Renormalized energy ``rho0 - 3/(pi^2 A^4)`` without cancellation for ``s >> A``."""
    _check_exact_args(s, A)
    x = math.pi * A / s
    if x < _SMALL_X:
        return _even_series(_exponential_taylor()[0], x) / (PI2 * A**4)
    coth = 1.0 / math.tanh(x)
    sh = math.sinh(x)
    return (math.pi * A * coth - 3 * s) / (PI2 * A**4 * s) + (math.pi * A * coth + s) / (A**2 * s**3 * sh * sh)


def exact_force_exponential(s: float, A: float) -> float:
    """``3/(pi^2 A^4) - pi^2 (cosh 2x + 2) / (s^4 sinh^4 x)``, ``x = pi A/s``."""
    _check_exact_args(s, A)
    x = math.pi * A / s
    if x < _SMALL_X:
        return _even_series(_exponential_taylor()[1], x) / (PI2 * A**4)
    if x > 350:
        return 3.0 / (PI2 * A**4)
    sh = math.sinh(x)
    return 3.0 / (PI2 * A**4) - PI2 * (math.cosh(2 * x) + 2) / (s**4 * sh**4)


# ---------------------------------------------------------------------------
# Bernoulli remainder
# ---------------------------------------------------------------------------

def _reach(family: WaveletFamily) -> float:
    """Argument beyond which ``f~'``, ``f~''`` and ``f~'''`` are negligible."""
    if family.support is not None:
        return family.support
    return {wv.HERMITIAN: 9.0, wv.EXPONENTIAL: 50.0, wv.NONANALYTIC: 40.0}.get(family.kind, 60.0)


def _remainder_integrand(family, alpha):
    def g(x):
        k = alpha * x
        d1 = wv.cutoff_derivative(family, k, 1)
        d2 = wv.cutoff_derivative(family, k, 2)
        d3 = wv.cutoff_derivative(family, k, 3)
        return alpha**3 * x * x * d3 + 6 * alpha**2 * x * d2 + 6 * alpha * d1

    return g


def _remainder(family, s, A, spec, subpanels, upper, refine, with_error=True):
    alpha = 2 * math.pi * A / s
    pref = (2 * math.pi) ** 2 / s**3
    g = _remainder_integrand(family, alpha)
    if not with_error:
        val = integrate_periodized_weight(g, 4, spec, upper=upper, subpanels=subpanels, refine=refine)
        return pref * val, math.nan
    val, err = integrate_periodized_weight(
        g, 4, spec, upper=upper, subpanels=subpanels, refine=refine, full_output=True
    )
    return pref * val, pref * err


def remainder_R4(
    family: WaveletFamily,
    s: float,
    A: float,
    spec: QuadratureSpec | None = None,
    full_output: bool = False,
):
    """Euler-Maclaurin remainder of the periodic mode sum.

    ``R_4 = (2 pi)^2/s^3 int_0^inf d^3/dx^3[x^2 f~(alpha x)] B_4({x})/4! dx``
    with ``alpha = 2 pi A/s``. For every family
    ``rho = -pi^2/(45 s^4) + (2/s) R_4`` holds exactly; for flat cutoffs
    (bump, non-analytic) the remainder is the entire finite-``A``
    correction.
    """
    if s <= 0 or A < 0:
        raise ValueError("need s > 0 and A >= 0")
    if A == 0:
        return (0.0, 0.0) if full_output else 0.0
    spec = spec or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12)
    alpha = 2 * math.pi * A / s
    val, err = _remainder(family, s, A, spec, 8, _reach(family) / alpha, True)
    return (val, err) if full_output else val


def rho_via_remainder(family, s, A, bc=BoundaryCondition.PERIODIC, spec=None) -> float:
    """``-pi^2/45 s^4 + (2/s) R_4``; Dirichlet plates use the periodic value at ``2s``."""
    if BoundaryCondition(bc) is BoundaryCondition.DIRICHLET:
        s = 2 * s
    return -PI2 / (45 * s**4) + 2.0 / s * remainder_R4(family, s, A, spec)


def _converged_subpanels(family, s, A, spec, upper):
    m = 16
    prev, _ = _remainder(family, s, A, spec, m, upper, False, False)
    while m < 4096:
        m *= 2
        cur, _ = _remainder(family, s, A, spec, m, upper, False, False)
        if abs(cur - prev) <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return m
        prev = cur
    raise ConvergenceError("remainder quadrature did not settle under refinement", estimate=cur, error=abs(cur - prev))


def force_via_remainder(
    family: WaveletFamily,
    s: float,
    A: float,
    quad: QuadratureSpec | None = None,
    diff: DiffSpec | None = None,
    bc=BoundaryCondition.PERIODIC,
) -> float:
    """``-pi^2/15 s^4 - 2 dR_4/ds``, with the derivative taken numerically.

    Every stencil point shares one quadrature rule (same range and
    sub-panels), so the differenced function is smooth in ``s``.
    """
    if BoundaryCondition(bc) is BoundaryCondition.DIRICHLET:
        return force_via_remainder(family, 2 * s, A, quad, diff)
    if A == 0:
        return -PI2 / (15 * s**4)
    quad = quad or QuadratureSpec(abs_tol=1e-15, rel_tol=1e-12)
    diff = diff or DiffSpec(order=1, base_step=2e-3, richardson_levels=3, accuracy=4)
    s_hi = s * (1 + 4 * diff.base_step)
    upper = _reach(family) * s_hi / (2 * math.pi * A)
    m = _converged_subpanels(family, s, A, quad, upper)
    R = lambda t: _remainder(family, t, A, quad, m, upper, False, False)[0]
    return -PI2 / (15 * s**4) - 2.0 * differentiate(R, s, diff)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def rho_renormalized(config: CasimirConfig, family: WaveletFamily) -> EnergyResult:
    """Renormalized energy by the route named in ``config.method``."""
    s, A, bc, method = config.s, config.A, config.bc, config.method
    notes: list[str] = []
    if method is Method.SUM:
        ms = rho0_direct(config, family)
        bulk = bulk_energy(family, A, config.quad)
        if not ms.converged:
            notes.append("mode sum truncated before convergence")
        return EnergyResult(ms.rho0, bulk, ms.rho0 - bulk, method, ms.last_mode, ms.modes, ms.boundary_shift, tuple(notes))

    shift = 0.0
    if A > 0 and bc is BoundaryCondition.DIRICHLET:
        shift = -0.5 * aux_F(family, 0.0, s, A, config.quad) / s
    bulk = bulk_energy(family, A, config.quad) if A > 0 else math.inf
    if method is Method.EXACT:
        if family.kind != wv.EXPONENTIAL:
            raise ValueError("closed forms exist only for the exponential family")
        s_eff = 2 * s if bc is BoundaryCondition.DIRICHLET else s
        rho = exact_rho_exponential(s_eff, A)
    elif method is Method.SERIES:
        rho = rho_series(config, family)
        notes.append("asymptotic series")
    else:
        rho = rho_via_remainder(family, s, A, bc, config.quad)
    return EnergyResult(rho + bulk, bulk, rho, method, 0.0, 0, shift, tuple(notes))


def force_numeric(
    config: CasimirConfig,
    family: WaveletFamily,
    diff_spec: DiffSpec | None = None,
) -> float:
    """``-d/ds [s rho(s; A)]`` from direct mode sums.

    The mode count is fixed across the difference stencil (chosen for the
    widest stencil point) so that truncation does not jump between points.
    """
    if config.A <= 0:
        raise ValueError("force_numeric needs A > 0")
    diff_spec = diff_spec or DiffSpec(order=1, base_step=1e-2, richardson_levels=4, accuracy=2)
    if diff_spec.order != 1:
        raise ValueError("force needs a first derivative")
    N = config.truncation or adaptive_truncation(
        family, config.s * (1 + 2 * diff_spec.base_step), config.A, config.bc, 1e-13, config.quad
    )
    bulk = bulk_energy(family, config.A, config.quad)

    def s_rho(t):
        total, _, _ = _sum_modes(family, t, config.A, config.bc, N, config.quad)
        return t * (total - bulk)

    return -differentiate(s_rho, config.s, diff_spec)


def force(config: CasimirConfig, family: WaveletFamily, full_output: bool = False):
    """Force by the route named in ``config.method``.

    With ``full_output`` returns ``(F, flagged)``; only the series route
    ever flags.
    """
    method = config.method
    flagged = False
    if method is Method.SUM:
        F = force_numeric(config, family)
    elif method is Method.SERIES:
        F, flagged = force_series(config, family, full_output=True)
    elif method is Method.EXACT:
        if family.kind != wv.EXPONENTIAL:
            raise ValueError("closed forms exist only for the exponential family")
        s_eff = 2 * config.s if config.bc is BoundaryCondition.DIRICHLET else config.s
        F = exact_force_exponential(s_eff, config.A) if config.A > 0 else continuum_force(s_eff)
    else:
        F = force_via_remainder(family, config.s, config.A, bc=config.bc)
    return (F, flagged) if full_output else F


def force_curve(family: WaveletFamily, config: CasimirConfig, s_values) -> ForceCurve:
    samples = []
    for s in s_values:
        cfg = replace(config, s=float(s))
        F, flagged = force(cfg, family, full_output=True)
        samples.append(ForceSample(float(s), F, continuum_force(float(s), config.bc), flagged))
    return ForceCurve(family, config, tuple(samples))
