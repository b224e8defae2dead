"""Catalogue of isotropic wavelet families and their cutoff functions.

Each family is described by its cutoff function ``f~``; the momentum
profile is tied to it through ``|w~(kappa)|^2 = -c kappa f~'(kappa)`` so
that the defining integral of the cutoff function reproduces ``f~``
exactly. Families whose printed momentum profile squares to a different
exponent (exponential and non-analytic) use the profile implied by the
cutoff, i.e. the printed exponent halved.

Family strings accepted by :func:`parse_family`::

    hermitian:n=<int> | exponential | bump | nonanalytic | custom:<path>

where ``<path>`` is a two-column text table of ``kappa, |w~(kappa)|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import expit, gamma as gamma_fn

from .cwt import (
    RadialProfile,
    cutoff_function_numeric,
    radial_fourier_inverse,
    _density,
    _tail_integral,
)
from .numerics import (
    DiffSpec,
    QuadratureSpec,
    differentiate,
    incomplete_gamma_upper,
    integrate,
    kummer_1f1,
)

__all__ = [
    "WaveletFamily",
    "CutoffEvaluation",
    "HERMITIAN",
    "EXPONENTIAL",
    "BUMP",
    "NONANALYTIC",
    "CUSTOM",
    "hermitian",
    "exponential",
    "bump",
    "nonanalytic",
    "custom",
    "custom_from_table",
    "parse_family",
    "cutoff",
    "cutoff_derivative",
    "is_seam",
    "evaluate_cutoff",
    "derivatives_at_zero",
    "momentum_profile",
    "profile_of",
    "admissibility_constant_exact",
    "position_profile",
    "dyadic_orthonormality",
    "derivative_kernel_decay",
    "derivative_kernel_envelope",
]

HERMITIAN = "hermitian"
EXPONENTIAL = "exponential"
BUMP = "bump"
NONANALYTIC = "nonanalytic"
CUSTOM = "custom"

# below this argument 1 - exp(-k^-10) equals 1 and every derivative is 0 in
# double precision (exp(-0.3**-10) underflows)
_NONANALYTIC_FLAT = 0.3


@dataclass(frozen=True)
class WaveletFamily:
    """Immutable descriptor of one wavelet family.

    ``n`` is the Hermitian order; ``profile`` is only used by custom families.
    """

    kind: str
    n: int = 0
    profile: RadialProfile | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in (HERMITIAN, EXPONENTIAL, BUMP, NONANALYTIC, CUSTOM):
            raise ValueError(f"unknown wavelet family {self.kind!r}")
        if self.kind == HERMITIAN and self.n < 1:
            raise ValueError("Hermitian order must be >= 1")
        if self.kind == CUSTOM and self.profile is None:
            raise ValueError("custom family needs a radial profile")

    def __str__(self):
        if self.kind == HERMITIAN:
            return f"hermitian:n={self.n}"
        if self.kind == CUSTOM:
            return f"custom:{self.label or 'profile'}"
        return self.kind

    @property
    def support(self) -> float | None:
        """Argument beyond which ``f~`` vanishes identically, if any."""
        if self.kind == BUMP:
            return 2.0
        if self.kind == CUSTOM and self.profile.support is not None:
            return self.profile.support[1]
        return None

    @property
    def flat_below(self) -> float:
        """``f~`` is exactly 1 (to double precision) below this argument."""
        if self.kind == BUMP:
            return 1.0
        if self.kind == NONANALYTIC:
            return _NONANALYTIC_FLAT
        if self.kind == CUSTOM and self.profile.support is not None:
            return self.profile.support[0]
        return 0.0

    @property
    def seams(self) -> tuple[float, ...]:
        return (1.0, 2.0) if self.kind == BUMP else ()

    @property
    def analytic(self) -> bool:
        """Whether the Taylor series at 0 carries information beyond ``f~(0)``."""
        return self.kind in (HERMITIAN, EXPONENTIAL, CUSTOM)


@dataclass(frozen=True)
class CutoffEvaluation:
    value: float
    derivatives_at_zero: tuple
    source: str
    analytic: bool
    seam: bool = False


def hermitian(n: int = 1) -> WaveletFamily:
    return WaveletFamily(HERMITIAN, n=int(n))


def exponential() -> WaveletFamily:
    return WaveletFamily(EXPONENTIAL)


def bump() -> WaveletFamily:
    return WaveletFamily(BUMP)


def nonanalytic() -> WaveletFamily:
    return WaveletFamily(NONANALYTIC)


def custom(profile: RadialProfile, label: str = "") -> WaveletFamily:
    return WaveletFamily(CUSTOM, profile=profile, label=label)


def custom_from_table(path) -> WaveletFamily:
    """Custom family from a two-column ``kappa, |w~|`` text table.

    Values are interpolated with a monotone (PCHIP) cubic and taken as zero
    outside the tabulated range.
    """
    from scipy.interpolate import PchipInterpolator

    data = np.loadtxt(path, delimiter=None, comments="#", ndmin=2)
    if data.shape[1] < 2:
        raise ValueError(f"{path}: expected two columns (kappa, w)")
    kap, val = data[:, 0], np.abs(data[:, 1])
    order = np.argsort(kap)
    kap, val = kap[order], val[order]
    if np.any(np.diff(kap) <= 0):
        raise ValueError(f"{path}: kappa column must be strictly increasing")
    interp = PchipInterpolator(kap, val, extrapolate=False)
    lo, hi = float(kap[0]), float(kap[-1])

    def ev(k):
        k = np.asarray(k, dtype=float)
        out = interp(k)
        return np.where(np.isnan(out), 0.0, np.abs(out))

    prof = RadialProfile(ev, d=3, support=(lo, hi), points=tuple(float(x) for x in kap[1:-1]))
    return custom(prof, label=str(path))


def parse_family(text: str) -> WaveletFamily:
    """Parse ``hermitian:n=2``, ``exponential``, ``bump``, ``nonanalytic`` or
    ``custom:<path>``."""
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.lower()
    if head == HERMITIAN:
        n = 1
        if rest:
            key, _, val = rest.partition("=")
            if key.strip() != "n" or not val.strip().lstrip("+").isdigit():
                raise ValueError(f"bad Hermitian parameter {rest!r}; expected n=<int>")
            n = int(val)
        if n < 1:
            raise ValueError("Hermitian order must be >= 1")
        return hermitian(n)
    if rest and head != CUSTOM:
        raise ValueError(f"family {head!r} takes no parameters")
    if head == EXPONENTIAL:
        return exponential()
    if head == BUMP:
        return bump()
    if head in (NONANALYTIC, "non-analytic"):
        return nonanalytic()
    if head == CUSTOM:
        if not rest:
            raise ValueError("custom family needs a path: custom:<path>")
        return custom_from_table(rest)
    raise ValueError(f"unknown wavelet family {text!r}")


# ---------------------------------------------------------------------------
# Cutoff functions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _hermite_poly(n: int, order: int) -> Polynomial:
    """``P`` with ``d^order/dk^order f~_n = e^{-k^2} P(k)``."""
    P = Polynomial([1.0 / math.factorial(l // 2) if l % 2 == 0 else 0.0 for l in range(2 * n - 1)])
    for _ in range(order):
        P = P.deriv() - Polynomial([0.0, 2.0]) * P
    return P


@lru_cache(maxsize=None)
def _nonanalytic_laurent(order: int) -> dict[int, float]:
    """Laurent coefficients ``{power: c}`` with ``f~^(m) = e^{-k^-10} sum c k^power``."""
    if order < 1:
        raise ValueError
    P = {-11: -10.0}
    for _ in range(order - 1):
        Q: dict[int, float] = {}
        for p, c in P.items():
            Q[p - 1] = Q.get(p - 1, 0.0) + p * c
            Q[p - 11] = Q.get(p - 11, 0.0) + 10.0 * c
        P = Q
    return P


def _custom_total(family):
    return _cached_custom_total(family)


@lru_cache(maxsize=64)
def _cached_custom_total(family):
    return _tail_integral(_density(family.profile), 0.0, family.profile, QuadratureSpec())


def _bump_z(k):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return 1.0 / (k - 1.0) - 1.0 / (2.0 - k)


def cutoff(family: WaveletFamily, k):
    """Cutoff function ``f~(k)`` in closed form (numeric for custom families)."""
    k = np.asarray(k, dtype=float)
    kind = family.kind
    if kind == HERMITIAN:
        out = incomplete_gamma_upper(family.n, k * k) / math.factorial(family.n - 1)
    elif kind == EXPONENTIAL:
        out = np.exp(-k)
    elif kind == BUMP:
        inner = (k > 1.0) & (k < 2.0)
        kk = np.where(inner, k, 1.5)
        out = np.where(k <= 1.0, 1.0, np.where(inner, expit(_bump_z(kk)), 0.0))
    elif kind == NONANALYTIC:
        with np.errstate(divide="ignore", over="ignore"):
            t = np.where(k > 0, k, 1.0) ** -10.0
        out = np.where(k > 0, -np.expm1(-t), 1.0)
    else:
        out = cutoff_function_numeric(family.profile, k, total=_custom_total(family))
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def is_seam(family: WaveletFamily, k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if family.kind != BUMP:
        return np.zeros(k.shape, dtype=bool)
    return (k == 1.0) | (k == 2.0)


def _bump_derivative(k, order):
    inner = (k > 1.0) & (k < 2.0)
    kk = np.where(inner, k, 1.5)
    z = _bump_z(kk)
    s = expit(z)
    sc = expit(-z)
    S1 = s * sc
    u, v = kk - 1.0, 2.0 - kk
    z1 = -1.0 / u**2 - 1.0 / v**2
    if order == 1:
        out = S1 * z1
    else:
        z2 = 2.0 / u**3 - 2.0 / v**3
        q = sc - s  # 1 - 2 sigma
        if order == 2:
            out = S1 * (q * z1**2 + z2)
        else:
            z3 = -6.0 / u**4 - 6.0 / v**4
            out = S1 * ((q * q - 2.0 * S1) * z1**3 + 3.0 * q * z1 * z2 + z3)
    with np.errstate(invalid="ignore"):
        out = np.where(inner & (S1 > 0), out, 0.0)
    return out


def cutoff_derivative(family: WaveletFamily, k, order: int = 1, spec: DiffSpec | None = None):
    """``d^order f~ / dk^order`` from hand-derived closed forms.

    Orders 1-3 are supported for every family (Hermitian and exponential
    accept any order). At the bump seams ``k = 1, 2`` every one-sided
    derivative vanishes, and 0 is returned there; :func:`is_seam` tells the
    caller when that happened. Custom families fall back to finite
    differences of the numeric cutoff.
    """
    order = int(order)
    if order < 1:
        raise ValueError("order must be >= 1")
    k = np.asarray(k, dtype=float)
    kind = family.kind
    if kind == HERMITIAN:
        P = _hermite_poly(family.n, order)
        out = np.exp(-k * k) * P(k)
    elif kind == EXPONENTIAL:
        out = (-1.0) ** order * np.exp(-k)
    elif kind == BUMP:
        if order > 3:
            raise ValueError("bump derivatives implemented up to order 3")
        out = _bump_derivative(k, order)
    elif kind == NONANALYTIC:
        if order > 3:
            raise ValueError("non-analytic derivatives implemented up to order 3")
        live = k > _NONANALYTIC_FLAT
        kk = np.where(live, k, 1.0)
        E = np.exp(-(kk**-10.0))
        acc = np.zeros_like(kk)
        for p, c in _nonanalytic_laurent(order).items():
            acc = acc + c * kk**p
        out = np.where(live, E * acc, 0.0)
    else:
        if order > 3:
            raise ValueError("custom derivatives implemented up to order 3")
        spec = spec or DiffSpec(order=order, base_step=1e-2, richardson_levels=3)
        if spec.order != order:
            spec = DiffSpec(order, spec.base_step, spec.richardson_levels, spec.accuracy)
        f = lambda x: cutoff(family, abs(x))
        out = np.vectorize(lambda x: differentiate(f, float(x), spec))(k)
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


@lru_cache(maxsize=None)
def _hermite_taylor(n: int, max_m: int) -> tuple[Fraction, ...]:
    # coefficient of k^{2j} in e^{-k^2} sum_{l<n} k^{2l}/l!
    coeffs = []
    for m in range(max_m + 1):
        if m % 2:
            coeffs.append(Fraction(0))
            continue
        j = m // 2
        c = sum(
            Fraction((-1) ** (j - l), math.factorial(j - l) * math.factorial(l))
            for l in range(min(j, n - 1) + 1)
        )
        coeffs.append(c * math.factorial(m))
    return tuple(coeffs)


def derivatives_at_zero(family: WaveletFamily, max_m: int) -> list:
    """``[f~(0), f~'(0), ..., f~^(max_m)(0)]``.

    Exact rationals for the catalogued families (``Fraction``); the bump and
    non-analytic cutoffs are flat at the origin so every positive order is
    zero. Custom families get finite-difference estimates (floats).
    """
    if max_m < 0 or max_m > 20:
        raise ValueError("max_m must lie in [0, 20]")
    kind = family.kind
    if kind == HERMITIAN:
        return list(_hermite_taylor(family.n, max_m))
    if kind == EXPONENTIAL:
        return [Fraction((-1) ** m) for m in range(max_m + 1)]
    if kind in (BUMP, NONANALYTIC):
        return [Fraction(1)] + [Fraction(0)] * max_m
    if max_m > 6:
        raise ValueError("custom families support max_m <= 6")
    # f~ lives on k >= 0, so the derivatives are one-sided: fit a polynomial
    # on Chebyshev nodes of [0, h] and differentiate it at the left end
    h = 0.4
    nodes = h / 2 * (1 - np.cos(np.pi * (np.arange(41) + 0.5) / 41))
    poly = Polynomial.fit(nodes, cutoff(family, nodes), deg=12, domain=[0.0, h])
    return [1.0] + [float(poly.deriv(m)(0.0)) for m in range(1, max_m + 1)]


def evaluate_cutoff(family: WaveletFamily, k: float, max_m: int = 4) -> CutoffEvaluation:
    seam = bool(is_seam(family, k))
    return CutoffEvaluation(
        value=float(cutoff(family, k)),
        derivatives_at_zero=tuple(derivatives_at_zero(family, max_m)),
        source="numeric" if family.kind == CUSTOM else "closed-form",
        analytic=family.analytic,
        seam=seam,
    )


# ---------------------------------------------------------------------------
# Momentum and position profiles
# ---------------------------------------------------------------------------

def _bump_shape(kappa):
    kappa = np.asarray(kappa, dtype=float)
    inner = (kappa > 1.0) & (kappa < 2.0)
    k = np.where(inner, kappa, 1.5)
    u, v = k - 1.0, 2.0 - k
    with np.errstate(over="ignore"):
        ch = np.cosh((1.5 - k) / (u * v))
        val = np.sqrt(k) * np.sqrt(2 * k * k - 6 * k + 5) / (u * v * ch)
    return np.where(inner, val, 0.0)


@lru_cache(maxsize=None)
def _bump_norm() -> float:
    # unit L2 norm in position space: (1/2 pi^2) int kappa^2 |w~|^2 = 1
    s = integrate(lambda k: k * k * _bump_shape(k) ** 2, 1.0, 2.0, QuadratureSpec(abs_tol=1e-15, rel_tol=1e-13))
    return math.sqrt(2 * math.pi**2 / s)


def momentum_profile(family: WaveletFamily, kappa):
    """Modulus ``|w~(kappa)|`` of the family's momentum-space wavelet."""
    kappa = np.asarray(kappa, dtype=float)
    kind = family.kind
    if kind == HERMITIAN:
        n = family.n
        out = 2 * math.pi / math.sqrt(gamma_fn(1.5 + n)) * kappa**n * np.exp(-kappa * kappa / 2)
    elif kind == EXPONENTIAL:
        out = math.pi / math.sqrt(3.0) * np.sqrt(kappa) * np.exp(-kappa / 2)
    elif kind == BUMP:
        out = _bump_norm() * _bump_shape(kappa)
    elif kind == NONANALYTIC:
        live = kappa > _NONANALYTIC_FLAT / 2
        kk = np.where(live, kappa, 1.0)
        pref = math.sqrt(20 * math.pi**2 / gamma_fn(0.7))
        out = np.where(live, pref * kk**-5.0 * np.exp(-0.5 * kk**-10.0), 0.0)
    else:
        out = family.profile(kappa)
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def profile_of(family: WaveletFamily) -> RadialProfile:
    """The family's momentum profile wrapped for the transform routines."""
    if family.kind == CUSTOM:
        return family.profile
    support = (1.0, 2.0) if family.kind == BUMP else None
    points = (1.5,) if family.kind == BUMP else ((1.0, 2.0) if family.kind == NONANALYTIC else ())
    return RadialProfile(lambda k: momentum_profile(family, k), d=3, support=support, points=points)


def admissibility_constant_exact(family: WaveletFamily) -> float:
    """``C_w = 4 pi c`` where ``|w~|^2 = -c kappa f~'``."""
    kind = family.kind
    if kind == HERMITIAN:
        c = 2 * math.pi**2 * math.factorial(family.n - 1) / gamma_fn(1.5 + family.n)
    elif kind == EXPONENTIAL:
        c = math.pi**2 / 3
    elif kind == BUMP:
        c = _bump_norm() ** 2 * 4
    elif kind == NONANALYTIC:
        c = 2 * math.pi**2 / gamma_fn(0.7)
    else:
        raise ValueError("no closed form for custom families")
    return 4 * math.pi * c


def position_profile(family: WaveletFamily, r, spec: QuadratureSpec | None = None):
    """Position-space wavelet ``w(r)``.

    Hermitian and exponential families use their closed forms; the others
    are computed from the radial inverse Fourier integral. The closed forms
    carry their own normalization, so they agree with the transform of
    :func:`momentum_profile` only up to one constant per family.
    """
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rs < 0):
        raise ValueError("r must be non-negative")
    kind = family.kind
    if kind == HERMITIAN:
        n = family.n
        pref = 2 ** ((n - 1) / 2) * gamma_fn((3 + n) / 2) / math.sqrt(math.pi * gamma_fn(1.5 + n))
        flat = [pref * kummer_1f1((3 + n) / 2, 1.5, -x * x / 2) for x in rs.ravel()]
        out = np.array(flat).reshape(rs.shape)
    elif kind == EXPONENTIAL:
        pref = math.sqrt(3 / (2 * math.pi))
        with np.errstate(invalid="ignore", divide="ignore"):
            body = np.sin(2.5 * np.arctan(2 * rs)) / (rs * (1 + 4 * rs * rs) ** 1.25)
        small = rs < 1e-4
        # sin(5/2 arctan 2r)/r = 5 - 35 r^2 + O(r^4) near the origin
        series = 5.0 - 35.0 * rs * rs
        out = pref * np.where(small, series, body)
    else:
        prof = profile_of(family)
        out = np.array([
            radial_fourier_inverse(prof.eval, x, spec, support=prof.support, points=prof.points)
            for x in rs.ravel()
        ]).reshape(rs.shape)
    return out if np.ndim(r) else float(out.ravel()[0])


# ---------------------------------------------------------------------------
# Bump structure checks
# ---------------------------------------------------------------------------

def _require_bump(family):
    if family.kind != BUMP:
        raise ValueError("only defined for the bump family")


def _j0(x):
    return np.sinc(x / np.pi)


def _j1(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-3
    xs = np.where(small, 1.0, x)
    big = np.sin(xs) / xs**2 - np.cos(xs) / xs
    return np.where(small, x / 3 - x**3 / 30, big)


def _y1(x):
    x = np.asarray(x, dtype=float)
    return -np.cos(x) / x**2 - np.sin(x) / x


def _band_integral(kern, bands, spec, points=()):
    lo = min(b[0] for b in bands)
    hi = max(b[1] for b in bands)
    edges = sorted({lo, hi, *[e for b in bands for e in b], *[p for p in points if lo < p < hi]})
    return integrate(kern, lo, hi, spec, points=edges[1:-1])


def dyadic_orthonormality(
    family: WaveletFamily,
    j: int,
    l: int,
    shift: float = 0.0,
    spec: QuadratureSpec | None = None,
    unitary: bool = True,
) -> float:
    """Overlap of two dyadically dilated bump wavelets separated by ``shift``.

    ``int w_j(x' - x) w_l(x' - y) d^3x'`` with ``w_j(x) = 2^{-3j/2} w(x / 2^j)``
    (drop the prefactor with ``unitary=False``), evaluated in momentum space
    as ``(1/2 pi^2) int kappa^2 w~_j w~_l j0(kappa shift) dkappa``.
    """
    _require_bump(family)
    if abs(j) > 6 or abs(l) > 6:
        raise ValueError("|j|, |l| <= 6")
    spec = spec or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12)
    a, b = 2.0**j, 2.0**l
    amp = (a * b) ** 1.5 if unitary else (a * b) ** 3

    def kern(k):
        return k * k * momentum_profile(family, a * k) * momentum_profile(family, b * k) * _j0(k * shift)

    bands = [(1 / a, 2 / a), (1 / b, 2 / b)]
    pts = []
    if shift > 0:
        hi = max(2 / a, 2 / b)
        pts = list(np.arange(math.pi / shift, hi, math.pi / shift))
    return amp * _band_integral(kern, bands, spec, pts) / (2 * math.pi**2)


def derivative_kernel_decay(
    family: WaveletFamily,
    a: float,
    a_prime: float,
    r_values,
    spec: QuadratureSpec | None = None,
) -> np.ndarray:
    """``|dC/dr|`` for the cross-correlation ``C(r)`` of two dilated bumps.

    ``C(r) = int w((x'-x)/a) w((x'-y)/a') d^3x'`` with ``r = |x - y|``; the
    derivative kernel of the gradient operator is ``dC/dr`` times a unit
    vector, so its magnitude is
    ``(1/2 pi^2) |int kappa^3 a^3 a'^3 w~(a kappa) w~(a' kappa) j1(kappa r)|``.
    """
    _require_bump(family)
    r_values = np.asarray(r_values, dtype=float)
    if np.any(r_values < 0):
        raise ValueError("r must be non-negative")
    spec = spec or QuadratureSpec(abs_tol=1e-18, rel_tol=1e-12)
    amp = (a * a_prime) ** 3
    bands = [(1 / a, 2 / a), (1 / a_prime, 2 / a_prime)]
    out = []
    for r in r_values:
        def kern(k, r=r):
            return k**3 * momentum_profile(family, a * k) * momentum_profile(family, a_prime * k) * _j1(k * r)

        hi = max(2 / a, 2 / a_prime)
        pts = list(np.arange(math.pi / r, hi, math.pi / r / 2)) if r > 0 else []
        out.append(abs(amp * _band_integral(kern, bands, spec, pts)) / (2 * math.pi**2))
    return np.array(out)


def derivative_kernel_envelope(
    family: WaveletFamily,
    a: float,
    a_prime: float,
    r_values,
    spec: QuadratureSpec | None = None,
) -> np.ndarray:
    """Oscillation-free envelope of :func:`derivative_kernel_decay`.

    Replaces ``j1`` by the spherical Hankel function ``h1 = j1 + i y1``;
    for large ``r`` the modulus traces the amplitude of ``|dC/dr|`` without
    its zeros, which is what a decay-rate fit needs.
    """
    _require_bump(family)
    r_values = np.asarray(r_values, dtype=float)
    if np.any(r_values <= 0):
        raise ValueError("r must be positive")
    spec = spec or QuadratureSpec(abs_tol=1e-18, rel_tol=1e-12)
    amp = (a * a_prime) ** 3
    bands = [(1 / a, 2 / a), (1 / a_prime, 2 / a_prime)]
    hi = max(2 / a, 2 / a_prime)
    out = []
    for r in r_values:
        base = lambda k: k**3 * momentum_profile(family, a * k) * momentum_profile(family, a_prime * k)
        pts = list(np.arange(math.pi / r, hi, math.pi / r / 2))
        re = _band_integral(lambda k: base(k) * _j1(k * r), bands, spec, pts)
        im = _band_integral(lambda k: base(k) * _y1(k * r), bands, spec, pts)
        out.append(amp * math.hypot(re, im) / (2 * math.pi**2))
    return np.array(out)
