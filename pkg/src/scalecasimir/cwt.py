"""Continuous wavelet transform machinery for isotropic wavelets.

Fourier convention: ``w~(k) = int w(x) e^{-ikx} dx`` and the inverse carries
``(2 pi)^-d``. The cutoff function is a ratio of two integrals of the same
profile and therefore does not depend on that choice.

For radial profiles the rotation part of the similitude group integrates out
to the area of the unit sphere, so nothing here samples rotations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .numerics import ConvergenceError, QuadratureSpec, gauss_legendre, integrate

__all__ = [
    "InadmissibleWaveletError",
    "RadialProfile",
    "AdmissibilityReport",
    "ScaleGrid",
    "sphere_area",
    "admissibility_constant",
    "cutoff_function_numeric",
    "radial_fourier_inverse",
    "radial_fourier_forward",
    "cwt_forward_1d",
    "cwt_inverse_1d",
    "wavelet_inner_product_1d",
    "scale_limited_inner_product",
]


class InadmissibleWaveletError(ValueError):
    """The admissibility integral diverges at small momenta."""


def sphere_area(d: int) -> float:
    """Area of the unit sphere in ``R^d``; 2 for ``d = 1`` (both signs)."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True)
class RadialProfile:
    """Modulus of a radial momentum-space wavelet, ``kappa -> |w~(kappa)|``.

    ``support`` is an optional ``(lo, hi)`` outside of which ``eval`` is
    exactly zero. ``points`` lists interior features worth splitting
    quadrature panels at.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    d: int = 3
    support: tuple[float, float] | None = None
    points: tuple[float, ...] = ()

    def __post_init__(self):
        if self.d not in (1, 3):
            raise ValueError("only d = 1 and d = 3 are supported")

    def __call__(self, kappa):
        return self.eval(np.asarray(kappa, dtype=float))


@dataclass(frozen=True)
class AdmissibilityReport:
    """Admissibility constant with its convergence diagnostics.

    ``radial_integral`` is ``int_0^inf |w~|^2 / kappa`` without the sphere
    area. It is the constant that normalizes reconstruction over positive
    scales with a normalized rotation measure, and what the 1D transforms
    below expect.
    """

    C_w: float
    converged: bool
    lower_tail_estimate: float
    upper_tail_estimate: float
    radial_integral: float = math.nan


def _density(profile):
    def g(kappa):
        kappa = np.asarray(kappa, dtype=float)
        w = profile(kappa)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(kappa > 0, w * w / kappa, 0.0)
        return out

    return g


def _lower_decades(g, top, spec, max_decades=60):
    """Integrate ``g`` over ``(0, top]`` decade by decade.

    Returns (integral, last-decade contribution). Raises on divergence.
    """
    parts = []
    hi = top
    prev = None
    stagnant = 0
    for _ in range(max_decades):
        lo = hi / 10.0
        val = integrate(g, lo, hi, spec)
        parts.append(val)
        total = math.fsum(parts)
        if val <= spec.rel_tol * 1e-2 * abs(total) or (total == 0.0 and val == 0.0 and len(parts) > 3):
            return total, val
        if prev is not None and prev > 0 and val / prev > 0.9:
            stagnant += 1
            if stagnant >= 5:
                raise InadmissibleWaveletError(
                    "admissibility integral diverges at small momenta "
                    f"(decade contributions stay at ~{val:.3e})"
                )
        else:
            stagnant = 0
        prev = val
        hi = lo
    raise InadmissibleWaveletError(
        f"admissibility integral not settled after {max_decades} decades "
        f"(last decade {parts[-1]:.3e})"
    )


def admissibility_constant(
    profile: RadialProfile, spec: QuadratureSpec | None = None
) -> AdmissibilityReport:
    """``C_w = S_{d-1} int_0^inf |w~(kappa)|^2 / kappa dkappa``.

    The small-momentum end is integrated decade by decade so that a
    logarithmic divergence shows up as stagnating decade contributions and
    raises :class:`InadmissibleWaveletError` instead of returning a number.
    """
    spec = spec or QuadratureSpec()
    g = _density(profile)
    area = sphere_area(profile.d)
    if profile.support is not None:
        lo, hi = profile.support
        pts = [p for p in profile.points if lo < p < hi]
        if lo > 0:
            body = integrate(g, lo, hi, spec, points=pts)
            rad = body
            return AdmissibilityReport(area * rad, True, 0.0, 0.0, radial_integral=rad)
    split = 1.0
    pts = [p for p in profile.points if p > split]
    lower, lower_tail = _lower_decades(g, split, spec)
    try:
        upper, upper_tail = integrate(g, split, math.inf, spec, points=pts, full_output=True)
        ok = True
    except ConvergenceError as exc:
        upper, upper_tail, ok = exc.estimate, exc.error, False
    rad = lower + upper
    ok = ok and rad > 0
    if ok:
        ok = lower_tail <= spec.rel_tol * rad and upper_tail <= max(spec.rel_tol * rad, spec.abs_tol)
    return AdmissibilityReport(area * rad, bool(ok), float(lower_tail), float(upper_tail), radial_integral=rad)


def _tail_integral(g, k, profile, spec):
    """``int_k^inf g`` honouring the profile's support and features."""
    if profile.support is not None:
        lo, hi = profile.support
        if k >= hi:
            return 0.0
        a = max(k, lo)
        pts = [p for p in profile.points if a < p < hi]
        return integrate(g, a, hi, spec, points=pts)
    pts = [p for p in profile.points if p > k]
    if k > 0:
        return integrate(g, k, math.inf, spec, points=pts, first_panel=max(k, 1.0))
    lower, _ = _lower_decades(g, 1.0, spec)
    return lower + integrate(g, 1.0, math.inf, spec, points=[p for p in pts if p > 1.0])


def cutoff_function_numeric(
    profile: RadialProfile, k, spec: QuadratureSpec | None = None, total: float | None = None
):
    """Cutoff function from its defining integral.

    ``f~(k) = int_k^inf |w~|^2/kappa / int_0^inf |w~|^2/kappa``; the sphere
    area cancels. ``f~(0)`` is exactly 1 because numerator and denominator
    come from the same call. Pass ``total`` to reuse a precomputed
    denominator.
    """
    spec = spec or QuadratureSpec()
    g = _density(profile)
    if total is None:
        total = _tail_integral(g, 0.0, profile, spec)
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(ks < 0):
        raise ValueError("k must be non-negative")
    out = np.array([1.0 if kk == 0 else _tail_integral(g, kk, profile, spec) / total for kk in ks.ravel()])
    return out.reshape(ks.shape) if np.ndim(k) else float(out[0])


def radial_fourier_inverse(wt, r, spec: QuadratureSpec | None = None, support=None, points=()):
    """3D inverse Fourier transform of a radial momentum function.

    ``w(r) = 1/(2 pi^2 r) int_0^inf kappa sin(kappa r) w~(kappa) dkappa`` with
    the ``r -> 0`` limit ``1/(2 pi^2) int kappa^2 w~``. Compact supports are
    integrated directly; otherwise the oscillatory tail past the last
    feature goes to QUADPACK's Fourier-weighted routine.
    """
    from scipy.integrate import quad

    spec = spec or QuadratureSpec()
    r = float(r)
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0.0:
        kern = lambda kap: kap * kap * wt(kap)
    else:
        kern = lambda kap: kap * np.sin(kap * r) * wt(kap) / r
    if support is not None:
        lo, hi = support
        # resolve oscillations: at least one panel per half period
        n = max(1, int(math.ceil((hi - lo) * r / math.pi)))
        pts = list(np.linspace(lo, hi, n + 1)[1:-1]) + [p for p in points if lo < p < hi]
        return integrate(kern, lo, hi, spec, points=pts) / (2 * math.pi**2)
    cut = max([1.0, *points]) * 4.0
    n = max(1, int(math.ceil(cut * max(r, 1e-12) / math.pi)))
    pts = list(np.linspace(0.0, cut, n + 1)[1:-1]) + [p for p in points if 0 < p < cut]
    head = integrate(kern, 0.0, cut, spec, points=pts)
    if r == 0.0:
        tail = integrate(kern, cut, math.inf, spec, first_panel=cut)
    else:
        tail, err = quad(lambda kap: kap * float(wt(np.array(kap))) / r, cut, math.inf,
                         weight="sin", wvar=r, limlst=200)
        if not math.isfinite(tail):
            raise ConvergenceError(
                f"oscillatory tail failed at r={r}", estimate=head, error=abs(err)
            )
    return (head + tail) / (2 * math.pi**2)


def radial_fourier_forward(w, kappa, spec: QuadratureSpec | None = None, r_max: float | None = None):
    """3D forward transform of a radial function, ``(4 pi / kappa) int r sin(kappa r) w(r) dr``.

    With ``r_max`` the integral is truncated there (for rapidly decaying
    ``w``); otherwise QUADPACK's Fourier-weighted routine handles the tail.
    """
    from scipy.integrate import quad

    spec = spec or QuadratureSpec()
    kappa = float(kappa)
    if kappa == 0:
        return 4 * math.pi * integrate(lambda r: r * r * w(r), 0.0, math.inf, spec)
    head_end = r_max if r_max is not None else 10.0
    n = max(1, int(math.ceil(head_end * kappa / math.pi)))
    pts = list(np.linspace(0.0, head_end, n + 1)[1:-1])
    head = integrate(lambda r: r * np.sin(kappa * r) * w(r), 0.0, head_end, spec, points=pts)
    tail = 0.0
    if r_max is None:
        tail, _ = quad(lambda r: r * float(w(np.array(r))), head_end, math.inf,
                       weight="sin", wvar=kappa, limlst=400)
    return 4 * math.pi * (head + tail) / kappa


# ---------------------------------------------------------------------------
# One-dimensional transform (used for validation of the construction)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScaleGrid:
    """Scales and translations for a sampled 1D transform.

    ``positions`` holds one uniformly spaced array per scale, so wide
    wavelets at large scales and narrow ones at small scales are both
    covered without a huge shared grid.
    """

    scales: np.ndarray
    positions: tuple[np.ndarray, ...]

    def __post_init__(self):
        s = np.asarray(self.scales, dtype=float)
        if s.ndim != 1 or s.size == 0 or np.any(s <= 0) or np.any(np.diff(s) <= 0):
            raise ValueError("scales must be positive and strictly increasing")
        if len(self.positions) != s.size:
            raise ValueError("need one position array per scale")

    @classmethod
    def shared(cls, scales: Sequence[float], positions: Sequence[float]) -> "ScaleGrid":
        pos = np.asarray(positions, dtype=float)
        return cls(np.asarray(scales, dtype=float), tuple(pos for _ in scales))

    @classmethod
    def log_uniform(
        cls,
        a_min: float = 2.0**-6,
        a_max: float = 2.0**13,
        per_octave: int = 8,
        center: float = 0.0,
        signal_width: float = 1.0,
        reach: float = 9.0,
        spacing: float = 0.25,
    ) -> "ScaleGrid":
        """Log-uniform scales; at scale ``a`` positions cover
        ``center +- reach * (a + signal_width)`` with step
        ``spacing * max(a, signal_width)``.
        """
        octaves = math.log2(a_max / a_min)
        n = int(round(octaves * per_octave)) + 1
        scales = a_min * 2.0 ** (np.arange(n) / per_octave)
        pos = []
        for a in scales:
            half = reach * (a + signal_width)
            h = spacing * max(a, signal_width)
            m = int(math.ceil(half / h))
            pos.append(center + h * np.arange(-m, m + 1))
        return cls(scales, tuple(pos))

    @property
    def log_step(self) -> float:
        return float(np.log(self.scales[1] / self.scales[0])) if self.scales.size > 1 else 1.0

    def refine(self, center: float = 0.0, signal_width: float = 1.0) -> "ScaleGrid":
        """Double the sampling density and extend the scale range one octave each way."""
        per_octave = int(round(math.log(2.0) / self.log_step)) * 2
        spacing = (self.positions[0][1] - self.positions[0][0]) / max(self.scales[0], signal_width) / 2
        reach = (self.positions[0][-1] - self.positions[0][0]) / 2 / (self.scales[0] + signal_width)
        return ScaleGrid.log_uniform(
            self.scales[0] / 2, self.scales[-1] * 2, per_octave, center, signal_width, reach, spacing
        )


def _cell_nodes(x, a, half_w, signal_support, order=16, panels_per_width=2):
    """Quadrature nodes/weights in x' for every position x at scale a.

    Integration runs over [x - half_w*a, x + half_w*a] clipped to the signal
    support, with panels no wider than half the narrower feature.
    """
    lo_s, hi_s = signal_support
    lo = np.maximum(x - half_w * a, lo_s)
    hi = np.minimum(x + half_w * a, hi_s)
    hi = np.maximum(hi, lo)
    feature = min(a, (hi_s - lo_s) / (2 * half_w))
    n_pan = max(1, int(math.ceil((min(2 * half_w * a, hi_s - lo_s)) / feature * panels_per_width)))
    t, w = gauss_legendre(order)
    edges = np.linspace(0.0, 1.0, n_pan + 1)
    u = (edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * t).ravel()
    wu = (np.repeat(np.diff(edges), order) * np.tile(w, n_pan))
    width = (hi - lo)[:, None]
    return lo[:, None] + width * u, width * wu


def cwt_forward_1d(
    signal: Callable[[np.ndarray], np.ndarray],
    wavelet: Callable[[np.ndarray], np.ndarray],
    grid: ScaleGrid,
    signal_support: tuple[float, float] = (-12.0, 12.0),
    wavelet_reach: float = 12.0,
    order: int = 16,
) -> list[np.ndarray]:
    """Coefficients ``W(a, x) = int a^{-1/2} w((x' - x)/a) phi(x') dx'``.

    Real wavelets only. ``signal_support`` bounds where ``phi`` is
    numerically non-zero and ``wavelet_reach`` does the same for ``w`` in
    units of the scale. Returns one coefficient array per scale.
    """
    out = []
    for a, xs in zip(grid.scales, grid.positions):
        nodes, wts = _cell_nodes(xs, a, wavelet_reach, signal_support, order)
        vals = wavelet((nodes - xs[:, None]) / a) * signal(nodes)
        out.append((vals * wts).sum(axis=1) / math.sqrt(a))
    return out


def _trapezoid_weights(n):
    w = np.ones(n)
    if n > 1:
        w[0] = w[-1] = 0.5
    return w


def wavelet_inner_product_1d(coef_phi, coef_psi, grid: ScaleGrid, c_psi: float) -> float:
    """``(1/c) int int W_phi W_psi da dx / a^2`` on the sampled grid.

    With ``u = ln a`` the Haar measure becomes ``du dx / a``; both directions
    use the trapezoid rule. ``c_psi`` is the one-sided admissibility integral
    (see :attr:`AdmissibilityReport.radial_integral`), the constant that
    belongs with positive scales only.
    """
    wu = _trapezoid_weights(grid.scales.size) * grid.log_step
    total = []
    for a, xs, p, q, w in zip(grid.scales, grid.positions, coef_phi, coef_psi, wu):
        h = xs[1] - xs[0] if xs.size > 1 else 1.0
        total.append(w * h * float(np.dot(p, q)) / a)
    return math.fsum(total) / c_psi


def cwt_inverse_1d(coefficients, wavelet, grid: ScaleGrid, c_psi: float):
    """Reconstruction operator for :func:`cwt_forward_1d` output.

    Returns a vectorized function ``x -> phi(x)`` evaluating
    ``(1/c) int int a^{-1/2} w((x - x')/a) W(a, x') da dx' / a^2``.
    """
    wu = _trapezoid_weights(grid.scales.size) * grid.log_step

    def phi(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        acc = np.zeros_like(x)
        for a, xs, c, w in zip(grid.scales, grid.positions, coefficients, wu):
            h = xs[1] - xs[0] if xs.size > 1 else 1.0
            k = wavelet((x[:, None] - xs[None, :]) / a)
            acc += w * h / a**1.5 * (k @ c)
        return acc / c_psi

    return phi


def scale_limited_inner_product(
    phi_hat,
    psi_hat,
    A: float,
    profile: RadialProfile | None = None,
    spec: QuadratureSpec | None = None,
    cutoff=None,
    d: int | None = None,
) -> float:
    """``(phi, psi)_A = (2 pi)^-d S_{d-1} int kappa^{d-1} phi^ f~(A kappa) psi^ dkappa``.

    The cutoff is taken from ``profile`` through its defining integral, or
    from ``cutoff`` if a closed form is at hand.
    """
    spec = spec or QuadratureSpec()
    if A <= 0:
        raise ValueError("A must be positive")
    if cutoff is None:
        if profile is None:
            raise ValueError("need a profile or a cutoff")
        g = _density(profile)
        total = _tail_integral(g, 0.0, profile, spec)
        cutoff = lambda k: cutoff_function_numeric(profile, k, spec, total=total)
        # the nested integral is smooth; a fixed rule keeps the cost bounded
        spec = QuadratureSpec(abs_tol=spec.abs_tol, rel_tol=max(spec.rel_tol, 1e-9))
    d = d or (profile.d if profile is not None else 3)
    pref = sphere_area(d) / (2 * math.pi) ** d

    def integrand(kap):
        kap = np.asarray(kap, dtype=float)
        return kap ** (d - 1) * phi_hat(kap) * np.asarray(cutoff(A * kap)) * psi_hat(kap)

    return pref * integrate(integrand, 0.0, math.inf, spec)
