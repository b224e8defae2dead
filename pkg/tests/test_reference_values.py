"""Point values with independent closed-form or high-precision oracles."""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from scipy.special import erfc

from scalecasimir import casimir as cs
from scalecasimir import cli
from scalecasimir import wavelets as wv
from scalecasimir.acceptance import MEXICAN_HAT_PROFILE, mexican_hat
from scalecasimir.cwt import (
    RadialProfile,
    ScaleGrid,
    admissibility_constant,
    cutoff_function_numeric,
    cwt_forward_1d,
    cwt_inverse_1d,
    scale_limited_inner_product,
)
from scalecasimir.numerics import (
    DiffSpec,
    bernoulli_number,
    bernoulli_polynomial,
    differentiate,
    incomplete_gamma_upper,
    integrate,
    integrate_periodized_weight,
    kummer_1f1,
    periodized_bernoulli,
)

E = math.e
PI2 = math.pi**2


# -- numerics ---------------------------------------------------------------------

def test_bernoulli_values():
    assert bernoulli_number(6) == Fraction(1, 42)
    assert bernoulli_polynomial(4, 0.0) == pytest.approx(-1 / 30, abs=1e-16)
    assert bernoulli_polynomial(1, 0.5) == pytest.approx(0.0, abs=1e-16)
    assert bernoulli_polynomial(4, 0.5) == pytest.approx(7 / 240, abs=1e-16)
    assert periodized_bernoulli(4, 3.0) == pytest.approx(-1 / 30, abs=1e-15)
    assert periodized_bernoulli(4, 2.5) == pytest.approx(7 / 240, abs=1e-15)
    assert periodized_bernoulli(2, 7.25) == pytest.approx(-1 / 48, abs=1e-15)


def test_special_function_values():
    assert incomplete_gamma_upper(2, 0.0) == 1.0
    assert incomplete_gamma_upper(1, 1.0) == pytest.approx(1 / E, rel=1e-15)
    assert incomplete_gamma_upper(3, 2.0) == pytest.approx(10 * math.exp(-2), rel=1e-15)
    assert kummer_1f1(2.0, 1.5, 0.0) == 1.0
    assert kummer_1f1(1.0, 1.0, 1.0) == pytest.approx(E, rel=1e-15)
    with mp.workdps(50):
        direct = mp.fsum(mp.rf(2, k) / mp.rf(1.5, k) * mp.mpf(-0.5) ** k / mp.factorial(k) for k in range(30))
    assert kummer_1f1(2.0, 1.5, -0.5) == pytest.approx(float(direct), rel=1e-14)


def test_quadrature_values():
    assert integrate(lambda u: u * u * np.exp(-u), 0.0) == pytest.approx(2.0, rel=1e-12)
    assert integrate(lambda k: k**3 * np.exp(-k), 0.0) == pytest.approx(6.0, rel=1e-12)
    assert integrate(lambda x: bernoulli_polynomial(4, x), 0.0, 1.0) == pytest.approx(0.0, abs=1e-15)


def test_periodized_weight_values():
    flat = lambda x: np.where(np.asarray(x) <= 10, 1.0, 0.0)
    assert integrate_periodized_weight(flat, 4, upper=10.0) == pytest.approx(0.0, abs=1e-13)
    ramp = lambda x: np.where(np.asarray(x) <= 1, x, 0.0)
    assert integrate_periodized_weight(ramp, 1, upper=1.0) == pytest.approx(1 / 12, abs=1e-14)
    # Euler-Maclaurin for e^{-x}:  sum_{n>=0} e^{-n} = 1 + 1/2 + 1/12 - int e^{-x} B_2({x})/2
    rem = integrate_periodized_weight(lambda x: np.exp(-x), 2, upper=60.0)
    assert 1 + 0.5 + 1 / 12 - rem == pytest.approx(1 / (1 - 1 / E), rel=1e-13)


def test_differentiation_values():
    assert differentiate(math.exp, 0.0) == pytest.approx(1.0, abs=1e-9)
    assert differentiate(lambda x: x**4, 1.0, DiffSpec(order=3, base_step=0.1, richardson_levels=2)) == pytest.approx(24.0, abs=1e-6)
    assert differentiate(lambda k: math.exp(-k * k), 0.0, DiffSpec(order=2, base_step=0.05)) == pytest.approx(-2.0, abs=1e-8)


# -- transforms ----------------------------------------------------------------------

def test_admissibility_values():
    sq = RadialProfile(lambda k: np.sqrt(k) * np.exp(-np.asarray(k) / 2))
    assert admissibility_constant(sq).C_w == pytest.approx(4 * math.pi, rel=1e-10)
    g = RadialProfile(lambda k: np.asarray(k) * np.exp(-np.asarray(k) ** 2 / 2))
    assert admissibility_constant(g).C_w == pytest.approx(2 * math.pi, rel=1e-10)
    assert cutoff_function_numeric(g, 0.0) == 1.0
    assert cutoff_function_numeric(g, 1.0) == pytest.approx(1 / E, rel=1e-10)
    assert cutoff_function_numeric(sq, 2.0) == pytest.approx(math.exp(-2), rel=1e-10)


def test_forward_transform_values():
    grid = ScaleGrid.shared([1.0], [0.0, 0.5])
    zero = cwt_forward_1d(lambda x: 0 * x, mexican_hat, grid)
    assert np.all(zero[0] == 0.0)
    self_overlap = cwt_forward_1d(mexican_hat, mexican_hat, grid)[0][0]
    assert self_overlap == pytest.approx(3 * math.sqrt(math.pi) / 4, rel=1e-12)
    gauss = cwt_forward_1d(lambda x: np.exp(-x * x / 2), mexican_hat, grid)[0][0]
    assert gauss == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)
    c = admissibility_constant(MEXICAN_HAT_PROFILE).radial_integral
    assert np.all(cwt_inverse_1d(zero, mexican_hat, grid, c)(np.linspace(-2, 2, 5)) == 0.0)


def _band_limited_shortfall(a_min, a_max, x):
    # fraction of a unit Gaussian the scales [a_min, a_max] cannot rebuild at x
    G = lambda X: 1 - math.exp(-X * X) * (1 + X * X)
    f = lambda k: math.sqrt(2 * math.pi) * math.exp(-k * k / 2) * math.cos(k * x) * (1 - G(a_max * k) + G(a_min * k)) / math.pi
    return float(mp.quad(f, [0, 1 / a_max, 1 / a_min, 60]))


@pytest.mark.slow
def test_round_trip_on_limited_scale_range_matches_prediction():
    c = admissibility_constant(MEXICAN_HAT_PROFILE).radial_integral
    grid = ScaleGrid.log_uniform(1 / 64, 64, per_octave=32, spacing=0.0625)
    phi = lambda x: np.exp(-x * x / 2)
    rec = cwt_inverse_1d(cwt_forward_1d(phi, mexican_hat, grid), mexican_hat, grid, c)
    for x in (0.0, 1.0, 2.5):
        shortfall = _band_limited_shortfall(1 / 64, 64, x)
        assert shortfall > 1e-2
        assert phi(x) - rec(np.array([x]))[0] == pytest.approx(shortfall, abs=6e-4)


@pytest.mark.slow
@pytest.mark.parametrize("shift", [0.0, 1.7])
def test_round_trip_on_wide_scale_range(shift):
    c = admissibility_constant(MEXICAN_HAT_PROFILE).radial_integral
    grid = ScaleGrid.log_uniform(1 / 64, 2.0**13, per_octave=32, spacing=0.0625, center=shift)
    phi = lambda x: np.exp(-((x - shift) ** 2) / 2)
    rec = cwt_inverse_1d(
        cwt_forward_1d(phi, mexican_hat, grid, signal_support=(shift - 12, shift + 12)), mexican_hat, grid, c
    )
    xs = shift + np.linspace(-3, 3, 13)
    assert np.max(np.abs(rec(xs) - phi(xs))) < 1e-3


def test_scale_limited_product_values():
    hat = lambda k: np.exp(-np.asarray(k) ** 2 / 2)
    cut = lambda k: np.exp(-np.asarray(k))
    closed = (1 / math.pi) * (math.sqrt(math.pi) / 2) * math.exp(0.25) * erfc(0.5)
    assert scale_limited_inner_product(hat, hat, 1.0, cutoff=cut, d=1) == pytest.approx(closed, rel=1e-10)
    assert scale_limited_inner_product(hat, hat, 2.0, cutoff=cut, d=1) <= scale_limited_inner_product(hat, hat, 1.0, cutoff=cut, d=1)
    full = scale_limited_inner_product(hat, hat, 1e-12, cutoff=cut, d=1)
    assert full == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-9)


# -- wavelet catalogue ---------------------------------------------------------------------

def test_cutoff_values():
    assert wv.cutoff(wv.hermitian(2), 1.0) == pytest.approx(2 / E, rel=1e-15)
    assert wv.cutoff(wv.bump(), 1.5) == 0.5
    assert wv.cutoff(wv.nonanalytic(), 1.0) == pytest.approx(1 - 1 / E, rel=1e-15)
    assert wv.cutoff_derivative(wv.exponential(), 1.0, 1) == pytest.approx(-1 / E, rel=1e-15)
    assert wv.cutoff_derivative(wv.hermitian(1), 0.0, 2) == pytest.approx(-2.0, rel=1e-15)
    assert abs(wv.cutoff_derivative(wv.nonanalytic(), 0.5, 1)) < 1e-300
    assert wv.derivatives_at_zero(wv.hermitian(1), 4) == [1, 0, -2, 0, 12]


def test_momentum_profile_values():
    kap = np.linspace(0.01, 4, 4000)
    herm = wv.momentum_profile(wv.hermitian(1), kap)
    assert kap[np.argmax(herm)] == pytest.approx(1.0, abs=1e-3)
    assert wv.momentum_profile(wv.bump(), 0.5) == 0.0
    e = wv.momentum_profile(wv.exponential(), np.array([1.0, 4.0]))
    assert e[1] / e[0] == pytest.approx(2 * math.exp(-1.5), rel=1e-14)


def test_position_profile_values():
    assert wv.position_profile(wv.exponential(), 1e-9) == pytest.approx(3.454941, abs=5e-7)
    assert wv.position_profile(wv.hermitian(1), 0.0) == pytest.approx(1 / math.sqrt(math.pi * math.gamma(2.5)), rel=1e-14)
    b = wv.position_profile(wv.bump(), 0.0)
    direct = integrate(lambda k: k * k * wv.momentum_profile(wv.bump(), k), 1.0, 2.0) / (2 * PI2)
    assert b > 0 and b == pytest.approx(direct, rel=1e-9)


def test_dyadic_values():
    assert abs(wv.dyadic_orthonormality(wv.bump(), 2, 5, 3.7)) < 1e-10
    assert abs(wv.dyadic_orthonormality(wv.bump(), 0, 1, 2.2)) < 1e-10
    assert wv.dyadic_orthonormality(wv.bump(), 0, 0) == pytest.approx(1.0, rel=1e-12)
    assert wv.derivative_kernel_decay(wv.bump(), 1.0, 1.0, [0.0])[0] == 0.0


# -- Casimir quantities ---------------------------------------------------------------------

def test_mode_function_values():
    fam = wv.exponential()
    assert cs.moment_integral(fam, 0.0) == 2.0
    assert cs.moment_integral(fam, 1.0) == pytest.approx(5 / E, rel=1e-15)
    assert cs.moment_integral(wv.bump(), 2.0) == 0.0
    assert cs.aux_F(fam, 0, 3.7, 1.0) == pytest.approx(1 / math.pi, rel=1e-15)
    assert cs.aux_F(fam, 1000, 1.0, 1.0) < 1e-300
    assert cs.aux_F(wv.hermitian(1), 0, 2.0, 1.0) == pytest.approx(math.sqrt(math.pi) / (8 * math.pi), rel=1e-13)


def test_energy_values():
    fam = wv.exponential()
    x = math.pi
    coth = 1 / math.tanh(x)
    closed0 = coth / math.pi + (math.pi * coth + 1) / math.sinh(x) ** 2
    direct = cs.rho0_direct(cs.CasimirConfig(1.0, 1.0, truncation=50), fam).rho0
    assert direct == pytest.approx(closed0, rel=1e-10)
    closed = (math.pi * coth - 3) / PI2 + (math.pi * coth + 1) / math.sinh(x) ** 2
    assert cs.rho_renormalized(cs.CasimirConfig(1.0, 1.0), fam).rho == pytest.approx(closed, rel=1e-10)
    assert cs.rho_renormalized(cs.CasimirConfig(100.0, 1.0), fam).rho * 100.0**4 == pytest.approx(-PI2 / 45, rel=1e-3)
    assert cs.bulk_energy(fam, 1.0) == pytest.approx(3 / PI2, rel=1e-15)
    assert cs.bulk_energy(fam, 2.0) == pytest.approx(3 / (16 * PI2), rel=1e-15)
    assert cs.bulk_energy(wv.hermitian(1), 1.0) == pytest.approx(1 / (4 * PI2), rel=1e-15)


def test_series_values():
    assert cs.series_coefficients(wv.hermitian(1), 2).a[2] == Fraction(-1, 252)
    assert cs.series_coefficients(wv.exponential(), 2).a[2] == Fraction(1, 504)
    assert all(v == 0 for v in cs.series_coefficients(wv.bump(), 5).a.values())
    for bc, lead in ((cs.BoundaryCondition.PERIODIC, -PI2 / 15), (cs.BoundaryCondition.DIRICHLET, -PI2 / 240)):
        assert cs.force_series(cs.CasimirConfig(2.0, 0.0, bc=bc), wv.hermitian(2)) == pytest.approx(lead / 16, rel=1e-15)
    F = cs.force_series(cs.CasimirConfig(10.0, 1.0, series_order=2), wv.hermitian(1))
    assert F == pytest.approx(-PI2 / 15e4 - (2 * PI2 / 63) * (2 * math.pi / 10) ** 2 * 1e-4, rel=1e-14)


def test_force_values():
    fam = wv.exponential()
    assert cs.force_numeric(cs.CasimirConfig(2.0, 1.0), fam) == pytest.approx(cs.exact_force_exponential(2.0, 1.0), rel=1e-6)
    F1 = cs.force_numeric(cs.CasimirConfig(1.0, 1.0), fam)
    assert F1 > 0 and F1 == pytest.approx(0.15430, abs=5e-6)
    exact = 3 / PI2 - PI2 * (math.cosh(2 * math.pi) + 2) / math.sinh(math.pi) ** 4
    assert cs.exact_force_exponential(1.0, 1.0) == pytest.approx(exact, rel=1e-14)
    assert cs.exact_force_exponential(1e3, 1.0) * 1e12 == pytest.approx(-PI2 / 15, rel=1e-4)


def test_remainder_values():
    assert cs.remainder_R4(wv.nonanalytic(), 3.0, 0.0) == 0.0
    r = cs.remainder_R4(wv.bump(), 4.0, 1.0)
    assert math.isfinite(r) and r != 0.0
    assert cs.rho_via_remainder(wv.bump(), 4.0, 1.0) == pytest.approx(
        cs.rho_renormalized(cs.CasimirConfig(4.0, 1.0), wv.bump()).rho, rel=1e-9
    )
    fn = cs.force_via_remainder(wv.nonanalytic(), 3.0, 1.0)
    assert fn == pytest.approx(cs.force_numeric(cs.CasimirConfig(3.0, 1.0), wv.nonanalytic()), rel=1e-5)


# -- command line --------------------------------------------------------------------------------

def _rows(capsys, *argv):
    assert cli.main(list(argv)) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    return lines[0].split(","), np.array([[float(v) for v in l.split(",")] for l in lines[1:]])


def test_cli_cutoff_values(capsys):
    _, rows = _rows(capsys, "cutoff", "--wavelet", "exponential", "--kmax", "5", "--steps", "6")
    assert rows[0, 0] == 0.0 and rows[0, 1] == 1.0
    _, rows = _rows(capsys, "cutoff", "--wavelet", "hermitian:n=2", "--kmax", "2", "--steps", "3")
    assert rows[1, 1] == pytest.approx(2 / E, rel=1e-12)
    _, rows = _rows(capsys, "cutoff", "--wavelet", "bump", "--kmax", "3", "--steps", "7")
    assert np.all(rows[rows[:, 0] >= 2, 1] == 0.0)


def test_cli_force_values(capsys):
    _, rows = _rows(capsys, "force", "--wavelet", "exponential", "--method", "exact", "--A", "1",
                    "--smin", "1", "--smax", "1", "--steps", "1")
    assert rows[0, 1] == pytest.approx(0.154300, abs=1e-6)
    _, rows = _rows(capsys, "force", "--wavelet", "hermitian:n=1", "--method", "series", "--order", "2", "--A", "1",
                    "--smin", "10", "--smax", "10", "--steps", "1")
    assert rows[0, 1] == pytest.approx(-PI2 / 15e4 - (2 * PI2 / 63) * (2 * math.pi / 10) ** 2 * 1e-4, rel=1e-11)


@pytest.mark.slow
def test_cli_remainder_sweep_matches_library(capsys):
    _, rows = _rows(capsys, "force", "--wavelet", "nonanalytic", "--method", "remainder", "--A", "1",
                    "--smin", "1.5", "--smax", "12", "--steps", "36")
    for s, F in rows[::7, :2]:
        assert F == pytest.approx(cs.force_via_remainder(wv.nonanalytic(), s, 1.0), rel=1e-11)
    sgn = np.sign(rows[:, 3])
    assert int(np.sum(sgn[1:] != sgn[:-1])) >= 2


def test_cli_energy_values(capsys):
    _, rows = _rows(capsys, "energy", "--wavelet", "exponential", "--method", "exact", "--smin", "1", "--smax", "3", "--steps", "3")
    assert rows[0, 1] == pytest.approx(cs.exact_rho0_exponential(1.0, 1.0), rel=1e-10)
    assert np.all(rows[:, 2] == rows[0, 2])
    assert np.allclose(rows[:, 3] + rows[:, 2], rows[:, 1], rtol=1e-11)
