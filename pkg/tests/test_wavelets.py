import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scalecasimir import wavelets as wv
from scalecasimir.cwt import cutoff_function_numeric, radial_fourier_inverse
from scalecasimir.numerics import DiffSpec, differentiate

FAMILIES = [wv.hermitian(1), wv.hermitian(2), wv.hermitian(4), wv.exponential(), wv.bump(), wv.nonanalytic()]


# -- parsing ----------------------------------------------------------------

@pytest.mark.parametrize(
    "text,expected",
    [("hermitian:n=3", wv.hermitian(3)), ("hermitian", wv.hermitian(1)), ("Exponential", wv.exponential()),
     ("bump", wv.bump()), ("nonanalytic", wv.nonanalytic()), ("non-analytic", wv.nonanalytic())],
)
def test_parse_family(text, expected):
    assert wv.parse_family(text) == expected


@pytest.mark.parametrize("text", ["hermitian:n=0", "hermitian:m=2", "hermitian:n=x", "bump:n=2", "gabor", "custom:"])
def test_parse_family_rejects(text):
    with pytest.raises(ValueError):
        wv.parse_family(text)


def test_family_string_round_trip():
    for fam in FAMILIES:
        assert wv.parse_family(str(fam)) == fam


# -- cutoff functions ---------------------------------------------------------

@pytest.mark.parametrize("family", FAMILIES, ids=str)
def test_cutoff_normalized_and_monotone(family):
    ks = np.linspace(0, 10, 500)
    vals = wv.cutoff(family, ks)
    assert vals[0] == 1.0
    assert np.all(np.diff(vals) <= 0)
    assert np.all((vals >= 0) & (vals <= 1))


def test_cutoff_closed_forms():
    k = np.array([0.3, 1.0, 2.2])
    assert np.allclose(wv.cutoff(wv.hermitian(1), k), np.exp(-k * k), rtol=1e-14)
    assert np.allclose(wv.cutoff(wv.hermitian(2), k), np.exp(-k * k) * (1 + k * k), rtol=1e-14)
    assert np.allclose(wv.cutoff(wv.exponential(), k), np.exp(-k), rtol=1e-15)
    assert np.allclose(wv.cutoff(wv.nonanalytic(), k), 1 - np.exp(-(k**-10.0)), rtol=1e-12)
    assert wv.cutoff(wv.bump(), 1.5) == pytest.approx(0.5)
    assert wv.cutoff(wv.bump(), 0.9) == 1.0 and wv.cutoff(wv.bump(), 2.0) == 0.0


@pytest.mark.parametrize("family", FAMILIES, ids=str)
def test_cutoff_matches_defining_integral(family):
    ks = np.array([0.5, 1.2, 1.7, 2.6])
    numeric = cutoff_function_numeric(wv.profile_of(family), ks)
    assert np.allclose(numeric, wv.cutoff(family, ks), atol=1e-9)


@pytest.mark.parametrize("family", [f for f in FAMILIES if f.kind != wv.BUMP], ids=str)
@pytest.mark.parametrize("order", [1, 2, 3])
def test_derivatives_against_finite_differences(family, order):
    f = lambda x: wv.cutoff(family, x)
    for k in (0.45, 0.9, 1.6):
        fd = differentiate(f, k, DiffSpec(order=order, base_step=0.02, richardson_levels=3, accuracy=4))
        assert wv.cutoff_derivative(family, k, order) == pytest.approx(fd, rel=1e-6, abs=1e-8)


def _bump_mp(k):
    return 1 / (1 + mp.exp(-(1 / (k - 1) - 1 / (2 - k))))


@settings(max_examples=40, deadline=None)
@given(k=st.floats(1.02, 1.98), order=st.integers(1, 3))
def test_bump_derivatives_against_mpmath(k, order):
    with mp.workdps(40):
        ref = float(mp.diff(_bump_mp, mp.mpf(k), order))
    assert wv.cutoff_derivative(wv.bump(), k, order) == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_bump_seams():
    fam = wv.bump()
    assert list(wv.is_seam(fam, [0.5, 1.0, 1.5, 2.0])) == [False, True, False, True]
    for order in (1, 2, 3):
        assert wv.cutoff_derivative(fam, 1.0, order) == 0.0
        assert wv.cutoff_derivative(fam, 2.0, order) == 0.0
    assert wv.evaluate_cutoff(fam, 1.0).seam


def test_profile_squares_to_cutoff_slope():
    # |w~|^2 = -c kappa f~'  with  C_w = 4 pi c
    for fam in FAMILIES:
        c = wv.admissibility_constant_exact(fam) / (4 * math.pi)
        kap = np.array([0.4, 0.8, 1.3, 1.8, 2.5])
        lhs = wv.momentum_profile(fam, kap) ** 2
        rhs = -c * kap * wv.cutoff_derivative(fam, kap, 1)
        assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-300), str(fam)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_hermitian_first_non_zero_derivative_is_order_2n(n):
    d = wv.derivatives_at_zero(wv.hermitian(n), 2 * n + 2)
    assert d[0] == 1
    assert all(v == 0 for v in d[1 : 2 * n])
    assert d[2 * n] == Fraction(-math.factorial(2 * n), math.factorial(n))


def test_taylor_data_exact_against_mpmath():
    f = lambda x: mp.exp(-x * x) * (1 + x * x + x**4 / 2)
    d = wv.derivatives_at_zero(wv.hermitian(3), 10)
    for m in range(11):
        assert float(d[m]) == pytest.approx(float(mp.diff(f, 0, m)), abs=1e-8)
    assert wv.derivatives_at_zero(wv.exponential(), 4) == [1, -1, 1, -1, 1]
    assert wv.derivatives_at_zero(wv.bump(), 3) == [1, 0, 0, 0]


def test_evaluate_cutoff_reports_source():
    ev = wv.evaluate_cutoff(wv.exponential(), 1.0, max_m=2)
    assert ev.value == pytest.approx(math.exp(-1))
    assert ev.source == "closed-form" and ev.analytic
    assert not wv.evaluate_cutoff(wv.nonanalytic(), 1.0).analytic


# -- custom families ----------------------------------------------------------

def test_custom_table_reproduces_exponential(tmp_path):
    fam = wv.exponential()
    kap = np.geomspace(1e-6, 60, 4000)
    path = tmp_path / "w.txt"
    np.savetxt(path, np.column_stack([kap, wv.momentum_profile(fam, kap)]))
    custom = wv.parse_family(f"custom:{path}")
    assert custom.kind == wv.CUSTOM
    ks = np.array([0.5, 1.0, 3.0])
    assert np.allclose(wv.cutoff(custom, ks), np.exp(-ks), atol=1e-4)
    d = wv.derivatives_at_zero(custom, 4)
    assert d == pytest.approx([1, -1, 1, -1, 1], abs=1e-4)


def test_custom_profile_taylor_data_match_hermitian():
    prof = wv.RadialProfile(lambda k: np.asarray(k) ** 2 * np.exp(-np.asarray(k) ** 2 / 2))
    d = wv.derivatives_at_zero(wv.custom(prof), 6)
    exact = [float(v) for v in wv.derivatives_at_zero(wv.hermitian(2), 6)]
    assert d == pytest.approx(exact, abs=2e-2)
    assert d[4] == pytest.approx(-12.0, rel=1e-5)


def test_custom_table_rejects_single_column(tmp_path):
    path = tmp_path / "bad.txt"
    np.savetxt(path, np.arange(5.0))
    with pytest.raises(ValueError):
        wv.custom_from_table(path)


# -- position space -----------------------------------------------------------

@pytest.mark.parametrize(
    "family,ratio",
    [(wv.hermitian(1), 2 / math.sqrt(math.pi)), (wv.hermitian(3), 2 / math.sqrt(math.pi)), (wv.exponential(), 1.0)],
    ids=str,
)
def test_position_profile_is_transform_of_momentum_profile(family, ratio):
    prof = wv.profile_of(family)
    for r in (0.0, 0.5, 1.3, 3.0):
        transformed = radial_fourier_inverse(prof.eval, r)
        assert transformed == pytest.approx(ratio * wv.position_profile(family, r), rel=1e-5)


def test_position_profile_values_at_origin():
    assert wv.position_profile(wv.exponential(), 0.0) == pytest.approx(5 * math.sqrt(3 / (2 * math.pi)), rel=1e-12)
    # 1 / sqrt(pi Gamma(5/2))
    assert wv.position_profile(wv.hermitian(1), 0.0) == pytest.approx(0.4893358, rel=1e-6)
    small = wv.position_profile(wv.exponential(), np.array([0.0, 5e-5, 2e-4]))
    assert np.all(np.diff(small) < 0)


def test_position_profile_array_shape_and_domain():
    r = np.linspace(0, 2, 6).reshape(2, 3)
    assert wv.position_profile(wv.hermitian(2), r).shape == (2, 3)
    with pytest.raises(ValueError):
        wv.position_profile(wv.hermitian(1), -1.0)


# -- bump structure -----------------------------------------------------------

def test_dyadic_self_overlap_is_unit():
    for j in (-1, 0, 2):
        assert wv.dyadic_orthonormality(wv.bump(), j, j) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("j,l", [(0, 1), (0, 2), (-1, 1), (2, -2)])
@pytest.mark.parametrize("shift", [0.0, 1.3, 4.0])
def test_dyadic_cross_scale_overlap_vanishes(j, l, shift):
    assert abs(wv.dyadic_orthonormality(wv.bump(), j, l, shift)) < 1e-12


def test_bump_only_helpers():
    with pytest.raises(ValueError):
        wv.dyadic_orthonormality(wv.exponential(), 0, 0)


def test_derivative_kernel_basic_properties():
    fam = wv.bump()
    vals = wv.derivative_kernel_decay(fam, 1.0, 1.0, [0.0, 1.0, 3.0])
    assert vals[0] == 0.0 and vals[1] > 0
    # disjoint momentum bands: identically zero
    assert np.all(wv.derivative_kernel_decay(fam, 1.0, 4.0, [1.0, 5.0]) == 0.0)


def test_derivative_kernel_envelope_bounds_kernel():
    fam = wv.bump()
    rs = np.array([5.0, 7.3, 10.0])
    assert np.all(wv.derivative_kernel_decay(fam, 1.0, 1.0, rs) <= wv.derivative_kernel_envelope(fam, 1.0, 1.0, rs) * (1 + 1e-9))


@pytest.mark.slow
def test_derivative_kernel_decay_steepens():
    # faster than any power: the local log-log slope keeps falling with r
    rs = np.array([5.0, 10.0, 20.0, 40.0, 80.0])
    env = wv.derivative_kernel_envelope(wv.bump(), 1.0, 1.0, rs)
    slopes = np.diff(np.log(env)) / np.diff(np.log(rs))
    assert np.all(np.diff(slopes) < 0)
    assert slopes[-1] < -5.5
