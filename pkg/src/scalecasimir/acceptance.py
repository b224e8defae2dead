"""Acceptance suite shared by ``scalecasimir verify`` and the test-suite.

Every criterion is a function returning a :class:`CriterionResult`; none of
them raises on a numerical mismatch, so a single report always covers the
whole suite.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import casimir as cs
from . import wavelets as wv
from .cwt import (
    RadialProfile,
    ScaleGrid,
    admissibility_constant,
    cutoff_function_numeric,
    cwt_forward_1d,
    wavelet_inner_product_1d,
)
from .numerics import DiffSpec, differentiate

__all__ = ["CriterionResult", "Criterion", "CRITERIA", "names", "run", "format_report"]


@dataclass(frozen=True)
class CriterionResult:
    name: str
    expected: str
    observed: str
    tolerance: str
    passed: bool
    seconds: float = 0.0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: observed {self.observed}; expected {self.expected} ({self.tolerance})"


@dataclass(frozen=True)
class Criterion:
    index: int
    name: str
    title: str
    check: Callable[[], CriterionResult]


def _rel(a, b):
    return abs(a - b) / abs(b)


def _sign_changes(v) -> int:
    s = np.sign(np.asarray(v))
    s = s[s != 0]
    return int(np.sum(s[1:] != s[:-1]))


# ---------------------------------------------------------------------------

def exponential_oracle():
    fam = wv.exponential()
    errs = []
    for ratio in (1.2, 1.5, 2.0, 5.0, 10.0):
        F = cs.force_numeric(cs.CasimirConfig(ratio, 1.0), fam)
        errs.append(_rel(F, cs.exact_force_exponential(ratio, 1.0)))
    worst = max(errs)
    return CriterionResult(
        "exponential-oracle",
        "numeric force = closed form at s/A in {1.2,1.5,2,5,10}",
        f"max rel. error {worst:.2e}",
        "1e-5 relative",
        worst < 1e-5,
    )


def repulsion():
    exact = cs.exact_force_exponential(1.0, 1.0)
    formula = 3 / math.pi**2 - math.pi**2 * (math.cosh(2 * math.pi) + 2) / math.sinh(math.pi) ** 4
    numeric = cs.force_numeric(cs.CasimirConfig(1.0, 1.0), wv.exponential())
    herm = cs.force_numeric(cs.CasimirConfig(1.05, 1.0), wv.hermitian(1))
    ok = (
        exact > 0
        and _rel(exact, 0.154300) < 1e-5
        and _rel(exact, formula) < 1e-12
        and _rel(numeric, exact) < 1e-5
        and herm > 0
    )
    return CriterionResult(
        "repulsion",
        "F_exp(1,1) = +0.154300 > 0, numeric agrees; F_herm1(1.05) > 0",
        f"F_exp = {exact:.6f}, numeric rel. {_rel(numeric, exact):.1e}, F_herm1 = {herm:.3e}",
        "1e-5 relative; sign",
        ok,
    )


def continuum_limits():
    fam = wv.hermitian(3)
    s, A = 1000.0, 1.0
    out = []
    for bc, ref in ((cs.BoundaryCondition.PERIODIC, -math.pi**2 / 45), (cs.BoundaryCondition.DIRICHLET, -math.pi**2 / 720)):
        cfg = cs.CasimirConfig(s, A, bc=bc, method=cs.Method.REMAINDER)
        rho = cs.rho_renormalized(cfg, fam).rho
        out.append(_rel(rho * s**4, ref))
    return CriterionResult(
        "continuum-limits",
        "rho s^4 = -pi^2/45 (periodic), -pi^2/720 (Dirichlet) at A/s = 1e-3, Hermitian n=3",
        f"rel. errors {out[0]:.1e}, {out[1]:.1e}",
        "1e-4 relative",
        max(out) < 1e-4,
    )


def leading_coefficients():
    h = 8 * cs.series_coefficients(wv.hermitian(1), 2).a[2]
    e = 8 * cs.series_coefficients(wv.exponential(), 2).a[2]
    ok = h == Fraction(-2, 63) and e == Fraction(1, 63)
    return CriterionResult(
        "leading-coefficients",
        "8 a_2 = -2/63 (Hermitian n=1), +1/63 (exponential)",
        f"{h}, {e}",
        "exact rationals",
        ok,
    )


def hermitian_suppression():
    spec = dict(base_step=0.5, richardson_levels=5, accuracy=6)
    worst, ok = 0.0, True
    for n in (1, 2, 3, 4):
        fam = wv.hermitian(n)
        exact = wv.derivatives_at_zero(fam, 2 * n)
        first = next(m for m in range(1, 2 * n + 1) if exact[m] != 0)
        ok &= first == 2 * n
        g = lambda x, fam=fam: wv.cutoff(fam, abs(x))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for m in range(1, 2 * n + 1):
                d = differentiate(g, 0.0, DiffSpec(order=m, **spec))
                err = abs(d - float(exact[m])) / math.factorial(m)
                worst = max(worst, err)
        ok &= abs(float(exact[2 * n])) / math.factorial(2 * n) > 1e-6
    ok &= worst < 1e-6
    return CriterionResult(
        "hermitian-suppression",
        "first non-zero derivative at 0 is order 2n, n = 1..4 (exact and finite differences)",
        f"exact orders match; max Taylor-coefficient error {worst:.1e}",
        "1e-6 on f^(m)(0)/m!",
        bool(ok),
    )


def cutoff_closed_forms():
    ks = np.linspace(0.0, 5.0, 101)
    worst = 0.0
    for fam in (wv.hermitian(1), wv.hermitian(2), wv.hermitian(3), wv.exponential()):
        prof = wv.profile_of(fam)
        num = cutoff_function_numeric(prof, ks)
        worst = max(worst, float(np.max(np.abs(num - wv.cutoff(fam, ks)))))
    return CriterionResult(
        "cutoff-closed-forms",
        "closed-form cutoff = defining integral on [0,5] (Hermitian 1-3, exponential)",
        f"sup error {worst:.1e}",
        "1e-8 absolute",
        worst < 1e-8,
    )


def bulk_energy():
    errs = [
        _rel(cs.bulk_energy(wv.exponential(), A, closed_form=False), 3 / (math.pi**2 * A**4))
        for A in (0.5, 1.0, 2.0)
    ]
    return CriterionResult(
        "bulk-energy",
        "numeric bulk energy = 3/(pi^2 A^4), A in {0.5,1,2}",
        f"max rel. error {max(errs):.1e}",
        "1e-8 relative",
        max(errs) < 1e-8,
    )


def remainder_consistency():
    fam = wv.nonanalytic()
    s, A = 3.0, 1.0
    direct = cs.rho_renormalized(cs.CasimirConfig(s, A), fam).rho
    via_r = cs.rho_via_remainder(fam, s, A)
    f_num = cs.force_numeric(cs.CasimirConfig(s, A), fam)
    f_rem = cs.force_via_remainder(fam, s, A)
    e1, e2 = _rel(via_r, direct), _rel(f_rem, f_num)
    return CriterionResult(
        "remainder-consistency",
        "remainder route = direct sum for non-analytic cutoff at (s,A) = (3,1)",
        f"energy rel. {e1:.1e}, force rel. {e2:.1e}",
        "1e-6 energy, 1e-5 force",
        e1 < 1e-6 and e2 < 1e-5,
    )


def oscillatory_corrections():
    ss = np.linspace(1.5, 6.0, 200)
    counts = {}
    for fam in (wv.bump(), wv.nonanalytic()):
        corr = [cs.force_via_remainder(fam, s, 1.0) + math.pi**2 / (15 * s**4) for s in ss]
        counts[str(fam)] = _sign_changes(corr)
    return CriterionResult(
        "oscillatory-corrections",
        "force correction changes sign >= 2 times on s in [1.5,6], A=1 (bump, non-analytic)",
        ", ".join(f"{k}: {v}" for k, v in counts.items()),
        ">= 2 sign changes each",
        all(v >= 2 for v in counts.values()),
    )


def dirichlet_correspondence():
    ok_rational = True
    for fam in (wv.hermitian(1), wv.hermitian(2), wv.exponential()):
        for expand in (cs.force_expansion, cs.energy_expansion):
            dirichlet = expand(fam, 5, cs.BoundaryCondition.DIRICHLET)
            periodic_2s = expand(fam, 5, cs.BoundaryCondition.PERIODIC).at_scaled_separation(2)
            ok_rational &= dirichlet == periodic_2s
    worst = 0.0
    for fam in (wv.exponential(), wv.hermitian(1), wv.nonanalytic()):
        for s in (1.5, 3.0):
            A = 1.0
            N = cs.adaptive_truncation(fam, s, A, cs.BoundaryCondition.DIRICHLET)
            raw = math.fsum(np.atleast_1d(cs.aux_F(fam, 0.5 * np.arange(1, N + 1), s, A))) / s
            shift = -0.5 * cs.aux_F(fam, 0.0, s, A) / s
            per = cs.rho0_direct(cs.CasimirConfig(2 * s, A), fam).rho0
            worst = max(worst, _rel(raw - shift, per))
    return CriterionResult(
        "dirichlet-correspondence",
        "Dirichlet series = periodic series at 2s (m <= 5); direct sums agree after removing -F(0)/2s",
        f"rational identity {'holds' if ok_rational else 'broken'}; max rel. error {worst:.1e}",
        "exact; 1e-8 relative",
        bool(ok_rational) and worst < 1e-8,
    )


def mexican_hat(x):
    return (1 - x * x) * np.exp(-x * x / 2)


MEXICAN_HAT_PROFILE = RadialProfile(lambda k: math.sqrt(2 * math.pi) * k * k * np.exp(-k * k / 2), d=1)


def cwt_isometry():
    c = admissibility_constant(MEXICAN_HAT_PROFILE).radial_integral
    phi = lambda x: np.exp(-x * x / 2)
    psi = lambda x: np.exp(-((x - 0.7) ** 2) / 2)
    exact = math.sqrt(math.pi) * math.exp(-0.7**2 / 4)
    grid = ScaleGrid.log_uniform()
    errs = []
    for _ in range(3):
        ip = wavelet_inner_product_1d(cwt_forward_1d(phi, mexican_hat, grid), cwt_forward_1d(psi, mexican_hat, grid), grid, c)
        errs.append(_rel(ip, exact))
        grid = grid.refine()
    ok = errs[0] < 1e-3 and errs[1] < errs[0] and errs[2] < errs[1]
    return CriterionResult(
        "cwt-isometry",
        "Gaussian-pair Parseval with Mexican hat on default grid, improving on 2 refinements",
        "rel. errors " + ", ".join(f"{e:.1e}" for e in errs),
        "1e-3, strictly decreasing",
        ok,
    )


def bump_structure():
    fam = wv.bump()
    worst = 0.0
    for j in range(-2, 3):
        for l in range(-2, 3):
            if j == l:
                continue
            for shift in (0.0, 1.3, 3.7):
                worst = max(worst, abs(wv.dyadic_orthonormality(fam, j, l, shift)))
    overlap_ok = worst < 1e-10
    rs = np.array([5.0, 10.0, 20.0])
    # adjacent and non-adjacent dyadic pairs: disjoint bands, kernel vanishes
    dyadic = [wv.derivative_kernel_decay(fam, 1.0, ap, rs) for ap in (2.0, 4.0)]
    dyadic_zero = all(np.all(d == 0.0) for d in dyadic)
    # equal scales: the only pairing with a non-trivial kernel at these r
    env = wv.derivative_kernel_envelope(fam, 1.0, 1.0, rs)
    slopes = np.diff(np.log(env)) / np.diff(np.log(rs))
    decay_ok = bool(np.all(slopes < -6) and np.all(np.diff(slopes) < 0))
    return CriterionResult(
        "bump-structure",
        "cross-scale overlaps vanish; kernel log-log slope < -6 and steepening on r in {5,10,20}",
        f"max overlap {worst:.1e}; dyadic kernels {'identically 0' if dyadic_zero else 'non-zero'}; "
        f"a=a'=1 envelope slopes " + ", ".join(f"{x:.2f}" for x in slopes),
        "1e-10; slope < -6",
        overlap_ok and decay_ok,
    )


def hermitian_ordering():
    s, A = 3.0, 1.0
    ref = cs.continuum_force(s)
    dev = [abs(cs.force_numeric(cs.CasimirConfig(s, A), wv.hermitian(n)) - ref) for n in (1, 2, 3)]
    ok = dev[0] > dev[1] > dev[2]
    return CriterionResult(
        "hermitian-ordering",
        "|F_n - F_continuum| strictly decreasing over n = 1,2,3 at s=3, A=1",
        ", ".join(f"{d:.3e}" for d in dev),
        "strict ordering",
        ok,
    )


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "exponential-oracle", "Exponential exact-force oracle", exponential_oracle),
    Criterion(2, "repulsion", "Repulsion near the cutoff", repulsion),
    Criterion(3, "continuum-limits", "Continuum limits", continuum_limits),
    Criterion(4, "leading-coefficients", "Leading-correction coefficients", leading_coefficients),
    Criterion(5, "hermitian-suppression", "Hermitian suppression", hermitian_suppression),
    Criterion(6, "cutoff-closed-forms", "Cutoff closed forms vs defining integral", cutoff_closed_forms),
    Criterion(7, "bulk-energy", "Bulk-energy closed form", bulk_energy),
    Criterion(8, "remainder-consistency", "Remainder-route consistency", remainder_consistency),
    Criterion(9, "oscillatory-corrections", "Oscillatory corrections", oscillatory_corrections),
    Criterion(10, "dirichlet-correspondence", "Dirichlet-periodic correspondence", dirichlet_correspondence),
    Criterion(11, "cwt-isometry", "CWT isometry", cwt_isometry),
    Criterion(12, "bump-structure", "Bump structure", bump_structure),
    Criterion(13, "hermitian-ordering", "Monotone suppression in n", hermitian_ordering),
)


def names() -> list[str]:
    return [c.name for c in CRITERIA]


def get(name: str) -> Criterion:
    for c in CRITERIA:
        if c.name == name or str(c.index) == name:
            return c
    raise KeyError(f"unknown criterion {name!r}; choose from {', '.join(names())}")


def run(selected=None) -> list[CriterionResult]:
    chosen = [get(n) for n in selected] if selected else list(CRITERIA)
    results = []
    for c in chosen:
        t0 = time.perf_counter()
        try:
            res = c.check()
        except Exception as exc:  # report, don't abort the suite
            res = CriterionResult(c.name, c.title, f"error: {exc!r}", "-", False)
        results.append(
            CriterionResult(res.name, res.expected, res.observed, res.tolerance, res.passed,
                            time.perf_counter() - t0, res.detail)
        )
    return results


def format_report(results) -> str:
    header = ("criterion", "status", "observed", "expected", "tolerance", "time")
    rows = [
        (r.name, "PASS" if r.passed else "FAIL", r.observed, r.expected, r.tolerance, f"{r.seconds:.1f}s")
        for r in results
    ]
    width = [max(len(str(x[i])) for x in [header, *rows]) for i in range(len(header))]
    width[3] = min(width[3], 60)
    lines = ["  ".join(str(v).ljust(w) for v, w in zip(header, width))]
    lines.append("  ".join("-" * w for w in width))
    for row in rows:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(row, width)))
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} criteria passed")
    return "\n".join(lines)
