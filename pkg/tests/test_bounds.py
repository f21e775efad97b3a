import math

import numpy as np
import pytest

from pathloops import bounds
from pathloops.bounds import (
    b_func,
    envelope,
    fidelity_lower_bound,
    fidelity_upper_bound,
    gap_bounds,
    hyp_tau,
    lambda_bounds,
    lambda2_floor_odd,
    readout_gamma_heuristic,
    readout_window,
    sensitivity_asymptotes,
    sigma_n,
    sigma_n_display,
    sigma_n_from_b,
    tau_n,
    tau_threshold,
    v_entry_bounds,
    w_threshold,
)
from pathloops.dynamics import fidelity_values
from pathloops.errors import DomainError
from pathloops.model import PathSpec
from pathloops.spectrum import full_spectrum


def test_tau_examples():
    assert tau_n(PathSpec(4, 2.0)) == pytest.approx(0.3)
    assert tau_n(PathSpec(3, 2.0)) == pytest.approx(0.3)
    # (w-1) cancels against w^(2m) - 1, so the limit at w = 1 is 4/(2m)
    assert tau_n(PathSpec(10, 1.0 + 1e-9)) == pytest.approx(0.4, rel=1e-6)


def test_gap_bounds_examples():
    lo, hi, ok = gap_bounds(PathSpec(4, 2.0))
    assert (lo, hi, ok) == (pytest.approx(0.1), pytest.approx(0.9), True)
    assert lo <= full_spectrum(PathSpec(4, 2.0)).gap <= hi
    lo3, _, ok3 = gap_bounds(PathSpec(3, 2.0))
    assert lo3 == pytest.approx((2 * (math.sqrt(2) - 1) * 4 - 1) * 3 / 30)
    assert ok3 and lo3 <= math.sqrt(3) - 1


def test_gap_ratio_bounded_in_n():
    ratios = []
    for n in range(6, 60, 2):
        lo, hi, _ = gap_bounds(PathSpec(n, 2.0))
        ratios.append(hi / lo)
    assert max(ratios) < 2 * min(ratios)


def test_odd_lower_flag():
    assert not gap_bounds(PathSpec(5, 1.05))[2]
    assert gap_bounds(PathSpec(5, 1.2))[2]


def test_b_func():
    assert 0 < b_func(2.5, 10) < 0.5
    assert b_func(2.5, 10) < b_func(3.0, 10)
    assert b_func(2.5, 10**9) == pytest.approx(0.375, abs=1e-7)
    with pytest.raises(DomainError):
        b_func(2.0, 10)


def test_b_monotone_grid():
    lams = np.linspace(2.01, 10, 60)
    for n in (5, 20, 100):
        vals = [b_func(x, n) for x in lams]
        assert np.all(np.diff(vals) > 0)


def test_b_at_limit_matches():
    spec = PathSpec(12, 3.0)
    assert bounds.b_at_limit(spec) == pytest.approx(b_func(3.0 + 1 / 3.0, 12), abs=1e-14)


def test_v_entry_bounds_large_n():
    spec = PathSpec(40, 2.0)
    sp = full_spectrum(spec)
    vb = v_entry_bounds(spec, sp.lambdas[0], sp.lambdas[1])
    assert vb.hyp_riemann
    assert vb.v11_lo.value <= sp.v1sq[0] <= vb.v11_hi.value
    assert vb.v12_lo.value <= sp.v1sq[1] <= vb.v12_hi.value


def test_v_entry_bounds_converge():
    gaps = []
    for n in (30, 300, 1000):
        spec = PathSpec(n, 2.0)
        sp = full_spectrum(spec)
        vb = v_entry_bounds(spec, sp.lambdas[0], sp.lambdas[1])
        gaps.append(max(abs(vb.v11_lo.value - 0.375), abs(vb.v11_hi.value - 0.375)))
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 2e-2


def test_riemann_false_small():
    spec = PathSpec(3, 1.05)
    sp = full_spectrum(spec)
    assert not v_entry_bounds(spec, sp.lambdas[0], sp.lambdas[1]).hyp_riemann


def test_sigma_forms_agree():
    for n in (4, 10, 25):
        for w in (2.0, 3.0, 7.0):
            spec = PathSpec(n, w)
            assert sigma_n_display(spec) == pytest.approx(sigma_n_from_b(spec), abs=1e-12)
    assert sigma_n(PathSpec(4, 2.0)).valid
    assert abs(sigma_n(PathSpec(6, 1e4)).value) < 1e-10


def test_sigma_invalid_below_threshold():
    est = sigma_n(PathSpec(4, 1.2))
    assert not est.valid and est.value is None


def test_lower_bound_at_odd_multiple():
    spec = PathSpec(30, 2.0)
    gap = full_spectrum(spec).gap
    est = fidelity_lower_bound(spec, math.pi / gap, gap)
    assert est.valid and est.value == pytest.approx(0.25, abs=1e-9)
    assert not fidelity_lower_bound(spec, 2 * math.pi / gap, gap).valid
    assert not fidelity_lower_bound(PathSpec(4, 1.2), 1.0, 1.0).valid


def test_lower_bound_zero_at_sqrt2():
    spec = PathSpec(40, math.sqrt(2) * (1 + 1e-12))
    if hyp_tau(spec):
        gap = full_spectrum(spec).gap
        assert fidelity_lower_bound(spec, math.pi / gap, gap).value == pytest.approx(0.0, abs=1e-9)


def test_upper_bound_limits():
    spec = PathSpec(8, 3.0)
    b1, b2 = bounds._b_pair(spec)
    at0 = fidelity_upper_bound(spec, 0.0, 1.0).value
    assert at0 >= (1 - 2 * min(b1, b2)) ** 2 > 0
    big = PathSpec(2000, 3.0)
    gap = full_spectrum(PathSpec(60, 3.0)).gap
    assert fidelity_upper_bound(big, math.pi / gap, gap).value == pytest.approx(1.0, abs=5e-3)


def test_envelope_matches_scalars():
    spec = PathSpec(9, 2.5)
    gap = full_spectrum(spec).gap
    ts = np.linspace(0, 40 * math.pi / gap, 97)
    lo, lo_ok, hi, hi_ok = envelope(spec, ts, gap)
    for k, t in enumerate(ts):
        el = fidelity_lower_bound(spec, t, gap)
        eh = fidelity_upper_bound(spec, t, gap)
        assert el.valid == lo_ok[k] and eh.valid == hi_ok[k]
        if el.valid:
            assert lo[k] == pytest.approx(el.value, abs=1e-12)
        assert hi[k] == pytest.approx(eh.value, abs=1e-12)


def test_envelope_holds_pointwise():
    spec = PathSpec(12, 2.0)
    sp = full_spectrum(spec)
    ts = np.linspace(0, 10 * math.pi / sp.gap, 1000)
    p = fidelity_values(sp, ts)
    lo, lo_ok, hi, hi_ok = envelope(spec, ts, sp.gap)
    assert np.all(p[lo_ok] >= lo[lo_ok] - 1e-12)
    assert np.all(p[hi_ok] <= hi[hi_ok] + 1e-12)


def test_readout_window():
    spec = PathSpec(20, 3.0)
    assert readout_window(spec, 1.0).value == pytest.approx(0.0, abs=1e-12)
    z1 = readout_window(spec, 0.99).value
    z2 = readout_window(spec, 0.95).value
    assert 0 < z1 < z2
    assert not readout_window(spec, 1.5).valid
    assert not readout_window(spec, 0.0).valid
    g = readout_gamma_heuristic(3.0)
    assert readout_window(PathSpec(400, 3.0), min(1.0, g + 1e-3)).valid


@pytest.mark.parametrize("n,expect", [(4, 1.6550), (5, 1.4656), (6, 1.4656), (7, 1.3667), (8, 1.3667)])
def test_w_threshold_values(n, expect):
    assert round(w_threshold(n), 4) == expect


@pytest.mark.parametrize("n", range(4, 9))
def test_tau_threshold_is_exact_boundary(n):
    r = tau_threshold(n)
    assert hyp_tau(PathSpec(n, r + 1e-9))
    assert not hyp_tau(PathSpec(n, r - 1e-6))


@pytest.mark.parametrize("n", range(4, 9))
def test_below_w_threshold_hypothesis_fails(n):
    assert not hyp_tau(PathSpec(n, w_threshold(n) - 1e-3))


@pytest.mark.xfail(strict=True, reason="the polynomial root lies below the exact hypothesis boundary (see tau_threshold)")
@pytest.mark.parametrize("n", range(4, 9))
def test_above_w_threshold_hypothesis_holds(n):
    spec = PathSpec(n, w_threshold(n) + 1e-6)
    assert spec.w + 1 / spec.w - tau_n(spec) >= 2 - 1e-9


def test_asymptotes():
    assert sensitivity_asymptotes(PathSpec(10, 2.0))[0] == 1.9375
    assert sensitivity_asymptotes(PathSpec(10, 4.0))[0] == 0.748046875
    # 2(w^4 - 2w^2 + 3)/w^6 evaluated exactly
    assert sensitivity_asymptotes(PathSpec(10, 2.0))[1] == pytest.approx(0.34375)
    assert sensitivity_asymptotes(PathSpec(10, 4.0))[1] == pytest.approx(0.1108, abs=1e-4)


def test_lambda_bounds_even_hold():
    for n in range(4, 41, 2):
        for w in (1.2, 2.0, 8.0):
            spec = PathSpec(n, w)
            sp = full_spectrum(spec)
            l1_lo, l2_lo, l2_hi = lambda_bounds(spec)
            assert sp.lambdas[0] >= l1_lo - 1e-12 and l2_lo - 1e-12 <= sp.lambdas[1] <= l2_hi + 1e-12


def test_odd_floor_holds():
    for n in range(3, 41, 2):
        for w in (1.2, 2.0, 8.0):
            spec = PathSpec(n, w)
            assert full_spectrum(spec).lambdas[1] >= lambda2_floor_odd(spec) - 1e-12
    with pytest.raises(DomainError):
        lambda2_floor_odd(PathSpec(4, 2.0))


def test_report_rows():
    spec = PathSpec(4, 2.0)
    sp = full_spectrum(spec)
    rep = bounds.bounds_report(spec, sp.lambdas[0], sp.lambdas[1], sp.gap)
    rows = {r[0]: r for r in rep.rows()}
    assert rows["gap_lo"][1] == pytest.approx(0.1) and rows["gap_hi"][1] == pytest.approx(0.9)
    assert rows["hyp_tau"][1] is True
    assert "w_threshold" in rows
    rep2 = bounds.bounds_report(PathSpec(4, 1.2), 2.0, 1.9)
    assert {r[0]: r for r in rep2.rows()}["hyp_tau"][1] is False
