import math

import numpy as np
import pytest

from pathloops.dynamics import (
    dp_dt,
    dp_dt_pairwise,
    dp_dt_values,
    dp_dw,
    dp_dw_pairwise,
    dp_dw_values,
    eigen_derivatives,
    fidelity,
    fidelity_values,
    series,
    series_values,
    spectrum_of,
    time_grid,
)
from pathloops.errors import DomainError
from pathloops.model import PathSpec, build_full
from pathloops.oracle import DenseSym, central_diff, dense_eig, dense_expm_entry


@pytest.mark.parametrize("n,w", [(3, 2.0), (6, 1.5), (11, 3.0), (20, 1.2)])
def test_fidelity_matches_dense_expm(n, w):
    spec = PathSpec(n, w)
    m = DenseSym.from_tridiag(build_full(spec))
    eig = dense_eig(m)
    for t in (0.0, 0.4, 3.3, 17.0, 250.0):
        z = dense_expm_entry(m, t, 0, n - 1, eig)
        assert fidelity(spec, t).p == pytest.approx(abs(z) ** 2, abs=1e-12)


def test_fidelity_range_and_start():
    sp = spectrum_of(PathSpec(5, 2.0))
    p = fidelity_values(sp, np.linspace(0, 60, 6001))
    assert p[0] == pytest.approx(0.0, abs=1e-15)
    assert np.all((p >= -1e-15) & (p <= 1 + 1e-12))


@pytest.mark.parametrize("n,w", [(4, 2.0), (9, 1.7), (15, 4.0)])
def test_dp_dt_against_pairwise_and_fd(n, w):
    spec = PathSpec(n, w)
    sp = spectrum_of(spec)
    for t in (0.2, 1.9, 7.5, 31.0):
        v = dp_dt(spec, t).value
        assert v == pytest.approx(dp_dt_pairwise(sp, t), abs=1e-12)
        fd = central_diff(lambda x: float(fidelity_values(sp, x)[0]), t, 1e-6)
        assert v == pytest.approx(fd, abs=1e-5)


@pytest.mark.parametrize("n,w", [(4, 2.0), (9, 1.7), (15, 4.0)])
def test_dp_dw_against_pairwise_and_fd(n, w):
    spec = PathSpec(n, w)
    sp = spectrum_of(spec)
    up = spectrum_of(spec.with_weight(w + 1e-6))
    dn = spectrum_of(spec.with_weight(w - 1e-6))
    for t in (0.2, 1.9, 7.5, 31.0):
        v = dp_dw(spec, t).value
        assert v == pytest.approx(dp_dw_pairwise(sp, t), abs=1e-10)
        fd = (fidelity_values(up, t)[0] - fidelity_values(dn, t)[0]) / 2e-6
        if abs(v) > 1e-3:
            assert abs(v - fd) <= 1e-4 * abs(v)


@pytest.mark.parametrize("n,w", [(3, 2.0), (8, 1.3), (13, 5.0)])
def test_eigen_derivatives(n, w):
    spec = PathSpec(n, w)
    h = 1e-6
    dlam, dv = eigen_derivatives(spec)
    up, dn = spectrum_of(spec.with_weight(w + h)), spectrum_of(spec.with_weight(w - h))
    assert dlam == pytest.approx((up.lambdas - dn.lambdas) / (2 * h), abs=1e-6)
    assert dv == pytest.approx((np.sqrt(up.v1sq) - np.sqrt(dn.v1sq)) / (2 * h), abs=1e-6)
    # trace of dA/dw is 2
    assert math.fsum(dlam) == pytest.approx(2.0, abs=1e-12)


def test_large_time_phases():
    # readout-scale times; the accurate gap keeps the two-level beat
    spec = PathSpec(30, 4.0)
    sp = spectrum_of(spec)
    t = math.pi / sp.gap
    assert t > 1e15
    assert fidelity(spec, t).p > 0.5
    assert fidelity(spec, 2 * t).p < 1e-3


def test_time_grid():
    ts = time_grid(60.0, 6000)
    assert ts.size == 6001 and ts[0] == 0.0 and ts[-1] == 60.0
    for bad in ((0.0, 10), (math.inf, 10), (1.0, 0), (1.0, 2.5)):
        with pytest.raises(DomainError):
            time_grid(*bad)


def test_series_kinds():
    spec = PathSpec(5, 2.0)
    ts, p = series_values(spec, 10.0, 100, "fidelity")
    _, d = series_values(spec, 10.0, 100, "dpdt")
    _, g = series_values(spec, 10.0, 100, "dpdw")
    sp = spectrum_of(spec)
    assert np.array_equal(p, fidelity_values(sp, ts))
    assert np.array_equal(d, dp_dt_values(sp, ts))
    assert np.array_equal(g, dp_dw_values(sp, ts))
    rows = series(spec, 10.0, 4, "dpdw")
    assert len(rows) == 5 and rows[0].kind == "weight"
    with pytest.raises(DomainError):
        series_values(spec, 10.0, 10, "bogus")
