import math
from fractions import Fraction

import numpy as np
import pytest

from pathloops.errors import DomainError
from pathloops.model import PathSpec, build_full
from pathloops.oracle import DenseSym, dense_eig
from pathloops.pgst import (
    check_gap_lemmas,
    level_x,
    next_target,
    no_pgst_sequence,
    recurrence_vectors,
    relation_residual,
    relation_scan,
    solve_h,
    top_three,
    witness_rows,
)

BASE = PathSpec(4, 1.0, relaxed=True)


def test_level_curve_at_one():
    # w = 1: lambda_j = 2cos((j-1)pi/n)
    lam = [2 * math.cos(k * math.pi / 4) for k in range(3)]
    assert level_x(BASE) == pytest.approx((lam[1] - lam[2]) / (lam[0] - lam[1]), abs=1e-12)


def test_level_curve_increasing():
    xs = [level_x(BASE.with_weight(w)) for w in np.linspace(1.0, 6.0, 40)]
    assert np.all(np.diff(xs) > 0)


def test_solve_first_target():
    w1 = solve_h(BASE, Fraction(8, 3), 1.0)
    assert w1 > 1
    spec = PathSpec(4, w1)
    vals = dense_eig(DenseSym.from_tridiag(build_full(spec)))[0]
    assert relation_residual(vals, 8, 3) <= 1e-11


def test_solve_rejects_low_target():
    with pytest.raises(DomainError):
        solve_h(BASE, Fraction(1, 1), 1.0)


def test_next_target_rules():
    x = level_x(BASE)
    for j in range(1, 6):
        f = next_target(x, j)
        assert f.numerator % 2 == 0 and f.denominator % 2 == 1
        assert x < f <= x + Fraction(1, 2**j)
    assert next_target(x, 2, upper=Fraction(8, 3)) < Fraction(8, 3)


def test_sequence():
    wit = no_pgst_sequence(BASE, 1.0, 3)
    ws = [x.w for x in wit]
    assert all(w > 1 for w in ws) and ws == sorted(ws, reverse=True)
    assert [(x.p, x.q) for x in wit] == [(8, 3), (18, 7), (22, 9)]
    for x in wit:
        assert x.residual <= 1e-9 * (x.p + x.q)
        assert sum(x.coefficients) == 0 and x.coefficients[1] % 2 == 1


def test_sequence_above_one():
    wit = no_pgst_sequence(PathSpec(6, 2.0), 2.0, 4)
    ws = [x.w for x in wit]
    assert all(w > 2.0 for w in ws) and all(a > b for a, b in zip(ws, ws[1:]))


def test_witness_rows_validation():
    with pytest.raises(DomainError):
        witness_rows(BASE, 1.0, 0)
    with pytest.raises(DomainError):
        witness_rows(BASE, 0.5, 2)


def test_top_three_orders():
    lam1, lam2, lam3, gap = top_three(PathSpec(7, 2.0))
    assert lam1 > lam2 > lam3 and gap == pytest.approx(lam1 - lam2, abs=1e-15)


@pytest.mark.parametrize("n", [3, 4, 5, 10, 17, 40])
@pytest.mark.parametrize("w", [1.01, 1.5, 4.0, 8.0])
def test_gap_lemmas(n, w):
    g23, g12 = check_gap_lemmas(PathSpec(n, w))
    assert g23 and g12


def test_recurrence_vectors_first_entry():
    y, z = recurrence_vectors(PathSpec(6, 2.0))
    assert y[0] == 1 and z[0] == 1
    assert np.allclose(y, y[::-1]) and np.allclose(z, -z[::-1])


def test_relation_scan_finds_witness():
    w1 = no_pgst_sequence(BASE, 1.0, 1)[0].w
    found = relation_scan(PathSpec(4, w1), max_coeff=12, tol=1e-9)
    assert (8, -11, 3) in [r.coefficients for r in found]
