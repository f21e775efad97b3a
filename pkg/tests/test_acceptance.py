"""Acceptance criteria 1-13, one printed PASS/FAIL line each.

Run directly (``python3 tests/test_acceptance.py``) for the bare report, or
through pytest, where each criterion is its own test.
"""

import sys

import pytest

from pathloops import checks, figures
from pathloops.cli import main

# lambda_2 >= w + 1/w - tau_n is false for odd n: the true floor for odd n is
# w + 1/w - (w^2-1)/(w^(n-1)-1), which lies below it.  The check is run as
# stated and expected to fail; see test_bounds.test_odd_floor_holds.
KNOWN_FALSE = {2: "stated lambda_2 floor does not hold for odd n"}


def _report(capsys, key):
    res = checks.run_check(key)
    with capsys.disabled():
        print("\n" + res.line())
    return res


@pytest.mark.parametrize(
    "key",
    [pytest.param(k, marks=pytest.mark.xfail(strict=True, reason=KNOWN_FALSE[k])) if k in KNOWN_FALSE else k for k, _, _ in checks.CHECKS],
    ids=[f"criterion_{k:02d}" for k, _, _ in checks.CHECKS],
)
def test_criterion(capsys, key):
    res = _report(capsys, key)
    assert res.passed, res.detail


def test_criterion_01_runtime():
    res = checks.run_check(1)
    assert res.seconds < 30


def test_criterion_10_runtime():
    res = checks.run_check(10)
    assert res.seconds < 10


def test_criterion_09_fitted_constant():
    # C is fitted on the two reference grids, not taken from theory
    c, peaks = checks.fitted_envelope_constant()
    assert 0.0 <= c <= checks.C_MAX
    for (n, w), peak in peaks.items():
        assert peak <= checks.DPDT_BOUNDS[(n, w)] + c / n


@pytest.mark.parametrize("n,w", figures.FIGURE_CASES)
@pytest.mark.parametrize("kind", ["time", "weight"])
def test_criterion_13_cli_plots_deterministic(tmp_path, n, w, kind):
    args = ["plot", "--n", str(n), "--w", f"{w:g}", "--kind", kind]
    args += ["--t-max", f"{figures.FIGURE_T_MAX:g}", "--steps", str(figures.FIGURE_STEPS)]
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_fault_injection_is_detected():
    failed = {r.key for r in checks.run_all(fault=1e-6) if not r.passed}
    assert {1, 3, 5, 8}.issubset(failed)


if __name__ == "__main__":
    results = checks.run_all()
    for r in results:
        note = f"  [known: {KNOWN_FALSE[r.key]}]" if r.key in KNOWN_FALSE and not r.passed else ""
        print(r.line() + note)
    sys.exit(0 if all(r.passed for r in results) else 1)
