"""Invariant suite shared by ``verify`` and the acceptance tests.

Every check returns a ``CheckResult``.  ``fault`` adds a constant to each
computed eigenvalue before it is compared, so the harness can be shown to
catch a wrong spectrum.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bounds, figures, pgst
from .dynamics import dp_dt_values, dp_dw_values, eigen_derivatives, fidelity_values, spectrum_of
from .model import PathSpec, build_full
from .oracle import DenseSym, central_diff, dense_eig, split_reflection
from .spectrum import secular, theta_brackets

GRID_N = tuple(range(3, 41))
GRID_W = (1.2, 1.5, 2.0, 4.0, 8.0)
SLACK = 1e-12


@dataclass(frozen=True)
class CheckResult:
    key: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.key:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def grid():
    for n in GRID_N:
        for w in GRID_W:
            yield PathSpec(n, w)


def _lambdas(spec: PathSpec, fault: float) -> np.ndarray:
    return spectrum_of(spec).lambdas + fault


def check_oracle(fault: float = 0.0) -> tuple[bool, str]:
    worst_l = worst_v = 0.0
    t0 = time.perf_counter()
    for spec in grid():
        sp = spectrum_of(spec)
        m = DenseSym.from_tridiag(build_full(spec))
        vals, vecs = split_reflection(m, *dense_eig(m))
        worst_l = max(worst_l, float(np.max(np.abs(sp.lambdas + fault - vals))))
        worst_v = max(worst_v, float(np.max(np.abs(sp.v1sq - vecs[0] ** 2))))
    dt = time.perf_counter() - t0
    ok = worst_l <= 1e-9 and worst_v <= 1e-8 and dt < 30
    return ok, f"max |dlambda| {worst_l:.2e}, max |dv1sq| {worst_v:.2e}, {dt:.1f}s"


def check_lambda_sandwich(fault: float = 0.0) -> tuple[bool, str]:
    bad: list[str] = []
    kinds: set[str] = set()
    parities: set[str] = set()
    for spec in grid():
        lam = _lambdas(spec, fault)
        l1_lo, l2_lo, l2_hi = bounds.lambda_bounds(spec)
        hits = [
            name
            for name, broken in (
                ("lambda_1 floor", lam[0] < l1_lo - SLACK),
                ("lambda_2 ceiling", lam[1] > l2_hi + SLACK),
                ("lambda_2 floor", lam[1] < l2_lo - SLACK),
            )
            if broken
        ]
        if hits:
            bad.append(f"({spec.n},{spec.w:g})")
            kinds.update(hits)
            parities.add("odd" if spec.n % 2 else "even")
    if not bad:
        return True, "0 violations"
    where = "/".join(sorted(parities))
    return False, f"{len(bad)} violations of {', '.join(sorted(kinds))} ({where} n), e.g. {' '.join(bad[:6])}"


def check_gap_sandwich(fault: float = 0.0) -> tuple[bool, str]:
    bad = 0
    for spec in grid():
        gap = spectrum_of(spec).gap + fault
        lo, hi, lo_ok = bounds.gap_bounds(spec)
        eps = SLACK * gap
        if gap > hi + eps or (lo_ok and gap < lo - eps):
            bad += 1
    return bad == 0, f"{bad} violations"


def check_entry_bounds(fault: float = 0.0) -> tuple[bool, str]:
    bad = tested = 0
    for spec in grid():
        sp = spectrum_of(spec)
        lam = sp.lambdas + fault
        vb = bounds.v_entry_bounds(spec, lam[0], lam[1])
        if not vb.hyp_riemann:
            continue
        tested += 1
        for val, lo, hi in ((sp.v1sq[0], vb.v11_lo, vb.v11_hi), (sp.v1sq[1], vb.v12_lo, vb.v12_hi)):
            if lo.valid and val < lo.value - SLACK:
                bad += 1
            if hi.valid and val > hi.value + SLACK:
                bad += 1
    return bad == 0 and tested > 0, f"{tested} cases under the hypothesis, {bad} violations"


def check_interior_brackets(fault: float = 0.0) -> tuple[bool, str]:
    bad = 0
    worst = 0.0
    for spec in grid():
        sp = spectrum_of(spec)
        th = np.arccos(np.clip((sp.lambdas[2:] + fault) / 2.0, -1.0, 1.0))
        j, lo, hi = theta_brackets(spec.n)
        bad += int(np.sum((th < lo) | (th > hi)))
        worst = max(worst, float(np.max(np.abs(secular(spec.n, spec.w, th, j)))))
    return bad == 0 and worst <= 1e-10, f"{bad} out of bracket, max secular residual {worst:.2e}"


def check_fidelity_envelope(fault: float = 0.0, points: int = 1000) -> tuple[bool, str]:
    bad = compared = 0
    for spec in grid():
        sp = spectrum_of(spec)
        gap = sp.gap
        ts = np.linspace(0.0, 10.0 * math.pi / gap, points)
        p = fidelity_values(sp, ts) + fault
        lo, lo_ok, hi, hi_ok = bounds.envelope(spec, ts, gap)
        both = lo_ok & hi_ok
        compared += int(both.sum())
        bad += int(np.sum(both & ((p < lo - SLACK) | (p > hi + SLACK))))
    return bad == 0, f"{compared} points with both bounds valid, {bad} violations"


def check_revival(fault: float = 0.0) -> tuple[bool, str]:
    bad = tested = 0
    for n in GRID_N:
        for w in (1.5, 2.0, 4.0):
            spec = PathSpec(n, w)
            if w < math.sqrt(2.0) or not bounds.hyp_tau(spec):
                continue
            sp = spectrum_of(spec)
            floor = ((w * w - 2.0) / (w * w)) ** 2
            ts = np.array([(2 * k + 1) * math.pi for k in range(3)]) / (sp.gap + fault)
            p = fidelity_values(sp, ts)
            tested += 1
            bad += int(np.sum(p < floor))
    return bad == 0 and tested > 0, f"{tested} cases, {bad} revival samples below the floor"


GRAD_CASES = tuple(PathSpec(n, w) for n in (3, 4, 5, 8, 10, 15) for w in (1.2, 1.5, 2.0, 4.0))
GRAD_TIMES = (0.3, 1.7, 4.0, 9.5, 20.0)
H = 1e-6


def check_gradients(fault: float = 0.0) -> tuple[bool, str]:
    e_t = e_w = e_l = 0.0
    for spec in GRAD_CASES:
        sp = spectrum_of(spec)
        ts = np.array(GRAD_TIMES)
        dpdt = dp_dt_values(sp, ts)
        dpdw = dp_dw_values(sp, ts)
        up, dn = spectrum_of(spec.with_weight(spec.w + H)), spectrum_of(spec.with_weight(spec.w - H))
        for k, t in enumerate(ts):
            fd_t = central_diff(lambda x: float(fidelity_values(sp, x)[0]), t, H)
            e_t = max(e_t, abs(dpdt[k] + fault - fd_t))
            fd_w = (fidelity_values(up, t)[0] - fidelity_values(dn, t)[0]) / (2 * H)
            if abs(dpdw[k]) > 1e-3:
                e_w = max(e_w, abs(dpdw[k] + fault - fd_w) / abs(dpdw[k]))
        fd_l = (up.lambdas - dn.lambdas) / (2 * H)
        e_l = max(e_l, float(np.max(np.abs(eigen_derivatives(sp)[0] + fault - fd_l))))
    ok = e_t <= 1e-5 and e_w <= 1e-4 and e_l <= 1e-6
    return ok, f"dp/dt abs {e_t:.1e}, dp/dw rel {e_w:.1e}, dlambda/dw abs {e_l:.1e}"


DPDT_BOUNDS = {(10, 2.0): 1.9375, (10, 4.0): 0.748046875}
C_MAX = 5.0


def fitted_envelope_constant(fault: float = 0.0) -> tuple[float, dict]:
    """Smallest C >= 0 with max|dp/dt| <= bound + C/n on both figure grids."""
    c = 0.0
    peaks = {}
    for (n, w), bound in DPDT_BOUNDS.items():
        panel = figures.time_panel(PathSpec(n, w))
        peak = float(np.max(np.abs(panel.dpdt + fault)))
        peaks[(n, w)] = peak
        c = max(c, n * (peak - bound))
    return c, peaks


def check_time_envelope(fault: float = 0.0) -> tuple[bool, str]:
    c, peaks = fitted_envelope_constant(fault)
    shown = ", ".join(f"(n={n},w={w:g}) {v:.4f}" for (n, w), v in peaks.items())
    return c <= C_MAX, f"max |dp/dt| {shown}; fitted C = {c:.3g}"


def check_nopgst(fault: float = 0.0, count: int = 3) -> tuple[bool, str]:
    t0 = time.perf_counter()
    wit = pgst.no_pgst_sequence(PathSpec(4, 1.0, relaxed=True), 1.0, count)
    dt = time.perf_counter() - t0
    ws = [x.w for x in wit]
    ok = all(w > 1.0 for w in ws) and all(a > b for a, b in zip(ws, ws[1:]))
    worst = 0.0
    for x in wit:
        m = DenseSym.from_tridiag(build_full(PathSpec(4, x.w)))
        vals = dense_eig(m)[0] + fault
        r = pgst.relation_residual(vals, x.p, x.q)
        worst = max(worst, r / (x.p + x.q))
        ok = ok and x.p % 2 == 0 and x.q % 2 == 1 and x.residual <= 1e-9 * (x.p + x.q)
    ok = ok and worst <= 1e-9 and dt < 10
    pairs = " ".join(f"{x.p}/{x.q}" for x in wit)
    return ok, f"targets {pairs}, w = {', '.join(f'{w:.6f}' for w in ws)}, oracle residual/(p+q) {worst:.1e}"


THRESHOLDS = {4: 1.6550, 5: 1.4656, 6: 1.4656, 7: 1.3667, 8: 1.3667}


def check_thresholds(fault: float = 0.0) -> tuple[bool, str]:
    got = {n: bounds.w_threshold(n) + fault for n in THRESHOLDS}
    ok = all(round(got[n], 4) == THRESHOLDS[n] for n in THRESHOLDS)
    return ok, " ".join(f"n={n}:{v:.4f}" for n, v in got.items())


def check_eigvec_limit(fault: float = 0.0) -> tuple[bool, str]:
    worst = 0.0
    parts = []
    for n in (50, 100, 200, 400):
        sp = spectrum_of(PathSpec(n, 2.0))
        v11 = sp.v1sq[0] + fault
        worst = max(worst, n * abs(v11 - 0.375))
        parts.append(f"n={n}:{v11:.6f}/{sp.v1sq[1]:.6f}")
    return worst <= 5.0, f"{' '.join(parts)}; max n|v11^2-0.375| = {worst:.3f}"


def check_figures(fault: float = 0.0) -> tuple[bool, str]:
    ok = True
    notes = []
    for n, w in figures.FIGURE_CASES:
        spec = PathSpec(n, w)
        tp = figures.time_panel(spec)
        if fault:
            tp = figures.TimePanel(tp.t, tp.p, tp.dpdt + fault * 1e6)
        wp = figures.weight_panel(spec)
        same = tp.svg(spec) == figures.time_panel(spec).svg(spec) and wp.svg(spec) == figures.weight_panel(spec).svg(spec)
        aligned, peaks, bad = figures.peaks_aligned(tp)
        g = figures.growth(wp)
        ok = ok and same and aligned and g.linear
        notes.append(f"({n},{w:g}) peaks {peaks} misaligned {bad} slope {g.slope:.2e} r2 {g.r2:.2f}")
    return ok, "; ".join(notes)


CHECKS: tuple[tuple[int, str, Callable[..., tuple[bool, str]]], ...] = (
    (1, "spectral oracle equivalence", check_oracle),
    (2, "lambda_1/lambda_2 sandwich", check_lambda_sandwich),
    (3, "gap sandwich", check_gap_sandwich),
    (4, "end-entry bounds", check_entry_bounds),
    (5, "interior angle brackets", check_interior_brackets),
    (6, "fidelity envelope", check_fidelity_envelope),
    (7, "revival floor", check_revival),
    (8, "gradient checks", check_gradients),
    (9, "time-sensitivity envelope", check_time_envelope),
    (10, "no-PGST witnesses", check_nopgst),
    (11, "threshold roots", check_thresholds),
    (12, "eigenvector limit", check_eigvec_limit),
    (13, "figure structure", check_figures),
)


def run_check(key: int, fault: float = 0.0) -> CheckResult:
    for k, name, fn in CHECKS:
        if k == key:
            t0 = time.perf_counter()
            passed, detail = fn(fault)
            return CheckResult(k, name, bool(passed), detail, time.perf_counter() - t0)
    raise KeyError(key)


def run_all(fault: float = 0.0) -> list[CheckResult]:
    return [run_check(k, fault) for k, _, _ in CHECKS]
