"""Sensitivity figures and the peak statistics used to check their shape."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import dp_dt_values, dp_dw_values, fidelity_values, spectrum_of, time_grid
from .model import PathSpec
from .svgplot import Series, line_chart

# Fixed grid for the four reference panels. dt = 0.025 resolves the fastest
# beat (about 2*pi/6) with ~40 samples; T = 200 shows several weight-sensitivity
# growth cycles even at n=10, w=4 where the revival time is ~1e5.
FIGURE_CASES = ((5, 2.0), (5, 4.0), (10, 2.0), (10, 4.0))
FIGURE_T_MAX = 200.0
FIGURE_STEPS = 8000
GROWTH_WINDOWS = 6


def title(spec: PathSpec) -> str:
    return f"n={spec.n}, w={spec.w:g}"


@dataclass(frozen=True)
class TimePanel:
    t: np.ndarray
    p: np.ndarray
    dpdt: np.ndarray

    def svg(self, spec: PathSpec) -> str:
        return line_chart(
            [Series("dp/dt", "blue", self.t, self.dpdt), Series("fidelity", "red", self.t, self.p)],
            title(spec),
        )


@dataclass(frozen=True)
class WeightPanel:
    t: np.ndarray
    dpdw: np.ndarray

    def svg(self, spec: PathSpec) -> str:
        return line_chart([Series("dp/dw", "blue", self.t, self.dpdw)], title(spec))


def time_panel(spec: PathSpec, t_max: float = FIGURE_T_MAX, steps: int = FIGURE_STEPS) -> TimePanel:
    ts = time_grid(t_max, steps)
    sp = spectrum_of(spec)
    return TimePanel(ts, fidelity_values(sp, ts), dp_dt_values(sp, ts))


def weight_panel(spec: PathSpec, t_max: float = FIGURE_T_MAX, steps: int = FIGURE_STEPS) -> WeightPanel:
    ts = time_grid(t_max, steps)
    return WeightPanel(ts, dp_dw_values(spectrum_of(spec), ts))


def local_maxima(y: np.ndarray) -> np.ndarray:
    """Interior indices i with y[i-1] < y[i] >= y[i+1]."""
    y = np.asarray(y)
    mid = y[1:-1]
    return np.flatnonzero((mid > y[:-2]) & (mid >= y[2:])) + 1


def revival_peaks(p: np.ndarray, level: float = 0.5) -> np.ndarray:
    """Local maxima of the fidelity reaching ``level`` times its largest value."""
    idx = local_maxima(p)
    return idx[p[idx] >= level * p.max()]


def peaks_aligned(panel: TimePanel) -> tuple[bool, int, int]:
    """Each revival peak sits on a +/- sign change of dp/dt within one step.

    Returns (all aligned, peak count, misaligned count).
    """
    idx = revival_peaks(panel.p)
    d = panel.dpdt
    bad = int(np.sum(~((d[idx - 1] >= 0) & (d[idx + 1] <= 0))))
    return idx.size > 0 and bad == 0, int(idx.size), bad


def window_maxima(t: np.ndarray, y: np.ndarray, windows: int = GROWTH_WINDOWS) -> tuple[np.ndarray, np.ndarray]:
    """(window centres, max |y| per window) over equal slices of the grid."""
    parts = np.array_split(np.arange(t.size), windows)
    centres = np.array([0.5 * (t[q[0]] + t[q[-1]]) for q in parts])
    peaks = np.array([np.abs(y[q]).max() for q in parts])
    return centres, peaks


@dataclass(frozen=True)
class Growth:
    slope: float
    r2: float
    ratio: float  # mean of the last half of window maxima over the first half

    @property
    def linear(self) -> bool:
        return self.slope > 0 and self.r2 >= 0.7 and self.ratio > 1.5


def growth(panel: WeightPanel, windows: int = GROWTH_WINDOWS) -> Growth:
    x, y = window_maxima(panel.t, panel.dpdw, windows)
    slope, icept = np.polyfit(x, y, 1)
    resid = y - (slope * x + icept)
    ss = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss if ss > 0 else 0.0
    h = windows // 2
    return Growth(float(slope), float(r2), float(y[h:].mean() / y[:h].mean()))
