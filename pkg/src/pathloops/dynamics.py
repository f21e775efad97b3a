"""End-to-end transfer fidelity and its derivatives in t and w.

With a_j = (-1)^(j-1) v_{1j}^2 the (1,n) entry of exp(itA) is
sum_j a_j e^{it lambda_j}.  All phases are taken relative to lambda_1,
which changes only a global phase, and the lambda_2 offset uses the
full-precision gap so the two-level beat survives at readout times of
order w^(n-2).

The double sums for dp/dt and dp/dw factor into products of single sums:
for real c_j, sum_{j,l} c_j e_l sin(t(d_j - d_l)) = Im(C conj(E)) with
C = sum c_j e^{itd_j}, E = sum e_l e^{itd_l}.  ``dp_dt_pairwise`` and
``dp_dw_pairwise`` keep the literal O(n^2) sums for cross-checks.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError
from .model import PathSpec
from .phase import reduce_2pi
from .spectrum import Spectrum, full_spectrum


@dataclass(frozen=True)
class FidelitySample:
    t: float
    p: float


@dataclass(frozen=True)
class SensitivitySample:
    t: float
    value: float
    kind: Literal["time", "weight"]


@functools.lru_cache(maxsize=512)
def spectrum_of(spec: PathSpec) -> Spectrum:
    return full_spectrum(spec)


def _phases(sp: Spectrum, t) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of t*(lambda_j - lambda_1); shape (len(t), n)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    ph = reduce_2pi(t[:, None], sp.offsets()[None, :])
    return np.cos(ph), np.sin(ph)


def _signed(sp: Spectrum) -> np.ndarray:
    return sp.parity * sp.v1sq


def fidelity_values(sp: Spectrum, t) -> np.ndarray:
    c, s = _phases(sp, t)
    a = _signed(sp)
    re, im = c @ a, s @ a
    return re * re + im * im


def fidelity(spec: PathSpec, t: float) -> FidelitySample:
    return FidelitySample(float(t), float(fidelity_values(spectrum_of(spec), t)[0]))


def dp_dt_values(sp: Spectrum, t) -> np.ndarray:
    c, s = _phases(sp, t)
    a = _signed(sp)
    ad = a * sp.offsets()
    # 2 Im(S conj(S')) with S = sum a e^{itd}, S' = sum a d e^{itd}
    return 2.0 * ((s @ a) * (c @ ad) - (c @ a) * (s @ ad))


def dp_dt(spec: PathSpec, t: float) -> SensitivitySample:
    return SensitivitySample(float(t), float(dp_dt_values(spectrum_of(spec), t)[0]), "time")


def dp_dt_pairwise(sp: Spectrum, t: float) -> float:
    """2 sum_{j,l} v_j^2 v_l^2 (-1)^(j+l) lambda_l sin(t(lambda_j - lambda_l))."""
    d = sp.offsets()
    a = _signed(sp)
    diff = reduce_2pi(t, d[:, None] - d[None, :])
    return float(2.0 * np.sum(np.outer(a, a) * sp.lambdas[None, :] * np.sin(diff)))


def eigen_derivatives(spec_or_sp) -> tuple[np.ndarray, np.ndarray]:
    """(d lambda_k/dw, d v_{1k}/dw) with first entries taken positive."""
    sp = spectrum_of(spec_or_sp) if isinstance(spec_or_sp, PathSpec) else spec_or_sp
    v = sp.v1
    d = sp.offsets()
    n = sp.n
    dv = np.empty(n)
    for k in range(n):
        same = np.arange(k % 2, n, 2)
        same = same[same != k]
        dv[k] = v[k] * np.sum(2.0 * sp.v1sq[same] / (d[k] - d[same]))
    return 2.0 * sp.v1sq, dv


def dp_dw_values(sp: Spectrum, t, dv: np.ndarray | None = None) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if dv is None:
        dv = eigen_derivatives(sp)[1]
    c, s = _phases(sp, t)
    a = _signed(sp)
    bvec = sp.parity * sp.v1 * dv
    tvec = sp.parity * sp.v1sq**2
    # first term: 4 Re(S conj(B)); second: 4t Im(S conj(T))
    first = 4.0 * ((c @ a) * (c @ bvec) + (s @ a) * (s @ bvec))
    second = 4.0 * t * ((s @ a) * (c @ tvec) - (c @ a) * (s @ tvec))
    return first + second


def dp_dw(spec: PathSpec, t: float) -> SensitivitySample:
    return SensitivitySample(float(t), float(dp_dw_values(spectrum_of(spec), t)[0]), "weight")


def dp_dw_pairwise(sp: Spectrum, t: float) -> float:
    """The weight-derivative double sums evaluated literally, O(n^2)."""
    n = sp.n
    d = sp.offsets()
    v, v2 = sp.v1, sp.v1sq
    sign = np.outer(sp.parity, sp.parity)  # (-1)^(k+j)
    diff = reduce_2pi(t, d[None, :] - d[:, None])  # [k, j] -> t(lambda_j - lambda_k)
    idx = np.arange(n)
    same = (idx[:, None] + idx[None, :]) % 2 == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(same & (idx[:, None] != idx[None, :]), 2.0 / (d[:, None] - d[None, :]), 0.0)
    inner = (inv * v2[None, :]).sum(axis=1) * v  # [k]
    first = 4.0 * np.sum(sign * v2[None, :] * (v * inner)[:, None] * np.cos(diff))
    second = 4.0 * t * np.sum(sign * v2[None, :] * (v2**2)[:, None] * np.sin(diff))
    return float(first + second)


Kind = Literal["fidelity", "dpdt", "dpdw"]


def time_grid(t_max: float, steps: int) -> np.ndarray:
    """``steps`` equal intervals on [0, t_max], so steps + 1 points."""
    if not (np.isfinite(t_max) and t_max > 0):
        raise DomainError(f"t_max must be positive and finite, got {t_max}")
    if isinstance(steps, bool) or int(steps) != steps or steps < 1:
        raise DomainError(f"steps must be a positive integer, got {steps}")
    ts = np.linspace(0.0, t_max, int(steps) + 1)
    ts[-1] = t_max
    return ts


def series_values(spec: PathSpec, t_max: float, steps: int, kind: Kind) -> tuple[np.ndarray, np.ndarray]:
    ts = time_grid(t_max, steps)
    sp = spectrum_of(spec)
    if kind == "fidelity":
        vals = fidelity_values(sp, ts)
    elif kind == "dpdt":
        vals = dp_dt_values(sp, ts)
    elif kind == "dpdw":
        vals = dp_dw_values(sp, ts)
    else:
        raise DomainError(f"unknown series kind {kind!r}")
    return ts, vals


def series(spec: PathSpec, t_max: float, steps: int, kind: Kind = "fidelity"):
    ts, vals = series_values(spec, t_max, steps, kind)
    if kind == "fidelity":
        return [FidelitySample(float(t), float(p)) for t, p in zip(ts, vals)]
    label = "time" if kind == "dpdt" else "weight"
    return [SensitivitySample(float(t), float(v), label) for t, v in zip(ts, vals)]
