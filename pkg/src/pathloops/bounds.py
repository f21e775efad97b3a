"""Analytic estimates for the top of the spectrum and for the fidelity.

Each bound is a plain function of (n, w) and, where needed, the computed
eigenvalues.  Bounds that only hold under a hypothesis return an
``Estimate`` carrying a validity flag and a reason instead of raising, so a
report can list everything side by side.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, NumericalConsistencyError
from .model import PathSpec, recip_pow_m1
from .phase import reduce_2pi, reduced_angle

EVEN_MULTIPLE_TOL = 1e-9
SIGMA_AGREE_TOL = 1e-12


@dataclass(frozen=True)
class Estimate:
    value: Optional[float]
    valid: bool
    reason: str = ""

    @classmethod
    def ok(cls, value: float) -> "Estimate":
        return cls(float(value), True)

    @classmethod
    def invalid(cls, reason: str, value: Optional[float] = None) -> "Estimate":
        return cls(None if value is None else float(value), False, reason)


def _s(w: float) -> float:
    return w + 1.0 / w


def tau_n(spec: PathSpec) -> float:
    w = spec.w
    return (w + 1.0) ** 2 * (w - 1.0) / w * recip_pow_m1(w, 2 * spec.half)


def hyp_tau(spec: PathSpec, strict: bool = False) -> bool:
    """w + 1/w - tau_n >= 2 (or > 2 with ``strict``)."""
    lhs = _s(spec.w) - tau_n(spec)
    return lhs > 2.0 if strict else lhs >= 2.0


def lambda_bounds(spec: PathSpec) -> tuple[float, float, float]:
    """(lambda_1 floor, lambda_2 floor, lambda_2 ceiling) as stated.

    The lambda_2 floor w + 1/w - tau_n is what the stated bound claims; it
    does not hold for odd n (see ``lambda2_floor_odd``).
    """
    w = spec.w
    s = _s(w)
    l1_lo = s + (w - 1.0) ** 2 * (w + 1.0) / w * recip_pow_m1(w, 2 * spec.half)
    return l1_lo, s - tau_n(spec), s


def lambda2_floor_odd(spec: PathSpec) -> float:
    """A lambda_2 floor that does hold for odd n: s - (w^2-1)/(w^(n-1)-1)."""
    if spec.n % 2 == 0:
        raise DomainError("only defined for odd n")
    w = spec.w
    return _s(w) - (w * w - 1.0) * recip_pow_m1(w, spec.n - 1)


def gap_bounds(spec: PathSpec) -> tuple[float, float, bool]:
    """(lo, hi, lo_meaningful) for lambda_1 - lambda_2.

    ``lo_meaningful`` is False for odd n when 2(sqrt2-1)w^2 <= 1, where the
    odd-n lower bound is not positive.
    """
    n, w = spec.n, spec.w
    if n % 2 == 0:
        r = recip_pow_m1(w, n)
        lo = (w - 1.0) ** 2 * (w + 1.0) / w * r
        hi = 2.0 * (w - 1.0) * (w + 1.0) ** 3 / (w * w) * r
        return lo, hi, True
    c = 2.0 * (math.sqrt(2.0) - 1.0) * w * w
    lo = (c - 1.0) * (w * w - 1.0) / w * recip_pow_m1(w, n + 1)
    hi = 4.0 * (w - 1.0) * (w + 1.0) ** 2 / (w * w) * recip_pow_m1(w, n - 1)
    return lo, hi, c > 1.0


def b_func(lam: float, n: int) -> float:
    if not lam > 2.0:
        raise DomainError(f"b(lambda) needs lambda > 2, got {lam}")
    r = math.sqrt(lam * lam - 4.0)
    return r / (lam + r + 16.0 / ((n - 1) * r))


def b_at_limit(spec: PathSpec) -> float:
    """b(w + 1/w) in closed form: (w^2-1)/(2w^2) - 4/((n-1)w^2) / (1 + 8/((n-1)(w^2-1)))."""
    n, w = spec.n, spec.w
    w2 = w * w
    return (w2 - 1.0) / (2.0 * w2) - 4.0 / ((n - 1) * w2) / (1.0 + 8.0 / ((n - 1) * (w2 - 1.0)))


def riemann_hypothesis(n: int, lam2: float) -> bool:
    if not lam2 > 2.0:
        return False
    r = math.sqrt(lam2 * lam2 - 4.0)
    return n - 1 >= 16.0 / (r * (lam2 + r))


@dataclass(frozen=True)
class VEntryBounds:
    v11_lo: Estimate
    v11_hi: Estimate
    v12_lo: Estimate
    v12_hi: Estimate
    hyp_riemann: bool


def _entry_pair(lam: float, n: int) -> tuple[Estimate, Estimate]:
    if not lam > 2.0:
        bad = Estimate.invalid(f"lambda = {lam} <= 2")
        return bad, bad
    r = math.sqrt(lam * lam - 4.0)
    main = (lam + r) / r
    corr = 16.0 / ((n - 1) * (lam * lam - 4.0))
    lo = Estimate.ok(1.0 / (main + corr))
    den = main - corr
    hi = Estimate.ok(1.0 / den) if den > 0 else Estimate.invalid("upper-bound denominator <= 0")
    return lo, hi


def v_entry_bounds(spec: PathSpec, lam1: float, lam2: float) -> VEntryBounds:
    v11_lo, v11_hi = _entry_pair(lam1, spec.n)
    v12_lo, v12_hi = _entry_pair(lam2, spec.n)
    return VEntryBounds(v11_lo, v11_hi, v12_lo, v12_hi, riemann_hypothesis(spec.n, lam2))


def sigma_n_display(spec: PathSpec) -> float:
    """sigma_n evaluated term by term from its displayed two-factor form."""
    n, w = spec.n, spec.w
    tau = tau_n(spec)
    s = _s(w)
    d = w - 1.0 / w
    x = s - tau
    r = math.sqrt(x * x - 4.0)
    first = tau / ((2.0 * w + 16.0 / ((n - 1) * d)) * (x + r + 16.0 / ((n - 1) * r)))
    bracket = d + s * (-2.0 * s + tau) / (d + r) + 16.0 * (-2.0 * s + tau) / ((n - 1) * d * r)
    return first * bracket


def sigma_n_from_b(spec: PathSpec) -> float:
    s = _s(spec.w)
    return b_func(s - tau_n(spec), spec.n) - b_func(s, spec.n)


def sigma_n(spec: PathSpec) -> Estimate:
    """sigma_n, cross-checked against b(s - tau_n) - b(s)."""
    s = _s(spec.w)
    tau = tau_n(spec)
    if not s - tau >= 2.0:
        return Estimate.invalid("w + 1/w - tau_n < 2")
    if s - tau == 2.0:
        return Estimate.invalid("w + 1/w - tau_n == 2: sqrt term vanishes")
    disp = sigma_n_display(spec)
    alt = sigma_n_from_b(spec)
    if abs(disp - alt) > SIGMA_AGREE_TOL:
        raise NumericalConsistencyError(f"sigma_n forms disagree: {disp!r} vs {alt!r}")
    return Estimate.ok(disp)


def _alpha(t: float, gap: float) -> float:
    return reduced_angle(t, gap)


def _near_even_multiple(alpha: float) -> bool:
    return min(alpha, 2.0 * math.pi - alpha) <= EVEN_MULTIPLE_TOL


def lower_bound_rhs(spec: PathSpec, alpha: float) -> float:
    """Right side of the stated lower bound on |v11^2 - v12^2 e^{-i alpha}| + v11^2 + v12^2 - 1.

    sqrt((1-cos a)/2) is evaluated as |sin(a/2)| and (1-cos^2 a)/sqrt(8(1-cos a))
    as sin^2(a)/(4|sin(a/2)|); both are algebraically identical to the
    stated forms but free of cancellation near a = 0.
    """
    n, w = spec.n, spec.w
    w2 = w * w
    sh = abs(math.sin(0.5 * alpha))
    coef = (w2 - 1.0) * math.sin(alpha) ** 2 / (4.0 * sh)
    corr = -8.0 / ((n - 1) * w2) / (1.0 + 8.0 / ((n - 1) * (w2 - 1.0)))
    return (w2 - 1.0) / w2 * sh - 1.0 / w2 + coef * (corr + sigma_n(spec).value)


def fidelity_lower_bound(spec: PathSpec, t: float, gap: float) -> Estimate:
    """Squared lower bound on p(t); ``gap`` is lambda_1 - lambda_2."""
    if not hyp_tau(spec):
        return Estimate.invalid("w + 1/w - tau_n < 2")
    alpha = _alpha(t, gap)
    if _near_even_multiple(alpha):
        return Estimate.invalid("alpha is an even multiple of pi")
    sig = sigma_n(spec)
    if not sig.valid:
        return Estimate.invalid(sig.reason)
    rhs = lower_bound_rhs(spec, alpha)
    if rhs < 0:
        return Estimate.invalid("bound is vacuous (negative right side)", rhs * rhs)
    return Estimate.ok(rhs * rhs)


def _b_pair(spec: PathSpec) -> tuple[float, float]:
    s = _s(spec.w)
    return b_func(s, spec.n), b_func(s - tau_n(spec), spec.n)


def fidelity_upper_bound(spec: PathSpec, t: float, gap: float) -> Estimate:
    if not hyp_tau(spec, strict=True):
        return Estimate.invalid("w + 1/w - tau_n <= 2")
    b1, b2 = _b_pair(spec)
    alpha = _alpha(t, gap)
    # b1^2 + b2^2 - 2 b1 b2 cos(a) written as (b1-b2)^2 + 4 b1 b2 sin^2(a/2)
    rad = (b1 - b2) ** 2 + 4.0 * b1 * b2 * math.sin(0.5 * alpha) ** 2
    return Estimate.ok((math.sqrt(rad) + 1.0 - b1 - b2) ** 2)


def readout_window(spec: PathSpec, gamma: float) -> Estimate:
    """Bound on |z| where alpha = (2k+1)pi + z whenever p(t) = gamma^2."""
    if not 0.0 <= gamma <= 1.0:
        return Estimate.invalid(f"gamma = {gamma} outside [0, 1]")
    if not hyp_tau(spec, strict=True):
        return Estimate.invalid("w + 1/w - tau_n <= 2")
    b1, b2 = _b_pair(spec)
    if gamma < 1.0 - b1 - b2:
        return Estimate.invalid("gamma below 1 - b(s) - b(s - tau_n)")
    g = 1.0 - gamma
    arg = 1.0 - g * (b1 + b2) / (b1 * b2) + g * g / (2.0 * b1 * b2)
    if arg < 0:
        return Estimate.invalid("arccos argument is negative")
    return Estimate.ok(math.acos(min(arg, 1.0)))


def readout_gamma_heuristic(w: float) -> float:
    """Large-n sufficient level for the readout-window hypothesis."""
    return (w * w + math.sqrt(2.0) - 1.0) / (math.sqrt(2.0) * w * w)


def threshold_poly(x: float, n: int) -> float:
    """x^(2m+2) - x^(2m+1) - 2x^2 - x - 1 with m = ceil(n/2), nested."""
    m = (n + 1) // 2
    # x^(2m+1) (x - 1) - ((2x + 1) x + 1)
    return x ** (2 * m + 1) * (x - 1.0) - ((2.0 * x + 1.0) * x + 1.0)


def _threshold_scaled(x: float, n: int) -> float:
    # threshold_poly / x^(2m+1): same sign, no overflow for large n
    m = (n + 1) // 2
    return (x - 1.0) - ((2.0 * x + 1.0) * x + 1.0) * x ** -(2 * m + 1)


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise DomainError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def w_threshold(n: int, tol: float = 1e-10) -> float:
    """Positive root of the threshold polynomial for this n."""
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    return _bisect(lambda x: _threshold_scaled(x, n), 1.0 + 1e-12, 4.0, tol)


def tau_threshold(n: int, tol: float = 1e-12) -> float:
    """Smallest w > 1 with w + 1/w - tau_n >= 2.

    Equivalent to (w-1)(w^(2m) - 1) >= (w+1)^2 with m = ceil(n/2).
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    m = (n + 1) // 2
    # divided through by x^(2m) to stay finite for large n
    return _bisect(lambda x: (x - 1.0) * (1.0 - x ** -(2 * m)) - (x + 1.0) ** 2 * x ** -(2 * m), 1.0 + 1e-12, 4.0, tol)


def sensitivity_asymptotes(spec: PathSpec) -> tuple[float, float, float]:
    """(dp/dt bound, t-coefficient of the dp/dw bound, n^3 coefficient of the dp/dw bound)."""
    w = spec.w
    dpdt = (2.0 * w**4 + 4.0 * w**3 - 2.0) / w**5
    dpdw_t = 2.0 * (w**4 - 2.0 * w**2 + 3.0) / w**6
    return dpdt, dpdw_t, 8.0 / (3.0 * math.pi**2)


@dataclass(frozen=True)
class BoundsReport:
    n: int
    w: float
    tau_n: float
    sigma_n: Estimate
    gap_lo: float
    gap_hi: float
    gap_lo_meaningful: bool
    lambda1_lo: float
    lambda2_lo: float
    lambda2_hi: float
    v11_lo: Estimate
    v11_hi: Estimate
    v12_lo: Estimate
    v12_hi: Estimate
    hyp_tau: bool
    hyp_riemann: bool
    dpdt_asym: float
    dpdw_t_coeff: float
    dpdw_n_cubed_coeff: float
    w_threshold: float
    tau_threshold: float
    computed: dict = field(default_factory=dict)

    def rows(self) -> list[tuple[str, Optional[float | bool], bool, str]]:
        """(name, value, valid, note) rows in a fixed order."""
        out = []
        for key, val in asdict(self).items():
            if key in ("n", "w", "computed"):
                continue
            if isinstance(val, dict):
                out.append((key, val["value"], val["valid"], val["reason"]))
            elif isinstance(val, bool):
                out.append((key, val, True, "flag"))
            else:
                out.append((key, float(val), True, ""))
        for key, val in self.computed.items():
            out.append((key, float(val), True, "computed"))
        return out


def bounds_report(spec: PathSpec, lam1: float, lam2: float, gap: Optional[float] = None) -> BoundsReport:
    l1_lo, l2_lo, l2_hi = lambda_bounds(spec)
    g_lo, g_hi, g_ok = gap_bounds(spec)
    vb = v_entry_bounds(spec, lam1, lam2)
    dpdt, dpdw_t, dpdw_n3 = sensitivity_asymptotes(spec)
    computed = {"lambda1": lam1, "lambda2": lam2, "gap": lam1 - lam2 if gap is None else gap}
    return BoundsReport(
        n=spec.n,
        w=spec.w,
        tau_n=tau_n(spec),
        sigma_n=sigma_n(spec),
        gap_lo=g_lo,
        gap_hi=g_hi,
        gap_lo_meaningful=g_ok,
        lambda1_lo=l1_lo,
        lambda2_lo=l2_lo,
        lambda2_hi=l2_hi,
        v11_lo=vb.v11_lo,
        v11_hi=vb.v11_hi,
        v12_lo=vb.v12_lo,
        v12_hi=vb.v12_hi,
        hyp_tau=hyp_tau(spec),
        hyp_riemann=vb.hyp_riemann,
        dpdt_asym=dpdt,
        dpdw_t_coeff=dpdw_t,
        dpdw_n_cubed_coeff=dpdw_n3,
        w_threshold=w_threshold(spec.n),
        tau_threshold=tau_threshold(spec.n),
        computed=computed,
    )


def envelope(spec: PathSpec, ts, gap: float):
    """Vectorised lower/upper fidelity bounds on a time grid.

    Returns (lo, lo_valid, hi, hi_valid) arrays matching
    ``fidelity_lower_bound`` and ``fidelity_upper_bound`` pointwise.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    alpha = np.mod(reduce_2pi(ts, gap), 2.0 * math.pi)
    lo = np.full(ts.shape, np.nan)
    hi = np.full(ts.shape, np.nan)
    lo_ok = np.zeros(ts.shape, dtype=bool)
    hi_ok = np.zeros(ts.shape, dtype=bool)
    n, w = spec.n, spec.w
    if hyp_tau(spec) and sigma_n(spec).valid:
        w2 = w * w
        sh = np.abs(np.sin(0.5 * alpha))
        away = np.minimum(alpha, 2.0 * math.pi - alpha) > EVEN_MULTIPLE_TOL
        with np.errstate(divide="ignore", invalid="ignore"):
            coef = (w2 - 1.0) * np.sin(alpha) ** 2 / (4.0 * sh)
        corr = -8.0 / ((n - 1) * w2) / (1.0 + 8.0 / ((n - 1) * (w2 - 1.0)))
        rhs = (w2 - 1.0) / w2 * sh - 1.0 / w2 + coef * (corr + sigma_n(spec).value)
        lo_ok = away & (rhs >= 0)
        lo = np.where(lo_ok, rhs * rhs, np.nan)
    if hyp_tau(spec, strict=True):
        b1, b2 = _b_pair(spec)
        rad = (b1 - b2) ** 2 + 4.0 * b1 * b2 * np.sin(0.5 * alpha) ** 2
        hi = (np.sqrt(rad) + 1.0 - b1 - b2) ** 2
        hi_ok = np.ones(ts.shape, dtype=bool)
    return lo, lo_ok, hi, hi_ok
