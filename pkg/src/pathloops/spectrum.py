"""Eigenvalues and squared end-vertex eigenvector entries of A(w).

lambda_1 and lambda_2 come from Sturm bisection on the half matrices with
analytic brackets; lambda_3..lambda_n come from the secular equations in the
angle theta (lambda = 2 cos theta) on provably isolating brackets.  The full
matrix is never diagonalised here; ``oracle`` does that for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import (
    DegenerateRecurrenceError,
    DomainError,
    InternalError,
    NumericalConsistencyError,
)
from .model import PathSpec, SymTridiag, build_full, build_half_minus, build_half_plus, recip_pow_m1

LAMBDA_TOL = 1e-12
THETA_TOL = 1e-13
NORM_TOL = 1e-10
NORM_FAIL = 1e-8
# below this weight margin the analytic lambda_1/lambda_2 brackets are not used
RELAXED_MARGIN = 1e-6


# -- Sturm bisection -------------------------------------------------------


def sturm_count(m: SymTridiag, x) -> np.ndarray:
    """Number of eigenvalues of ``m`` strictly below each entry of ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = m.diag
    e2 = m.off**2
    tiny = np.finfo(float).tiny * 1e4
    q = d[0] - x
    count = (q < 0).astype(int)
    for k in range(1, m.order):
        q = np.where(q == 0.0, -tiny, q)
        q = d[k] - x - e2[k - 1] / q
        count += q < 0
    return count


def _kth_largest(m: SymTridiag, k: int, lo: float, hi: float, tol: float) -> float:
    # invariant: lambda_k in [lo, hi]; count_below(x) <= order-k  <=>  x <= lambda_k
    target = m.order - k
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sturm_count(m, mid)[0] <= target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def eigenvalues_sturm(
    m: SymTridiag,
    k: Optional[Iterable[int]] = None,
    tol: float = LAMBDA_TOL,
    bracket: Optional[tuple[float, float]] = None,
) -> list[float]:
    """Eigenvalues of a symmetric tridiagonal matrix by sign-count bisection.

    ``k`` lists 1-based indices in descending order of eigenvalue (1 is the
    largest); the default is all of them.  Bisection continues past ``tol``
    down to machine resolution when it is cheap, so the returned values are
    accurate to ``tol`` absolute at worst.
    """
    idx = list(range(1, m.order + 1)) if k is None else [int(i) for i in k]
    for i in idx:
        if not 1 <= i <= m.order:
            raise DomainError(f"eigenvalue index {i} outside 1..{m.order}")
    g_lo, g_hi = m.gershgorin()
    pad = 1e-12 * max(1.0, abs(g_lo), abs(g_hi))
    lo, hi = (g_lo - pad, g_hi + pad) if bracket is None else bracket
    cnt = sturm_count(m, [lo, hi])
    if cnt[0] > m.order - max(idx) or cnt[1] < m.order - min(idx) + 1:
        raise InternalError(f"bracket [{lo}, {hi}] does not contain eigenvalues {idx}")
    res_tol = min(tol, 4 * np.finfo(float).eps * max(1.0, abs(lo), abs(hi)))
    return [_kth_largest(m, i, lo, hi, res_tol) for i in idx]


# -- lambda_1, lambda_2 ------------------------------------------------------


def top_two_brackets(spec: PathSpec):
    """Analytic brackets for lambda_1 and lambda_2 (w > 1).

    For odd n the lambda_2 floor is s - (w^2-1)/(w^(n-1)-1): the Rayleigh
    quotient of C2 = M_k - e_k e_k^T at the geometric vector, k = (n-1)/2.
    The tau_n floor (exponent n+1) is only valid for even n.
    """
    n, w = spec.n, spec.w
    s = w + 1.0 / w
    r = recip_pow_m1(w, 2 * spec.half) / w
    l1_lo = s + (w - 1.0) ** 2 * (w + 1.0) * r
    if n % 2 == 0:
        l2_lo = s - (w + 1.0) ** 2 * (w - 1.0) * r
    else:
        l2_lo = s - (w * w - 1.0) * recip_pow_m1(w, n - 1)
    return (l1_lo, s + 1.0), (l2_lo, s)


def _top_of(m: SymTridiag, lo: float, hi: float) -> float:
    if m.order == 1:
        return float(m.diag[0])
    pad = 1e-9 * max(1.0, abs(hi))
    lo, hi = lo - pad, hi + pad
    cnt = sturm_count(m, [lo, hi])
    # containment suffices: bisection targets the top eigenvalue by count
    if cnt[0] > m.order - 1 or cnt[1] != m.order:
        raise InternalError(f"analytic bracket [{lo}, {hi}] misses the top eigenvalue")
    return eigenvalues_sturm(m, [1], bracket=(lo, hi))[0]


def lambda_top_two(spec: PathSpec) -> tuple[float, float]:
    plus, minus = build_half_plus(spec), build_half_minus(spec)
    if spec.w <= 1.0 + RELAXED_MARGIN:
        lo, hi = -2.0 - spec.w, 2.0 + spec.w
        return (
            eigenvalues_sturm(plus, [1], bracket=(lo, hi))[0],
            eigenvalues_sturm(minus, [1], bracket=(lo, hi))[0],
        )
    (a1, b1), (a2, b2) = top_two_brackets(spec)
    return _top_of(plus, a1, b1), _top_of(minus, a2, b2)


def top_gap(spec: PathSpec, lam1: Optional[float] = None, lam2: Optional[float] = None) -> float:
    """lambda_1 - lambda_2 to full relative precision.

    The gap shrinks like w**(2-n) and drops below double resolution of the
    eigenvalues themselves for moderate n.  When both eigenvalues exceed 2,
    write lambda = mu + 1/mu with mu = w + eps; the secular equations with
    hyperbolic angles reduce to eps = +-(w*mu - 1) * mu**(-n), which a fixed
    point iteration resolves to relative precision, and then
    lambda_1 - lambda_2 = (eps_1 - eps_2) * (1 - 1/(mu_1*mu_2)).
    """
    if lam1 is None or lam2 is None:
        lam1, lam2 = lambda_top_two(spec)
    plain = lam1 - lam2
    if plain > 1e-3 or lam2 <= 2.0 + RELAXED_MARGIN:
        return plain
    n, w = spec.n, spec.w
    e1 = e2 = 0.0
    for _ in range(500):
        m1, m2 = w + e1, w + e2
        n1 = (w * m1 - 1.0) * m1 ** (-n)
        n2 = -(w * m2 - 1.0) * m2 ** (-n)
        done = abs(n1 - e1) <= 1e-17 * abs(n1) and abs(n2 - e2) <= 1e-17 * abs(n2)
        e1, e2 = n1, n2
        if done:
            break
    else:
        return plain
    m1, m2 = w + e1, w + e2
    gap = (e1 - e2) * (1.0 - 1.0 / (m1 * m2))
    if abs(gap - plain) > 1e-10 * max(1.0, lam1):
        raise NumericalConsistencyError(f"hyperbolic gap {gap} disagrees with {plain}")
    return gap


# -- interior eigenvalues ------------------------------------------------------


def theta_brackets(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    j = np.arange(3, n + 1)
    return j, (j - 2) * math.pi / (n - 1), j * math.pi / (n + 1)


def secular(n: int, w: float, theta, j):
    """w*cos((n-1)t/2) - cos((n+1)t/2) for odd j, sine analogue for even j."""
    theta = np.asarray(theta, dtype=float)
    a = 0.5 * (n - 1) * theta
    b = 0.5 * (n + 1) * theta
    odd = np.asarray(j) % 2 == 1
    return np.where(odd, w * np.cos(a) - np.cos(b), w * np.sin(a) - np.sin(b))


def interior_thetas(spec: PathSpec, tol: float = THETA_TOL) -> np.ndarray:
    """Angles theta_3 < ... < theta_n with lambda_j = 2 cos(theta_j)."""
    n, w = spec.n, spec.w
    j, lo, hi = theta_brackets(n)
    if w == 1.0:
        return (j - 1) * math.pi / n
    f_lo = secular(n, w, lo, j)
    f_hi = secular(n, w, hi, j)
    if np.any(np.sign(f_lo) * np.sign(f_hi) >= 0):
        bad = j[np.sign(f_lo) * np.sign(f_hi) >= 0]
        raise InternalError(f"secular bracket without sign change for j = {bad.tolist()}")
    s_lo = np.sign(f_lo)
    res = min(tol, 8 * np.finfo(float).eps * math.pi)
    for _ in range(200):
        if np.all(hi - lo <= res):
            break
        mid = 0.5 * (lo + hi)
        fm = secular(n, w, mid, j)
        left = np.sign(fm) == s_lo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


# -- squared end entries -----------------------------------------------------


def v1sq_trig(n: int, theta, j):
    """Closed form of v_{1j}^2 for lambda_j = 2 cos(theta), any index j."""
    theta = np.asarray(theta, dtype=float)
    ratio = np.sin(n * theta) / np.sin(theta)
    half = 0.5 * (n - 1) * theta
    odd = np.asarray(j) % 2 == 1
    return np.where(odd, 2 * np.cos(half) ** 2 / (n + ratio), 2 * np.sin(half) ** 2 / (n - ratio))


def _inverse_norm_sum(n: int, lam: float, first: int) -> float:
    # first=1: odd interior angles (2l-1)pi/(n-1); first=2: even angles 2l pi/(n-1)
    if first == 1:
        ell = np.arange(1, -(-(n - 1) // 2) + 1)
        ang = (2 * ell - 1) * math.pi / (n - 1)
    else:
        ell = np.arange(1, -(-(n - 2) // 2) + 1)
        ang = 2 * ell * math.pi / (n - 1)
    terms = np.sin(ang) ** 2 / (lam - 2 * np.cos(ang)) ** 2
    return 1.0 / (2.0 + 8.0 / (n - 1) * math.fsum(terms))


def v1sq_top_two(spec: PathSpec, lam1: float, lam2: float) -> tuple[float, float]:
    n = spec.n
    v11 = _inverse_norm_sum(n, lam1, 1)
    # the even-angle sum is singular near 2cos(2pi/(n-1)); below 2 the trig form is safe
    if lam2 >= 1.0 + math.cos(2 * math.pi / (n - 1)):
        v12 = _inverse_norm_sum(n, lam2, 2)
    else:
        v12 = float(v1sq_trig(n, math.acos(lam2 / 2.0), 2))
    return v11, v12


def v1sq_interior(spec: PathSpec, theta: float, j: int) -> float:
    if not 3 <= j <= spec.n:
        raise DomainError(f"interior index must be in 3..{spec.n}, got {j}")
    return float(v1sq_trig(spec.n, theta, j))


# -- assembled spectrum --------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """Descending eigenvalues with end-entry data; index 0 is lambda_1.

    ``thetas[k]`` is NaN where |lambda| >= 2.  ``parity`` is +1 for symmetric
    eigenvectors (v_1 = v_n, odd 1-based index) and -1 otherwise.  ``gap`` is
    lambda_1 - lambda_2 at full relative precision.
    """

    n: int
    w: float
    lambdas: np.ndarray
    thetas: np.ndarray
    v1sq: np.ndarray
    parity: np.ndarray
    gap: float

    @property
    def v1(self) -> np.ndarray:
        # first entries normalised positive
        return np.sqrt(self.v1sq)

    def offsets(self) -> np.ndarray:
        """lambda_k - lambda_1 with the k=2 entry taken from the accurate gap."""
        d = self.lambdas - self.lambdas[0]
        d[0] = 0.0
        d[1] = -self.gap
        return d


def full_spectrum(spec: PathSpec) -> Spectrum:
    n = spec.n
    lam1, lam2 = lambda_top_two(spec)
    gap = top_gap(spec, lam1, lam2)
    # independent bisections can land an ulp out of order when the gap is tiny
    lam2 = lam1 - gap
    th = interior_thetas(spec)
    lambdas = np.empty(n)
    lambdas[0], lambdas[1] = lam1, lam2
    lambdas[2:] = 2.0 * np.cos(th)
    if gap == 0.0:
        raise NumericalConsistencyError(f"lambda_1 - lambda_2 underflows double precision at n={n}, w={spec.w}")
    # lambda_1 and lambda_2 may coincide in double precision; the gap decides
    if not (gap > 0 and np.all(np.diff(lambdas[1:]) < 0)):
        raise NumericalConsistencyError("eigenvalues are not strictly decreasing")

    v1sq = np.empty(n)
    v1sq[0], v1sq[1] = v1sq_top_two(spec, lam1, lam2)
    v1sq[2:] = v1sq_trig(n, th, np.arange(3, n + 1))

    thetas = np.full(n, np.nan)
    thetas[2:] = th
    for k in (0, 1):
        if abs(lambdas[k]) < 2.0:
            thetas[k] = math.acos(lambdas[k] / 2.0)

    total = math.fsum(v1sq)
    if abs(total - 1.0) > NORM_FAIL:
        raise NumericalConsistencyError(f"sum of v1j^2 is {total!r}, expected 1")
    v1sq = v1sq / total

    parity = np.where(np.arange(1, n + 1) % 2 == 1, 1, -1)
    for a in (lambdas, thetas, v1sq, parity):
        a.setflags(write=False)
    return Spectrum(n, spec.w, lambdas, thetas, v1sq, parity, gap)


# -- eigenvectors ----------------------------------------------------------


def _closed_form_vector(n: int, lam: float, symmetric: bool) -> np.ndarray:
    # v_l = cos/sin((l - (n+1)/2) theta); cosh/sinh with hyperbolic angle above 2
    x = np.arange(1, n + 1) - 0.5 * (n + 1)
    if abs(lam) == 2.0:
        # zero angle: the antisymmetric limit is linear
        v = np.ones(n) if symmetric else x.copy()
        if lam < 0:
            v *= (-1.0) ** np.arange(n)
    elif abs(lam) < 2.0:
        t = math.acos(lam / 2.0)
        v = np.cos(x * t) if symmetric else np.sin(x * t)
    elif lam > 2.0:
        t = math.acosh(lam / 2.0)
        v = np.cosh(x * t) if symmetric else np.sinh(x * t)
    else:
        t = math.acosh(-lam / 2.0)
        sign = (-1.0) ** np.arange(n)
        v = sign * (np.cosh(x * t) if symmetric else np.sinh(x * t))
    return v / v[0]


def eigvec_recurrence(spec: PathSpec, lam: float, fallback: bool = False) -> np.ndarray:
    """Eigenvector with first entry 1 from the pivot recurrence.

    a_1 = lam - w, a_k = lam - 1/a_{k-1}, v_k = a_{k-1} v_{k-1}.  A pivot
    below 1e-8 in magnitude raises DegenerateRecurrenceError unless
    ``fallback`` is set, in which case the trigonometric (or hyperbolic)
    closed form with the better residual is returned instead.
    """
    n, w = spec.n, spec.w
    v = np.empty(n)
    v[0] = 1.0
    a = lam - w
    try:
        for k in range(1, n):
            if abs(a) < 1e-8:
                raise DegenerateRecurrenceError(k, a)
            v[k] = a * v[k - 1]
            a = lam - 1.0 / a
    except DegenerateRecurrenceError:
        if not fallback:
            raise
        full = build_full(spec)
        best = None
        for sym in (True, False):
            cand = _closed_form_vector(n, lam, sym)
            r = np.max(np.abs(full.matvec(cand) - lam * cand))
            if not np.isfinite(r):
                continue
            if best is None or r < best[0]:
                best = (r, cand)
        return best[1]
    return v
