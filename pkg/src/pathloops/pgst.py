"""Weights with no pretty good state transfer, built on the level curve of x(w).

x(w) = (lambda_2 - lambda_3) / (lambda_1 - lambda_2) is increasing in w.  For
a rational target x = p/q with p even and q odd, the weight solving
x(w) = p/q satisfies p*lambda_1 - (p+q)*lambda_2 + q*lambda_3 = 0, an integer
relation with zero coefficient sum and odd middle coefficient, which rules
out pretty good state transfer.  Targets decreasing to x(w*) give weights
decreasing to w*.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError, SearchFailure
from .model import PathSpec, build_half_plus
from .spectrum import (
    eigenvalues_sturm,
    eigvec_recurrence,
    full_spectrum,
    lambda_top_two,
    top_gap,
)

H_TOL = 1e-11
W_CAP = 1e6
DENOM_CAP = 10**6


@dataclass(frozen=True)
class NoPgstWitness:
    w: float
    p: int
    q: int
    residual: float

    @property
    def coefficients(self) -> tuple[int, int, int]:
        return self.p, -(self.p + self.q), self.q


def _relaxed(spec: PathSpec, w: float) -> PathSpec:
    return PathSpec(spec.n, w, relaxed=True)


def top_three(spec: PathSpec) -> tuple[float, float, float, float]:
    """(lambda_1, lambda_2, lambda_3, lambda_1 - lambda_2) at full gap precision."""
    lam1, lam2 = lambda_top_two(spec)
    gap = top_gap(spec, lam1, lam2)
    if spec.w == 1.0:
        lam3 = 2.0 * math.cos(2.0 * math.pi / spec.n)
    else:
        lam3 = eigenvalues_sturm(build_half_plus(spec), [2])[0]
    return lam1, lam1 - gap, lam3, gap


def level_x(spec: PathSpec) -> float:
    _, lam2, lam3, gap = top_three(spec)
    return (lam2 - lam3) / gap


def h_value(spec: PathSpec, x: float) -> float:
    """x*lambda_1 - (x+1)*lambda_2 + lambda_3, written as x*gap - (lambda_2 - lambda_3)."""
    _, lam2, lam3, gap = top_three(spec)
    return x * gap - (lam2 - lam3)


def solve_h(spec_base: PathSpec, x_target: Fraction, w_lo: float, w_hi: Optional[float] = None) -> float:
    """Weight w in (w_lo, w_hi) with h(w, x_target) = 0, by bisection.

    ``w_hi`` defaults to w_lo + 1 and is pushed outward by doubling the
    distance until h changes sign.
    """
    x = float(x_target)
    f = lambda w: h_value(_relaxed(spec_base, w), x)
    f_lo = f(w_lo)
    if not f_lo > 0:
        raise DomainError(f"x_target = {x_target} is not above x(w_lo) = {level_x(_relaxed(spec_base, w_lo))}")
    hi = w_lo + 1.0 if w_hi is None else w_hi
    f_hi = f(hi)
    while f_hi > 0:
        if hi >= W_CAP:
            raise SearchFailure(f"no sign change of h below w = {W_CAP:g}")
        hi = min(w_lo + 2.0 * (hi - w_lo), W_CAP)
        f_hi = f(hi)
    lo = w_lo
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if abs(fm) <= H_TOL and hi - lo <= 1e-15 * hi:
            return mid
        if fm > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def next_target(x_star: float, j: int, upper: Optional[Fraction] = None) -> Fraction:
    """Smallest-denominator p/q with p even, q odd, x* < p/q <= x* + 2^-j, p/q < upper."""
    xs = Fraction(x_star)
    cap = xs + Fraction(1, 2**j)
    if upper is not None:
        cap = min(cap, upper)
    for q in range(1, DENOM_CAP + 1, 2):
        p = 2 * math.floor(xs * q / 2) + 2  # smallest even p with p/q > x*
        cand = Fraction(p, q)
        if cand <= cap and (upper is None or cand < upper):
            return cand
    raise SearchFailure(f"no admissible rational with odd denominator <= {DENOM_CAP}")


def relation_residual(lambdas, p: int, q: int) -> float:
    lam1, lam2, lam3 = lambdas[:3]
    return abs(math.fsum([p * lam1, -(p + q) * lam2, q * lam3]))


def witness_rows(spec_base: PathSpec, w_star: float, count: int) -> list[NoPgstWitness | Exception]:
    """Like ``no_pgst_sequence`` but a failed solve becomes that row's entry.

    After a failure the next target is still chosen below the last
    successful one, so later rows keep the decreasing order.
    """
    if not w_star >= 1.0:
        raise DomainError(f"w* must be >= 1, got {w_star}")
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count}")
    x_star = level_x(_relaxed(spec_base, w_star))
    out: list[NoPgstWitness | Exception] = []
    upper: Optional[Fraction] = None
    w_prev: Optional[float] = None
    for j in range(1, int(count) + 1):
        try:
            target = next_target(x_star, j, upper)
            w_j = solve_h(spec_base, target, w_star, w_prev)
            sp = full_spectrum(_relaxed(spec_base, w_j))
        except (SearchFailure, ArithmeticError) as exc:
            out.append(exc)
            continue
        p, q = target.numerator, target.denominator
        out.append(NoPgstWitness(w_j, p, q, relation_residual(sp.lambdas, p, q)))
        upper, w_prev = target, w_j
    return out


def no_pgst_sequence(spec_base: PathSpec, w_star: float, count: int) -> list[NoPgstWitness]:
    """``count`` witnesses with weights strictly decreasing toward w_star."""
    rows = witness_rows(spec_base, w_star, count)
    for r in rows:
        if isinstance(r, Exception):
            raise r
    return rows


def _recurrence_comparison(spec: PathSpec, lam1: float, lam2: float, gap: float) -> tuple[bool, float]:
    """Difference form of the y/z recurrences for lambda_1 and lambda_2.

    With a_k, b_k the pivots for lambda_1, lambda_2, the differences obey
    d_1 = gap, d_k = gap + d_{k-1} / (a_{k-1} b_{k-1}), and
    e_{k+1} = y_{k+1} - z_{k+1} = d_k y_k + b_k e_k; every term is positive,
    so the comparison survives gaps far below double resolution.  Returns
    (all comparisons hold, ||y||^2 - ||z||^2 normalised by ||y||^2 ||z||^2),
    the second value being v12^2 - v11^2.
    """
    n, w = spec.n, spec.w
    half = n // 2
    a, b = lam1 - w, lam2 - w
    d = gap
    y, z, e = 1.0, 1.0, 0.0
    ok = True
    ny = nz = 0.0
    sum_diff = 0.0
    # entries 1..half; after the loop y, z hold entry `half`
    for k in range(1, half + 1):
        ny += y * y
        nz += z * z
        sum_diff += e * (y + z)
        if k == half:
            break
        y_next = a * y
        e = d * y + b * e
        z = y_next - e
        y = y_next
        ok = ok and d > 0 and e > 0 and b >= 0
        a_next = lam1 - 1.0 / a
        d = gap + d / (a * b) if b != 0 else math.inf
        b = a_next - d
        a = a_next
    norm_y, norm_z = 2.0 * ny, 2.0 * nz
    diff = 2.0 * sum_diff
    if n % 2 == 1:
        mid = a * y
        norm_y += mid * mid
        diff += mid * mid
    return ok, diff / (norm_y * norm_z)


def check_gap_lemmas(spec: PathSpec) -> tuple[bool, bool]:
    """(v12^2 > v13^2, v11^2 < v12^2) checked numerically."""
    sp = full_spectrum(spec)
    gap23 = bool(sp.v1sq[1] - sp.v1sq[2] > 0)
    ok, d12 = _recurrence_comparison(spec, sp.lambdas[0], sp.lambdas[1], sp.gap)
    return gap23, bool(ok and d12 > 0)


def recurrence_vectors(spec: PathSpec) -> tuple[np.ndarray, np.ndarray]:
    """Recurrence eigenvectors y (lambda_1) and z (lambda_2) with first entry 1."""
    sp = full_spectrum(spec)
    return (
        eigvec_recurrence(spec, sp.lambdas[0], fallback=True),
        eigvec_recurrence(spec, sp.lambdas[1], fallback=True),
    )


@dataclass(frozen=True)
class NearRelation:
    coefficients: tuple[int, int, int]
    residual: float


def relation_scan(spec: PathSpec, max_coeff: int = 20, tol: float = 1e-8) -> list[NearRelation]:
    """Heuristic only: integer (l1, m, l3), zero sum, odd m, |coeff| <= max_coeff,
    with |l1*lambda_1 + m*lambda_2 + l3*lambda_3| < tol.

    Finding nothing proves nothing; finding something is only numerical
    evidence of a relation.
    """
    lam1, lam2, lam3, gap = top_three(spec)
    found = []
    rng = range(-max_coeff, max_coeff + 1)
    for m, l3 in itertools.product(rng, rng):
        l1 = -m - l3
        if m % 2 == 0 or abs(l1) > max_coeff:
            continue
        if l1 < 0 or (l1 == 0 and m < 0):  # keep one sign of each relation
            continue
        # l1 lam1 + m lam2 + l3 lam3 = l1 * gap - l3 * (lam2 - lam3) after eliminating the sum
        r = abs(l1 * gap - l3 * (lam2 - lam3))
        if r < tol:
            found.append(NearRelation((l1, m, l3), r))
    found.sort(key=lambda rel: (rel.residual, sum(map(abs, rel.coefficients))))
    return found
