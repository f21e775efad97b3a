"""Accurate reduction of t*d modulo 2*pi.

Readout times grow like w**(n-2), so t*d can be large enough that naive
``np.mod(t*d, 2*pi)`` loses every significant digit.  The product is formed
exactly (Dekker two-product).  For quotients k below 2**26 a Cody-Waite
split of 2*pi into 26-bit pieces is exact; up to 2**52 the products k*C_i
with 2*pi = C1 + C2 + C3 are themselves formed exactly.  Beyond that each
element is reduced exactly with integer arithmetic against a 1400-bit
fixed-point 1/(2*pi).
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1
_KMAX = 2.0**26
_KMAX_DD = 2.0**52


def _trunc(x: float, bits: int) -> float:
    m, e = math.frexp(x)
    return math.ldexp(math.floor(m * 2.0**bits), e - bits)


def _two_pi_parts():
    with mpmath.workprec(300):
        tp = 2 * mpmath.pi
        p1 = _trunc(float(tp), 26)
        rem = tp - p1
        p2 = _trunc(float(rem), 26)
        p3 = float(rem - p2)
    return p1, p2, p3


def _two_pi_doubles():
    with mpmath.workprec(300):
        tp = 2 * mpmath.pi
        c1 = float(tp)
        c2 = float(tp - c1)
        c3 = float(tp - c1 - c2)
    return c1, c2, c3


P1, P2, P3 = _two_pi_parts()
C1, C2, C3 = _two_pi_doubles()
TWO_PI = 2.0 * math.pi


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """(p, e) with p = fl(a*b) and p + e == a*b exactly."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


_INV_BITS = 1400  # covers every finite double product with >150 spare bits


def _inv_two_pi_fixed() -> int:
    with mpmath.workprec(_INV_BITS + 64):
        return int(mpmath.floor(mpmath.ldexp(1 / (2 * mpmath.pi), _INV_BITS)))


_INV_FIX = _inv_two_pi_fixed()


def _reduce_exact(t: float, d: float) -> float:
    """t*d mod 2*pi in [-pi, pi) from the exact integer product of mantissas."""
    nt, dt = t.as_integer_ratio()
    nd, dd = d.as_integer_ratio()
    num = nt * nd
    # both denominators are powers of two
    e = -((dt * dd).bit_length() - 1)
    sign = -1 if num < 0 else 1
    shift = _INV_BITS - e
    y = abs(num) * _INV_FIX
    if shift <= 0:
        return 0.0
    # int / int is correctly rounded, also for subnormal results
    f = (y & ((1 << shift) - 1)) / (1 << shift)
    if f >= 0.5:
        f -= 1.0
    return sign * f * TWO_PI


def _reduce_mp(t: float, d: float) -> float:
    x = abs(t * d)
    bits = 120 + max(0, math.frexp(x)[1]) if x > 0 else 120
    with mpmath.workprec(bits):
        r = mpmath.fmod(mpmath.mpf(t) * mpmath.mpf(d), 2 * mpmath.pi)
        return float(r)


def reduce_2pi(t, d):
    """t*d reduced into roughly [-pi, pi], broadcasting over t and d."""
    t, d = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(d, dtype=float))
    hi, lo = two_prod(t, d)
    k = np.rint(hi / TWO_PI)
    r = ((hi - k * P1) - k * P2) - k * P3 + lo
    mid = np.abs(k) >= _KMAX
    if np.any(mid):
        # hi and k*C1 agree to within ~pi, so their difference is exact
        p1, e1 = two_prod(k, C1)
        p2, e2 = two_prod(k, C2)
        r = np.where(mid, ((hi - p1) - p2) + (((lo - e1) - e2) - k * C3), r)
    big = np.abs(k) >= _KMAX_DD
    if np.any(big):
        r = np.array(r, dtype=float)
        for idx in np.ndindex(r.shape):
            if big[idx]:
                r[idx] = _reduce_exact(float(t[idx]), float(d[idx]))
    return r


def reduced_angle(t: float, d: float) -> float:
    """t*d mod 2*pi as a float in [0, 2*pi)."""
    r = float(reduce_2pi(t, d))
    if r < 0:
        r += TWO_PI
    return 0.0 if r >= TWO_PI else r
