"""Hamiltonian of the path P_n^w and its mirror-symmetry reductions.

The adjacency matrix A(w) of the n-vertex path with a loop of weight w at
both ends is stored as a symmetric tridiagonal pair ``(diag, off)``.  The
reflection j -> n+1-j splits it into two half-size blocks whose spectra are
the odd-indexed (symmetric eigenvectors) and even-indexed (antisymmetric
eigenvectors) eigenvalues of A(w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SQRT2 = math.sqrt(2.0)


def recip_pow_m1(w: float, k: int) -> float:
    """1 / (w^k - 1) for w > 1, without overflow and accurate near w = 1."""
    x = k * math.log(w)
    if x > 700.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class PathSpec:
    """Vertex count ``n`` and end-loop weight ``w``.

    The default gate requires ``w > 1``.  ``relaxed=True`` admits ``w >= 1``;
    only the no-PGST construction needs that, since it evaluates at w = 1.
    """

    n: int
    w: float
    relaxed: bool = False

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise DomainError(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "w", float(self.w))
        if self.n < 3:
            raise DomainError(f"n must be >= 3, got {self.n}")
        if not math.isfinite(self.w):
            raise DomainError(f"w must be finite, got {self.w}")
        if self.relaxed:
            if self.w < 1.0:
                raise DomainError(f"w must be >= 1, got {self.w}")
        elif self.w <= 1.0:
            raise DomainError(f"w must be > 1, got {self.w}")

    @classmethod
    def relaxed_gate(cls, n, w) -> "PathSpec":
        return cls(n, w, relaxed=True)

    def with_weight(self, w) -> "PathSpec":
        return PathSpec(self.n, w, relaxed=self.relaxed)

    @property
    def half(self) -> int:
        """ceil(n/2), the exponent scale used by the eigenvalue bounds."""
        return (self.n + 1) // 2


@dataclass(frozen=True)
class SymTridiag:
    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.off, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or len(d) < 1 or len(e) != len(d) - 1:
            raise DomainError("need len(off) == len(diag) - 1 >= 0")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "off", e)

    @property
    def order(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.order > 1:
            m += np.diag(self.off, 1) + np.diag(self.off, -1)
        return m

    def matvec(self, x):
        x = np.asarray(x)
        y = self.diag * x
        y[:-1] += self.off * x[1:]
        y[1:] += self.off * x[:-1]
        return y

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.order)
        r[:-1] += np.abs(self.off)
        r[1:] += np.abs(self.off)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))


def _check(spec):
    if not isinstance(spec, PathSpec):
        raise DomainError(f"expected PathSpec, got {type(spec).__name__}")


def build_full(spec: PathSpec) -> SymTridiag:
    _check(spec)
    diag = np.zeros(spec.n)
    diag[0] = diag[-1] = spec.w
    return SymTridiag(diag, np.ones(spec.n - 1))


def build_half_plus(spec: PathSpec) -> SymTridiag:
    """B1(w) for even n, C1(w) for odd n.

    Spectrum: lambda_1, lambda_3, ... of A(w).
    """
    _check(spec)
    n = spec.n
    if n % 2 == 0:
        m = n // 2
        diag = np.zeros(m)
        diag[0] = spec.w
        diag[-1] += 1.0
        off = np.ones(m - 1)
    else:
        m = (n + 1) // 2
        diag = np.zeros(m)
        diag[0] = spec.w
        off = np.ones(m - 1)
        off[-1] = SQRT2
    return SymTridiag(diag, off)


def build_half_minus(spec: PathSpec) -> SymTridiag:
    """B2(w) for even n, C2(w) for odd n.

    Spectrum: lambda_2, lambda_4, ... of A(w).
    """
    _check(spec)
    n = spec.n
    m = n // 2
    diag = np.zeros(m)
    diag[0] = spec.w
    if n % 2 == 0:
        diag[-1] -= 1.0
    return SymTridiag(diag, np.ones(m - 1))
