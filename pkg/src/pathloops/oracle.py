"""Brute-force reference implementations for tests and ``verify``.

Nothing in the production path imports this module.  The eigensolver is a
cyclic Jacobi method (a different algorithm family from the Sturm bisection
in ``spectrum``), so agreement between the two is a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, InternalError
from .model import SymTridiag

MAX_ORDER = 2000
MAX_SWEEPS = 100
OFF_TOL = 1e-13


@dataclass(frozen=True)
class DenseSym:
    order: int
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.shape != (self.order, self.order):
            raise DomainError(f"entries must be {self.order}x{self.order}")
        if not np.array_equal(a, a.T):
            raise DomainError("matrix is not symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_tridiag(cls, m: SymTridiag) -> "DenseSym":
        return cls(m.order, m.to_dense())

    @classmethod
    def from_array(cls, a) -> "DenseSym":
        a = np.asarray(a, dtype=float)
        return cls(a.shape[0], a)


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # tournament schedule: n-1 rounds of n/2 disjoint pairs covering every pair once
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p), max(p)) for p in pairs if max(p) < n]
        if pairs:
            p, q = np.array(pairs).T
            rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    apq = a[p, q]
    live = apq != 0.0
    if not np.any(live):
        return
    p, q, apq = p[live], q[live], apq[live]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    big = np.abs(theta) > 1e150
    th = np.where(big, 1.0, theta)
    t = np.where(big, 0.5 / np.where(big, theta, 1.0), np.sign(th) / (np.abs(th) + np.sqrt(th * th + 1.0)))
    t[theta == 0.0] = 1.0
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # A <- J^T A J with J[p,p]=J[q,q]=c, J[p,q]=s, J[q,p]=-s
    ap, aq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * ap - s * aq
    a[:, q] = s * ap + c * aq
    ap, aq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c[:, None] * ap - s[:, None] * aq
    a[q, :] = s[:, None] * ap + c[:, None] * aq
    a[p, q] = a[q, p] = 0.0
    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq


def dense_eig(m: DenseSym, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors (columns) by cyclic Jacobi.

    Each eigenvector's first entry above 1e-14 in magnitude is made positive.
    """
    n = m.order
    if n > MAX_ORDER:
        raise DomainError(f"oracle order capped at {MAX_ORDER}, got {n}")
    a = np.array(m.entries, dtype=float)
    v = np.eye(n)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    rounds = _round_robin(n)
    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(np.sum(a[mask] ** 2))
        if off <= OFF_TOL * scale:
            break
        for p, q in rounds:
            _rotate(a, v, p, q)
    else:
        raise InternalError(f"Jacobi did not converge in {max_sweeps} sweeps")
    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")
    vals, v = vals[order], v[:, order]
    for k in range(n):
        nz = np.flatnonzero(np.abs(v[:, k]) > 1e-14)
        if nz.size and v[nz[0], k] < 0:
            v[:, k] = -v[:, k]
    return vals, v


def split_reflection(
    m: DenseSym, vals: np.ndarray, vecs: np.ndarray, cluster_tol: float = 1e-4
) -> tuple[np.ndarray, np.ndarray]:
    """Resolve near-degenerate clusters using the reversal symmetry j -> n+1-j.

    For a reflection-symmetric matrix, Jacobi vectors inside a cluster of
    eigenvalues closer than ``cluster_tol`` can be arbitrary mixtures.  The
    reversal operator commutes with the matrix, so diagonalising it on the
    cluster's span separates symmetric from antisymmetric eigenvectors.
    Within a cluster the vectors are ordered by Rayleigh quotient, ties going
    to the symmetric vector.
    """
    a = m.entries
    if not np.allclose(a, a[::-1, ::-1], rtol=0, atol=0):
        raise DomainError("matrix is not reflection symmetric")
    vals, vecs = vals.copy(), vecs.copy()
    n = len(vals)
    k = 0
    while k < n:
        e = k + 1
        while e < n and vals[e - 1] - vals[e] < cluster_tol:
            e += 1
        if e - k > 1:
            span = vecs[:, k:e]
            jmat = span.T @ span[::-1, :]
            par, rot = np.linalg.eigh(0.5 * (jmat + jmat.T))
            block = span @ rot
            rq = np.einsum("ij,ij->j", block, a @ block)
            order = sorted(range(e - k), key=lambda i: -rq[i])
            # quotients equal up to rounding count as ties
            tie = 1e-13 * max(1.0, float(np.max(np.abs(rq))))
            for _ in range(len(order)):
                for i in range(len(order) - 1):
                    a, b = order[i], order[i + 1]
                    if rq[a] - rq[b] <= tie and par[a] < par[b]:
                        order[i], order[i + 1] = b, a
            vals[k:e] = rq[order]
            vecs[:, k:e] = block[:, order]
            for i in range(k, e):
                nz = np.flatnonzero(np.abs(vecs[:, i]) > 1e-14)
                if nz.size and vecs[nz[0], i] < 0:
                    vecs[:, i] = -vecs[:, i]
        k = e
    return vals, vecs


def dense_expm_entry(m: DenseSym, t: float, row: int, col: int, eig=None) -> complex:
    """Entry (row, col) of exp(i t M), 0-based indices, via the spectral sum."""
    vals, vecs = dense_eig(m) if eig is None else eig
    terms = vecs[row, :] * vecs[col, :]
    phase = np.mod(t * vals, 2.0 * math.pi)
    return complex(np.sum(terms * np.cos(phase)), np.sum(terms * np.sin(phase)))


def central_diff(f: Callable[[float], float], x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


__all__ = [
    "DenseSym",
    "dense_eig",
    "split_reflection",
    "dense_expm_entry",
    "central_diff",
]
