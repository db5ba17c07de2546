"""Dense linear-algebra substrate.

Pseudoinverse and rank machinery, span membership with separating
witnesses, nonnegative least squares, and Caratheodory reduction of
positive combinations.  Everything here is a pure function of its
arguments and safe to call from multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import IterationLimit

DEFAULT_TOL = 1e-9

_EPS = float(np.finfo(float).eps)


def as_vector(x) -> np.ndarray:
    """Coerce to a finite 1-d float array."""
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise ValueError("expected a vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def as_matrix(M) -> np.ndarray:
    """Coerce to a finite 2-d float array."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def generator_matrix(vectors, dim: Optional[int] = None) -> np.ndarray:
    """Stack vectors as the columns of a d x m matrix.

    An empty list is legal (it denotes the cone {0} / span {0}), but then
    `dim` must be supplied.
    """
    vecs = [as_vector(v) for v in vectors]
    if not vecs:
        if dim is None:
            raise ValueError("dim is required for an empty generator list")
        return np.zeros((int(dim), 0))
    d = vecs[0].size
    if any(v.size != d for v in vecs):
        raise ValueError("generators must share one dimension")
    return np.column_stack(vecs)


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD truncated at the rank tolerance.

    Singular values are sorted descending and strictly above
    ``rank_tol = max(rows, cols) * eps * sigma_1``.
    """

    u: np.ndarray
    singular_values: np.ndarray
    vt: np.ndarray
    rank_tol: float

    @property
    def rank(self) -> int:
        return int(self.singular_values.size)


def svd_factors(M) -> SvdFactors:
    """Truncated SVD of M with the library-wide rank rule."""
    A = as_matrix(M)
    if min(A.shape) == 0:
        return SvdFactors(
            u=np.zeros((A.shape[0], 0)),
            singular_values=np.zeros(0),
            vt=np.zeros((0, A.shape[1])),
            rank_tol=0.0,
        )
    u, s, vt = np.linalg.svd(A, full_matrices=False)
    cutoff = max(A.shape) * _EPS * (float(s[0]) if s.size else 0.0)
    keep = s > cutoff
    return SvdFactors(u=u[:, keep], singular_values=s[keep], vt=vt[keep], rank_tol=cutoff)


def matrix_rank(M) -> int:
    """Numerical rank at the library rank tolerance."""
    return svd_factors(M).rank


def pseudoinverse(M) -> np.ndarray:
    """Moore-Penrose pseudoinverse via truncated SVD.

    Singular values at or below ``max(rows, cols) * eps * sigma_1`` are
    treated as zero, so a zero matrix maps to a zero matrix of the
    transposed shape.
    """
    A = as_matrix(M)
    f = svd_factors(A)
    if f.rank == 0:
        return np.zeros((A.shape[1], A.shape[0]))
    return (f.vt.T / f.singular_values) @ f.u.T


def null_space_projector(M) -> np.ndarray:
    """Orthogonal projector onto the null space of M (acting on its domain)."""
    A = as_matrix(M)
    P = np.eye(A.shape[1]) - pseudoinverse(A) @ A
    return 0.5 * (P + P.T)


@dataclass(frozen=True)
class SpanMembership:
    """Outcome of a closed-linear-span membership test.

    When ``member`` is false, ``residual`` is a separating witness: it is
    orthogonal to every spanning vector while its inner product with the
    tested point equals ``||residual||^2 > 0``.
    """

    member: bool
    coefficients: Optional[np.ndarray]
    residual: np.ndarray


def span_membership(x, gamma, tol: float = DEFAULT_TOL) -> SpanMembership:
    """Decide whether x lies in span(gamma), with certificate either way.

    Parameters
    ----------
    x : array, shape (d,)
    gamma : sequence of arrays, shape (d,) each (may be empty)
    tol : float
        Membership declared when the least-squares residual norm is at
        most ``tol * (1 + ||x||)`` (plain ``tol`` for empty gamma).
    """
    xv = as_vector(x)
    G = generator_matrix(gamma, dim=xv.size)
    if G.shape[1] == 0:
        member = bool(np.linalg.norm(xv) <= tol)
        coeffs = np.zeros(0) if member else None
        return SpanMembership(member, coeffs, xv.copy())
    coeffs, *_ = np.linalg.lstsq(G, xv, rcond=None)
    residual = xv - G @ coeffs
    member = bool(np.linalg.norm(residual) <= tol * (1.0 + np.linalg.norm(xv)))
    return SpanMembership(member, coeffs if member else None, residual)


@dataclass(frozen=True)
class NnlsResult:
    """Nonnegative multipliers and the residual ``x - S @ rho``."""

    rho: np.ndarray
    residual: np.ndarray


def nnls(S, x, tol: float = DEFAULT_TOL, max_pivots: Optional[int] = None) -> NnlsResult:
    """Active-set solve of ``min ||S @ rho - x||`` over ``rho >= 0``.

    Lawson-Hanson iteration with lowest-index tie-breaking on entering
    variables.  At the returned point the residual ``r = x - S @ rho``
    satisfies the projection optimality conditions: ``<r, k_i>`` is at
    most ``tol * (1 + ||x||) * ||k_i||`` for every column ``k_i``, and
    columns carrying positive multipliers are orthogonal to ``r``
    (complementarity).  ``S @ rho`` is then the nearest point of the
    generated cone.

    Parameters
    ----------
    S : array, shape (d, m)
        Generators as columns; m may be zero.
    x : array, shape (d,)
    tol : float
        Relative KKT slack used as the stopping threshold.
    max_pivots : int, optional
        Pivot budget, default ``3 * m * d``.

    Raises
    ------
    IterationLimit
        If the pivot budget is exhausted (numerically degenerate input).
    """
    A = as_matrix(S)
    b = as_vector(x)
    d, m = A.shape
    if b.size != d:
        raise ValueError("dimension mismatch between S and x")
    if tol <= 0:
        raise ValueError("tol must be positive")
    budget = 3 * m * d if max_pivots is None else max_pivots

    rho = np.zeros(m)
    support = np.zeros(m, dtype=bool)
    resid = b.copy()
    slack = tol * (1.0 + np.linalg.norm(b)) * np.linalg.norm(A, axis=0)
    pivots = 0

    while True:
        grad = A.T @ resid
        candidates = ~support & (grad > slack)
        if not candidates.any():
            break
        entering = int(np.argmax(np.where(candidates, grad, -np.inf)))
        support[entering] = True

        while True:
            pivots += 1
            if pivots > budget:
                raise IterationLimit(f"nnls exceeded {budget} pivots on a {d}x{m} system")
            sup = np.flatnonzero(support)
            z, *_ = np.linalg.lstsq(A[:, sup], b, rcond=None)
            if z.size and z.min() > 0.0:
                rho = np.zeros(m)
                rho[sup] = z
                break
            zfull = np.zeros(m)
            zfull[sup] = z
            blocking = np.flatnonzero(support & (zfull <= 0.0))
            if blocking.size == 0:
                raise IterationLimit("nnls inner loop stalled on degenerate input")
            denom = rho[blocking] - zfull[blocking]
            safe = denom > 0.0
            ratios = np.where(safe, rho[blocking] / np.where(safe, denom, 1.0), 0.0)
            alpha = float(ratios.min())
            rho = rho + alpha * (zfull - rho)
            hit = blocking[ratios <= alpha * (1.0 + 1e-12)]
            rho[hit] = 0.0
            np.maximum(rho, 0.0, out=rho)
            support[hit] = False
            rho[~support] = 0.0
        resid = b - A @ rho

    return NnlsResult(rho=rho, residual=b - A @ rho)


@dataclass(frozen=True)
class CaratheodoryResult:
    """Index subset (into the input list) and its strictly positive weights."""

    indices: np.ndarray
    weights: np.ndarray


def caratheodory_reduce(vectors, weights) -> CaratheodoryResult:
    """Rewrite a positive combination over a linearly independent subset.

    While the selected columns are rank deficient, a unit null-space
    direction ``eta`` is stepped against the weights (``t = min w_i /
    eta_i`` over ``eta_i > 0``) so one weight reaches zero; the weighted
    sum is unchanged along null directions.  A final least-squares polish
    re-solves the surviving weights against the original sum.  At most d
    vectors survive and they are linearly independent at the rank
    tolerance.

    Parameters
    ----------
    vectors : sequence of arrays, shape (d,) each
    weights : array of matching length, strictly positive
    """
    if len(vectors) == 0:
        if np.asarray(weights, dtype=float).size:
            raise ValueError("weights without vectors")
        return CaratheodoryResult(np.zeros(0, dtype=int), np.zeros(0))
    V = generator_matrix(vectors)
    w = as_vector(weights)
    if w.size != V.shape[1]:
        raise ValueError("one weight per vector is required")
    if np.any(w <= 0.0):
        raise ValueError("weights must be strictly positive")

    target = V @ w
    idx = np.arange(V.shape[1])
    wact = w.copy()

    while idx.size:
        A = V[:, idx]
        u, s, vt = np.linalg.svd(A, full_matrices=True)
        cutoff = max(A.shape) * _EPS * (float(s[0]) if s.size else 0.0)
        rank = int(np.count_nonzero(s > cutoff))
        if rank == idx.size:
            break
        eta = vt[-1]
        if eta.max() <= 0.0:
            eta = -eta
        pos = eta > 1e-12
        ratios = wact[pos] / eta[pos]
        t = float(ratios.min())
        wact = wact - t * eta
        keep = wact > 64.0 * _EPS * max(1.0, float(wact.max(initial=0.0)))
        idx = idx[keep]
        wact = wact[keep]

    if idx.size:
        polished, *_ = np.linalg.lstsq(V[:, idx], target, rcond=None)
        # keep the drift-corrected weights only if they stay nonnegative
        if polished.min(initial=0.0) >= -1e-12 * max(1.0, float(np.abs(polished).max(initial=0.0))):
            wact = np.maximum(polished, 0.0)
            keep = wact > 0.0
            idx = idx[keep]
            wact = wact[keep]

    return CaratheodoryResult(indices=idx, weights=wact)
