"""Shape-preserving least-squares approximation on [-1, 1].

Best approximation of a polynomial by one whose r-th derivative is
nonnegative (nonnegative, increasing, or convex polynomials for
r = 0, 1, 2).  In orthonormal Legendre coordinates the constraint
"p^(r)(alpha) >= 0" is an inner product against a representer vector, so
the continuum cone is discretized on a grid of alphas and the problem
becomes a dual-form cone projection in coefficient space.

Grid feasibility is certified exactly; between grid points the
derivative may dip below zero by O(spacing^2), which the result reports
as the minimum over a ten-times-denser check grid rather than hiding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import ProjectionResult, project_dual
from .legendre import LegendreBasis, chebyshev_points, derivative_matrix
from .linalg import DEFAULT_TOL, as_vector


@dataclass(frozen=True)
class LegendrePoly:
    """Polynomial in orthonormal Legendre coordinates.

    Parseval holds: the L2[-1, 1] norm is the Euclidean norm of
    ``coeffs``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", as_vector(self.coeffs))

    @property
    def degree_bound(self) -> int:
        return self.coeffs.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def eval_poly(p: LegendrePoly, t, r: int = 0):
    """Value of p^(r) at t; orders beyond the degree bound give 0."""
    if r < 0:
        raise ValueError("derivative order must be nonnegative")
    n = p.degree_bound
    if r > n:
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
    vals = LegendreBasis(n).values(t, r)
    return float(p.coeffs @ vals) if vals.ndim == 1 else p.coeffs @ vals


def representer(n: int, r: int, alpha: float) -> LegendrePoly:
    """Representer of "the r-th derivative evaluated at alpha" on degree <= n.

    Its coefficients are the derivative values of the basis members, so
    ``<k_alpha, p> = p^(r)(alpha)`` for every polynomial p of degree at
    most n.
    """
    if not -1.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [-1, 1]")
    return LegendrePoly(LegendreBasis(n).values(float(alpha), r).copy())


def default_grid(n: int) -> np.ndarray:
    """Default constraint grid: 20 (n+1) Chebyshev-distributed points."""
    return chebyshev_points(20 * (n + 1))


@dataclass(frozen=True)
class ShapeProblem:
    """Discretized best-approximation problem over C_{n,r}.

    The active-count bound of the characterization needs r < n, but the
    projection itself is well-defined up to r = n (a sign constraint on
    the leading derivative), so r = n is accepted.
    """

    n: int
    r: int
    grid: np.ndarray
    target: LegendrePoly

    def __post_init__(self):
        if not 0 <= self.r <= self.n:
            raise ValueError("need 0 <= r <= n")
        g = as_vector(self.grid)
        if g.size < self.n + 1:
            raise ValueError("grid must have at least n + 1 points")
        if np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing")
        if g[0] < -1.0 or g[-1] > 1.0:
            raise ValueError("grid must lie in [-1, 1]")
        object.__setattr__(self, "grid", g)
        if self.target.degree_bound != self.n:
            raise ValueError("target must carry exactly n + 1 coefficients")


@dataclass(frozen=True)
class ShapeResult:
    """Projected polynomial with the active constraint points.

    ``rho`` are the strictly positive multipliers on ``active_alphas``
    (already reduced to an independent representer set);
    ``min_derivative_on_checkgrid`` is the continuum feasibility margin
    and ``bound_ok`` records the active-count bound
    ``m <= (n - r + 2) / 2`` whenever the solution's r-th derivative is
    not identically zero.
    """

    solution: LegendrePoly
    active_alphas: np.ndarray
    rho: np.ndarray
    min_derivative_on_checkgrid: float
    bound_ok: bool
    projection: ProjectionResult


def project_shape(problem: ShapeProblem, tol: float = DEFAULT_TOL) -> ShapeResult:
    """Best approximation of the target from the grid-discretized cone."""
    n, r = problem.n, problem.r
    basis = LegendreBasis(n)
    columns = basis.values(problem.grid, r)  # column j is the representer at grid[j]
    proj = project_dual(list(columns.T), problem.target.coeffs, tol)
    solution = LegendrePoly(proj.point)

    check_grid = chebyshev_points(10 * problem.grid.size)
    min_deriv = float((solution.coeffs @ basis.values(check_grid, r)).min())

    deriv_norm = float(np.linalg.norm(derivative_matrix(n, r) @ solution.coeffs))
    m = int(proj.active.size)
    bound_ok = True if deriv_norm <= 1e-8 else m <= 0.5 * (n - r + 2)

    return ShapeResult(
        solution=solution,
        active_alphas=problem.grid[proj.active],
        rho=proj.rho[proj.active],
        min_derivative_on_checkgrid=min_deriv,
        bound_ok=bool(bound_ok),
        projection=proj,
    )
