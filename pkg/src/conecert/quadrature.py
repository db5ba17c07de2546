"""Positive quadrature by moment matching on a candidate grid.

For any degree n there is a rule with at most n + 1 nodes and strictly
positive weights that integrates every polynomial of degree <= n exactly.
The construction here fits nonnegative weights on a Chebyshev candidate
grid to the moments of the orthonormal shifted-Legendre basis (where the
moment vector is (sqrt(b - a), 0, ..., 0)) and then reduces the support
to an independent set of evaluation vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BadInterval, MomentFitFailed
from .legendre import LegendreBasis, chebyshev_points
from .linalg import caratheodory_reduce, nnls

# moment mismatch allowed in a finished rule, scaled by 1 + |moment_0|
EXACTNESS_TOL = 1e-8


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes (strictly increasing) and positive weights, exact to degree n."""

    nodes: np.ndarray
    weights: np.ndarray
    degree: int
    interval: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "interval", (float(self.interval[0]), float(self.interval[1])))


@dataclass(frozen=True)
class MomentSpec:
    """Target integrals of the orthonormal shifted-Legendre basis on [a, b]."""

    interval: tuple
    degree: int
    moments: np.ndarray


def shifted_basis_values(n: int, a: float, b: float, t) -> np.ndarray:
    """Values of the orthonormal Legendre basis shifted to [a, b]."""
    u = (2.0 * np.asarray(t, dtype=float) - (a + b)) / (b - a)
    return LegendreBasis(n).values(u) * np.sqrt(2.0 / (b - a))


def integral_moments(n: int, a: float, b: float) -> MomentSpec:
    """Moments of the integration functional over [a, b].

    By orthogonality to constants only the degree-0 moment survives:
    it equals sqrt(b - a).
    """
    if not a < b:
        raise BadInterval(f"need a < b, got [{a}, {b}]")
    if n < 0:
        raise ValueError("degree must be nonnegative")
    moments = np.zeros(n + 1)
    moments[0] = np.sqrt(b - a)
    return MomentSpec(interval=(float(a), float(b)), degree=int(n), moments=moments)


def positive_quadrature(spec: MomentSpec, grid_size: int) -> QuadratureRule:
    """Construct a positive rule matching the moments, on <= n + 1 nodes.

    Candidate nodes are Chebyshev points of the interval (clustered at
    the endpoints for conditioning); weights come from a nonnegative
    least-squares fit to the moments and the support is then reduced to
    linearly independent evaluation vectors, which caps it at n + 1.
    Nodes closer than ``1e-12 (b - a)`` are merged, summing weights.

    Raises
    ------
    MomentFitFailed
        If the fitted rule misses a moment by more than
        ``1e-8 (1 + |moment_0|)`` (grid too coarse; retry denser).
    """
    a, b = spec.interval
    n = spec.degree
    if grid_size < 4 * (n + 1):
        raise ValueError("grid_size must be at least 4 (n + 1)")
    grid = chebyshev_points(grid_size, a, b)
    E = shifted_basis_values(n, a, b, grid)

    fit_tol = EXACTNESS_TOL * (1.0 + abs(float(spec.moments[0])))
    sol = nnls(E, spec.moments, tol=1e-12)
    if float(np.abs(sol.residual).max()) > fit_tol:
        raise MomentFitFailed(
            f"moment fit missed by {float(np.abs(sol.residual).max()):.3e} on a {grid_size}-point grid"
        )

    support = np.flatnonzero(sol.rho > 0.0)
    red = caratheodory_reduce([E[:, j] for j in support], sol.rho[support])
    nodes = grid[support[red.indices]]
    weights = red.weights

    order = np.argsort(nodes)
    nodes, weights = nodes[order], weights[order]

    merged_nodes, merged_weights = [], []
    gap = 1e-12 * (b - a)
    for t, w in zip(nodes, weights):
        if merged_nodes and t - merged_nodes[-1] <= gap:
            total = merged_weights[-1] + w
            merged_nodes[-1] = (merged_nodes[-1] * merged_weights[-1] + t * w) / total
            merged_weights[-1] = total
        else:
            merged_nodes.append(float(t))
            merged_weights.append(float(w))
    nodes = np.array(merged_nodes)
    weights = np.array(merged_weights)

    keep = weights > 1e-12
    nodes, weights = nodes[keep], weights[keep]

    if nodes.size > n + 1:
        raise MomentFitFailed("support reduction failed to reach n + 1 nodes")
    rule = QuadratureRule(nodes=nodes, weights=weights, degree=n, interval=(a, b))
    if verify_exactness(rule, n) > EXACTNESS_TOL:
        raise MomentFitFailed("reduced rule no longer matches the moments")
    return rule


def apply_rule(rule: QuadratureRule, f: Callable[[float], float]) -> float:
    """Evaluate the rule: sum of w_i f(t_i)."""
    return float(sum(w * float(f(t)) for t, w in zip(rule.nodes, rule.weights)))


def verify_exactness(rule: QuadratureRule, n: int) -> float:
    """Worst relative moment error of the rule over basis degrees <= n.

    An empty rule is a complete miss and scores 1.
    """
    if rule.nodes.size == 0:
        return 1.0
    a, b = rule.interval
    spec = integral_moments(n, a, b)
    E = shifted_basis_values(n, a, b, rule.nodes)
    err = float(np.abs(E @ rule.weights - spec.moments).max())
    return err / (1.0 + abs(float(spec.moments[0])))
