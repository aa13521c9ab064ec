"""Graded radial meshes on [0, 1] with quadrature for the measure r dr.

The unit disk problems in this package reduce to one-dimensional integrals
of the form int_0^1 f(r) r dr.  This module provides the mesh, the matching
quadrature rule, and second-order finite-difference derivatives on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RadialGrid", "build_grid", "integrate", "derivative", "l2_norm"]


@dataclass(frozen=True)
class RadialGrid:
    """Mesh nodes r_k = (k/n)**grading together with r dr quadrature weights.

    nodes[0] == 0.0 and nodes[-1] == 1.0 exactly.  The weight attached to
    r = 0 is identically zero (the measure r dr vanishes there); the weights
    sum to 1/2, the total mass of r dr on [0, 1].
    """

    nodes: np.ndarray
    weights: np.ndarray
    grading: float

    @property
    def n(self) -> int:
        """Number of mesh cells (nodes minus one)."""
        return len(self.nodes) - 1


def build_grid(n: int, grading: float = 2.0) -> RadialGrid:
    """Build a graded mesh with n cells, clustered near r = 0 for grading > 1.

    The quadrature weights integrate the piecewise-linear interpolant of the
    sampled integrand exactly against r dr on every cell, except that the
    share belonging to the r = 0 node (where the measure vanishes and nodal
    values are conventions, not data) is folded into its neighbor so the sum
    rule sum(w) = 1/2 is preserved exactly.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"need at least 2 cells, got n={n}")
    n = int(n)
    if not np.isfinite(grading) or grading < 1.0:
        raise ValueError(f"grading must be >= 1, got {grading}")

    k = np.arange(n + 1, dtype=float)
    nodes = (k / n) ** float(grading)
    nodes[0] = 0.0
    nodes[-1] = 1.0

    a = nodes[:-1]
    b = nodes[1:]
    d = b - a
    # exact hat-function moments against r dr on the cell [a, b]
    left = d * (2.0 * a + b) / 6.0
    right = d * (a + 2.0 * b) / 6.0

    weights = np.zeros(n + 1)
    weights[:-1] += left
    weights[1:] += right
    weights[1] += weights[0]  # r = 0 carries no measure; keep the sum rule
    weights[0] = 0.0

    nodes.flags.writeable = False
    weights.flags.writeable = False
    return RadialGrid(nodes=nodes, weights=weights, grading=float(grading))


def integrate(grid: RadialGrid, values: np.ndarray) -> float:
    """Quadrature for int_0^1 f(r) r dr from nodal samples of f."""
    values = np.asarray(values, dtype=float)
    if values.shape != grid.nodes.shape:
        raise ValueError(
            f"expected {grid.nodes.shape[0]} nodal values, got {values.shape}"
        )
    return float(grid.weights @ values)


def l2_norm(grid: RadialGrid, values: np.ndarray) -> float:
    """Norm of a nodal field in L^2((0,1), r dr)."""
    values = np.asarray(values, dtype=float)
    return float(np.sqrt(max(integrate(grid, values * values), 0.0)))


def _interior_stencils(grid: RadialGrid) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Three-point first-derivative coefficients at nodes 1..n-1."""
    spacing = np.diff(grid.nodes)
    h1 = spacing[:-1]
    h2 = spacing[1:]
    lo = -h2 / (h1 * (h1 + h2))
    mid = (h2 - h1) / (h1 * h2)
    hi = h1 / (h2 * (h1 + h2))
    return lo, mid, hi


def _end_stencils(grid: RadialGrid) -> tuple[np.ndarray, np.ndarray]:
    """One-sided three-point derivative coefficients at r = 0 and r = 1."""
    spacing = np.diff(grid.nodes)
    h1, h2 = spacing[0], spacing[1]
    left = np.array(
        [
            -(2.0 * h1 + h2) / (h1 * (h1 + h2)),
            (h1 + h2) / (h1 * h2),
            -h1 / (h2 * (h1 + h2)),
        ]
    )
    g1, g2 = spacing[-2], spacing[-1]
    right = np.array(
        [
            g2 / (g1 * (g1 + g2)),
            -(g1 + g2) / (g1 * g2),
            (g1 + 2.0 * g2) / (g2 * (g1 + g2)),
        ]
    )
    return left, right


def derivative(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """Nodal first derivative, second order on the nonuniform mesh.

    Interior nodes use the centered three-point stencil; the endpoints use
    one-sided three-point stencils.  All stencils are exact for quadratics.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != grid.nodes.shape:
        raise ValueError(
            f"expected {grid.nodes.shape[0]} nodal values, got {values.shape}"
        )
    lo, mid, hi = _interior_stencils(grid)
    left, right = _end_stencils(grid)
    out = np.empty_like(values)
    out[1:-1] = lo * values[:-2] + mid * values[1:-1] + hi * values[2:]
    out[0] = left @ values[:3]
    out[-1] = right @ values[-3:]
    return out


def stiffness_diagonals(grid: RadialGrid) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonals (offsets 0, 1, 2) of D^T W D, the quadratic form of
    sum_k w_k (Df)_k^2 where D is the nodal derivative operator.

    The matrix is symmetric positive semidefinite and pentadiagonal.  Row
    r = 0 of D never contributes because its quadrature weight is zero.
    """
    m = grid.n + 1
    w = grid.weights
    lo, mid, hi = _interior_stencils(grid)
    _, right = _end_stencils(grid)

    d0 = np.zeros(m)
    d1 = np.zeros(m - 1)
    d2 = np.zeros(m - 2)

    wk = w[1:-1]
    d0[:-2] += wk * lo * lo
    d0[1:-1] += wk * mid * mid
    d0[2:] += wk * hi * hi
    d1[:-1] += wk * lo * mid
    d1[1:] += wk * mid * hi
    d2[:] += wk * lo * hi

    wn = w[-1]
    e0, e1, e2 = right
    d0[-3] += wn * e0 * e0
    d0[-2] += wn * e1 * e1
    d0[-1] += wn * e2 * e2
    d1[-2] += wn * e0 * e1
    d1[-1] += wn * e1 * e2
    d2[-1] += wn * e0 * e2
    return d0, d1, d2


def stiffness_apply(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """Matrix-vector product (D^T W D) values."""
    d0, d1, d2 = stiffness_diagonals(grid)
    x = np.asarray(values, dtype=float)
    y = d0 * x
    y[:-1] += d1 * x[1:]
    y[1:] += d1 * x[:-1]
    y[:-2] += d2 * x[2:]
    y[2:] += d2 * x[:-2]
    return y
