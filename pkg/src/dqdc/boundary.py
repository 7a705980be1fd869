"""Absorb Dirichlet data into weighting matrices.

A full-grid operator ``W`` applied to a vector whose boundary entries are
known splits into an interior block acting on the unknowns plus a constant
shift contributed by the boundary columns::

    (W f)[interior] = Bbar @ f[interior] + bbar
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from .discretize import DerivOperator, DerivOperator2D, Grid2D
from .errors import ArgumentError, DimensionError

__all__ = [
    "DirichletBC1D",
    "ReducedOperator",
    "reduce_dirichlet_1d",
    "reduce_dirichlet_2d",
    "boundary_values_2d",
    "transform_bc_power",
]


@dataclass(frozen=True)
class DirichletBC1D:
    left: float
    right: float

    def __post_init__(self):
        if not (np.isfinite(self.left) and np.isfinite(self.right)):
            raise ArgumentError("boundary values must be finite")


@dataclass(frozen=True, eq=False)
class ReducedOperator:
    """Interior-only affine operator ``u -> Bbar @ u + bbar``.

    ``interior_index`` maps interior positions to full-grid node indices and
    ``full_values`` holds the prescribed boundary data (zeros at interior
    nodes), which is enough to lift an interior vector back to the grid.
    """

    Bbar: np.ndarray
    bbar: np.ndarray
    interior_index: np.ndarray
    full_values: np.ndarray

    @property
    def n(self) -> int:
        return self.bbar.size

    def apply(self, u) -> np.ndarray:
        return self.Bbar @ u + self.bbar

    def lift(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n,):
            raise DimensionError(f"lift: expected {self.n} interior values, got {u.shape}")
        full = self.full_values.copy()
        full[self.interior_index] = u
        return full


def _reduce(W: np.ndarray, interior: np.ndarray, full_values: np.ndarray) -> ReducedOperator:
    boundary = np.setdiff1d(np.arange(W.shape[0]), interior)
    Bbar = W[np.ix_(interior, interior)].copy()
    bbar = W[np.ix_(interior, boundary)] @ full_values[boundary]
    for a in (Bbar, bbar, interior, full_values):
        a.setflags(write=False)
    return ReducedOperator(Bbar, bbar, interior, full_values)


def reduce_dirichlet_1d(W, bc: DirichletBC1D) -> ReducedOperator:
    """Partition a 1-D operator by its first and last nodes."""
    M = np.asarray(W.W if isinstance(W, DerivOperator) else W, dtype=float)
    N = M.shape[0]
    if M.ndim != 2 or M.shape[1] != N:
        raise DimensionError(f"expected a square operator, got {M.shape}")
    if N < 3:
        raise ArgumentError("Dirichlet reduction needs at least one interior node")
    full = np.zeros(N)
    full[0], full[-1] = bc.left, bc.right
    return _reduce(M, np.arange(1, N - 1), full)


def boundary_values_2d(grid: Grid2D, f: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> dict[int, float]:
    """Sample ``f(x, y)`` on the boundary ring of a tensor grid."""
    x, y = grid.coords()
    idx = np.flatnonzero(grid.boundary_mask())
    vals = np.asarray(f(x[idx], y[idx]), dtype=float)
    return dict(zip(idx.tolist(), vals.tolist()))


def reduce_dirichlet_2d(W: DerivOperator2D, boundary_values: Mapping[int, float]) -> ReducedOperator:
    """Reduce a DC operator, every node of the boundary ring being prescribed."""
    grid = W.grid
    mask = grid.boundary_mask()
    full = np.zeros(grid.n)
    for j in np.flatnonzero(mask):
        try:
            full[j] = boundary_values[int(j)]
        except KeyError:
            raise ArgumentError(f"missing boundary value for node {j}") from None
    interior = np.flatnonzero(~mask)
    if interior.size == 0:
        raise ArgumentError("tensor grid has no interior nodes")
    return _reduce(np.asarray(W.W), interior, full)


def transform_bc_power(bc: DirichletBC1D, p: int) -> DirichletBC1D:
    """Boundary data for ``U**p`` given the data for ``U``."""
    return DirichletBC1D(bc.left**p, bc.right**p)
