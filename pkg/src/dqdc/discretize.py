"""Collocation grids and derivative weighting matrices.

One-dimensional differential quadrature (DQ) operators come from
differentiating the Lagrange interpolant through the grid nodes; higher
orders are products of the first-order matrix. Two-dimensional
differential cubature (DC) operators act on the whole tensor grid and are
built by Kronecker stacking. A three-point finite-difference operator is
provided as a drop-in alternative backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

__all__ = [
    "GRID_KINDS",
    "Grid1D",
    "Grid2D",
    "DerivOperator",
    "DerivOperator2D",
    "grid_uniform",
    "grid_chebyshev_roots",
    "grid_lobatto",
    "make_grid",
    "dq_weights_first",
    "dq_weights_higher",
    "dq_operator",
    "fd_operator",
    "dc_operators",
]

GRID_KINDS = ("uniform", "cheb", "lobatto")


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Grid1D:
    a: float
    b: float
    nodes: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        nodes = _frozen(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ArgumentError("a grid needs at least 2 nodes")
        if not np.all(np.diff(nodes) > 0):
            raise ArgumentError("grid nodes must be strictly increasing")
        if nodes[0] != self.a or nodes[-1] != self.b:
            raise ArgumentError("first and last nodes must be the interval endpoints")

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Tensor grid with x-major linear ordering ``j = ix * ny + iy`` (0-based)."""

    gx: Grid1D
    gy: Grid1D

    @property
    def nx(self) -> int:
        return self.gx.n

    @property
    def ny(self) -> int:
        return self.gy.n

    @property
    def n(self) -> int:
        return self.nx * self.ny

    @property
    def kind(self) -> str:
        return self.gx.kind if self.gx.kind == self.gy.kind else "mixed"

    def index(self, ix: int, iy: int) -> int:
        return ix * self.ny + iy

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat ``(x, y)`` coordinate arrays in linear-index order."""
        return np.repeat(self.gx.nodes, self.ny), np.tile(self.gy.nodes, self.nx)

    def boundary_mask(self) -> np.ndarray:
        ix = np.repeat(np.arange(self.nx), self.ny)
        iy = np.tile(np.arange(self.ny), self.nx)
        return (ix == 0) | (ix == self.nx - 1) | (iy == 0) | (iy == self.ny - 1)


@dataclass(frozen=True, eq=False)
class DerivOperator:
    """Weighting matrix ``W`` for the ``order``-th derivative on ``grid``."""

    order: int
    grid: Grid1D
    W: np.ndarray
    backend: str = "dq"

    def __post_init__(self):
        object.__setattr__(self, "W", _frozen(self.W))
        if self.W.shape != (self.grid.n, self.grid.n):
            raise ArgumentError(f"operator shape {self.W.shape} does not match grid size {self.grid.n}")

    def __matmul__(self, f):
        return self.W @ f


@dataclass(frozen=True, eq=False)
class DerivOperator2D:
    which: str
    grid: Grid2D
    W: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "W", _frozen(self.W))
        if self.which not in ("Ex", "Ey", "Fx", "Fy", "Fxy"):
            raise ArgumentError(f"unknown DC operator {self.which!r}")

    @property
    def order(self) -> int:
        return 1 if self.which in ("Ex", "Ey") else 2

    def __matmul__(self, f):
        return self.W @ f


def _check_interval(N, a, b, minimum=2):
    if int(N) != N or N < minimum:
        raise ArgumentError(f"need at least {minimum} nodes, got {N}")
    if not a < b:
        raise ArgumentError(f"need a < b, got [{a}, {b}]")


def grid_uniform(N: int, a: float = 0.0, b: float = 1.0) -> Grid1D:
    _check_interval(N, a, b)
    x = np.linspace(a, b, int(N))
    x[0], x[-1] = a, b
    return Grid1D(a, b, x, "uniform")


def grid_chebyshev_roots(N: int, a: float = 0.0, b: float = 1.0) -> Grid1D:
    """Endpoints plus the ``N - 2`` shifted first-kind Chebyshev roots."""
    _check_interval(N, a, b)
    k = np.arange(1, N - 1)
    interior = a + (b - a) * (1.0 - np.cos((2 * k - 1) * np.pi / (2 * (N - 2)))) / 2.0
    return Grid1D(a, b, np.concatenate([[a], np.sort(interior), [b]]), "cheb")


def grid_lobatto(N: int, a: float = 0.0, b: float = 1.0) -> Grid1D:
    """Chebyshev–Gauss–Lobatto points (extrema of T_{N-1}) mapped to ``[a, b]``."""
    _check_interval(N, a, b)
    k = np.arange(N)
    x = a + (b - a) * (1.0 - np.cos(k * np.pi / (N - 1))) / 2.0
    x[0], x[-1] = a, b
    return Grid1D(a, b, x, "lobatto")


def make_grid(kind: str, N: int, a: float = 0.0, b: float = 1.0) -> Grid1D:
    builders = {"uniform": grid_uniform, "cheb": grid_chebyshev_roots, "lobatto": grid_lobatto}
    try:
        return builders[kind](N, a, b)
    except KeyError:
        raise ArgumentError(f"unknown grid kind {kind!r}; expected one of {GRID_KINDS}") from None


def dq_weights_first(grid: Grid1D) -> DerivOperator:
    """First-derivative DQ weights from the Lagrange interpolant.

    Off-diagonal ``A_ij = P(x_i) / ((x_i - x_j) P(x_j))`` with
    ``P(x_i) = prod_{k != i} (x_i - x_k)``; the diagonal is the negative
    off-diagonal row sum so constants are differentiated exactly to zero.
    """
    x = grid.nodes
    N = x.size
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        raise ArgumentError("duplicate grid nodes")
    P = diff.prod(axis=1)
    A = P[:, None] / (diff * P[None, :])
    np.fill_diagonal(A, 0.0)
    A[np.diag_indices(N)] = -A.sum(axis=1)
    return DerivOperator(1, grid, A)


def dq_weights_higher(A: DerivOperator, m: int) -> DerivOperator:
    """Order-``m`` weights (2 ≤ m ≤ 4) by products of the first-order matrix."""
    if A.order != 1:
        raise ArgumentError("dq_weights_higher needs a first-order operator")
    if m not in (2, 3, 4):
        raise ArgumentError(f"derivative order must be in 2..4, got {m}")
    W = A.W
    B = W @ W
    if m == 2:
        out = B
    elif m == 3:
        out = W @ B
    else:
        out = B @ B
    return DerivOperator(m, A.grid, out, A.backend)


def dq_operator(grid: Grid1D, m: int) -> DerivOperator:
    if m not in (1, 2, 3, 4):
        raise ArgumentError(f"derivative order must be in 1..4, got {m}")
    A = dq_weights_first(grid)
    return A if m == 1 else dq_weights_higher(A, m)


def fd_operator(grid: Grid1D, m: int) -> DerivOperator:
    """Second-order accurate finite-difference matrix on a uniform grid.

    Central three-point rows in the interior; one-sided second-order rows
    at the two ends (four points for ``m = 2`` when available).
    """
    if m not in (1, 2):
        raise ArgumentError(f"fd_operator supports orders 1 and 2, got {m}")
    x = grid.nodes
    N = x.size
    if N < 3:
        raise ArgumentError("fd_operator needs at least 3 nodes")
    h = (grid.b - grid.a) / (N - 1)
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0.0):
        raise ArgumentError("fd_operator needs a uniform grid")
    W = np.zeros((N, N))
    i = np.arange(1, N - 1)
    if m == 1:
        W[i, i - 1] = -1.0
        W[i, i + 1] = 1.0
        W[0, :3] = [-3.0, 4.0, -1.0]
        W[-1, -3:] = [1.0, -4.0, 3.0]
        W /= 2 * h
    else:
        W[i, i - 1] = 1.0
        W[i, i] = -2.0
        W[i, i + 1] = 1.0
        if N >= 4:
            W[0, :4] = [2.0, -5.0, 4.0, -1.0]
            W[-1, -4:] = [-1.0, 4.0, -5.0, 2.0]
        else:
            W[0, :3] = [1.0, -2.0, 1.0]
            W[-1, -3:] = [1.0, -2.0, 1.0]
        W /= h * h
    return DerivOperator(m, grid, W, "fd")


def dc_operators(grid: Grid2D) -> dict[str, DerivOperator2D]:
    """The five DC matrices ``Ex, Ey, Fx, Fy, Fxy`` on a tensor grid.

    ``Ex = Ax ⊗ I`` and ``Ey = I ⊗ Ay`` under x-major ordering, so ``Ex`` and
    ``Ey`` commute and ``Fxy`` is unambiguous.
    """
    Ax = dq_weights_first(grid.gx).W
    Ay = dq_weights_first(grid.gy).W
    Ex = np.kron(Ax, np.eye(grid.ny))
    Ey = np.kron(np.eye(grid.nx), Ay)
    mats = {"Ex": Ex, "Ey": Ey, "Fx": Ex @ Ex, "Fy": Ey @ Ey, "Fxy": Ex @ Ey}
    return {k: DerivOperator2D(k, grid, v) for k, v in mats.items()}
