"""Differential quadrature and cubature solvers for nonlinear equations.

Residuals are written in Hadamard-product form over the interior nodal
values; Jacobians are assembled exactly with SJT (row/column scaling)
products and handed to an undamped Newton–Raphson driver.
"""

from .boundary import DirichletBC1D, ReducedOperator, reduce_dirichlet_1d, reduce_dirichlet_2d, transform_bc_power
from .discretize import (
    DerivOperator,
    DerivOperator2D,
    Grid1D,
    Grid2D,
    dc_operators,
    dq_operator,
    dq_weights_first,
    dq_weights_higher,
    fd_operator,
    grid_chebyshev_roots,
    grid_lobatto,
    grid_uniform,
    make_grid,
)
from .errors import (
    ArgumentError,
    DimensionError,
    DivergenceError,
    DomainError,
    DqdcError,
    IntegrationError,
    SingularMatrixError,
)
from .hadamard import (
    fd_jacobian,
    hadamard,
    hadamard_fn,
    hadamard_power,
    kron,
    lu_solve,
    selection_matrix,
    sjt_col,
    sjt_row,
)
from .residual import (
    NewtonConfig,
    NewtonReport,
    QuadraticSystem,
    Var,
    apply,
    assemble_quadratic,
    evaluate,
    frechet,
    newton,
    reduce_nonlinear,
)

from . import problems

__version__ = "0.1.0"
