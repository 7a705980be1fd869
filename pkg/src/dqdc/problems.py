"""Worked nonlinear problems, end to end.

Each boundary-value problem is described by a :class:`Formulation` (grid,
residual tree over the interior unknowns, linear initial guess, analytic or
numeric oracle) and solved with the common Newton driver:

* Example A   ``y'' + 1/y + y'^2/y = 0``, ``y(0)=1, y(1)=2``
* Example B   ``y'' + sin(y') + 1 = 0``, ``y(0)=0, y(1)=1``
* Example C   ``U'^2 + U U'' + U'' = 0``, ``U(0)=0, U(1)=1``, in the
  conventional product form or the reduced ``½(U²)'' + U'' = 0`` form
* DC example  ``W_xx + W_x W_yy = f(x, y)`` on ``[0, 1]²``

plus the decoupled circular-plate residual, Burgers' equation by the
method of lines and the Boussinesq semi-discrete right-hand side.
"""

from __future__ import annotations

import functools
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .boundary import (
    DirichletBC1D,
    ReducedOperator,
    boundary_values_2d,
    reduce_dirichlet_1d,
    reduce_dirichlet_2d,
    transform_bc_power,
)
from .discretize import (
    Grid1D,
    Grid2D,
    dc_operators,
    dq_weights_first,
    dq_weights_higher,
    fd_operator,
    make_grid,
)
from .errors import ArgumentError, DimensionError, IntegrationError
from .hadamard import hadamard_power, lu_solve
from .residual import (
    Const,
    Expr,
    HadamardFn,
    NewtonConfig,
    NewtonReport,
    Var,
    apply,
    evaluate,
    frechet,
    newton,
)

__all__ = [
    "PROBLEMS",
    "Formulation",
    "SolveResult",
    "solve_formulation",
    "example_a",
    "example_b",
    "example_c",
    "dc_example",
    "solve_example_a",
    "solve_example_b",
    "solve_example_c",
    "solve_dc_example",
    "example_a_exact",
    "example_c_exact",
    "dc_exact",
    "dc_rhs",
    "example_b_shooting",
    "PlateSetup",
    "plate_setup",
    "plate_expression",
    "plate_residual",
    "plate_frechet",
    "plate_recover_s",
    "plate_coupled_residual",
    "BurgersTrajectory",
    "burgers_operators",
    "burgers_rhs",
    "burgers_expression",
    "burgers_integrate",
    "SCHEMES",
    "BoussinesqFragments",
    "boussinesq_semidiscrete",
]

PROBLEMS = ("example-a", "example-b", "example-c", "dc-example")


# exact / reference solutions ------------------------------------------------


def example_a_exact(x):
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + 4.0 * x - x * x)


def example_c_exact(x):
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + 3.0 * x) - 1.0


def dc_exact(x, y):
    return x * np.exp(-x * y)


def dc_rhs(x, y):
    e = np.exp(-x * y)
    return e * (x * y**2 - 2.0 * y + x**3 * e - x**4 * y * e)


@functools.lru_cache(maxsize=None)
def _shooting_slope() -> float:
    def miss(s):
        return _shoot(s, np.array([1.0]))[0] - 1.0

    return brentq(miss, 0.0, 6.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def _shoot(s, x_eval):
    sol = solve_ivp(
        lambda t, z: [z[1], -1.0 - np.sin(z[1])],
        (0.0, 1.0),
        [0.0, s],
        method="DOP853",
        rtol=1e-12,
        atol=1e-12,
        dense_output=True,
    )
    return sol.sol(x_eval)[0]


def example_b_shooting(x):
    """Reference solution of Example B by shooting on the initial slope."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return _shoot(_shooting_slope(), x)


# formulations ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Formulation:
    """A discretized boundary-value problem ready for Newton.

    ``lift`` maps the interior unknowns to a full-grid vector carrying the
    Dirichlet data; ``oracle`` maps full-grid node coordinates to reference
    values (or is ``None``).
    """

    problem: str
    grid: Grid1D | Grid2D
    expr: Expr
    u0: np.ndarray
    lift: Callable[[np.ndarray], np.ndarray]
    oracle: Callable | None = None
    ops: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def residual(self, u):
        return evaluate(self.expr, u)

    def jacobian(self, u):
        return frechet(self.expr, u)


def _first_second(grid: Grid1D, backend: str):
    if backend == "dq":
        A = dq_weights_first(grid)
        return A, dq_weights_higher(A, 2)
    if backend == "fd":
        return fd_operator(grid, 1), fd_operator(grid, 2)
    raise ArgumentError(f"unknown backend {backend!r}; expected 'dq' or 'fd'")


def _grid_for(N, grid_kind, backend):
    if int(N) != N or N < 3:
        raise ArgumentError(f"need N >= 3, got {N}")
    if backend == "fd" and grid_kind != "uniform":
        raise ArgumentError("the finite-difference backend needs a uniform grid")
    return make_grid(grid_kind, int(N))


def _linear_guess(B: ReducedOperator, extra: float = 0.0) -> np.ndarray:
    # solution of y'' + extra = 0 with the same Dirichlet data
    return lu_solve(B.Bbar, -(B.bbar + extra))


def example_a(N: int = 6, grid_kind: str = "cheb", backend: str = "dq") -> Formulation:
    """``ψ(y) = y ∘ (B̄y + b̄) + 1 + (Āy + ā)°2``."""
    grid = _grid_for(N, grid_kind, backend)
    bc = DirichletBC1D(1.0, 2.0)
    A1, B2 = _first_second(grid, backend)
    A = reduce_dirichlet_1d(A1, bc)
    B = reduce_dirichlet_1d(B2, bc)
    y = Var(A.n, "y")
    expr = y * apply(B, y, "B") + 1.0 + apply(A, y, "A") ** 2
    return Formulation(
        "example-a", grid, expr, _linear_guess(B), A.lift, example_a_exact,
        {"A": A, "B": B}, {"n": int(N), "grid": grid_kind, "backend": backend},
    )


def example_b(N: int = 6, grid_kind: str = "cheb", backend: str = "dq") -> Formulation:
    """``ψ(y) = B̄y + b̄ + sin°(Āy + ā) + 1``."""
    grid = _grid_for(N, grid_kind, backend)
    bc = DirichletBC1D(0.0, 1.0)
    A1, B2 = _first_second(grid, backend)
    A = reduce_dirichlet_1d(A1, bc)
    B = reduce_dirichlet_1d(B2, bc)
    y = Var(A.n, "y")
    expr = apply(B, y, "B") + HadamardFn(apply(A, y, "A"), "sin") + 1.0
    return Formulation(
        "example-b", grid, expr, _linear_guess(B, 1.0), A.lift, example_b_shooting,
        {"A": A, "B": B}, {"n": int(N), "grid": grid_kind, "backend": backend},
    )


def example_c(
    N: int = 6, mode: str = "conventional", grid_kind: str = "cheb", backend: str = "dq"
) -> Formulation:
    """Example C in either formulation.

    conventional: ``(Āu + ā)°2 + u ∘ (B̄u + b̄) + B̄u + b̄``
    reduced:      ``½(B̄₂ u°2 + b̄₂) + B̄u + b̄`` where ``B̄₂`` carries the
    boundary data of ``U²``.
    """
    if mode not in ("conventional", "reduced"):
        raise ArgumentError(f"unknown mode {mode!r}; expected 'conventional' or 'reduced'")
    grid = _grid_for(N, grid_kind, backend)
    bc = DirichletBC1D(0.0, 1.0)
    A1, B2 = _first_second(grid, backend)
    A = reduce_dirichlet_1d(A1, bc)
    B = reduce_dirichlet_1d(B2, bc)
    u = Var(A.n)
    ops = {"A": A, "B": B}
    if mode == "conventional":
        Bu = apply(B, u, "B")
        expr = apply(A, u, "A") ** 2 + u * Bu + Bu
    else:
        B_sq = reduce_dirichlet_1d(B2, transform_bc_power(bc, 2))
        ops["B_u2"] = B_sq
        expr = 0.5 * apply(B_sq, u**2, "B_u2") + apply(B, u, "B")
    return Formulation(
        "example-c", grid, expr, _linear_guess(B), A.lift, example_c_exact, ops,
        {"n": int(N), "grid": grid_kind, "backend": backend, "mode": mode},
    )


def dc_example(nx: int = 7, ny: int = 7, grid_kind: str = "cheb") -> Formulation:
    """``φ(W) = F̄x W + (Ēx W) ∘ (F̄y W) - f`` on ``[0, 1]²``.

    The initial guess solves the linear part ``F̄x W = f``; starting from a
    zero interior against nonzero boundary data gives residuals of order
    1e4 and undamped Newton wanders.
    """
    if nx < 4 or ny < 4:
        raise ArgumentError("the DC example needs at least 4 nodes per direction")
    grid = Grid2D(make_grid(grid_kind, nx), make_grid(grid_kind, ny))
    ops2d = dc_operators(grid)
    bvals = boundary_values_2d(grid, dc_exact)
    red = {k: reduce_dirichlet_2d(ops2d[k], bvals) for k in ("Ex", "Fx", "Fy")}
    n = red["Ex"].n
    x, y = grid.coords()
    idx = red["Ex"].interior_index
    W = Var(n, "W")
    f = dc_rhs(x[idx], y[idx])
    expr = apply(red["Fx"], W, "Fx") + apply(red["Ex"], W, "Ex") * apply(red["Fy"], W, "Fy") - Const(f, "f")
    u0 = lu_solve(red["Fx"].Bbar, f - red["Fx"].bbar)
    return Formulation(
        "dc-example", grid, expr, u0, red["Ex"].lift, dc_exact, red,
        {"nx": int(nx), "ny": int(ny), "grid": grid_kind},
    )


# results ------------------------------------------------------------------


@dataclass(eq=False)
class SolveResult:
    """Solution on the full grid (boundary values included) plus diagnostics.

    ``errors`` holds ``|numeric - oracle| / |oracle|`` at interior nodes.
    """

    problem: str
    grid: Grid1D | Grid2D
    solution: np.ndarray
    report: NewtonReport
    oracle: np.ndarray | None = None
    errors: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    @property
    def interior_index(self) -> np.ndarray:
        if isinstance(self.grid, Grid2D):
            return np.flatnonzero(~self.grid.boundary_mask())
        return np.arange(1, self.grid.n - 1)

    def to_dict(self) -> dict:
        d = {
            "problem": self.problem,
            "params": dict(self.params),
            "grid": _grid_to_dict(self.grid),
            "solution": self.solution.tolist(),
            "oracle": None if self.oracle is None else self.oracle.tolist(),
            "errors": None if self.errors is None else self.errors.tolist(),
            "iterations": self.report.iterations,
            "residualHistory": list(self.report.residual_history),
            "converged": self.report.converged,
        }
        if isinstance(self.grid, Grid1D):
            d["nodes"] = self.grid.nodes.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SolveResult":
        report = NewtonReport(d["converged"], d["iterations"], list(d["residualHistory"]))
        arr = lambda v: None if v is None else np.array(v, dtype=float)  # noqa: E731
        return cls(
            d["problem"], _grid_from_dict(d["grid"]), arr(d["solution"]), report,
            arr(d["oracle"]), arr(d["errors"]), dict(d["params"]),
        )


def _grid_to_dict(grid):
    if isinstance(grid, Grid2D):
        return {"x": _grid_to_dict(grid.gx), "y": _grid_to_dict(grid.gy)}
    return {"kind": grid.kind, "a": grid.a, "b": grid.b, "nodes": grid.nodes.tolist()}


def _grid_from_dict(d):
    if "x" in d:
        return Grid2D(_grid_from_dict(d["x"]), _grid_from_dict(d["y"]))
    return Grid1D(d["a"], d["b"], d["nodes"], d["kind"])


def solve_formulation(f: Formulation, cfg: NewtonConfig | None = None) -> SolveResult:
    u, report = newton(f.expr, f.u0, cfg)
    full = f.lift(u)
    oracle = errors = None
    if f.oracle is not None:
        if isinstance(f.grid, Grid2D):
            oracle = np.asarray(f.oracle(*f.grid.coords()), dtype=float)
            idx = np.flatnonzero(~f.grid.boundary_mask())
        else:
            oracle = np.asarray(f.oracle(f.grid.nodes), dtype=float)
            idx = np.arange(1, f.grid.n - 1)
        errors = np.abs(full[idx] - oracle[idx]) / np.abs(oracle[idx])
    return SolveResult(f.problem, f.grid, full, report, oracle, errors, dict(f.params))


def solve_example_a(N=6, grid_kind="cheb", cfg=None, backend="dq") -> SolveResult:
    return solve_formulation(example_a(N, grid_kind, backend), cfg)


def solve_example_b(N=6, grid_kind="cheb", cfg=None, backend="dq") -> SolveResult:
    return solve_formulation(example_b(N, grid_kind, backend), cfg)


def solve_example_c(N=6, mode="conventional", grid_kind="cheb", cfg=None, backend="dq") -> SolveResult:
    return solve_formulation(example_c(N, mode, grid_kind, backend), cfg)


def solve_dc_example(nx=7, ny=7, grid_kind="cheb", cfg=None) -> SolveResult:
    return solve_formulation(dc_example(nx, ny, grid_kind), cfg)


# circular plate -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PlateSetup:
    grid: Grid1D
    B_phi: ReducedOperator
    B_s: ReducedOperator
    y2: np.ndarray


@functools.lru_cache(maxsize=32)
def plate_setup(
    N: int, rho0: float = 0.05, grid_kind: str = "cheb",
    bc_phi: tuple[float, float] = (0.0, 0.0), bc_s: tuple[float, float] = (0.0, 0.0),
) -> PlateSetup:
    """Operators for the decoupled plate equation on ``[rho0, 1]``.

    The radial interval starts at ``rho0 > 0`` to stay clear of the ``y = 0``
    coordinate singularity; boundary data default to homogeneous.
    """
    grid = make_grid(grid_kind, N, rho0, 1.0)
    B = dq_weights_higher(dq_weights_first(grid), 2)
    y2 = grid.interior**2
    y2.setflags(write=False)
    return PlateSetup(
        grid, reduce_dirichlet_1d(B, DirichletBC1D(*bc_phi)), reduce_dirichlet_1d(B, DirichletBC1D(*bc_s)), y2
    )


def plate_expression(n: int, Q: float, **setup_kw) -> Expr:
    """Decoupled plate residual over ``n`` interior values of φ.

    ``S = φ°(-1) ∘ y² ∘ (B̄φ φ) - Q y² ∘ φ°(-1)`` is substituted into
    ``y² ∘ (B̄s S) + ½ φ°2``.
    """
    s = plate_setup(n + 2, **setup_kw)
    phi = Var(n, "phi")
    y2 = Const(s.y2, "y²")
    inv = phi ** -1
    S = inv * y2 * apply(s.B_phi, phi, "Bphi") - Q * (y2 * inv)
    return y2 * apply(s.B_s, S, "Bs") + 0.5 * phi**2


def _plate_phi(phi):
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 1 or phi.size < 1:
        raise DimensionError("phi must be a non-empty vector of interior values")
    return phi


def plate_residual(phi, Q: float, **setup_kw) -> np.ndarray:
    phi = _plate_phi(phi)
    return evaluate(plate_expression(phi.size, Q, **setup_kw), phi)


def plate_frechet(phi, Q: float, **setup_kw) -> np.ndarray:
    phi = _plate_phi(phi)
    return frechet(plate_expression(phi.size, Q, **setup_kw), phi)


def plate_recover_s(phi, Q: float, **setup_kw) -> np.ndarray:
    """Stress function values solved from the first plate equation."""
    phi = _plate_phi(phi)
    s = plate_setup(phi.size + 2, **setup_kw)
    inv = hadamard_power(phi, -1)
    return inv * s.y2 * s.B_phi.apply(phi) - Q * s.y2 * inv


def plate_coupled_residual(phi, S, Q: float, **setup_kw) -> tuple[np.ndarray, np.ndarray]:
    """Both coupled plate equations as residuals ``(eq_a, eq_b)``."""
    phi = _plate_phi(phi)
    S = np.asarray(S, dtype=float)
    s = plate_setup(phi.size + 2, **setup_kw)
    eq_a = s.y2 * s.B_phi.apply(phi) - phi * S - Q * s.y2
    eq_b = s.y2 * s.B_s.apply(S) + 0.5 * phi**2
    return eq_a, eq_b


# Burgers ------------------------------------------------------------------


@functools.lru_cache(maxsize=32)
def _burgers_ops_cached(N, grid_kind, left, right):
    grid = make_grid(grid_kind, N)
    A = dq_weights_first(grid)
    B = dq_weights_higher(A, 2)
    bc = DirichletBC1D(left, right)
    return {
        "grid": grid,
        "A": reduce_dirichlet_1d(A, bc),
        "A_u2": reduce_dirichlet_1d(A, transform_bc_power(bc, 2)),
        "B": reduce_dirichlet_1d(B, bc),
    }


def burgers_operators(N: int, grid_kind: str = "cheb", bc: DirichletBC1D = DirichletBC1D(0.0, 0.0)) -> dict:
    return _burgers_ops_cached(int(N), grid_kind, float(bc.left), float(bc.right))


def burgers_rhs(u, mode: str, eps: float, bc: DirichletBC1D, grid_kind: str = "cheb") -> np.ndarray:
    """Semi-discrete Burgers right-hand side ``du/dt`` at interior nodes.

    reduced:      ``ε(B̄u + b̄) - ½(Ā₂ u°2 + ā₂)``
    conventional: ``ε(B̄u + b̄) - u ∘ (Āu + ā)``
    """
    if not eps > 0:
        raise ArgumentError("viscosity must be positive")
    u = np.asarray(u, dtype=float)
    ops = burgers_operators(u.size + 2, grid_kind, bc)
    diffusion = eps * ops["B"].apply(u)
    if mode == "reduced":
        return diffusion - 0.5 * ops["A_u2"].apply(u * u)
    if mode == "conventional":
        return diffusion - u * ops["A"].apply(u)
    raise ArgumentError(f"unknown mode {mode!r}; expected 'conventional' or 'reduced'")


def burgers_expression(N: int, mode: str, eps: float, bc=DirichletBC1D(0.0, 0.0), grid_kind="cheb") -> Expr:
    """The Burgers right-hand side as a residual tree (for Jacobians / inspection)."""
    ops = burgers_operators(N, grid_kind, bc)
    u = Var(ops["B"].n)
    adv = 0.5 * apply(ops["A_u2"], u**2, "A_u2") if mode == "reduced" else u * apply(ops["A"], u, "A")
    return eps * apply(ops["B"], u, "B") - adv


@dataclass(frozen=True, eq=False)
class BurgersTrajectory:
    grid: Grid1D
    times: np.ndarray
    states: np.ndarray  # (len(times), N) full-grid values

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


INITIAL_CONDITIONS = {"sin": lambda x: np.sin(np.pi * x)}

SCHEMES = ("gauss4", "rk4")

MAX_STEPS = 10_000_000

_SQ3 = np.sqrt(3.0)
_GAUSS_A = np.array([[0.25, 0.25 - _SQ3 / 6.0], [0.25 + _SQ3 / 6.0, 0.25]])


def _rk4_step(f, u, h):
    k1 = f(u)
    k2 = f(u + 0.5 * h * k1)
    k3 = f(u + 0.5 * h * k2)
    k4 = f(u + h * k3)
    return u + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _gauss4_step(expr, u, h, tol=1e-12, max_iter=25):
    """One step of the two-stage Gauss–Legendre method (order 4, A-stable).

    Stage slopes are found by Newton on ``K - f(u + h A K) = 0`` using the
    exact Jacobian of the right-hand side tree.
    """
    n = u.size
    K = np.tile(evaluate(expr, u), 2)
    eye = np.eye(2 * n)
    for _ in range(max_iter):
        Y = [u + h * (_GAUSS_A[i, 0] * K[:n] + _GAUSS_A[i, 1] * K[n:]) for i in range(2)]
        F = np.concatenate([evaluate(expr, y) for y in Y])
        G = K - F
        if np.abs(G).max() <= tol * (1.0 + np.abs(K).max()):
            break
        Js = [frechet(expr, y) for y in Y]
        M = eye - h * np.block([[_GAUSS_A[i, j] * Js[i] for j in range(2)] for i in range(2)])
        K = K - lu_solve(M, G)
    else:
        raise IntegrationError("Gauss–Legendre stage equations did not converge")
    return u + 0.5 * h * (K[:n] + K[n:])


def burgers_integrate(
    N: int = 16,
    eps: float = 0.1,
    t_end: float = 0.5,
    dt: float = 1e-3,
    mode: str = "reduced",
    grid_kind: str = "cheb",
    ic: str = "sin",
    bc: DirichletBC1D = DirichletBC1D(0.0, 0.0),
    cadence: float = 0.05,
    scheme: str = "gauss4",
) -> BurgersTrajectory:
    """Method-of-lines Burgers solve with a fixed-step fourth-order method.

    ``scheme`` is ``"gauss4"`` (implicit two-stage Gauss–Legendre, the
    default) or ``"rk4"`` (classical explicit Runge–Kutta). The explicit
    scheme is only stable while ``dt * ε * ρ(B̄)`` stays below about 2.8,
    which Chebyshev-type grids violate quickly as ``N`` grows.

    States are recorded at ``t = 0, cadence, 2·cadence, …`` and at
    ``t_end``. Each output interval is covered by ``round(interval / dt)``
    equal steps (at least one), so the step is exactly ``dt`` whenever it
    divides the cadence.
    """
    if not eps > 0:
        raise ArgumentError("viscosity must be positive")
    if not dt > 0 or t_end < 0:
        raise ArgumentError("need dt > 0 and t_end >= 0")
    if ic not in INITIAL_CONDITIONS:
        raise ArgumentError(f"unknown initial condition {ic!r}")
    if scheme not in SCHEMES:
        raise ArgumentError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if t_end / dt > MAX_STEPS:
        raise IntegrationError(f"too many steps ({t_end / dt:.3g} > {MAX_STEPS})")
    ops = burgers_operators(N, grid_kind, bc)
    grid = ops["grid"]
    expr = burgers_expression(N, mode, eps, bc, grid_kind)
    u = INITIAL_CONDITIONS[ic](grid.interior)

    if scheme == "rk4":
        def f(v):
            return evaluate(expr, v)

        def step(v, h):
            return _rk4_step(f, v, h)
    else:
        def step(v, h):
            return _gauss4_step(expr, v, h)

    n_out = int(np.floor(t_end / cadence + 1e-9))
    marks = [k * cadence for k in range(n_out + 1)]
    if t_end - marks[-1] > 1e-12:
        marks.append(t_end)
    times = [0.0]
    states = [ops["A"].lift(u)]
    with np.errstate(over="ignore", invalid="ignore"):
        for t0, t1 in zip(marks[:-1], marks[1:]):
            k = max(1, int(round((t1 - t0) / dt)))
            h = (t1 - t0) / k
            for _ in range(k):
                u = step(u, h)
                if not np.all(np.isfinite(u)):
                    raise IntegrationError(f"non-finite state before t = {t1:g}")
            times.append(t1)
            states.append(ops["A"].lift(u))
    return BurgersTrajectory(grid, np.array(times), np.vstack(states))


# Boussinesq -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoussinesqFragments:
    """Spatial terms of the reduced shallow-water system.

    ``momentum = ½(Ā_{u²} u°2 + ā) + g(Ā_h h + ā_h)`` and
    ``continuity = Ā_{uh}(u ∘ h) + ā_{uh}``; the mixed time/space
    dispersive term ``(H/3) d²/dt² (Ā_u u)`` is left to the caller as the
    operator ``dispersive`` and its weight ``dispersive_coeff``.
    """

    momentum: np.ndarray
    continuity: np.ndarray
    dispersive: ReducedOperator
    dispersive_coeff: float


def boussinesq_semidiscrete(
    u, h, g: float, H: float,
    bc_u: DirichletBC1D = DirichletBC1D(0.0, 0.0),
    bc_h: DirichletBC1D = DirichletBC1D(0.0, 0.0),
    grid_kind: str = "cheb",
) -> BoussinesqFragments:
    u = np.asarray(u, dtype=float)
    h = np.asarray(h, dtype=float)
    if u.ndim != 1 or u.shape != h.shape:
        raise DimensionError(f"u and h must be vectors of equal length, got {u.shape} and {h.shape}")
    grid = make_grid(grid_kind, u.size + 2)
    A = dq_weights_first(grid)
    A_u = reduce_dirichlet_1d(A, bc_u)
    A_h = reduce_dirichlet_1d(A, bc_h)
    A_u2 = reduce_dirichlet_1d(A, transform_bc_power(bc_u, 2))
    A_uh = reduce_dirichlet_1d(A, DirichletBC1D(bc_u.left * bc_h.left, bc_u.right * bc_h.right))
    momentum = 0.5 * A_u2.apply(u * u) + g * A_h.apply(h)
    continuity = A_uh.apply(u * h)
    return BoussinesqFragments(momentum, continuity, A_u, H / 3.0)
