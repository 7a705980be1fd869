"""Dense elementwise matrix algebra.

Hadamard products and powers, elementwise matrix functions, the two SJT
(row / column scaling) products used to assemble Jacobians, the Kronecker
product with its selection matrix, a pivoted dense solver and a central
difference Jacobian used as an independent check on analytic Jacobians.

Matrices and vectors are plain ``numpy`` arrays of float64. Every public
function validates shapes and finiteness on entry and never mutates its
arguments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import DimensionError, DomainError, SingularMatrixError

__all__ = [
    "ScalarFunction",
    "FUNCTIONS",
    "register_function",
    "get_function",
    "as_matrix",
    "as_vector",
    "hadamard",
    "hadamard_power",
    "hadamard_fn",
    "sjt_row",
    "sjt_col",
    "kron",
    "selection_matrix",
    "lu_solve",
    "fd_jacobian",
]

PIVOT_RTOL = 1e-14


def as_matrix(A, name="matrix") -> np.ndarray:
    """Return ``A`` as a finite 2-D float array, raising on anything else."""
    M = np.asarray(A, dtype=float)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError(f"{name} has non-finite entries")
    return M


def as_vector(v, name="vector") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D array, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} has non-finite entries")
    return v


@dataclass(frozen=True)
class ScalarFunction:
    """A named scalar function together with its derivative.

    ``domain`` is an optional predicate on an array returning a boolean mask
    of admissible entries.
    """

    name: str
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    domain: Callable[[np.ndarray], np.ndarray] | None = None

    def check(self, x: np.ndarray) -> None:
        if self.domain is not None:
            ok = self.domain(x)
            if not np.all(ok):
                bad = np.asarray(x)[~ok].ravel()[0]
                raise DomainError(f"{self.name} is undefined at {bad!r}")


FUNCTIONS: dict[str, ScalarFunction] = {
    "sin": ScalarFunction("sin", np.sin, np.cos),
    "cos": ScalarFunction("cos", np.cos, lambda x: -np.sin(x)),
    "exp": ScalarFunction("exp", np.exp, np.exp),
    "log": ScalarFunction("log", np.log, lambda x: 1.0 / x, domain=lambda x: x > 0),
}


def register_function(name, f, df, domain=None) -> ScalarFunction:
    """Add a scalar function (and its derivative) to the registry."""
    fn = ScalarFunction(name, f, df, domain)
    FUNCTIONS[name] = fn
    return fn


def get_function(f) -> ScalarFunction:
    if isinstance(f, ScalarFunction):
        return f
    try:
        return FUNCTIONS[f]
    except KeyError:
        raise DomainError(f"unknown scalar function {f!r}") from None


def _as_array(A) -> np.ndarray:
    # hadamard operations accept vectors as well as matrices
    A = np.asarray(A, dtype=float)
    if A.ndim not in (1, 2) or A.size < 1:
        raise DimensionError(f"expected a vector or matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("operand has non-finite entries")
    return A


def hadamard(A, B) -> np.ndarray:
    """Elementwise product ``A ∘ B`` of two arrays of identical shape."""
    A = _as_array(A)
    B = _as_array(B)
    if A.shape != B.shape:
        raise DimensionError(f"hadamard: shape mismatch {A.shape} vs {B.shape}")
    return A * B


def hadamard_power(A, q: float) -> np.ndarray:
    """Elementwise power ``A°q``.

    ``A°0`` is the all-ones array (including at zero entries). Negative
    exponents need nonzero entries and fractional ones need positive
    entries; violations raise :class:`DomainError`.
    """
    A = _as_array(A)
    q = float(q)
    if q == 0.0:
        return np.ones_like(A)
    if q < 0 and np.any(A == 0):
        raise DomainError(f"hadamard_power: zero entry raised to negative power {q}")
    if not q.is_integer() and np.any(A <= 0):
        raise DomainError(f"hadamard_power: non-positive entry raised to fractional power {q}")
    return A**q


def hadamard_fn(A, f) -> np.ndarray:
    """Apply a registered scalar function elementwise."""
    A = _as_array(A)
    fn = get_function(f)
    fn.check(A)
    with np.errstate(all="ignore"):
        out = fn.f(A)
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{fn.name} produced non-finite values")
    return out


def sjt_row(A, v) -> np.ndarray:
    """Postmultiplying SJT product ``A ⋄ v``: row ``i`` of ``A`` scaled by ``v[i]``.

    Equals ``diag(v) @ A``. When ``A`` is itself a vector this degenerates
    to the Hadamard product.
    """
    A = _as_array(A)
    v = as_vector(v, "sjt_row vector")
    if v.shape[0] != A.shape[0]:
        raise DimensionError(f"sjt_row: vector length {v.shape[0]} != row count {A.shape[0]}")
    if A.ndim == 1:
        return A * v
    return A * v[:, None]


def sjt_col(v, A) -> np.ndarray:
    """Premultiplying SJT product ``vᵀ ⋄ A``: column ``j`` of ``A`` scaled by ``v[j]``.

    Equals ``A @ diag(v)``.
    """
    A = as_matrix(A, "sjt_col matrix")
    v = as_vector(v, "sjt_col vector")
    if v.shape[0] != A.shape[1]:
        raise DimensionError(f"sjt_col: vector length {v.shape[0]} != column count {A.shape[1]}")
    return A * v[None, :]


def kron(A, B) -> np.ndarray:
    """Kronecker product; 1-D inputs are treated as column vectors."""
    A = _as_array(A)
    B = _as_array(B)
    if A.ndim == 1 and B.ndim == 1:
        return np.kron(A, B)
    return np.kron(A.reshape(-1, 1) if A.ndim == 1 else A, B.reshape(-1, 1) if B.ndim == 1 else B)


def selection_matrix(N: int) -> np.ndarray:
    """The N²×N matrix ``[e1⊗e1 : … : eN⊗eN]``.

    ``selection_matrix(N).T @ kron(A, B) @ selection_matrix(M)`` equals
    ``hadamard(A, B)`` for any N×M ``A`` and ``B``.
    """
    N = int(N)
    if N < 1:
        raise DimensionError("selection_matrix needs N >= 1")
    E = np.zeros((N * N, N))
    k = np.arange(N)
    E[k * N + k, k] = 1.0
    return E


def lu_solve(A, b) -> np.ndarray:
    """Solve ``A x = b`` by LU factorization with partial pivoting.

    Raises :class:`SingularMatrixError` when a pivot falls below
    ``1e-14 * max|A|``.
    """
    A = as_matrix(A, "lu_solve matrix")
    b = np.asarray(b, dtype=float)
    n = A.shape[0]
    if A.shape[1] != n:
        raise DimensionError(f"lu_solve: matrix must be square, got {A.shape}")
    if b.shape[0] != n:
        raise DimensionError(f"lu_solve: rhs length {b.shape[0]} != {n}")
    if not np.all(np.isfinite(b)):
        raise DomainError("lu_solve: rhs has non-finite entries")
    scale = np.abs(A).max()
    if scale == 0.0:
        raise SingularMatrixError("lu_solve: zero matrix")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    if np.abs(np.diag(lu)).min() < PIVOT_RTOL * scale:
        raise SingularMatrixError("lu_solve: matrix is numerically singular")
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


def fd_jacobian(r, u, h=None) -> np.ndarray:
    """Central-difference Jacobian of the vector function ``r`` at ``u``.

    Column ``j`` is ``(r(u + h_j e_j) - r(u - h_j e_j)) / (2 h_j)`` with
    ``h_j = 1e-6 * max(1, |u_j|)`` unless a fixed step ``h`` is given.
    """
    u = as_vector(u, "fd_jacobian point")
    n = u.shape[0]
    if h is None:
        steps = 1e-6 * np.maximum(1.0, np.abs(u))
    else:
        if h <= 0:
            raise DomainError("fd_jacobian: step must be positive")
        steps = np.full(n, float(h))
    cols = []
    for j in range(n):
        up = u.copy()
        um = u.copy()
        up[j] += steps[j]
        um[j] -= steps[j]
        cols.append((np.asarray(r(up), dtype=float) - np.asarray(r(um), dtype=float)) / (2 * steps[j]))
    return np.column_stack(cols)
