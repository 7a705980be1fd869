"""Hadamard-form residuals, their exact Jacobians, and Newton's method.

A residual is an immutable expression tree over one unknown vector ``u``.
Nodes are affine maps (typically a boundary-reduced weighting matrix plus
its shift), elementwise products, powers and functions, scalings and sums.
:func:`frechet` assembles the Jacobian by structural recursion, with every
elementwise rule reducing to a row scaling of a child Jacobian::

    d(e1 ∘ e2)   = J1 ⋄ e2 + J2 ⋄ e1
    d(e ° q)     = q · J ⋄ e°(q-1)
    d(f°(e))     = J ⋄ f'°(e)

Trees are built with ordinary operators::

    u = Var(n)
    A = apply(A_red, u)        # A_red.Bbar @ u + A_red.bbar
    psi = u * apply(B_red, u) + 1.0 + A ** 2
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from numbers import Real

import numpy as np

from .boundary import ReducedOperator
from .discretize import DerivOperator, DerivOperator2D
from .errors import ArgumentError, DimensionError, DivergenceError, DomainError
from .hadamard import get_function, kron, lu_solve, selection_matrix, sjt_row

__all__ = [
    "Expr",
    "Var",
    "Const",
    "Affine",
    "HadamardMul",
    "HadamardPow",
    "HadamardFn",
    "Scale",
    "Sum",
    "apply",
    "evaluate",
    "frechet",
    "walk",
    "has_cross_terms",
    "NewtonConfig",
    "NewtonReport",
    "newton",
    "QuadraticSystem",
    "assemble_quadratic",
    "REDUCTION_RULES",
    "reduce_nonlinear",
]

_ids = itertools.count()


class Expr:
    """Base node. Subclasses set ``size`` and ``children`` and implement ``_forward``."""

    size: int
    children: tuple["Expr", ...] = ()
    # make ``ndarray * expr`` dispatch to Expr.__rmul__
    __array_ufunc__ = None

    def __init__(self):
        self._id = next(_ids)

    @property
    def depends_on_state(self) -> bool:
        return any(c.depends_on_state for c in self.children)

    def _forward(self, vals: list[np.ndarray]) -> np.ndarray:
        raise NotImplementedError

    def _jac(self, vals, jacs, value, n) -> np.ndarray:
        raise NotImplementedError

    # operator sugar -----------------------------------------------------
    def __add__(self, other):
        return Sum(self, _lift(other, self.size))

    def __radd__(self, other):
        return Sum(_lift(other, self.size), self)

    def __sub__(self, other):
        return Sum(self, Scale(-1.0, _lift(other, self.size)))

    def __rsub__(self, other):
        return Sum(_lift(other, self.size), Scale(-1.0, self))

    def __neg__(self):
        return Scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, Real):
            return Scale(float(other), self)
        return HadamardMul(self, _lift(other, self.size))

    def __rmul__(self, other):
        if isinstance(other, Real):
            return Scale(float(other), self)
        return HadamardMul(_lift(other, self.size), self)

    def __pow__(self, q):
        return HadamardPow(self, q)


def _lift(obj, size) -> Expr:
    if isinstance(obj, Expr):
        return obj
    if isinstance(obj, Real):
        return Const(np.full(size, float(obj)), label=repr(float(obj)))
    return Const(obj)


def _require_size(children):
    sizes = {c.size for c in children}
    if len(sizes) != 1:
        raise DimensionError(f"operand lengths differ: {sorted(sizes)}")
    return sizes.pop()


class Var(Expr):
    """The unknown vector itself."""

    def __init__(self, n: int, name: str = "u"):
        super().__init__()
        if n < 1:
            raise DimensionError("Var needs a positive length")
        self.size = int(n)
        self.name = name

    @property
    def depends_on_state(self):
        return True

    def _forward(self, vals):
        raise AssertionError("Var is evaluated by the driver")

    def __repr__(self):
        return self.name


class Const(Expr):
    def __init__(self, value, label: str | None = None):
        super().__init__()
        v = np.array(value, dtype=float)
        if v.ndim != 1:
            raise DimensionError("Const needs a 1-D vector")
        v.setflags(write=False)
        self.value = v
        self.size = v.size
        self.label = label or "const"

    @property
    def depends_on_state(self):
        return False

    def _forward(self, vals):
        return self.value

    def _jac(self, vals, jacs, value, n):
        return np.zeros((self.size, n))

    def __repr__(self):
        return self.label


class Affine(Expr):
    """``M @ child + c``."""

    def __init__(self, M, child: Expr, c=None, label: str | None = None):
        super().__init__()
        M = np.array(M, dtype=float)
        if M.ndim != 2 or M.shape[1] != child.size:
            raise DimensionError(f"Affine: matrix {M.shape} does not conform to operand length {child.size}")
        M.setflags(write=False)
        self.M = M
        self.size = M.shape[0]
        if c is None:
            c = np.zeros(self.size)
        c = np.array(c, dtype=float)
        if c.shape != (self.size,):
            raise DimensionError(f"Affine: shift length {c.shape} != {self.size}")
        c.setflags(write=False)
        self.c = c
        self.children = (child,)
        self.label = label or "M"

    def _forward(self, vals):
        return self.M @ vals[0] + self.c

    def _jac(self, vals, jacs, value, n):
        return self.M @ jacs[0]

    def __repr__(self):
        return f"({self.label}·{self.children[0]!r}+c)"


class HadamardMul(Expr):
    """Elementwise product of two or more operands."""

    def __init__(self, *children: Expr):
        super().__init__()
        flat = []
        for c in children:
            flat.extend(c.children if isinstance(c, HadamardMul) else (c,))
        if len(flat) < 2:
            raise ArgumentError("HadamardMul needs at least two operands")
        self.size = _require_size(flat)
        self.children = tuple(flat)

    def _forward(self, vals):
        return np.prod(np.vstack(vals), axis=0)

    def _jac(self, vals, jacs, value, n):
        J = np.zeros((self.size, n))
        for k, Jk in enumerate(jacs):
            others = [v for i, v in enumerate(vals) if i != k]
            J += sjt_row(Jk, np.prod(np.vstack(others), axis=0))
        return J

    def __repr__(self):
        return "(" + " ∘ ".join(repr(c) for c in self.children) + ")"


class HadamardPow(Expr):
    def __init__(self, child: Expr, q: float):
        super().__init__()
        self.q = float(q)
        self.size = child.size
        self.children = (child,)
        # fractional powers need positive operands, negative ones nonzero operands
        self.domain = "positive" if not self.q.is_integer() else ("nonzero" if self.q < 0 else None)

    def _check(self, x):
        if self.domain == "positive" and np.any(x <= 0):
            raise DomainError(f"{self!r}: non-positive operand under fractional power")
        if self.domain == "nonzero" and np.any(x == 0):
            raise DomainError(f"{self!r}: zero operand under negative power")

    def _forward(self, vals):
        x = vals[0]
        self._check(x)
        if self.q == 0:
            return np.ones_like(x)
        return x**self.q

    def _jac(self, vals, jacs, value, n):
        x = vals[0]
        if self.q == 0:
            return np.zeros((self.size, n))
        if self.q < 1 and np.any(x == 0):
            raise DomainError(f"{self!r}: derivative undefined at zero operand")
        return self.q * sjt_row(jacs[0], x ** (self.q - 1))

    def __repr__(self):
        q = int(self.q) if self.q.is_integer() else self.q
        return f"{self.children[0]!r}°{q}"


class HadamardFn(Expr):
    def __init__(self, child: Expr, f):
        super().__init__()
        self.fn = get_function(f)
        self.size = child.size
        self.children = (child,)

    def _forward(self, vals):
        x = vals[0]
        try:
            self.fn.check(x)
        except DomainError as exc:
            raise DomainError(f"{self!r}: {exc}") from None
        return self.fn.f(x)

    def _jac(self, vals, jacs, value, n):
        d = self.fn.df(vals[0])
        if not np.all(np.isfinite(d)):
            raise DomainError(f"{self!r}: derivative is not finite")
        return sjt_row(jacs[0], d)

    def __repr__(self):
        return f"{self.fn.name}°({self.children[0]!r})"


class Scale(Expr):
    def __init__(self, k: float, child: Expr):
        super().__init__()
        self.k = float(k)
        self.size = child.size
        self.children = (child,)

    def _forward(self, vals):
        return self.k * vals[0]

    def _jac(self, vals, jacs, value, n):
        return self.k * jacs[0]

    def __repr__(self):
        return f"{self.k:g}·{self.children[0]!r}"


class Sum(Expr):
    def __init__(self, *children: Expr):
        super().__init__()
        flat = []
        for c in children:
            flat.extend(c.children if isinstance(c, Sum) else (c,))
        if not flat:
            raise ArgumentError("Sum needs at least one operand")
        self.size = _require_size(flat)
        self.children = tuple(flat)

    def _forward(self, vals):
        return np.sum(np.vstack(vals), axis=0)

    def _jac(self, vals, jacs, value, n):
        return np.sum(np.stack(jacs), axis=0)

    def __repr__(self):
        return "(" + " + ".join(repr(c) for c in self.children) + ")"


def apply(op, child: Expr, label: str | None = None) -> Affine:
    """Affine node for a reduced operator (``Bbar @ e + bbar``) or a plain matrix."""
    if isinstance(op, ReducedOperator):
        return Affine(op.Bbar, child, op.bbar, label)
    if isinstance(op, (DerivOperator, DerivOperator2D)):
        return Affine(op.W, child, None, label)
    return Affine(op, child, None, label)


def walk(e: Expr):
    """Yield every node of the tree, parents before children."""
    yield e
    for c in e.children:
        yield from walk(c)


def has_cross_terms(e: Expr) -> bool:
    """True if some elementwise product multiplies two state-dependent operands."""
    return any(
        isinstance(node, HadamardMul) and sum(c.depends_on_state for c in node.children) >= 2
        for node in walk(e)
    )


def _find_var(e: Expr) -> Var:
    vars_ = {id(node): node for node in walk(e) if isinstance(node, Var)}
    if len(vars_) > 1:
        raise ArgumentError("expression has more than one Var node")
    if not vars_:
        raise ArgumentError("expression has no Var node")
    return next(iter(vars_.values()))


def _run(e: Expr, u: np.ndarray, with_jac: bool):
    var = _find_var(e)
    u = np.asarray(u, dtype=float)
    if u.shape != (var.size,):
        raise DimensionError(f"state length {u.shape} != {var.size}")
    n = var.size
    memo: dict[int, tuple] = {}

    def visit(node):
        hit = memo.get(node._id)
        if hit is not None:
            return hit
        if isinstance(node, Var):
            out = (u, np.eye(n) if with_jac else None)
        else:
            pairs = [visit(c) for c in node.children]
            vals = [p[0] for p in pairs]
            value = node._forward(vals)
            J = node._jac(vals, [p[1] for p in pairs], value, n) if with_jac else None
            out = (value, J)
        memo[node._id] = out
        return out

    return visit(e)


def evaluate(e: Expr, u) -> np.ndarray:
    """Value of the residual tree at ``u``."""
    return np.array(_run(e, u, False)[0], dtype=float)


def frechet(e: Expr, u) -> np.ndarray:
    """Exact Jacobian ``d e / d u`` at ``u``, assembled with SJT products."""
    return _run(e, u, True)[1]


def evaluate_with_jacobian(e: Expr, u):
    value, J = _run(e, u, True)
    return np.array(value, dtype=float), J


# Newton -------------------------------------------------------------------


@dataclass(frozen=True)
class NewtonConfig:
    tol: float = 1e-10
    max_iter: int = 25
    divergence_factor: float = 1e6

    def __post_init__(self):
        if not self.tol > 0:
            raise ArgumentError("tol must be positive")
        if self.max_iter < 1:
            raise ArgumentError("max_iter must be at least 1")


@dataclass
class NewtonReport:
    converged: bool = False
    iterations: int = 0
    residual_history: list[float] = field(default_factory=list)
    iterates: list[np.ndarray] = field(default_factory=list, repr=False)


def newton(e: Expr, u0, cfg: NewtonConfig | None = None):
    """Undamped Newton–Raphson on ``e(u) = 0``.

    Stops at the first iterate whose max-abs residual is at most
    ``cfg.tol``. Returns ``(u, report)``; raises :class:`DivergenceError`
    (with the report attached) on residual blow-up or when ``max_iter`` is
    exhausted.
    """
    cfg = cfg or NewtonConfig()
    u = np.array(u0, dtype=float)
    report = NewtonReport(iterates=[u.copy()])
    r, J = evaluate_with_jacobian(e, u)
    res = float(np.abs(r).max())
    report.residual_history.append(res)
    limit = cfg.divergence_factor * max(res, cfg.tol)
    while res > cfg.tol:
        if report.iterations >= cfg.max_iter:
            raise DivergenceError(f"no convergence after {cfg.max_iter} iterations (residual {res:.3e})", report)
        u = u - lu_solve(J, r)
        report.iterations += 1
        report.iterates.append(u.copy())
        r, J = evaluate_with_jacobian(e, u)
        res = float(np.abs(r).max())
        report.residual_history.append(res)
        if not np.isfinite(res) or res > limit:
            raise DivergenceError(f"residual grew to {res:.3e}", report)
    report.converged = True
    return u, report


# Quadratic Kronecker form --------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuadraticSystem:
    """``r(u) = L u + Q (u ⊗ u) + C`` with ``Q`` of shape n × n²."""

    L: np.ndarray
    Q: np.ndarray
    C: np.ndarray

    @property
    def n(self) -> int:
        return self.C.size

    def residual(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.L @ u + self.Q @ np.kron(u, u) + self.C

    def jacobian(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        eye = np.eye(self.n)
        return self.L + self.Q @ (np.kron(eye, u[:, None]) + np.kron(u[:, None], eye))


def _affine_parts(op):
    if isinstance(op, ReducedOperator):
        return np.asarray(op.Bbar), np.asarray(op.bbar)
    W = np.asarray(op.W if isinstance(op, (DerivOperator, DerivOperator2D)) else op, dtype=float)
    return W, np.zeros(W.shape[0])


def assemble_quadratic(linear_terms, quad_terms, c) -> QuadraticSystem:
    """Collect ``Σ α (W u + w) + Σ β (W1 u + w1) ∘ (W2 u + w2) + c``.

    Operators may be matrices, derivative operators or reduced operators;
    shifts of reduced operators are expanded into the linear and constant
    parts so the representation is exact. Products of two operators use the
    selection-matrix identity ``(W1 u) ∘ (W2 u) = Eₙᵀ (W1 ⊗ W2)(u ⊗ u)``.
    """
    C = np.array(c, dtype=float)
    if C.ndim != 1:
        raise DimensionError("constant term must be a vector")
    n = C.size
    L = np.zeros((n, n))
    Q = np.zeros((n, n * n))
    E = selection_matrix(n)
    for alpha, op in linear_terms:
        W, w = _affine_parts(op)
        if W.shape != (n, n):
            raise DimensionError(f"linear operator shape {W.shape} != {(n, n)}")
        L += alpha * W
        C = C + alpha * w
    for beta, op1, op2 in quad_terms:
        W1, w1 = _affine_parts(op1)
        W2, w2 = _affine_parts(op2)
        if W1.shape != (n, n) or W2.shape != (n, n):
            raise DimensionError(f"quadratic operator shapes {W1.shape}, {W2.shape} != {(n, n)}")
        Q += beta * (E.T @ kron(W1, W2))
        L += beta * (sjt_row(W2, w1) + sjt_row(W1, w2))
        C = C + beta * w1 * w2
    return QuadraticSystem(L, Q, C)


# Operator reduction ---------------------------------------------------------

REDUCTION_RULES = {
    # rule id: (power applied to the operand, weight); productUH multiplies two operands
    "WWx": (2, 0.5),
    "W2Wx": (3, 1.0 / 3.0),
    "Wx2pWWxx": (2, 0.5),
    "productUH": (None, 1.0),
}


def reduce_nonlinear(rule: str, op: ReducedOperator, *operands: Expr) -> Expr:
    """Rewrite a nonlinear derivative term as a linear operator of a simpler term.

    ========== ====================== ===========================
    rule       term                   rewrite
    ========== ====================== ===========================
    WWx        W W'                   ½ A {W²}
    W2Wx       W² W'                  ⅓ A {W³}
    Wx2pWWxx   (W')² + W W''          ½ B {W²}
    productUH  u h' + h u'            A {u h}
    ========== ====================== ===========================

    ``op`` must have been reduced with the boundary data of the rewritten
    quantity (``W²``, ``W³`` or ``u h``), not of ``W`` itself. With no
    operand given, a fresh ``Var`` of matching length is used.
    """
    try:
        power, weight = REDUCTION_RULES[rule]
    except KeyError:
        raise ArgumentError(f"unknown reduction rule {rule!r}; expected one of {sorted(REDUCTION_RULES)}") from None
    if rule == "productUH":
        if len(operands) != 2:
            raise ArgumentError("productUH needs two operands (u, h)")
        inner = HadamardMul(*operands)
    else:
        if len(operands) > 1:
            raise ArgumentError(f"{rule} takes a single operand")
        base = operands[0] if operands else Var(op.n)
        inner = HadamardPow(base, power)
    node = apply(op, inner, label=f"A[{rule}]")
    return node if weight == 1.0 else Scale(weight, node)
