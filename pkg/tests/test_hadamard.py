import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dqdc.errors import DimensionError, DomainError, SingularMatrixError
from dqdc.hadamard import (
    fd_jacobian,
    hadamard,
    hadamard_fn,
    hadamard_power,
    kron,
    lu_solve,
    register_function,
    selection_matrix,
    sjt_col,
    sjt_row,
)

from oracles import hilbert, kron_bruteforce, mp_solve

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
shapes = st.tuples(st.integers(1, 5), st.integers(1, 5))


@st.composite
def same_shape(draw, k=2):
    shape = draw(shapes)
    return [draw(arrays(float, shape, elements=finite)) for _ in range(k)]


# hadamard -------------------------------------------------------------------


def test_hadamard_examples():
    np.testing.assert_array_equal(hadamard([[1, 2], [3, 4]], [[5, 6], [7, 8]]), [[5, 12], [21, 32]])
    A = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(hadamard(A, np.ones_like(A)), A)
    np.testing.assert_array_equal(hadamard([[2.0]], [[0.5]]), [[1.0]])


def test_hadamard_shape_mismatch():
    with pytest.raises(DimensionError):
        hadamard(np.ones((2, 2)), np.ones((2, 3)))


def test_non_finite_rejected():
    with pytest.raises(DomainError):
        hadamard([[np.nan]], [[1.0]])


@given(same_shape(3), finite)
def test_hadamard_algebra(mats, k):
    A, B, C = mats
    np.testing.assert_array_equal(hadamard(A, B), hadamard(B, A))
    np.testing.assert_allclose(k * hadamard(A, B), hadamard(k * A, B), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(hadamard(A + B, C), hadamard(A, C) + hadamard(B, C), rtol=1e-12, atol=1e-10)


# powers and functions -----------------------------------------------------------


def test_hadamard_power_examples():
    A = np.array([[0.0, -3.0], [2.5, 7.0]])
    np.testing.assert_array_equal(hadamard_power(A, 0), np.ones((2, 2)))
    np.testing.assert_allclose(hadamard_power([[4.0, 9.0]], 0.5), [[2.0, 3.0]])
    np.testing.assert_allclose(hadamard_power([[2.0, 4.0]], -1), [[0.5, 0.25]])


def test_hadamard_power_domain():
    with pytest.raises(DomainError):
        hadamard_power([[0.0, 1.0]], -1)
    with pytest.raises(DomainError):
        hadamard_power([[-1.0, 1.0]], 0.5)


@given(arrays(float, shapes, elements=st.floats(0.1, 10)), st.floats(0.2, 5))
def test_hadamard_power_inverse(A, q):
    np.testing.assert_array_equal(hadamard_power(A, 1), A)
    np.testing.assert_allclose(hadamard_power(hadamard_power(A, q), 1 / q), A, rtol=1e-10)


def test_hadamard_fn():
    Z = np.zeros((2, 3))
    np.testing.assert_array_equal(hadamard_fn(Z, "sin"), Z)
    np.testing.assert_array_equal(hadamard_fn(Z, "exp"), np.ones_like(Z))
    np.testing.assert_allclose(
        hadamard_fn([[np.pi / 2, 0], [-np.pi / 2, np.pi]], "sin"), [[1, 0], [-1, 0]], atol=1e-15
    )
    with pytest.raises(DomainError):
        hadamard_fn([[0.0]], "log")
    with pytest.raises(DomainError):
        hadamard_fn([[1.0]], "nosuch")


def test_register_function():
    register_function("cube", lambda x: x**3, lambda x: 3 * x**2)
    np.testing.assert_array_equal(hadamard_fn([[2.0]], "cube"), [[8.0]])


# SJT products -------------------------------------------------------------------


def test_sjt_row_examples():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(sjt_row(A, [10, 100]), [[10, 20], [300, 400]])
    np.testing.assert_array_equal(sjt_row(A, np.ones(2)), A)
    np.testing.assert_array_equal(sjt_row([[3.0]], [2.0]), [[6.0]])
    with pytest.raises(DimensionError):
        sjt_row(A, [1.0, 2.0, 3.0])


def test_sjt_col_examples():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(sjt_col([10, 100], A), [[10, 200], [30, 400]])
    np.testing.assert_array_equal(sjt_col(np.ones(2), A), A)
    np.testing.assert_array_equal(sjt_col([3.0], [[1.0], [2.0]]), [[3.0], [6.0]])
    with pytest.raises(DimensionError):
        sjt_col([1.0], A)


def test_sjt_semantics_against_fd():
    # row scaling is what differentiating (A f) ∘ (B f) needs;
    # column scaling is what differentiating A (f ∘ f) needs
    rng = np.random.default_rng(3)
    A, B = rng.normal(size=(2, 4, 4))
    f = rng.normal(size=4)
    J = fd_jacobian(lambda v: (A @ v) * (B @ v), f)
    np.testing.assert_allclose(sjt_row(A, B @ f) + sjt_row(B, A @ f), J, rtol=1e-7, atol=1e-8)
    J = fd_jacobian(lambda v: A @ v**2, f)
    np.testing.assert_allclose(sjt_col(2 * f, A), J, rtol=1e-7, atol=1e-8)


@given(same_shape(2), st.data(), finite)
def test_sjt_laws(mats, data, k):
    A, B = mats
    n = A.shape[0]
    C = data.draw(arrays(float, n, elements=finite))
    D = data.draw(arrays(float, n, elements=finite))
    tol = dict(rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(k * sjt_row(A, C), sjt_row(k * A, C), **tol)
    np.testing.assert_allclose(k * sjt_row(A, C), sjt_row(A, k * C), **tol)
    np.testing.assert_allclose(sjt_row(A + B, C), sjt_row(A, C) + sjt_row(B, C), **tol)
    np.testing.assert_allclose(sjt_row(sjt_row(A, C), D), sjt_row(A, sjt_row(C, D)), **tol)
    np.testing.assert_allclose(sjt_row(A, sjt_row(C, D)), sjt_row(A, hadamard(C, D)), **tol)
    np.testing.assert_allclose(sjt_row(hadamard(A, B), D), hadamard(A, sjt_row(B, D)), **tol)
    np.testing.assert_array_equal(sjt_row(A, C), hadamard(A, np.repeat(C[:, None], A.shape[1], axis=1)))


# Kronecker / selection --------------------------------------------------------------


def test_kron_examples():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(kron([[1.0, 2.0]], [[3.0], [4.0]]), [[3, 6], [4, 8]])


def test_kron_mixed_product():
    rng = np.random.default_rng(0)
    A, B = rng.normal(size=(2, 3, 3))
    u, v = rng.normal(size=(2, 3))
    np.testing.assert_allclose(kron(A, B), kron_bruteforce(A, B), rtol=0, atol=0)
    np.testing.assert_allclose(kron(A, B) @ kron(u, v), kron(A @ u, B @ v), rtol=1e-12, atol=1e-12)


def test_selection_matrix_examples():
    np.testing.assert_array_equal(selection_matrix(1), [[1.0]])
    E2 = np.zeros((4, 2))
    E2[0, 0] = E2[3, 1] = 1
    np.testing.assert_array_equal(selection_matrix(2), E2)


@settings(max_examples=60)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_selection_identity(N, M, data):
    A = data.draw(arrays(float, (N, M), elements=finite))
    B = data.draw(arrays(float, (N, M), elements=finite))
    got = selection_matrix(N).T @ kron_bruteforce(A, B) @ selection_matrix(M)
    np.testing.assert_allclose(got, hadamard(A, B), rtol=0, atol=1e-12)


# linear solves and FD Jacobian ----------------------------------------------------


def test_lu_solve_examples():
    b = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(lu_solve(np.eye(3), b), b)
    np.testing.assert_allclose(lu_solve([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0]), [1.0, 2.0])


def test_lu_solve_hilbert_against_extended_precision():
    H = hilbert(4)
    b = np.array([1.0, 2.0, 3.0, 4.0])
    x = lu_solve(H, b)
    ref = mp_solve(H, b)
    assert np.abs(x - ref).max() / np.abs(ref).max() <= 1e-8


def test_lu_solve_residual_and_pivoting():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(30, 30)) + 30 * np.eye(30)
    b = rng.normal(size=30)
    x = lu_solve(A, b)
    assert np.abs(A @ x - b).max() <= 1e-10 * (1 + np.abs(b).max())
    # zero leading entry needs a row swap
    np.testing.assert_allclose(lu_solve([[0.0, 1.0], [1.0, 0.0]], [2.0, 3.0]), [3.0, 2.0])


def test_lu_solve_singular():
    with pytest.raises(SingularMatrixError):
        lu_solve([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])
    with pytest.raises(SingularMatrixError):
        lu_solve(np.zeros((2, 2)), [1.0, 1.0])
    with pytest.raises(DimensionError):
        lu_solve(np.ones((2, 3)), [1.0, 1.0])


def test_fd_jacobian_examples():
    rng = np.random.default_rng(1)
    M = rng.normal(size=(4, 4))
    c = rng.normal(size=4)
    np.testing.assert_allclose(fd_jacobian(lambda u: M @ u + c, rng.normal(size=4)), M, atol=1e-8)
    J = fd_jacobian(lambda u: u**2, np.array([3.0]), h=1e-6)
    assert abs(J[0, 0] - 6.0) < 1e-6


def test_fd_jacobian_propagates_errors():
    def bad(u):
        raise DomainError("boom")

    with pytest.raises(DomainError):
        fd_jacobian(bad, np.ones(2))
