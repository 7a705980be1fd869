"""End-to-end acceptance checks, one test per criterion.

The terminal summary lists each criterion with PASS or FAIL; run with
``pytest tests/test_acceptance.py -s`` to also see the measured numbers.
"""

import numpy as np

from dqdc import problems
from dqdc.boundary import DirichletBC1D
from dqdc.discretize import GRID_KINDS, dq_operator, make_grid
from dqdc.hadamard import fd_jacobian, hadamard, kron, selection_matrix, sjt_row
from dqdc.residual import NewtonConfig, assemble_quadratic, has_cross_terms

import closed_forms
from oracles import burgers_fd_reference, kron_bruteforce, lagrange_derivative_matrices

# reference relative errors of the conventional formulation at the four interior nodes, N = 6
REFERENCE_CONVENTIONAL = np.array([7.16e-4, 1.37e-4, 7.76e-5, 5.25e-5])


def _rel_fro(A, B):
    return np.linalg.norm(A - B) / np.linalg.norm(B)


def test_criterion_01_example_c_errors():
    conv = problems.solve_example_c(6, "conventional", "cheb")
    red = problems.solve_example_c(6, "reduced", "cheb")
    ratio = conv.errors / REFERENCE_CONVENTIONAL
    print(f"\n[1] conventional e_u {conv.errors}  ratio to reference {ratio}")
    print(f"[1] reduced e_u {red.errors}")
    assert np.all((ratio >= 0.1) & (ratio <= 10.0))
    assert np.all(red.errors <= 1e-6)
    assert red.errors.max() <= conv.errors.max() / 100


def test_criterion_02_example_a():
    res = problems.solve_example_a(6, "cheb", NewtonConfig(tol=1e-10))
    print(f"\n[2] iterations {res.report.iterations}, max rel error {res.errors.max():.3e}")
    assert res.report.converged
    assert 3 <= res.report.iterations <= 6
    assert res.errors.max() < 1e-3


def test_criterion_03_example_b():
    res = problems.solve_example_b(6)
    last, prev = res.report.iterates[-1], res.report.iterates[-2]
    rel = np.abs(last - prev) / np.abs(last)
    res10 = problems.solve_example_b(10)
    dev = np.abs(res10.solution - res10.oracle).max()
    print(f"\n[3] iterations {res.report.iterations}, last-step rel change {rel.max():.2e}, N=10 deviation {dev:.2e}")
    assert res.report.converged and res.report.iterations <= 4
    # agreement to 6 significant digits: relative difference at most 5e-6
    assert np.all(rel <= 5e-6)
    assert dev <= 1e-5


def _frechet_cases():
    """(name, formulation, closed-form Jacobian, state sampler) for every residual tree."""
    rng = np.random.default_rng(2024)

    def near(u0, scale):
        return lambda: u0 + scale * rng.uniform(-1, 1, size=u0.size)

    cases = []
    fa = problems.example_a(6)
    cases.append(("example A", fa, lambda u, f=fa: closed_forms.example_a(f.ops, u), near(fa.u0, 0.2)))
    fb = problems.example_b(8)
    cases.append(("example B", fb, lambda u, f=fb: closed_forms.example_b(f.ops, u), near(fb.u0, 0.2)))
    fc = problems.example_c(6, "conventional")
    cases.append(
        ("example C conventional", fc, lambda u, f=fc: closed_forms.example_c_conventional(f.ops, u), near(fc.u0, 0.2))
    )
    fr = problems.example_c(6, "reduced")
    cases.append(("example C reduced", fr, lambda u, f=fr: closed_forms.example_c_reduced(f.ops, u), near(fr.u0, 0.2)))
    fd = problems.dc_example(7, 7)
    cases.append(("DC example", fd, lambda u, f=fd: closed_forms.dc_example(f.ops, u), near(fd.u0, 0.1)))
    return cases


def test_criterion_04_frechet_correctness():
    worst_fd, worst_cf = 0.0, 0.0
    for name, f, closed, sample in _frechet_cases():
        for _ in range(10):
            u = sample()
            J = f.jacobian(u)
            fd = _rel_fro(J, fd_jacobian(f.residual, u))
            cf = _rel_fro(J, closed(u))
            worst_fd, worst_cf = max(worst_fd, fd), max(worst_cf, cf)
            assert fd <= 1e-6, (name, fd)
            assert cf <= 1e-13, (name, cf)
    rng = np.random.default_rng(7)
    setup = problems.plate_setup(8)
    for Q in (0.5, 1.0, 3.0):
        for _ in range(10):
            phi = rng.uniform(0.5, 1.5, size=6)
            J = problems.plate_frechet(phi, Q)
            fd = _rel_fro(J, fd_jacobian(lambda v: problems.plate_residual(v, Q), phi))
            cf = _rel_fro(J, closed_forms.plate(setup, phi, Q))
            worst_fd, worst_cf = max(worst_fd, fd), max(worst_cf, cf)
            assert fd <= 1e-6, ("plate", fd)
            assert cf <= 1e-13, ("plate", cf)
    print(f"\n[4] worst rel Frobenius deviation: vs FD {worst_fd:.2e}, vs closed form {worst_cf:.2e}")


def test_criterion_05_weight_exactness():
    worst = 0.0
    for kind in GRID_KINDS:
        for N in range(2, 13):
            g = make_grid(kind, N)
            for m in range(1, 5):
                W = dq_operator(g, m).W
                scale = max(1.0, np.abs(W).max())
                for k in range(N):
                    exact = np.zeros(N) if k < m else np.prod(range(k - m + 1, k + 1)) * g.nodes ** (k - m)
                    err = np.abs(W @ g.nodes**k - exact).max() / scale
                    worst = max(worst, err)
                    assert err <= 1e-9, (kind, N, m, k, err)
    worst_sym = 0.0
    for kind in GRID_KINDS:
        for N in range(3, 9):
            g = make_grid(kind, N)
            ref = lagrange_derivative_matrices(tuple(g.nodes.tolist()))
            for m in range(1, 5):
                W = dq_operator(g, m).W
                d = np.abs(W - ref[m]).max() / max(1.0, np.abs(ref[m]).max())
                worst_sym = max(worst_sym, d)
                assert d <= 1e-9, (kind, N, m, d)
    print(f"\n[5] worst monomial error / scale {worst:.2e}; worst deviation from symbolic weights {worst_sym:.2e}")


def test_criterion_06_kronecker_hadamard():
    rng = np.random.default_rng(6)
    E = selection_matrix(4)
    worst = 0.0
    for _ in range(50):
        A, B = rng.normal(size=(2, 4, 4))
        u = rng.normal(size=4)
        d = np.abs(E.T @ kron(A, B) @ kron(u, u) - (A @ u) * (B @ u)).max()
        worst = max(worst, d)
        assert d <= 1e-12
    f = problems.example_a(8)
    n = f.ops["A"].n
    q = assemble_quadratic([], [(1.0, np.eye(n), f.ops["B"]), (1.0, f.ops["A"], f.ops["A"])], np.ones(n))
    worst_q = 0.0
    for _ in range(20):
        u = f.u0 + rng.normal(size=n)
        d = np.abs(q.residual(u) - f.residual(u)).max()
        worst_q = max(worst_q, d)
        assert d <= 1e-11
    print(f"\n[6] worst identity error {worst:.2e}; worst quadratic-vs-tree {worst_q:.2e}")


def test_criterion_07_dc_example():
    res = problems.solve_dc_example(7, 7, "cheb")
    print(f"\n[7] iterations {res.report.iterations}, max rel interior error {res.errors.max():.3e}")
    assert res.report.converged and res.report.iterations <= 8
    assert res.errors.max() <= 1e-4


def test_criterion_08_burgers():
    N = 16
    rng = np.random.default_rng(8)
    x = make_grid("cheb", N).nodes
    worst = 0.0
    for deg in range((N - 1) // 2 + 1):
        for _ in range(5):
            p = np.polynomial.Polynomial(rng.uniform(-1, 1, size=deg + 1))
            w = p(x)
            bc = DirichletBC1D(w[0], w[-1])
            a = problems.burgers_rhs(w[1:-1], "conventional", 0.1, bc)
            b = problems.burgers_rhs(w[1:-1], "reduced", 0.1, bc)
            d = np.abs(a - b).max()
            worst = max(worst, d)
            assert d <= 1e-9, (deg, d)
    tr = problems.burgers_integrate(N=N, eps=0.1, t_end=0.5, dt=1e-3, grid_kind="cheb")
    ref = burgers_fd_reference(0.1, 0.5, tr.grid.nodes)
    dev = np.abs(tr.final - ref).max()
    print(f"\n[8] worst mode disagreement {worst:.2e}; trajectory deviation from fine reference {dev:.2e}")
    assert dev <= 1e-3


def test_criterion_09_algebra_laws():
    rng = np.random.default_rng(9)
    for _ in range(100):
        N, M = rng.integers(1, 7, size=2)
        A, B, C = rng.normal(size=(3, N, M))
        k = rng.normal()
        np.testing.assert_array_equal(hadamard(A, B), hadamard(B, A))
        np.testing.assert_allclose(k * hadamard(A, B), hadamard(k * A, B), rtol=1e-14, atol=1e-15)
        np.testing.assert_allclose(hadamard(A + B, C), hadamard(A, C) + hadamard(B, C), rtol=1e-13, atol=1e-14)
        got = selection_matrix(N).T @ kron(A, B) @ selection_matrix(M)
        np.testing.assert_allclose(got, hadamard(A, B), rtol=1e-15, atol=0)
    for _ in range(100):
        N, M = rng.integers(1, 7, size=2)
        A, B = rng.normal(size=(2, N, M))
        C, D = rng.normal(size=(2, N))
        k = rng.normal()
        tol = dict(rtol=1e-13, atol=1e-14)
        np.testing.assert_allclose(k * sjt_row(A, C), sjt_row(k * A, C), **tol)
        np.testing.assert_allclose(k * sjt_row(A, C), sjt_row(A, k * C), **tol)
        np.testing.assert_allclose(sjt_row(A + B, C), sjt_row(A, C) + sjt_row(B, C), **tol)
        np.testing.assert_allclose(sjt_row(sjt_row(A, C), D), sjt_row(A, sjt_row(C, D)), **tol)
        np.testing.assert_allclose(sjt_row(hadamard(A, B), D), hadamard(A, sjt_row(B, D)), **tol)
    for N in range(1, 6):
        for M in range(1, 6):
            A, B = rng.normal(size=(2, N, M))
            got = selection_matrix(N).T @ kron_bruteforce(A, B) @ selection_matrix(M)
            np.testing.assert_array_equal(got, hadamard(A, B))


def test_criterion_10_fd_backend():
    conv = problems.solve_example_c(11, "conventional", "uniform", backend="fd")
    red_f = problems.example_c(11, "reduced", "uniform", backend="fd")
    red = problems.solve_formulation(red_f)
    print(
        f"\n[10] FD conventional: {conv.report.iterations} iterations, max e_u {conv.errors.max():.2e}; "
        f"reduced: {red.report.iterations} iterations, max e_u {red.errors.max():.2e}"
    )
    assert conv.report.converged and red.report.converged
    assert not has_cross_terms(red_f.expr)
