import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import eigenvalues_by_bisection

from rmtlab.linalg import (
    Convention,
    HermitianMatrix,
    SpectralSample,
    SymmetricMatrix,
    TridiagonalSymmetric,
    det,
    hermitian_eigenvalues,
    log_abs_det,
    lu_factor,
    lu_solve,
    principal_submatrix,
    resolvent,
    symmetric_eigenvalues,
    tridiagonal_eigenvalues,
)
from rmtlab.rng import RngState


def _random_symmetric(gen, n):
    a = gen.standard_normal((n, n))
    return SymmetricMatrix.symmetrize(a)


def test_small_closed_forms():
    assert np.allclose(symmetric_eigenvalues([[2.0, 0.0], [0.0, 3.0]]), [2, 3])
    assert np.allclose(symmetric_eigenvalues([[0.0, 1.0], [1.0, 0.0]]), [-1, 1])
    assert np.allclose(hermitian_eigenvalues(np.eye(3)), [1, 1, 1])
    assert np.allclose(hermitian_eigenvalues([[0, 1j], [-1j, 0]]), [-1, 1])
    assert np.allclose(tridiagonal_eigenvalues(TridiagonalSymmetric([1, 2, 3], [0, 0])), [1, 2, 3])
    assert np.allclose(tridiagonal_eigenvalues(TridiagonalSymmetric([0, 0], [1])), [-1, 1])


def test_symmetric_matches_bisection_oracle():
    gen = RngState(1).generator()
    a = _random_symmetric(gen, 5)
    assert np.max(np.abs(symmetric_eigenvalues(a) - eigenvalues_by_bisection(a.entries))) < 1e-10


def test_hermitian_matches_bisection_oracle():
    gen = RngState(2).generator()
    z = gen.standard_normal((4, 4)) + 1j * gen.standard_normal((4, 4))
    h = HermitianMatrix(0.5 * (z + z.conj().T))
    ev = hermitian_eigenvalues(h)
    assert np.max(np.abs(ev - eigenvalues_by_bisection(h.entries))) < 1e-10


def test_tridiagonal_matches_dense_path():
    gen = RngState(3).generator()
    t = TridiagonalSymmetric(gen.standard_normal(50), gen.standard_normal(49))
    assert np.max(np.abs(tridiagonal_eigenvalues(t) - symmetric_eigenvalues(t.to_dense()))) < 1e-11


def test_large_matrix_against_lapack():
    gen = RngState(4).generator()
    a = _random_symmetric(gen, 200)
    assert np.max(np.abs(symmetric_eigenvalues(a) - np.linalg.eigvalsh(a.entries))) < 1e-11


@pytest.mark.parametrize("bad", [[[np.nan, 0], [0, 1]], [[np.inf, 0], [0, 1]]])
def test_non_finite_rejected(bad):
    with pytest.raises(ValueError):
        symmetric_eigenvalues(bad)


def test_asymmetric_rejected():
    with pytest.raises(ValueError):
        SymmetricMatrix([[1.0, 2.0], [2.1, 1.0]])
    with pytest.raises(ValueError):
        HermitianMatrix([[1.0, 1j], [1j, 1.0]])


def test_degenerate_spectra():
    assert np.allclose(symmetric_eigenvalues(np.zeros((6, 6))), 0)
    assert symmetric_eigenvalues(np.zeros((0, 0))).size == 0
    assert np.allclose(symmetric_eigenvalues(5 * np.eye(4)), 5)


sym_matrices = st.integers(1, 12).flatmap(
    lambda n: st.lists(st.floats(-10, 10, allow_nan=False), min_size=n * n, max_size=n * n).map(
        lambda v: SymmetricMatrix.symmetrize(np.array(v).reshape(n, n))))


@given(sym_matrices)
def test_trace_and_ordering(a):
    ev = symmetric_eigenvalues(a)
    n = a.n
    scale = max(1.0, float(np.abs(a.entries).max()))
    assert np.all(np.diff(ev) >= 0)
    assert abs(ev.sum() - np.trace(a.entries)) <= 1e-9 * n * scale


@given(sym_matrices, st.integers(0, 11))
def test_interlacing_property(a, i):
    if a.n < 2:
        return
    i = i % a.n
    lam = symmetric_eigenvalues(a)
    mu = symmetric_eigenvalues(principal_submatrix(a, i))
    tol = 1e-9 * max(1.0, float(np.abs(a.entries).max())) * a.n
    assert np.all(lam[:-1] <= mu + tol) and np.all(mu <= lam[1:] + tol)


@given(st.integers(0, 2**32 - 1), st.integers(1, 20))
def test_hoffman_wielandt_property(seed, n):
    gen = RngState(seed).generator()
    a, b = _random_symmetric(gen, n), _random_symmetric(gen, n)
    d = a.entries - b.entries
    lhs = np.sum((symmetric_eigenvalues(a) - symmetric_eigenvalues(b)) ** 2)
    fro = np.trace(d @ d)
    upper = 2.0 * np.sum(np.triu(d) ** 2)
    assert lhs <= fro * (1 + 1e-10) + 1e-12
    assert fro <= upper * (1 + 1e-12) + 1e-12
    lip = np.max(np.abs(symmetric_eigenvalues(a) - symmetric_eigenvalues(b)))
    assert lip <= np.sqrt(2.0) * np.sqrt(np.sum(np.triu(d) ** 2)) * (1 + 1e-10) + 1e-12


def test_principal_submatrix_cases():
    assert principal_submatrix([[3.0]], 0).n == 0
    assert np.array_equal(principal_submatrix([[1.0, 2.0], [2.0, 4.0]], 0).entries, [[4.0]])
    with pytest.raises(IndexError):
        principal_submatrix([[1.0]], 1)


def test_resolvent_scalar_and_domain():
    g = resolvent([[0.0]], 1j)
    assert abs(g[0, 0] - 1j) < 1e-15
    with pytest.raises(ValueError):
        resolvent([[0.0]], 2.0)


def test_resolvent_inverts():
    gen = RngState(5).generator()
    a = _random_symmetric(gen, 8)
    z = 0.3 + 0.7j
    g = resolvent(a, z)
    assert np.max(np.abs((a.entries - z * np.eye(8)) @ g - np.eye(8))) < 1e-10


def test_lu_helpers():
    gen = RngState(6).generator()
    a = gen.standard_normal((7, 7))
    b = gen.standard_normal(7)
    x = lu_solve(lu_factor(a), b)
    assert np.max(np.abs(a @ x - b)) < 1e-10
    assert abs(det(a) - np.linalg.det(a)) < 1e-10 * abs(np.linalg.det(a))
    sign, logabs = log_abs_det(np.diag([2.0, -3.0]))
    assert sign == -1.0 and abs(logabs - np.log(6.0)) < 1e-15
    assert det(np.zeros((3, 3))) == 0


def test_convention_scales():
    assert Convention.ONE_OVER_SQRT_N.to_wigner_scale(9) == 1.0
    assert Convention.UNIT_ENTRIES.to_wigner_scale(9) == pytest.approx(1 / 3)
    assert Convention.HALF_WEIGHT.to_wigner_scale(8) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        SpectralSample([2.0, 1.0])


@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(0.2, 3))
def test_resolvent_identity_property(seed, re, im):
    gen = RngState(seed).generator()
    x, a = _random_symmetric(gen, 6), _random_symmetric(gen, 6)
    z = complex(re, im)
    gx = resolvent(x, z)
    gxa = resolvent(SymmetricMatrix(x.entries + a.entries), z)
    assert np.max(np.abs(gxa - gx + gxa @ a.entries @ gx)) < 1e-9


@given(st.integers(0, 2**32 - 1), st.integers(0, 5), st.integers(0, 5))
def test_resolvent_derivative_property(seed, i, j):
    if i == j:
        return
    gen = RngState(seed).generator()
    x = _random_symmetric(gen, 6).entries
    z = 0.4 + 1.1j
    h = 1e-5
    e = np.zeros((6, 6))
    e[i, j] = e[j, i] = 1.0
    fd = (resolvent(x + h * e, z) - resolvent(x - h * e, z)) / (2 * h)
    g = resolvent(x, z)
    exact = -np.outer(g[:, i], g[j, :]) - np.outer(g[:, j], g[i, :])
    assert np.max(np.abs(fd - exact)) < 1e-6


def test_interlacing_on_draws():
    for r in range(100):
        a = _random_symmetric(RngState(31, (r,)).generator(), 6)
        lam = symmetric_eigenvalues(a)
        for i in range(6):
            mu = symmetric_eigenvalues(principal_submatrix(a, i))
            assert np.all(lam[:-1] <= mu + 1e-12) and np.all(mu <= lam[1:] + 1e-12)
