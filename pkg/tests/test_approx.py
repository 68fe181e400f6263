import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from detineq.approx import (
    ConvergenceError,
    float_frame_product,
    jacobi_eigen,
    psd_sqrt,
    random_contraction_hermitian,
    schur_majorization_check,
)
from detineq.exact import InputError
from detineq.generators import gram_psd, random_hermitian, rational_unitary
from oracles import char_poly, real_roots


def test_diagonal_needs_no_rotations():
    res = jacobi_eigen(np.diag([1.0, 3.0, 2.0]))
    assert list(res.eigenvalues) == [3.0, 2.0, 1.0]
    assert res.rotation_count == 0


def test_two_by_two_closed_form():
    res = jacobi_eigen([[2, 1], [1, 2]])
    assert np.allclose(res.eigenvalues, [3, 1], atol=1e-12)
    assert schur_majorization_check([[2, 1], [1, 2]])


def test_complex_entries_and_eigenvectors():
    A = np.array([[2, 1j, 0], [-1j, 2, 1 - 1j], [0, 1 + 1j, 1]])
    res = jacobi_eigen(A)
    V = res.eigenvectors
    assert np.allclose(V.conj().T @ V, np.eye(3), atol=1e-10)
    assert np.allclose(A @ V, V * res.eigenvalues, atol=1e-9)
    assert res.off_diagonal_norm <= 1e-10


@pytest.mark.parametrize("seed", range(4))
def test_matches_char_poly_bisection_oracle(seed):
    A = random_hermitian(6, seed)
    exact = sorted((float(r) for r in real_roots(char_poly(A.rows), -64, 64)), reverse=True)
    assert len(exact) == 6
    assert np.max(np.abs(jacobi_eigen(A).eigenvalues - exact)) < 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_spectrum_invariant_under_unitary_conjugation(n, seed):
    A = random_hermitian(n, seed)
    U = rational_unitary(n, seed + 1)
    a = jacobi_eigen(A).eigenvalues
    b = jacobi_eigen(U.H @ A @ U).eigenvalues
    assert np.max(np.abs(a - b)) < 1e-9


def test_trace_and_det_agree_with_exact():
    for seed in range(10):
        A = gram_psd(5, 5, seed)
        lam = jacobi_eigen(A).eigenvalues
        assert abs(lam.sum() - float(A.trace().real)) <= 5e-9
        det = float(A.det.real)
        assert abs(np.prod(lam) - det) <= 1e-6 * abs(det)


def test_input_validation():
    with pytest.raises(InputError):
        jacobi_eigen([[1, 2], [3, 4]])
    with pytest.raises(InputError):
        jacobi_eigen([[1]], tol=0)
    with pytest.raises(InputError):
        psd_sqrt([[-1.0, 0], [0, 1]])
    assert issubclass(ConvergenceError, RuntimeError)


def test_psd_sqrt_of_identity_and_unit_diagonal_frame():
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
    T = np.array([[0, 0.5], [0.5, 0]])
    V = psd_sqrt(np.eye(2) + T)
    assert np.linalg.norm(V @ V - (np.eye(2) + T)) <= 1e-9
    assert not np.allclose(V.conj().T @ V, np.eye(2))
    assert np.allclose(np.diag(V.conj().T @ V), 1.0)


def test_sqrt_frame_float_product():
    for seed in range(5):
        T = random_contraction_hermitian(5, seed)
        V = psd_sqrt(np.eye(5) + T)
        lhs, rhs = float_frame_product([5, 4, 3, 2, 1], V)
        assert lhs <= rhs + 1e-9
