"""Floating-point Hermitian eigensolver and numeric oracles.

Nothing here feeds an exact verdict.  The cyclic complex Jacobi method gives
spectra for Schur-majorization checks and PSD square roots for non-unitary
frames; the mpmath helpers give an independent high-precision evaluation of
the sharpened inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exact import InputError
from .matrix import Matrix

DEFAULT_TOL = 1e-10
MAJORIZATION_TOL = 1e-9
HERMITIAN_TOL = 1e-12
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    pass


@dataclass
class EigenResult:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns, matching eigenvalues
    rotation_count: int
    off_diagonal_norm: float
    sweeps: int


def as_float_matrix(A) -> np.ndarray:
    if isinstance(A, Matrix):
        return A.to_complex()
    return np.array(A, dtype=complex)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigen(A, tol: float = DEFAULT_TOL) -> EigenResult:
    """Cyclic two-sided Jacobi for a complex Hermitian matrix."""
    if tol <= 0:
        raise InputError("tol must be positive")
    a = as_float_matrix(A).copy()
    n = a.shape[0]
    if a.shape != (n, n):
        raise InputError("matrix must be square")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOL * max(1.0, np.max(np.abs(a))):
        raise InputError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    u = np.eye(n, dtype=complex)
    rotations = 0
    off = _off_norm(a)
    sweeps = 0
    while off > tol:
        if sweeps == MAX_SWEEPS:
            raise ConvergenceError(f"no convergence after {MAX_SWEEPS} sweeps (off={off:.3e})")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                app, aqq = a[p, p].real, a[q, q].real
                if r < 1e-300 or r < 1e-18 * (abs(app) + abs(aqq)):
                    a[p, q] = a[q, p] = 0.0
                    continue
                # phase makes the (p, q) entry real, then a real rotation kills it
                phase = apq / r
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                blk = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ blk
                a[idx, :] = blk.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                u[:, idx] = u[:, idx] @ blk
                rotations += 1
        off = _off_norm(a)
    vals = np.real(np.diag(a))
    order = np.argsort(-vals, kind="stable")
    return EigenResult(vals[order], u[:, order], rotations, off, sweeps)


def schur_majorization_check(A, tol: float = MAJORIZATION_TOL,
                             eig_tol: float = DEFAULT_TOL) -> bool:
    """Eigenvalues majorize the diagonal, with partial-sum slack ``>= -tol``."""
    res = jacobi_eigen(A, eig_tol)
    d = np.sort(np.real(np.diag(as_float_matrix(A))))[::-1]
    lam = res.eigenvalues
    slack = np.cumsum(lam) - np.cumsum(d)
    return bool(np.all(slack[:-1] >= -tol) and abs(slack[-1]) <= tol)


def psd_sqrt(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Positive semidefinite square root via the Jacobi eigendecomposition."""
    res = jacobi_eigen(A, tol)
    if res.eigenvalues.min(initial=0.0) < -tol:
        raise InputError(f"matrix has eigenvalue {res.eigenvalues.min():.3e} < -tol")
    w = np.sqrt(np.clip(res.eigenvalues, 0.0, None))
    v = res.eigenvectors
    return (v * w) @ v.conj().T


def float_frame_product(lam: Sequence[float], V: np.ndarray) -> tuple[float, float]:
    """``(prod lam_i, prod b_ii)`` for ``B = V* diag(lam) V`` in floating point."""
    lam = np.asarray(lam, dtype=float)
    B = V.conj().T @ np.diag(lam) @ V
    return float(np.prod(lam)), float(np.prod(np.real(np.diag(B))))


def random_contraction_hermitian(n: int, seed: int, norm: float = 0.9) -> np.ndarray:
    """Hermitian ``T`` with zero diagonal and spectral norm ``norm``."""
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    T = z + z.conj().T
    np.fill_diagonal(T, 0.0)
    return T * (norm / np.max(np.abs(np.linalg.eigvalsh(T))))


# -- extended precision oracle ------------------------------------------------

def mp_zy_sides(A: Matrix, image: Sequence[int], prec: int = 256) -> tuple:
    """High-precision ``(det A + sqrt(prod a_{i,s(i)} a_{s(i),i}), prod a_ii)``."""
    import mpmath

    with mpmath.workprec(prec):
        M = mpmath.matrix([[mpmath.mpc(mpmath.mpf(z.real.numerator) / z.real.denominator,
                                       mpmath.mpf(z.imag.numerator) / z.imag.denominator)
                            for z in row] for row in A.rows])
        det = mpmath.re(mpmath.det(M))
        p = mpmath.mpf(1)
        diag = mpmath.mpf(1)
        for i, j in enumerate(image):
            p *= mpmath.re(M[i, j] * M[j, i])
            diag *= mpmath.re(M[i, i])
        return det + mpmath.sqrt(max(p, 0)), diag
