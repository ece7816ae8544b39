"""Cyclic Jacobi eigensolver for dense symmetric matrices.

Self-contained rotation-based solver: no LAPACK call decides a certificate.
The matrices in this package are small (worst case 135 x 135 for the
trace-free form of the 16-dimensional model), where sweeping to a 1e-12
off-diagonal norm takes a handful of sweeps.  ``numpy.linalg.eigh`` appears
only in the test suite as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Spectrum", "JacobiConvergenceError", "jacobi_eigs"]


class JacobiConvergenceError(ArithmeticError):
    """Raised when the sweep budget is exhausted before convergence."""


@dataclass(eq=False)
class Spectrum:
    """Eigenvalues sorted ascending, matching eigenvector columns, and the
    number of plane rotations performed (a deterministic work counter)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    iterations: int = 0


def jacobi_eigs(M: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> Spectrum:
    """Full spectrum of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rows in cyclic order, annihilating each off-diagonal entry with a
    Givens rotation, until the off-diagonal Frobenius norm drops below
    ``tol`` times the norm of the input.  Raises JacobiConvergenceError with
    diagnostics if ``max_sweeps`` full sweeps do not converge.
    """
    A = np.array(M, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("jacobi_eigs needs a square matrix")
    n = A.shape[0]
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 0.0)
    if np.max(np.abs(A - A.T)) > 1e-12 * scale:
        raise ValueError("jacobi_eigs needs a symmetric matrix")
    A = 0.5 * (A + A.T)

    V = np.eye(n)
    norm = np.linalg.norm(A)
    if norm == 0.0 or n == 1:
        order = np.argsort(np.diag(A), kind="stable")
        return Spectrum(np.diag(A)[order], V[:, order], 0)

    rotations = 0
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * norm:
            break
        # skip rotations that cannot matter this sweep
        small = off / (n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-4 * small:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) if theta != 0 else 1.0
                t = t / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c

                rot = np.array([[c, s], [-s, c]])
                rows = A[[p, q], :]
                A[[p, q], :] = rot.T @ rows
                cols = A[:, [p, q]]
                A[:, [p, q]] = cols @ rot
                A[p, q] = A[q, p] = 0.0
                V[:, [p, q]] = V[:, [p, q]] @ rot
                rotations += 1
    else:
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        raise JacobiConvergenceError(
            f"no convergence after {max_sweeps} sweeps: off-diagonal {off:.3e}, "
            f"target {tol * norm:.3e}, size {n}, rotations {rotations}"
        )

    evals = np.diag(A).copy()
    order = np.argsort(evals, kind="stable")
    return Spectrum(evals[order], V[:, order], rotations)
