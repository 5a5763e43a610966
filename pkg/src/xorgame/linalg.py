"""Dense complex linear algebra kernel.

Everything downstream (games, SDP, strategies, structure checks) runs on the
primitives in this module: Kronecker products, a self-contained Hermitian
eigensolver, the vector/matrix reshaping bijection, Schmidt decompositions and
operator sign normalization.  The eigensolver is a cyclic complex Jacobi
iteration implemented here rather than delegated to LAPACK so that test
results do not depend on the host's BLAS build.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12


class NonHermitian(ValueError):
    """Input matrix is not Hermitian within the required tolerance."""


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible."""


def _as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _as_complex_vector(w, name: str = "vector") -> np.ndarray:
    v = np.asarray(w, dtype=complex).reshape(-1)
    if v.size == 0:
        raise DimensionMismatch(f"{name} must be non-empty")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def frobenius(a: np.ndarray) -> float:
    return float(np.sqrt((np.abs(a) ** 2).sum()))


def kron(a, b) -> np.ndarray:
    """Kronecker product a ⊗ b."""
    return np.kron(_as_complex_matrix(a, "a"), _as_complex_matrix(b, "b"))


def require_hermitian(h, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity entrywise and return the symmetrized (h+h†)/2."""
    m = _as_complex_matrix(h, name)
    if m.shape[0] != m.shape[1]:
        raise NonHermitian(f"{name} must be square, got shape {m.shape}")
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise NonHermitian(f"{name} deviates from Hermitian by {dev:.3e} (tolerance {tol:.1e})")
    return (m + m.conj().T) / 2


def _jacobi_sweeps(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi iteration; returns (diagonal, accumulated unitary)."""
    n = a.shape[0]
    A = a.copy()
    V = np.eye(n, dtype=complex)
    scale = frobenius(A)
    if scale == 0.0 or n == 1:
        return np.real(np.diag(A)).astype(float), V
    stop = 1e-14 * scale
    diag_mask = ~np.eye(n, dtype=bool)
    for _ in range(60):
        off = np.sqrt((np.abs(A[diag_mask]) ** 2).sum())
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= 1e-18 * scale:
                    continue
                phase = apq / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                colp = c * A[:, p] - s * np.conj(phase) * A[:, q]
                colq = s * phase * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = colp, colq
                rowp = c * A[p, :] - s * phase * A[q, :]
                rowq = s * np.conj(phase) * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rowp, rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vcolp = c * V[:, p] - s * np.conj(phase) * V[:, q]
                vcolq = s * phase * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = vcolp, vcolq
    return np.real(np.diag(A)).astype(float), V


def hermitian_eig(h, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues ascending and a unitary matrix of eigenvectors
    (columns), so that h @ V == V @ diag(w).
    """
    m = require_hermitian(h, tol)
    w, v = _jacobi_sweeps(m)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def vec_to_matrix(w, d_A: int, d_B: int) -> np.ndarray:
    """Reshape a bipartite vector Σ w_ij |i⟩⊗|j⟩ into the matrix Σ w_ij |i⟩⟨j|."""
    v = _as_complex_vector(w, "w")
    if d_A <= 0 or d_B <= 0 or v.size != d_A * d_B:
        raise DimensionMismatch(f"vector of dim {v.size} is not {d_A}x{d_B}")
    return v.reshape(d_A, d_B)


def matrix_to_vec(m) -> np.ndarray:
    """Inverse of vec_to_matrix (row-major flattening)."""
    return _as_complex_matrix(m, "m").reshape(-1)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt data of a bipartite vector: w = Σ_i coefficients[i]·left[:,i]⊗right[:,i]."""

    coefficients: np.ndarray  # non-increasing, > cutoff
    left_basis: np.ndarray  # d_A x r, orthonormal columns
    right_basis: np.ndarray  # d_B x r, orthonormal columns

    @property
    def rank(self) -> int:
        return int(self.coefficients.size)


def schmidt(w, d_A: int, d_B: int, cutoff: float = 1e-9) -> SchmidtDecomposition:
    """Schmidt decomposition, keeping coefficients strictly above cutoff.

    Singular values at or below max(cutoff, machine floor) count as exact
    zeros; the machine floor keeps numerically-zero directions out of the
    orthonormal bases.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    m = vec_to_matrix(w, d_A, d_B)
    scale = frobenius(m)
    dil = np.zeros((d_A + d_B, d_A + d_B), dtype=complex)
    dil[:d_A, d_A:] = m
    dil[d_A:, :d_A] = m.conj().T
    vals, vecs = hermitian_eig(dil)
    floor = max(cutoff, 1e-14 * max(1.0, scale))
    keep = np.nonzero(vals > floor)[0][::-1]  # descending singular values
    coeffs = vals[keep]
    left = np.sqrt(2.0) * vecs[:d_A, keep]
    right = np.conj(np.sqrt(2.0) * vecs[d_A:, keep])
    return SchmidtDecomposition(coeffs, left, right)


def sign_normalize(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Map a Hermitian operator to the ±1 observable sign(h), with sign(0) = +1."""
    w, v = hermitian_eig(h, tol)
    signs = np.where(w >= 0.0, 1.0, -1.0)
    out = (v * signs) @ v.conj().T
    return (out + out.conj().T) / 2
