"""Semidefinite solver for the XOR-game bias program.

Primal:  sup  G_sym·Z   over Z ⪰ 0 with unit diagonal.
Dual:    inf  Σ y_i     over Diag(y) ⪰ G_sym.

The implementation follows the central path of the dual log-det barrier
Σy − µ·log det(Diag(y) − G_sym) with damped Newton steps in y.  On the path
the primal iterate is recovered analytically as Z = µ·S⁻¹ (S the dual slack),
whose diagonal is exactly rescaled to 1 for export.  Convergence is declared
on the actually exported duality gap, never on µ alone.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games import XorGame, symmetrize
from .linalg import DimensionMismatch, hermitian_eig

DEFAULT_TOL = 1e-8
MAX_ITERATIONS = 500
BOUNDARY_FRACTION = 0.98
SYMMETRY_TOL = 1e-12


class NonSymmetric(ValueError):
    """Objective matrix must be symmetric."""


class MaxIterations(RuntimeError):
    """Iteration cap reached; carries the best iterate, flagged non-converged."""

    def __init__(self, solution: "SdpSolution"):
        super().__init__(
            f"no convergence within {solution.iterations} iterations "
            f"(best gap {solution.gap:.3e})"
        )
        self.solution = solution


@dataclass(frozen=True)
class SdpSolution:
    z: np.ndarray
    y: np.ndarray
    primal_value: float
    dual_value: float
    gap: float
    iterations: int
    converged: bool = True


def _check_symmetric(g_sym) -> np.ndarray:
    g = np.asarray(g_sym, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.size == 0:
        raise NonSymmetric(f"objective must be square, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("objective contains non-finite entries")
    dev = np.abs(g - g.T).max()
    if dev > SYMMETRY_TOL:
        raise NonSymmetric(f"objective deviates from symmetry by {dev:.3e}")
    return (g + g.T) / 2


def _eig_sym(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = hermitian_eig(s)
    return w, v.real


def _export(
    g: np.ndarray,
    y: np.ndarray,
    z_raw: np.ndarray,
    iterations: int,
    converged: bool,
) -> SdpSolution:
    scale = 1.0 / np.sqrt(np.diag(z_raw))
    z = z_raw * np.outer(scale, scale)
    wz, vz = _eig_sym(z)
    if wz[0] < 0.0:
        z = (vz * np.clip(wz, 0.0, None)) @ vz.T
        scale = 1.0 / np.sqrt(np.diag(z))
        z = z * np.outer(scale, scale)
    z = (z + z.T) / 2
    primal = float((g * z).sum())
    dual = float(y.sum())
    return SdpSolution(z, y.copy(), primal, dual, dual - primal, iterations, converged)


def solve(g_sym, tol: float = DEFAULT_TOL) -> SdpSolution:
    """Solve both programs to duality gap <= tol.

    Raises MaxIterations (carrying the best iterate) if the 500-step cap is hit.
    """
    if not (0.0 < tol <= 1e-2):
        raise ValueError(f"tol must lie in (0, 1e-2], got {tol!r}")
    g = _check_symmetric(g_sym)
    n = g.shape[0]
    y = np.abs(g).sum(axis=1) + 1.0
    s = np.diag(y) - g
    mu = float(np.trace(s)) / n
    mu_target = max(tol / (8 * n), 1e-13)
    iterations = 0
    best: SdpSolution | None = None
    while iterations < MAX_ITERATIONS:
        w, v = _eig_sym(s)
        s_inv = (v / w) @ v.T
        diag_inv = np.diag(s_inv)
        # centrality residual: on the path diag(mu*S^-1) = 1 exactly
        centrality = np.abs(1.0 - mu * diag_inv).max()
        if mu <= mu_target and centrality < 0.01:
            sol = _export(g, y, mu * s_inv, iterations, True)
            if sol.gap <= tol:
                return sol
            best = sol
            mu_target = max(0.2 * mu_target, 1e-14)
            mu = mu_target
        elif mu > mu_target and centrality < 0.2:
            mu = max(0.2 * mu, mu_target)
        grad = 1.0 - mu * diag_inv
        hess = mu * s_inv * s_inv
        dy = np.linalg.solve(hess, -grad)
        # largest step keeping S + alpha*Diag(dy) positive definite
        b = ((v.T * dy) @ v) / np.sqrt(w)[:, None] / np.sqrt(w)[None, :]
        lam_min = _eig_sym(b)[0][0]
        alpha_max = np.inf if lam_min >= 0.0 else -1.0 / lam_min
        alpha = min(1.0, BOUNDARY_FRACTION * alpha_max)
        y = y + alpha * dy
        s = np.diag(y) - g
        iterations += 1
    if best is None:
        w, v = _eig_sym(s)
        best = _export(g, y, mu * (v / w) @ v.T, iterations, False)
    else:
        best = SdpSolution(
            best.z, best.y, best.primal_value, best.dual_value, best.gap, iterations, False
        )
    raise MaxIterations(best)


def quantum_bias(g: XorGame, tol: float = DEFAULT_TOL) -> float:
    """Quantum success bias of a game: the shared optimum of both programs."""
    return solve(symmetrize(g), tol).primal_value


def verify_dual_feasible(y, g_sym) -> tuple[bool, float]:
    """Check Diag(y) ⪰ g_sym; returns (feasible, smallest eigenvalue of the slack)."""
    g = _check_symmetric(g_sym)
    yv = np.asarray(y, dtype=float).reshape(-1)
    if yv.size != g.shape[0]:
        raise DimensionMismatch(f"y has length {yv.size}, objective is {g.shape[0]}x{g.shape[0]}")
    min_eig = float(_eig_sym(np.diag(yv) - g)[0][0])
    return min_eig >= -1e-9, min_eig
