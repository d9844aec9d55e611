"""Williamson normal form, Euler decomposition and the squeezing measure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .errors import NotSymplecticError, NumericalError, UnphysicalStateError

RECONSTRUCTION_RTOL = 1e-8
PROJECTION_LIMIT = 1e-6
UNSQUEEZED_RTOL = 1e-10


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """``sigma = S @ W @ S.T`` with ``W = diag(nu_1, nu_1, ..., nu_n, nu_n)``, nus descending."""

    S: np.ndarray
    nus: np.ndarray

    @property
    def W(self) -> np.ndarray:
        return core.block_form(self.nus)

    def reconstruct(self) -> np.ndarray:
        return self.S @ self.W @ self.S.T


@dataclass(frozen=True)
class EulerDecomposition:
    """``S = R1 @ Z @ R2`` with passive ``R1``, ``R2`` and ``Z = diag(z1, 1/z1, ...)``."""

    R1: np.ndarray
    zs: np.ndarray
    R2: np.ndarray

    @property
    def Z(self) -> np.ndarray:
        return core.squeezer(self.zs)

    def reconstruct(self) -> np.ndarray:
        return self.R1 @ self.Z @ self.R2


def _sym_sqrt(sigma):
    w, V = np.linalg.eigh(sigma)
    if w[0] <= 0:
        raise UnphysicalStateError("matrix is not positive definite")
    return (V * np.sqrt(w)) @ V.T


def _fix_block_rotations(S):
    """Fix the per-mode rotation gauge: each 2x2 diagonal block of S gets maximal trace.

    Rotating the columns of mode j commutes with W, so this is still a valid
    Williamson factor; it returns S = I for diagonal thermal states.
    """
    S = S.copy()
    for j in range(S.shape[0] // 2):
        b = S[2 * j: 2 * j + 2, 2 * j: 2 * j + 2]
        theta = np.arctan2(b[0, 1] - b[1, 0], b[0, 0] + b[1, 1])
        c, s = np.cos(theta), np.sin(theta)
        S[:, 2 * j: 2 * j + 2] = S[:, 2 * j: 2 * j + 2] @ np.array([[c, -s], [s, c]])
    return S


def williamson(sigma, physical: bool = True) -> WilliamsonDecomposition:
    """Williamson decomposition of a symmetric positive-definite matrix.

    With ``B = sigma^(1/2) Omega sigma^(1/2)`` (real antisymmetric), the
    Hermitian matrix ``iB`` has eigenpairs ``(nu_j, u_j)``. Writing
    ``u_j = x_j + i y_j``, the vectors ``sqrt(2) y_j, sqrt(2) x_j`` form an
    orthogonal ``O`` with ``O^T B O = Omega W``, and
    ``S = sigma^(1/2) O W^(-1/2)`` is symplectic with ``S W S^T = sigma``.
    Degenerate spectra are handled because eigh returns an orthonormal basis
    for each eigenspace. Only the per-mode rotation gauge is fixed.

    ``physical=False`` skips the ``nu >= 1`` requirement.
    """
    sigma = np.asarray(sigma, dtype=float)
    n = core.mode_count(sigma)
    if physical:
        core.require_covariance(sigma)
    sigma = 0.5 * (sigma + sigma.T)
    root = _sym_sqrt(sigma)
    B = root @ core.omega(n) @ root
    w, U = np.linalg.eigh(1j * B)
    # eigh sorts ascending: the last n eigenvalues are the positive +nu branch
    nus = w[n:][::-1]
    U = U[:, n:][:, ::-1]
    O = np.empty((2 * n, 2 * n))
    O[:, 0::2] = np.sqrt(2.0) * U.imag
    O[:, 1::2] = np.sqrt(2.0) * U.real
    S = _fix_block_rotations(root @ O @ np.diag(np.repeat(1.0 / np.sqrt(nus), 2)))

    dec = WilliamsonDecomposition(S=S, nus=nus)
    scale = np.max(np.abs(sigma))
    residual = np.max(np.abs(dec.reconstruct() - sigma)) / scale
    if residual > RECONSTRUCTION_RTOL:
        raise NumericalError(
            f"Williamson reconstruction residual {residual:.3g} exceeds tolerance", residual
        )
    return dec


def _passive_eigenbasis(M, n):
    """Orthosymplectic Q whose columns diagonalise a symmetric positive symplectic M.

    Column pairs are ``(v_j, Omega^T v_j)`` with ``M v_j = lambda_j v_j`` and
    ``lambda_j > 1`` descending, so that ``Q^T M Q = diag(l1, 1/l1, ...)``; the
    partner is an eigenvector for ``1/lambda_j`` because ``M Omega M = Omega``.
    The Omega-invariant eigenspace at 1 is filled by symplectic Gram-Schmidt.
    """
    Om = core.omega(n)
    w, V = np.linalg.eigh(M)
    w, V = w[::-1], V[:, ::-1]
    unsqueezed = 1.0 + UNSQUEEZED_RTOL * w[0]
    pairs, lams = [], []
    for j in range(n):
        if w[j] <= unsqueezed:
            break
        pairs.append(V[:, j])
        lams.append(w[j])
    basis = pairs + [Om.T @ v for v in pairs]
    pool = [V[:, j] for j in range(len(pairs), 2 * n - len(pairs))] + list(np.eye(2 * n))
    for c in pool:
        if len(pairs) == n:
            break
        v = c - sum((b @ c) * b for b in basis) if basis else c.copy()
        norm = np.linalg.norm(v)
        if norm < 1e-3:
            continue
        v = v / norm
        pairs.append(v)
        lams.append(1.0)
        basis.extend([v, Om.T @ v])
    Q = np.empty((2 * n, 2 * n))
    for j, v in enumerate(pairs):
        Q[:, 2 * j] = v
        Q[:, 2 * j + 1] = Om.T @ v
    return Q, np.array(lams)


def _nearest_orthogonal(A):
    U, _, Vt = np.linalg.svd(A)
    return U @ Vt


def euler_svd(S, tol: float = core.DEFAULT_TOL) -> EulerDecomposition:
    """Euler (Bloch-Messiah) decomposition ``S = R1 Z R2``.

    ``z_j**2`` are the n largest eigenvalues of ``S^T S``, sorted descending.
    ``R2^T`` collects the matching eigenvectors in orthosymplectic pairs and
    ``R1 = S R2^T Z^-1``; R1 is re-orthogonalised by its polar factor when the
    departure from orthogonality is below 1e-6, otherwise the call fails.
    """
    S = np.asarray(S, dtype=float)
    n = core.mode_count(S)
    if not core.is_symplectic(S, tol * max(1.0, np.max(np.abs(S)) ** 2)):
        raise NotSymplecticError("euler_svd requires a symplectic matrix")
    M = S.T @ S
    Q, lams = _passive_eigenbasis(0.5 * (M + M.T), n)
    zs = np.sqrt(lams)
    R2 = Q.T
    R1 = S @ Q @ core.squeezer(1.0 / zs)
    departure = np.max(np.abs(R1.T @ R1 - np.eye(2 * n)))
    if departure > PROJECTION_LIMIT:
        raise NumericalError(
            f"R1 departs from orthogonality by {departure:.3g}", residual=departure
        )
    R1 = _nearest_orthogonal(R1)
    return EulerDecomposition(R1=R1, zs=zs, R2=R2)


def squeezing_measure(S, tol: float = core.DEFAULT_TOL) -> float:
    """``max eig(S^T S) - 1``; zero exactly for passive (orthosymplectic) matrices."""
    S = np.asarray(S, dtype=float)
    if not core.is_symplectic(S, tol * max(1.0, np.max(np.abs(S)) ** 2)):
        raise NotSymplecticError("squeezing measure requires a symplectic matrix")
    return _squeezing_unchecked(S)


def _squeezing_unchecked(S: np.ndarray) -> float:
    top = np.linalg.svd(S, compute_uv=False)[0]
    return max(0.0, float(top**2 - 1.0))
