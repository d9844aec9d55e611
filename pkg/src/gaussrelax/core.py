"""Covariance matrices, the symplectic form and symplectic congruence.

Quadratures are ordered (x1, p1, ..., xn, pn) everywhere in the package.
Covariance matrices use the convention in which the vacuum is the identity,
so every symplectic eigenvalue of a physical state is at least 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DomainError,
    InvalidDimensionError,
    NotSymplecticError,
    UnphysicalStateError,
)

DEFAULT_TOL = 1e-9

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n: int) -> np.ndarray:
    """Symplectic form for ``n`` modes: n copies of [[0, 1], [-1, 0]] on the diagonal."""
    if int(n) != n or n < 1:
        raise InvalidDimensionError(f"mode count must be a positive integer, got {n!r}")
    return _omega_cached(int(n)).copy()


@lru_cache(maxsize=16)
def _omega_cached(n: int) -> np.ndarray:
    return np.kron(np.eye(n), _J2)


def mode_count(matrix: np.ndarray) -> int:
    """Number of modes of a 2n x 2n matrix; raises on any other shape."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0 or matrix.shape[0] % 2:
        raise InvalidDimensionError(
            f"expected an even, nonzero dimension, got {matrix.shape[0]}"
        )
    return matrix.shape[0] // 2


def is_symplectic(S: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``max|S Omega S^T - Omega| <= tol``."""
    S = np.asarray(S, dtype=float)
    Om = omega(mode_count(S))
    return bool(np.max(np.abs(S @ Om @ S.T - Om)) <= tol)


def is_orthosymplectic(R: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    R = np.asarray(R, dtype=float)
    if not is_symplectic(R, tol):
        return False
    return bool(np.max(np.abs(R.T @ R - np.eye(R.shape[0]))) <= tol)


def is_valid_covariance(sigma: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[bool, str]:
    """Check that ``sigma`` is a bona fide covariance matrix.

    Returns a pair ``(ok, diagnostic)``. The diagnostic is ``"ok"`` on success,
    otherwise it names the first failed check: ``"not symmetric"``,
    ``"not positive definite"`` or ``"uncertainty principle violated"``.
    """
    sigma = np.asarray(sigma, dtype=float)
    n = mode_count(sigma)
    if np.max(np.abs(sigma - sigma.T)) > tol:
        return False, "not symmetric"
    sym = 0.5 * (sigma + sigma.T)
    if np.linalg.eigvalsh(sym)[0] <= 0.0:
        return False, "not positive definite"
    nu_min = np.min(np.abs(np.linalg.eigvals(omega(n) @ sym)))
    if nu_min < 1.0 - tol:
        return False, f"uncertainty principle violated (min symplectic eigenvalue {nu_min:.6g})"
    return True, "ok"


def require_covariance(sigma: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``sigma`` as a float array, raising ``UnphysicalStateError`` if invalid."""
    sigma = np.asarray(sigma, dtype=float)
    ok, why = is_valid_covariance(sigma, tol)
    if not ok:
        raise UnphysicalStateError(f"invalid covariance matrix: {why}")
    return sigma


def symplectic_inverse(S: np.ndarray) -> np.ndarray:
    """Inverse of a symplectic matrix, ``Omega^T S^T Omega``."""
    S = np.asarray(S, dtype=float)
    Om = omega(mode_count(S))
    return Om.T @ S.T @ Om


def apply_symplectic(sigma: np.ndarray, S: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Conjugate a covariance matrix by a symplectic matrix: ``S sigma S^T``."""
    sigma = np.asarray(sigma, dtype=float)
    S = np.asarray(S, dtype=float)
    if mode_count(sigma) != mode_count(S):
        raise InvalidDimensionError(
            f"dimension mismatch: sigma is {sigma.shape}, S is {S.shape}"
        )
    if not is_symplectic(S, tol * max(1.0, np.max(np.abs(S)) ** 2)):
        raise NotSymplecticError("control matrix is not symplectic")
    out = S @ sigma @ S.T
    return 0.5 * (out + out.T)


def vacuum(n: int) -> np.ndarray:
    return np.eye(omega(n).shape[0])


def thermal(n: int, nus) -> np.ndarray:
    """Product thermal state ``diag(nu_1, nu_1, ..., nu_n, nu_n)``."""
    nus = np.atleast_1d(np.asarray(nus, dtype=float))
    if nus.shape != (n,):
        raise InvalidDimensionError(f"expected {n} symplectic eigenvalues, got {nus.size}")
    if np.any(nus < 1.0):
        raise UnphysicalStateError(f"symplectic eigenvalues must be >= 1, got {nus}")
    return np.diag(np.repeat(nus, 2))


def two_mode_squeezed(gamma: float, r: float) -> np.ndarray:
    """Two-mode squeezed thermal state with both symplectic eigenvalues equal to ``gamma``."""
    if gamma < 1.0:
        raise UnphysicalStateError(f"two-mode squeezed state requires gamma >= 1, got {gamma}")
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    return gamma * np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ]
    )


def single_mode_squeezer(z: float) -> np.ndarray:
    return np.diag([z, 1.0 / z])


def squeezer(zs) -> np.ndarray:
    """Local squeezer ``diag(z1, 1/z1, ..., zn, 1/zn)``."""
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    if np.any(zs <= 0):
        raise DomainError(f"squeezing factors must be positive, got {zs}")
    return np.diag(np.column_stack([zs, 1.0 / zs]).ravel())


def block_form(values) -> np.ndarray:
    """Direct sum of ``values[i] * I_2``."""
    return np.diag(np.repeat(np.asarray(values, dtype=float), 2))


@dataclass(frozen=True)
class BathParams:
    """Thermal bath of the lossy channel.

    ``chi = 2 * nbar + 1`` is the bath variance; ``eta`` is the loss rate in
    1/s and is only needed to convert rescaled times to physical ones.
    """

    chi: float
    eta: float = 1.0

    def __post_init__(self):
        if not self.chi >= 1.0:
            raise DomainError(f"bath parameter chi must be >= 1, got {self.chi}")
        if not self.eta > 0.0:
            raise DomainError(f"loss rate eta must be positive, got {self.eta}")

    @classmethod
    def from_nbar(cls, nbar: float, eta: float = 1.0) -> "BathParams":
        return cls(2.0 * nbar + 1.0, eta)

    @property
    def nbar(self) -> float:
        return 0.5 * (self.chi - 1.0)


# --- xpxp <-> xxpp and random sampling ------------------------------------


def xxpp_permutation(n: int) -> np.ndarray:
    """Permutation P with ``P @ (x1, p1, ..., xn, pn) = (x1..xn, p1..pn)``."""
    P = np.zeros((2 * n, 2 * n))
    for k in range(n):
        P[k, 2 * k] = 1.0
        P[n + k, 2 * k + 1] = 1.0
    return P


def orthosymplectic_from_unitary(U: np.ndarray) -> np.ndarray:
    """Real orthosymplectic (passive) matrix in xpxp order for an n x n unitary."""
    U = np.asarray(U)
    n = U.shape[0]
    X, Y = U.real, U.imag
    R_xxpp = np.block([[X, -Y], [Y, X]])
    P = xxpp_permutation(n)
    return P.T @ R_xxpp @ P


def _as_rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_unitary(n: int, rng=None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    rng = _as_rng(rng)
    A = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(A)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_orthosymplectic(n: int, rng=None) -> np.ndarray:
    return orthosymplectic_from_unitary(random_unitary(n, _as_rng(rng)))


def random_symplectic(n: int, rng=None, z_max: float = 3.0, zs=None) -> np.ndarray:
    """Random symplectic ``R1 Z R2``.

    Squeezing factors are log-uniform in ``[1, z_max]`` unless ``zs`` is given.
    """
    rng = _as_rng(rng)
    if zs is None:
        zs = np.exp(rng.uniform(0.0, np.log(z_max), size=n))
    return random_orthosymplectic(n, rng) @ squeezer(zs) @ random_orthosymplectic(n, rng)


def random_covariance(n: int, rng=None, nu_max: float = 3.0, z_max: float = 3.0) -> np.ndarray:
    """Random valid covariance matrix ``S W S^T`` with ``nu_i`` uniform in ``[1, nu_max]``."""
    rng = _as_rng(rng)
    nus = rng.uniform(1.0, nu_max, size=n)
    S = random_symplectic(n, rng, z_max)
    sigma = S @ block_form(nus) @ S.T
    return 0.5 * (sigma + sigma.T)
