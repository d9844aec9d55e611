"""Symplectic eigenvalues, characteristic-polynomial invariants and their rates.

The invariants ``theta[k]`` (written theta_2k in the docs) are the even-order
elementary symmetric functions of the eigenvalues of ``Omega @ sigma``. They
are computed two independent ways: from the characteristic polynomial of
``Omega @ sigma`` by the Faddeev-LeVerrier recursion, and from the symplectic
spectrum as elementary symmetric polynomials of ``nu_i**2``.
"""

from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from . import core
from .errors import DomainError, InvalidDimensionError, NumericalError, UnphysicalStateError

PAIRING_RTOL = 1e-7


def symplectic_eigenvalues(sigma, physical: bool = True, tol: float = core.DEFAULT_TOL) -> np.ndarray:
    """Symplectic eigenvalues of ``sigma`` in descending order.

    They are the moduli of the eigenvalues of ``Omega @ sigma``, which come in
    conjugate pairs ``+/- i nu``. With ``physical=False`` the uncertainty bound
    ``nu >= 1`` is not enforced (used for partially transposed matrices), but
    ``sigma`` must still be symmetric positive definite.
    """
    sigma = np.asarray(sigma, dtype=float)
    n = core.mode_count(sigma)
    if physical:
        core.require_covariance(sigma, tol)
    elif np.linalg.eigvalsh(0.5 * (sigma + sigma.T))[0] <= 0:
        raise UnphysicalStateError("matrix is not positive definite")

    lam = np.linalg.eigvals(core.omega(n) @ sigma)
    upper = np.sort(lam[lam.imag > 0].imag)[::-1]
    lower = np.sort(-lam[lam.imag <= 0].imag)[::-1]
    if upper.size != n or lower.size != n:
        raise NumericalError(
            f"eigenvalues of Omega sigma do not split into {n} conjugate pairs: {lam}"
        )
    scale = np.abs(lam)
    real_residual = np.max(np.abs(lam.real) / scale)
    pair_residual = np.max(np.abs(upper - lower) / upper)
    if real_residual > PAIRING_RTOL or pair_residual > PAIRING_RTOL:
        raise NumericalError(
            "eigenvalues of Omega sigma are not in +/- i nu pairs "
            f"(real-part residual {real_residual:.3g}, pairing residual {pair_residual:.3g})",
            residual=max(real_residual, pair_residual),
        )
    return 0.5 * (upper + lower)


def char_poly_coeffs(X) -> np.ndarray:
    """Coefficients ``c_0 .. c_m`` of the characteristic polynomial of an m x m matrix.

    Faddeev-LeVerrier recursion ``c_k = -(1/k) sum_{i<k} tr[X^(k-i)] c_i`` with
    ``c_0 = 1``. The result is the coefficient list of ``det(lambda I - X)``,
    ``sum_k c_k lambda^(m-k)``, which equals ``det(X - lambda I)`` whenever m is
    even (always the case for ``Omega @ sigma``). With this sign convention the
    even coefficients ``c_2k`` are directly the invariants theta_2k.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {X.shape}")
    m = X.shape[0]
    traces = np.empty(m + 1)
    power = np.eye(m)
    for j in range(1, m + 1):
        power = power @ X
        traces[j] = np.trace(power)
    c = np.zeros(m + 1)
    c[0] = 1.0
    for k in range(1, m + 1):
        c[k] = -sum(traces[k - i] * c[i] for i in range(k)) / k
    return c


def thetas_of(matrix) -> np.ndarray:
    """All invariants ``theta_0 .. theta_2n`` of ``Omega @ matrix`` (no validity check)."""
    matrix = np.asarray(matrix, dtype=float)
    n = core.mode_count(matrix)
    return char_poly_coeffs(core.omega(n) @ matrix)[::2].copy()


def thetas(sigma) -> np.ndarray:
    """``[theta_0, theta_2, ..., theta_2n]`` of a valid covariance matrix."""
    return thetas_of(core.require_covariance(sigma))


def theta(sigma, k: int) -> float:
    """theta_2k of ``Omega @ sigma`` for ``1 <= k <= n`` via the characteristic polynomial."""
    sigma = core.require_covariance(sigma)
    n = core.mode_count(sigma)
    if not 1 <= k <= n:
        raise DomainError(f"order k must lie in 1..{n}, got {k}")
    return float(thetas_of(sigma)[k])


def elementary_symmetric(values) -> np.ndarray:
    """``e_0 .. e_m`` of the given values, by expanding ``prod (1 + v t)``."""
    e = np.zeros(len(values) + 1)
    e[0] = 1.0
    for v in values:
        e[1:] = e[1:] + v * e[:-1]
    return e


def theta_from_spectrum(nus, k: int | None = None):
    """theta_2k as elementary symmetric polynomial of the squared symplectic eigenvalues.

    Returns the whole list ``theta_0 .. theta_2n`` when ``k`` is None.
    """
    sq = np.asarray(nus, dtype=float) ** 2
    e = elementary_symmetric(sq)
    if k is None:
        return e
    if not 0 <= k <= sq.size:
        raise DomainError(f"order k must lie in 0..{sq.size}, got {k}")
    return float(e[k])


def theta_reduced(nus, k: int, i: int) -> float:
    """Order-k elementary symmetric polynomial of ``nu_j**2`` over modes ``j != i``.

    ``i`` is a zero-based mode index. Order 0 gives 1.
    """
    nus = np.asarray(nus, dtype=float)
    n = nus.size
    if not 0 <= i < n:
        raise DomainError(f"mode index must lie in 0..{n - 1}, got {i}")
    if not 0 <= k <= n - 1:
        raise DomainError(f"reduced order k must lie in 0..{n - 1}, got {k}")
    return float(elementary_symmetric(np.delete(nus, i) ** 2)[k])


def v_matrix(nus, k: int) -> np.ndarray:
    """Diagonal matrix with blocks ``nu_i * theta_reduced(nus, k-1, i) * I_2``."""
    nus = np.asarray(nus, dtype=float)
    n = nus.size
    if not 1 <= k <= n:
        raise DomainError(f"order k must lie in 1..{n}, got {k}")
    return core.block_form([nus[i] * theta_reduced(nus, k - 1, i) for i in range(n)])


def _invariant_rate(matrix, k: int, chi: float, physical: bool) -> float:
    from .williamson import williamson

    dec = williamson(matrix, physical=physical)
    n = dec.nus.size
    if not 1 <= k <= n:
        raise DomainError(f"order k must lie in 1..{n}, got {k}")
    theta_k = theta_from_spectrum(dec.nus, k)
    S = dec.S
    return float(-2 * k * theta_k + chi * np.trace(S @ v_matrix(dec.nus, k) @ S.T))


def invariant_rate(sigma, k: int, chi: float) -> float:
    """Time derivative of theta_2k under the rescaled lossy flow ``d sigma/dt = -sigma + chi I``.

    Evaluated as ``-2k theta_2k + chi tr[S V_k S^T]`` with ``S`` the Williamson
    factor of ``sigma``. The trace term does not depend on the Williamson gauge.
    """
    if chi < 1.0:
        raise DomainError(f"bath parameter chi must be >= 1, got {chi}")
    return _invariant_rate(core.require_covariance(sigma), k, chi, physical=True)


def purity(sigma) -> float:
    """Purity ``1 / sqrt(det sigma)``."""
    sigma = core.require_covariance(sigma)
    sign, logdet = np.linalg.slogdet(sigma)
    return float(np.exp(-0.5 * logdet))


def von_neumann_entropy_single(nu: float) -> float:
    """Entropy of a single-mode thermal state with symplectic eigenvalue ``nu``."""
    if nu < 1.0:
        raise DomainError(f"symplectic eigenvalue must be >= 1, got {nu}")
    a, b = 0.5 * (nu + 1.0), 0.5 * (nu - 1.0)
    return float(xlogy(a, a) - xlogy(b, b))


def nu_from_temperature(beta_omega: float) -> float:
    """Symplectic eigenvalue ``(1 + e^-x) / (1 - e^-x)`` of a thermal mode, ``x = beta*omega``."""
    if not beta_omega > 0:
        raise DomainError(f"beta*omega must be positive, got {beta_omega}")
    return float(1.0 / np.tanh(0.5 * beta_omega))

