"""Partial transposition and the PPT separability indicator.

Partial transposition flips the sign of the momentum quadrature of every mode
in the first party. The indicator ``sum_k (-1)^(n+k) theta_2k`` of the
transposed matrix equals ``prod_i (nu~_i^2 - 1)``; it is nonnegative for PPT
states, which for 1 x q or p x 1 splits is the same as separability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .errors import InvalidDimensionError, UnphysicalStateError
from .invariants import _invariant_rate, symplectic_eigenvalues, thetas_of


@dataclass(frozen=True)
class Bipartition:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise InvalidDimensionError(f"both parties need at least one mode, got {self.p}+{self.q}")

    @property
    def n(self) -> int:
        return self.p + self.q

    def transposer(self) -> np.ndarray:
        """``T = sigma_z (+) ... (+) sigma_z (+) I_2 (+) ... (+) I_2``."""
        return np.diag([1.0, -1.0] * self.p + [1.0, 1.0] * self.q)


def _check(sigma, part: Bipartition, physical: bool = True):
    if physical:
        sigma = core.require_covariance(sigma)
    else:
        sigma = np.asarray(sigma, dtype=float)
        ok, why = core.is_valid_covariance(sigma)
        if not ok and not why.startswith("uncertainty"):
            raise UnphysicalStateError(f"expected a symmetric positive-definite matrix: {why}")
    if core.mode_count(sigma) != part.n:
        raise InvalidDimensionError(
            f"bipartition {part.p}+{part.q} does not match a {core.mode_count(sigma)}-mode state"
        )
    return sigma


def partial_transpose(sigma, part: Bipartition, physical: bool = True) -> np.ndarray:
    """``T sigma T``; positive definite but possibly violating the uncertainty bound.

    ``physical=False`` accepts any symmetric positive-definite input, such as
    an already transposed matrix.
    """
    sigma = _check(sigma, part, physical)
    T = part.transposer()
    return T @ sigma @ T


def pt_symplectic_eigenvalues(sigma, part: Bipartition) -> np.ndarray:
    """Symplectic spectrum of the partially transposed matrix (may contain values < 1)."""
    return symplectic_eigenvalues(partial_transpose(sigma, part), physical=False)


def sigma_tilde_indicator(sigma, part: Bipartition) -> float:
    """Alternating sum ``sum_{k=0}^{n} (-1)^(n+k) theta_2k`` of the partial transpose."""
    th = thetas_of(partial_transpose(sigma, part))
    n = part.n
    signs = (-1.0) ** (n + np.arange(n + 1))
    return float(signs @ th)


def sigma_tilde_rate(sigma, part: Bipartition, chi: float) -> float:
    """Rate of the indicator under the lossy flow.

    The partial transpose obeys the same flow as ``sigma``, so each
    ``theta_2k`` of it changes at ``-2k theta_2k + chi tr[S~ V~_k S~^T]``
    with the Williamson data of the transposed matrix. The constant k = 0
    term drops out.
    """
    st = partial_transpose(sigma, part)
    n = part.n
    return float(
        sum((-1.0) ** (n + k) * _invariant_rate(st, k, chi, physical=False) for k in range(1, n + 1))
    )
