"""Extremes of ``tr[S Y S^T]`` over symplectics with bounded per-mode squeezing.

``Y = diag(y1, y1, ..., yn, yn)`` is passed as the n scalars ``ys``; a budget
is the list ``zbars`` of maximal singular values allowed per mode. Both lists
are expected in descending order, in which case the supremum pairs the
largest squeezing with the largest ``y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import core
from .errors import ContractError, DomainError, InvalidDimensionError, NotSymplecticError


@dataclass(frozen=True)
class TraceExtremum:
    value: float
    S_star: np.ndarray


def zeta_plus(z):
    """``(z**2 + z**-2) / 2``."""
    z = _check_z(z)
    return 0.5 * (z**2 + z**-2)


def zeta_minus(z):
    """``(z**2 - z**-2) / 2``."""
    z = _check_z(z)
    return 0.5 * (z**2 - z**-2)


def _check_z(z):
    arr = np.asarray(z, dtype=float)
    if np.any(arr < 1.0):
        raise DomainError(f"squeezing values must be >= 1, got {z}")
    return arr if arr.ndim else float(arr)


def _descending(name, values):
    values = np.atleast_1d(np.asarray(values, dtype=float))
    if np.any(np.diff(values) > 0):
        raise ContractError(f"{name} must be sorted in descending order, got {values}")
    return values


def descending_order(values) -> np.ndarray:
    """Stable permutation that sorts ``values`` descending (ties keep input order)."""
    return np.argsort(-np.asarray(values, dtype=float), kind="stable")


def trace_sup(ys, zbars) -> TraceExtremum:
    """Supremum ``sum_i 2 zeta_plus(zbar_i) y_i``, attained by ``diag(zbar_1, 1/zbar_1, ...)``."""
    ys = _descending("ys", ys)
    zbars = _descending("zbars", zbars)
    if ys.shape != zbars.shape:
        raise InvalidDimensionError(f"{ys.size} targets but {zbars.size} squeezing bounds")
    if np.any(ys <= 0):
        raise DomainError("target entries must be positive")
    value = math.fsum(2.0 * zeta_plus(zbars) * ys)
    return TraceExtremum(value, core.squeezer(zbars))


def trace_inf(ys) -> TraceExtremum:
    """Infimum ``tr[Y] = 2 sum_i y_i``, attained by the identity (or any passive matrix)."""
    ys = _descending("ys", ys)
    if np.any(ys <= 0):
        raise DomainError("target entries must be positive")
    return TraceExtremum(math.fsum(2.0 * ys), np.eye(2 * ys.size))


def trace_term(S, ys) -> float:
    """``tr[S Y S^T]`` for the block target built from ``ys``."""
    S = np.asarray(S, dtype=float)
    return float(np.einsum("ij,j,ij->", S, np.repeat(ys, 2), S))


def bistochastic_extremes(alpha, beta) -> tuple[float, float]:
    """Sup and inf of ``alpha^T X beta`` over doubly stochastic X.

    The extremes sit on permutation matrices: the supremum pairs both vectors
    sorted descending, the infimum pairs them oppositely sorted.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if alpha.shape != beta.shape or alpha.ndim != 1:
        raise InvalidDimensionError("alpha and beta must be vectors of equal length")
    b_down = np.sort(beta)[::-1]
    sup = math.fsum(np.sort(alpha)[::-1] * b_down)
    inf = math.fsum(np.sort(alpha) * b_down)
    return sup, inf


def _qp_transform(n):
    """The similarity ``Q P`` taking xpxp real matrices to the complex unitary-isomorphic basis."""
    I = np.eye(n)
    Q = np.block([[I, 1j * I], [I, -1j * I]]) / np.sqrt(2.0)
    return Q @ core.xxpp_permutation(n)


def unistochastic_from_passive(R) -> np.ndarray:
    """``|U_ij|**2`` for the unitary ``U`` represented by an orthosymplectic R."""
    R = np.asarray(R, dtype=float)
    n = core.mode_count(R)
    if not core.is_orthosymplectic(R):
        raise NotSymplecticError("expected an orthogonal symplectic matrix")
    T = _qp_transform(n)
    Rp = T @ R @ np.linalg.inv(T)
    return np.abs(Rp[n:, n:]) ** 2


def verify_unistochastic_reduction(zs, R2, ys) -> float:
    """``|tr[Z^2 R2 Y R2^T] - 2 alpha^T P beta|`` with ``alpha = zeta_plus(z)``, ``beta = y``.

    The left side is the raw real trace; the right side goes through the
    complex basis in which R2 becomes ``diag(U*, U)`` and ``P = |U|**2``.
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    Z2 = core.squeezer(zs) @ core.squeezer(zs)
    R2 = np.asarray(R2, dtype=float)
    raw = np.trace(Z2 @ R2 @ core.block_form(ys) @ R2.T)
    P = unistochastic_from_passive(R2)
    reduced = 2.0 * zeta_plus(np.maximum(zs, 1.0 / zs)) @ P @ ys
    return float(abs(raw - reduced))


def sample_budgeted_traces(ys, zbars, size: int, seed=None, batch: int = 20000) -> np.ndarray:
    """``tr[S Y S^T]`` for ``size`` random ``S = R1 Z R2`` with ``1 <= z_i <= zbar_i``.

    ``R1`` and ``R2`` come from Haar-random unitaries; squeezing factors are
    log-uniform inside the budget. Deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    ys = np.asarray(ys, dtype=float)
    zbars = np.asarray(zbars, dtype=float)
    n = ys.size
    P = core.xxpp_permutation(n)
    y2 = np.repeat(ys, 2)
    out = np.empty(size)
    done = 0
    while done < size:
        m = min(batch, size - done)
        zs = np.exp(rng.uniform(0.0, 1.0, (m, n)) * np.log(zbars))
        Zd = np.stack([zs, 1.0 / zs], axis=-1).reshape(m, 2 * n)
        R1 = _batch_passive(rng, m, n, P)
        R2 = _batch_passive(rng, m, n, P)
        S = R1 @ (Zd[:, :, None] * R2)
        out[done: done + m] = np.einsum("bij,j,bij->b", S, y2, S)
        done += m
    return out


def _batch_passive(rng, m, n, P):
    A = (rng.standard_normal((m, n, n)) + 1j * rng.standard_normal((m, n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(A)
    d = np.diagonal(R, axis1=1, axis2=2)
    U = Q * (d / np.abs(d))[:, None, :]
    X, Y = U.real, U.imag
    R_xxpp = np.concatenate(
        [np.concatenate([X, -Y], axis=2), np.concatenate([Y, X], axis=2)], axis=1
    )
    return P.T @ R_xxpp @ P
