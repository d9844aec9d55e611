"""Lossy-channel evolution, impulsive symplectic control and relaxation times.

All times here are rescaled by the loss rate (``t = eta * t_phys``), so the
free flow is ``d sigma/dt = -sigma + chi I`` with closed-form solution
``sigma(t) = chi I + (sigma(0) - chi I) exp(-t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from . import core
from .errors import (
    ContractError,
    DomainError,
    InvalidDimensionError,
    NotSymplecticError,
    WrongDirectionError,
)
from .invariants import thetas_of, v_matrix
from .trace_opt import descending_order, zeta_plus
from .williamson import _squeezing_unchecked, williamson

Policy = Callable[[np.ndarray], np.ndarray]


def evolve(sigma0, chi: float, t: float) -> np.ndarray:
    """Exact state after rescaled time ``t`` of free lossy evolution."""
    if t < 0:
        raise DomainError(f"evolution time must be nonnegative, got {t}")
    if chi < 1.0:
        raise DomainError(f"bath parameter chi must be >= 1, got {chi}")
    sigma0 = np.asarray(sigma0, dtype=float)
    if t == 0:
        return sigma0.copy()
    fixed = chi * np.eye(sigma0.shape[0])
    return fixed + (sigma0 - fixed) * math.exp(-t)


def single_mode_nu(nu0: float, z: float, chi: float, t):
    """Symplectic eigenvalue of a decoupled mode held at squeezing ``z``.

    ``nu(t) = chi zeta_plus(z) + (nu0 - chi zeta_plus(z)) exp(-t)``; accepts an
    array of times.
    """
    if nu0 < 1.0 or chi < 1.0:
        raise DomainError("nu0 and chi must both be >= 1")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("times must be nonnegative")
    target = chi * zeta_plus(z)
    out = target + (nu0 - target) * np.exp(-t)
    return float(out) if out.ndim == 0 else out


# --- control synthesis ----------------------------------------------------


def optimal_control(
    sigma, chi: float, budget=None, direction: str = "cool", order: int | None = None
) -> np.ndarray:
    """Locally optimal instantaneous symplectic control.

    ``cool`` returns the inverse Williamson factor, leaving the thermal state
    ``W``. ``heat`` returns ``Zbar @ S_W^-1`` so the post-control state is
    ``Zbar W Zbar^T``, with the largest budget entry squeezing the mode with
    the largest symplectic eigenvalue. ``auto`` picks ``heat`` when every
    symplectic eigenvalue is below ``chi`` and ``cool`` when all are above.

    The default pairing maximises the rate of theta_2. Passing ``order=k``
    instead pairs budgets with the weights ``nu_i * theta_reduced(nus, k-1, i)``
    so that the rate of theta_2k is maximised; for ``k = n`` those weights
    are ``det / nu_i`` and the pairing is reversed.
    """
    sigma = core.require_covariance(sigma)
    dec = williamson(sigma)
    n = dec.nus.size
    if direction == "auto":
        if np.all(dec.nus < chi):
            direction = "heat"
        elif np.all(dec.nus > chi):
            direction = "cool"
        else:
            raise WrongDirectionError(
                "modes straddle the fixed point; choose 'heat' or 'cool' explicitly"
            )
    inverse = core.symplectic_inverse(dec.S)
    if direction == "cool":
        return inverse
    if direction != "heat":
        raise ValueError(f"direction must be 'heat', 'cool' or 'auto', got {direction!r}")
    if budget is None:
        raise ContractError("heating control needs a squeezing budget")
    zbars = np.atleast_1d(np.asarray(budget, dtype=float))
    if zbars.size != n:
        raise InvalidDimensionError(f"budget has {zbars.size} entries for {n} modes")
    if np.any(np.diff(zbars) > 0):
        raise ContractError(f"budget must be sorted in descending order, got {zbars}")
    if np.any(zbars < 1.0):
        raise DomainError("budget entries must be >= 1")
    if order is None:
        weights = dec.nus
    else:
        weights = np.diag(v_matrix(dec.nus, order))[::2]
    assigned = np.empty(n)
    assigned[descending_order(weights)] = zbars
    return core.squeezer(assigned) @ inverse


def control_policy(direction: str, chi: float, budget=None, order: int | None = None) -> Policy:
    """State-dependent action that recomputes :func:`optimal_control` when applied."""

    def policy(sigma):
        return optimal_control(sigma, chi, budget, direction, order)

    policy.__name__ = f"optimal_{direction}"
    return policy


# --- relaxation times -----------------------------------------------------


def _check_eps(eps):
    if eps < 0:
        raise DomainError(f"tolerance eps must be nonnegative, got {eps}")


def t_heat(nu0_list, zbar_list, chi: float, eps: float) -> float:
    """Time for every heated mode to come within ``eps`` of ``chi`` under maximal squeezing.

    Modes and budgets are both sorted descending and paired positionally.
    Returns ``inf`` when a mode can never arrive (``eps = 0`` and ``zbar = 1``).
    """
    _check_eps(eps)
    nus = np.sort(np.atleast_1d(np.asarray(nu0_list, dtype=float)))[::-1]
    zbars = np.sort(np.atleast_1d(np.asarray(zbar_list, dtype=float)))[::-1]
    if nus.shape != zbars.shape:
        raise InvalidDimensionError("one budget entry is needed per mode")
    if np.any(nus >= chi):
        raise WrongDirectionError("heating time requires every nu0 < chi")
    worst = 0.0
    for nu0, zb in zip(nus, zbars):
        zp = zeta_plus(zb)
        denom = chi * (zp - 1.0) + eps
        if denom <= 0.0:
            return math.inf
        worst = max(worst, math.log((chi * zp - nu0) / denom))
    return worst


def t_cool(nu0_list, chi: float, eps: float) -> float:
    """Time for every cooled (unsqueezed) mode to come within ``eps`` of ``chi``.

    Diverges (returns ``inf``) for ``eps = 0``.
    """
    _check_eps(eps)
    nus = np.atleast_1d(np.asarray(nu0_list, dtype=float))
    if np.any(nus <= chi):
        raise WrongDirectionError("cooling time requires every nu0 > chi")
    if eps == 0:
        return math.inf
    return max(0.0, math.log((np.max(nus) - chi) / eps))


def t_free_single_mode(nu0: float, z0: float, chi: float, eps: float) -> float:
    """Uncontrolled relaxation time of one mode with initial squeezing ``z0``.

    Clamped to 0 when the mode already lies within tolerance.
    """
    if not eps > 0:
        raise DomainError(f"tolerance eps must be positive, got {eps}")
    zp = zeta_plus(z0)
    radicand = (chi - nu0 * zp) ** 2 + nu0**2 * (zp**2 - 1.0) * (chi**2 - 1.0) / (chi**2 + 1.0)
    if radicand <= 0.0:
        return 0.0
    return max(0.0, math.log(math.sqrt(radicand) / eps))


def eps_from_fidelity_tolerance(chi: float, eps_prime: float) -> float:
    """Distance ``2 sqrt(chi^2 - 1) sqrt(eps')`` matching a fidelity tolerance ``eps'``."""
    return 2.0 * math.sqrt(chi**2 - 1.0) * math.sqrt(eps_prime)


def t_cool_purity_form(nu0: float, chi: float, eps_prime: float) -> float:
    """Single-mode cooling time written through the target purity.

    The target purity is ``(1/chi)(1 - 2 sqrt(eps') sqrt(chi^2 - 1) / chi)``; its
    distance to the steady purity ``1/chi`` is turned into a distance in ``nu``
    by the first-order relation ``d nu = -chi^2 d mu``.
    """
    mu_fp = 1.0 / chi
    mu_target = mu_fp * (1.0 - 2.0 * math.sqrt(eps_prime) * math.sqrt(chi**2 - 1.0) / chi)
    return math.log((nu0 - chi) / (chi**2 * (mu_fp - mu_target)))


# --- scenarios ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ControlAction:
    """Instantaneous control at rescaled ``time``.

    ``S`` is either a symplectic matrix or a callable mapping the current
    covariance matrix to one (see :func:`control_policy`).
    """

    time: float
    S: Union[np.ndarray, Policy]

    def __post_init__(self):
        if self.time < 0:
            raise DomainError(f"control time must be nonnegative, got {self.time}")
        if callable(self.S):
            return
        S = np.asarray(self.S, dtype=float)
        if not core.is_symplectic(S, core.DEFAULT_TOL * max(1.0, np.max(np.abs(S)) ** 2)):
            raise NotSymplecticError(f"control at t={self.time} is not symplectic")

    def matrix_for(self, sigma) -> np.ndarray:
        return np.asarray(self.S(sigma) if callable(self.S) else self.S, dtype=float)


@dataclass(frozen=True, eq=False)
class Scenario:
    initial: np.ndarray
    bath: core.BathParams
    schedule: Sequence[ControlAction] = ()
    horizon: float = 10.0
    sample_step: float = 0.01

    def __post_init__(self):
        core.require_covariance(self.initial)
        if not self.sample_step > 0:
            raise DomainError("sample_step must be positive")
        if not self.horizon >= 0:
            raise DomainError("horizon must be nonnegative")
        times = [a.time for a in self.schedule]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ContractError(f"control times must be strictly increasing, got {times}")
        if times and times[-1] > self.horizon:
            raise ContractError("control scheduled after the horizon")


@dataclass(frozen=True, eq=False)
class Sample:
    time: float
    sigma: np.ndarray
    thetas: np.ndarray
    purity: float
    xi: float
    nus: np.ndarray


@dataclass
class Trajectory:
    """Sampled run plus the exact piecewise description it came from.

    ``segments`` holds ``(start_time, state_at_start)``; the state at any time
    is the free evolution from the last segment starting at or before it.
    """

    chi: float
    samples: list = field(default_factory=list)
    segments: list = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.samples])

    @property
    def purities(self) -> np.ndarray:
        return np.array([s.purity for s in self.samples])

    def segment_bounds(self, index: int) -> tuple[float, float]:
        start = self.segments[index][0]
        end = self.segments[index + 1][0] if index + 1 < len(self.segments) else math.inf
        return start, end

    def segment_index(self, t: float) -> int:
        starts = [s for s, _ in self.segments]
        return max(0, int(np.searchsorted(starts, t, side="right")) - 1)

    def state_at(self, t: float, segment: int | None = None) -> np.ndarray:
        if segment is None:
            segment = self.segment_index(t)
        start, sigma = self.segments[segment]
        return evolve(sigma, self.chi, t - start)


def make_sample(t: float, sigma: np.ndarray) -> Sample:
    # williamson validates sigma; the rest can skip the repeated checks
    dec = williamson(sigma)
    return Sample(
        time=float(t),
        sigma=sigma,
        thetas=thetas_of(sigma),
        purity=float(np.exp(-0.5 * np.linalg.slogdet(sigma)[1])),
        xi=_squeezing_unchecked(dec.S),
        nus=dec.nus,
    )


def sample_grid(horizon: float, step: float) -> np.ndarray:
    count = int(math.floor(horizon / step * (1 + 1e-12)))
    grid = np.arange(count + 1) * step
    if horizon - grid[-1] > 1e-12 * max(1.0, horizon):
        grid = np.append(grid, horizon)
    return grid


def run_scenario(sc: Scenario) -> Trajectory:
    """Piecewise exact evolution with controls applied as ``sigma -> S sigma S^T``.

    Samples are taken on the regular grid and on both sides of every control.
    """
    chi = sc.bath.chi
    traj = Trajectory(chi=chi)
    grid = sample_grid(sc.horizon, sc.sample_step)
    sigma = np.asarray(sc.initial, dtype=float)
    t_seg = 0.0
    traj.segments.append((t_seg, sigma))
    gi = 0
    for action in sc.schedule:
        while gi < grid.size and grid[gi] < action.time:
            traj.samples.append(make_sample(grid[gi], evolve(sigma, chi, grid[gi] - t_seg)))
            gi += 1
        while gi < grid.size and grid[gi] == action.time:
            gi += 1
        pre = evolve(sigma, chi, action.time - t_seg)
        traj.samples.append(make_sample(action.time, pre))
        post = core.apply_symplectic(pre, action.matrix_for(pre))
        traj.samples.append(make_sample(action.time, post))
        sigma, t_seg = post, action.time
        traj.segments.append((t_seg, sigma))
    for t in grid[gi:]:
        traj.samples.append(make_sample(t, evolve(sigma, chi, t - t_seg)))
    return traj


def periodic_schedule(policy: Policy, interval: float, horizon: float, start: float = 0.0) -> list:
    """Apply ``policy`` at ``start, start + interval, ...`` up to the horizon."""
    if not interval > 0:
        raise DomainError("control interval must be positive")
    count = int(math.floor((horizon - start) / interval * (1 + 1e-12)))
    return [ControlAction(start + k * interval, policy) for k in range(count + 1)]

