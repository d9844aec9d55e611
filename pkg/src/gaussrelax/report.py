"""Threshold crossings, summaries and file output for scenario runs.

Crossing times are refined by root bracketing on the exact closed-form
evolution inside the segment that contains the sign change, so they are
accurate to ``CROSSING_XTOL`` in rescaled time regardless of sample spacing.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import dynamics
from .williamson import squeezing_measure, williamson
from .dynamics import Trajectory
from .errors import WrongDirectionError
from .scenario import ScenarioFile

CROSSING_XTOL = 1e-9


def fast_purity(sigma) -> float:
    return float(np.exp(-0.5 * np.linalg.slogdet(sigma)[1]))


def _pairs(traj: Trajectory):
    """Consecutive sample pairs with the segment index that connects them."""
    samples = traj.samples
    for a, b in zip(samples, samples[1:]):
        if b.time == a.time:
            yield a, b, None
        else:
            yield a, b, traj.segment_index(a.time)


def first_crossing(traj: Trajectory, quantity, level: float, values=None) -> float | None:
    """First time ``quantity(sigma)`` reaches ``level``; None if it never does.

    ``values`` may hold precomputed ``quantity`` at every sample.
    """
    if values is None:
        values = [quantity(s.sigma) for s in traj.samples]
    s = np.sign(np.asarray(values) - level)
    if s[0] == 0:
        return traj.samples[0].time
    # an asymptotic approach can round onto the level without crossing it,
    # so a zero only counts when the sign on the far side has flipped
    prev, first_zero = s[0], None
    for i, (a, b, seg) in enumerate(_pairs(traj)):
        cur = s[i + 1]
        if cur == 0:
            if first_zero is None:
                first_zero = b.time
            continue
        if cur != prev:
            if first_zero is not None:
                return first_zero
            if seg is None:
                return a.time
            return _bracket(traj, quantity, level, a.time, b.time, seg)
        first_zero = None
    return None


def _bracket(traj, quantity, level, t0, t1, seg):
    def f(t):
        return quantity(traj.state_at(t, seg)) - level

    return float(brentq(f, t0, t1, xtol=CROSSING_XTOL))


def relaxation_time(traj: Trajectory, target: float, deviation: float) -> float | None:
    """Time after which ``|purity - target| <= deviation`` for the rest of the run.

    None when the last sample is still outside the band.
    """
    pur = traj.purities
    outside = np.abs(pur - target) > deviation
    if outside[-1]:
        return None
    if not outside.any():
        return traj.samples[0].time
    i = int(np.flatnonzero(outside)[-1])
    a, b = traj.samples[i], traj.samples[i + 1]
    if a.time == b.time:
        return b.time
    seg = traj.segment_index(a.time)
    sign = 1.0 if pur[i] > target else -1.0
    return _bracket(traj, fast_purity, target + sign * deviation, a.time, b.time, seg)


def extremal_purity(traj: Trajectory, kind: str = "min") -> tuple[float, float]:
    """Refined (value, time) of the smallest or largest purity along the run."""
    pur = traj.purities
    sign = 1.0 if kind == "min" else -1.0
    i = int(np.argmin(sign * pur))
    best_t, best_v = traj.samples[i].time, pur[i]
    for j in (i - 1, i):
        if j < 0 or j + 1 >= len(traj.samples):
            continue
        a, b = traj.samples[j], traj.samples[j + 1]
        if a.time == b.time:
            continue
        seg = traj.segment_index(a.time)
        res = minimize_scalar(
            lambda t: sign * fast_purity(traj.state_at(t, seg)),
            bounds=(a.time, b.time),
            method="bounded",
            options={"xatol": CROSSING_XTOL},
        )
        if sign * res.fun < sign * best_v:
            best_t, best_v = float(res.x), sign * float(res.fun)
    return float(best_v), float(best_t)


@dataclass
class Summary:
    """Flat summary of one run. Times are stored rescaled; physical ones derive from eta."""

    name: str
    modes: int
    chi: float
    eta: float
    steady_purity: float
    crossings: dict
    steady_crossing: float | None
    relaxation_deviation: float
    relaxation: float | None
    min_purity: tuple
    max_purity: tuple
    times: dict

    def as_dict(self) -> dict:
        def phys(t):
            return None if t is None or not math.isfinite(t) else t / self.eta

        def rescaled(t):
            return None if t is None or not math.isfinite(t) else t

        out = {
            "name": self.name,
            "modes": self.modes,
            "chi": self.chi,
            "eta_hz": self.eta,
            "steady_purity": self.steady_purity,
        }
        for level, t in self.crossings.items():
            out[f"purity_{level:g}_crossing_rescaled"] = rescaled(t)
            out[f"purity_{level:g}_crossing_s"] = phys(t)
        out["det_steady_crossing_rescaled"] = rescaled(self.steady_crossing)
        out["det_steady_crossing_s"] = phys(self.steady_crossing)
        out["relaxation_deviation"] = self.relaxation_deviation
        out["relaxation_rescaled"] = rescaled(self.relaxation)
        out["relaxation_s"] = phys(self.relaxation)
        out["min_purity"], t = self.min_purity
        out["min_purity_time_rescaled"], out["min_purity_time_s"] = t, phys(t)
        out["max_purity"], t = self.max_purity
        out["max_purity_time_rescaled"], out["max_purity_time_s"] = t, phys(t)
        for key, t in self.times.items():
            out[f"{key}_rescaled"] = t if t is None else (t if math.isfinite(t) else "inf")
            out[f"{key}_s"] = None if t is None else (t / self.eta if math.isfinite(t) else "inf")
        return out


def relaxation_times(sf: ScenarioFile) -> dict:
    """T_heat / T_cool / T_free (rescaled) for the initial state, None where not applicable."""
    out = {"t_heat": None, "t_cool": None, "t_free": None}
    if sf.epsilon is None:
        return out
    chi = sf.bath.chi
    dec = williamson(sf.initial)
    nus = dec.nus
    if sf.zbar is not None and np.all(nus < chi):
        out["t_heat"] = dynamics.t_heat(nus, sf.zbar, chi, sf.epsilon)
    if np.all(nus > chi):
        out["t_cool"] = dynamics.t_cool(nus, chi, sf.epsilon)
    if nus.size == 1:
        z0 = math.sqrt(1.0 + squeezing_measure(dec.S))
        out["t_free"] = dynamics.t_free_single_mode(nus[0], z0, chi, sf.epsilon)
    return out


def summarize(sf: ScenarioFile, traj: Trajectory) -> Summary:
    chi, n = sf.bath.chi, sf.modes
    steady = chi ** (-n)
    purities = traj.purities
    crossings = {
        level: first_crossing(traj, fast_purity, level, purities) for level in sf.purity_thresholds
    }
    steady_crossing = first_crossing(traj, fast_purity, steady, purities)
    try:
        times = relaxation_times(sf)
    except WrongDirectionError:
        times = {"t_heat": None, "t_cool": None, "t_free": None}
    return Summary(
        name=sf.name,
        modes=n,
        chi=chi,
        eta=sf.bath.eta,
        steady_purity=steady,
        crossings=crossings,
        steady_crossing=steady_crossing,
        relaxation_deviation=sf.relaxation_deviation,
        relaxation=relaxation_time(traj, steady, sf.relaxation_deviation),
        min_purity=extremal_purity(traj, "min"),
        max_purity=extremal_purity(traj, "max"),
        times=times,
    )


def trajectory_header(n: int) -> list:
    return ["t_phys", "t_rescaled", "purity", "xi"] + [f"theta_{2 * k}" for k in range(1, n + 1)] + ["min_nu"]


def trajectory_rows(traj: Trajectory, eta: float):
    for s in traj.samples:
        yield [s.time / eta, s.time, s.purity, s.xi, *s.thetas[1:], s.nus[-1]]


def _fmt(x):
    return format(float(x), ".17g")


def _atomic_write(path: Path, writer):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer(fh)
        # mkstemp creates 0600 files; outputs are meant to be shared
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trajectory(path, traj: Trajectory, eta: float, n: int):
    def writer(fh):
        w = csv.writer(fh)
        w.writerow(trajectory_header(n))
        for row in trajectory_rows(traj, eta):
            w.writerow([_fmt(x) for x in row])

    _atomic_write(Path(path), writer)


def write_summary(path, summary: Summary):
    def writer(fh):
        json.dump(summary.as_dict(), fh, indent=2)
        fh.write("\n")

    _atomic_write(Path(path), writer)


def read_trajectory(path) -> tuple[list, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


COMPARE_HEADER = ["metric", "a_s", "b_s", "speedup_s"]


def compare_summaries(a: Summary, b: Summary) -> list:
    """Per-threshold rows ``(metric, t_a, t_b, t_b - t_a)`` in seconds.

    A positive speed-up means scenario A got there first.
    """
    da, db = a.as_dict(), b.as_dict()
    metrics = [k for k in da if k.endswith("_s") and not k.startswith(("min_purity", "max_purity"))]
    metrics += [k for k in db if k.endswith("_s") and k not in metrics and not k.startswith(("min_purity", "max_purity"))]
    rows = []
    for key in metrics:
        ta, tb = da.get(key), db.get(key)
        ok = isinstance(ta, float) and isinstance(tb, float)
        rows.append((key[:-2], ta, tb, tb - ta if ok else None))
    return rows


def write_compare(path, rows):
    def writer(fh):
        w = csv.writer(fh)
        w.writerow(COMPARE_HEADER)
        for metric, ta, tb, d in rows:
            w.writerow([metric] + ["" if v is None or isinstance(v, str) else _fmt(v) for v in (ta, tb, d)])

    _atomic_write(Path(path), writer)
