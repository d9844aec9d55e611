"""Scenario files: YAML documents describing one batch run.

See ``docs/scenario-format.md`` for the grammar. Parsing never stops at the
first problem; every error is collected together with its line number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import core
from .dynamics import ControlAction, Scenario, control_policy, periodic_schedule
from .errors import GaussRelaxError

POLICIES = ("none", "cool", "heat", "actions")
STATE_KINDS = ("vacuum", "thermal", "two_mode_squeezed", "matrix")

SCHEMA = {
    "name": None,
    "state": {"kind", "modes", "nus", "gamma", "r", "matrix"},
    "bath": {"chi", "nbar", "eta"},
    "control": {"policy", "start", "interval", "zbar", "actions"},
    "time": {"horizon", "step"},
    "thresholds": {"purity", "relaxation_deviation", "epsilon"},
    "output": {"trajectory", "summary", "figures"},
}
DEFAULT_RELAXATION_DEVIATION = 5e-7


class ScenarioError(GaussRelaxError, ValueError):
    """Invalid scenario file. ``errors`` is a list of ``(line, message)``."""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "\n".join(
            f"  line {line}: {msg}" if line else f"  {msg}" for line, msg in self.errors
        )
        super().__init__(f"invalid scenario:\n{lines}")


@dataclass
class ScenarioFile:
    """Validated scenario in physical units (seconds, Hz)."""

    name: str
    initial: np.ndarray
    bath: core.BathParams
    policy: str = "none"
    control_start: float = 0.0
    control_interval: float | None = None
    zbar: list | None = None
    actions: list = field(default_factory=list)
    horizon: float = 0.0
    step: float = 0.0
    purity_thresholds: list = field(default_factory=list)
    relaxation_deviation: float = DEFAULT_RELAXATION_DEVIATION
    epsilon: float | None = None
    trajectory_path: str = ""
    summary_path: str = ""
    figures: bool = True
    state_description: dict = field(default_factory=dict)

    @property
    def modes(self) -> int:
        return self.initial.shape[0] // 2

    def to_scenario(self) -> Scenario:
        """Library scenario in rescaled time."""
        eta = self.bath.eta
        horizon = self.horizon * eta
        if self.policy in ("cool", "heat"):
            policy = control_policy(self.policy, self.bath.chi, self.zbar)
            start = self.control_start * eta
            if self.control_interval:
                schedule = periodic_schedule(policy, self.control_interval * eta, horizon, start)
            else:
                schedule = [ControlAction(start, policy)]
        elif self.policy == "actions":
            schedule = [ControlAction(t * eta, S) for t, S in self.actions]
        else:
            schedule = []
        return Scenario(
            initial=self.initial,
            bath=self.bath,
            schedule=schedule,
            horizon=horizon,
            sample_step=self.step * eta,
        )


def _to_python(node, path, lines):
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for key_node, value_node in node.value:
            key = key_node.value
            out[key] = _to_python(value_node, path + (key,), lines)
            # a block mapping starts on its first child; report the key line instead
            lines[path + (key,)] = key_node.start_mark.line + 1
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_to_python(v, path + (i,), lines) for i, v in enumerate(node.value)]
    return _scalar(node)


def _scalar(node):
    loader = yaml.SafeLoader("")
    try:
        value = loader.construct_object(node, deep=True)
    finally:
        loader.dispose()
    # PyYAML follows YAML 1.1, where "1e5" (no dot) is a string
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            pass
    return value


class _Collector:
    def __init__(self, lines):
        self.lines = lines
        self.errors = []

    def add(self, path, msg):
        p = tuple(path)
        while p and p not in self.lines:
            p = p[:-1]
        line = self.lines.get(p)
        self.errors.append((line, msg))

    def number(self, doc, path, *, required=False, default=None, positive=False, minimum=None):
        value = _get(doc, path)
        if value is None:
            if required:
                self.add(path, f"missing required field '{'.'.join(map(str, path))}'")
            return default
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.add(path, f"'{'.'.join(map(str, path))}' must be a number, got {value!r}")
            return default
        value = float(value)
        if not math.isfinite(value):
            self.add(path, f"'{'.'.join(map(str, path))}' must be finite")
            return default
        if positive and value <= 0:
            self.add(path, f"'{'.'.join(map(str, path))}' must be > 0, got {value}")
            return default
        if minimum is not None and value < minimum:
            self.add(path, f"'{'.'.join(map(str, path))}' must be >= {minimum}, got {value}")
            return default
        return value

    def numbers(self, doc, path):
        value = _get(doc, path)
        if value is None:
            return None
        if not isinstance(value, list):
            value = [value]
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            self.add(path, f"'{'.'.join(map(str, path))}' must be a list of numbers")
            return None
        return [float(v) for v in value]


def _get(doc, path):
    cur = doc
    for key in path:
        if isinstance(cur, dict) and key in cur:
            cur = cur[key]
        elif isinstance(cur, list) and isinstance(key, int) and key < len(cur):
            cur = cur[key]
        else:
            return None
    return cur


def parse_scenario(text: str, name: str = "scenario") -> ScenarioFile:
    """Parse and validate scenario text; raise :class:`ScenarioError` listing every problem."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioError([(mark.line + 1 if mark else None, f"YAML syntax error: {exc}")])
    if root is None or not isinstance(root, yaml.MappingNode):
        raise ScenarioError([(1, "scenario must be a mapping of sections")])
    lines: dict = {}
    doc = _to_python(root, (), lines)
    err = _Collector(lines)

    for key, value in doc.items():
        if key not in SCHEMA:
            err.add((key,), f"unknown section '{key}'")
        elif SCHEMA[key] is not None:
            if not isinstance(value, dict):
                err.add((key,), f"section '{key}' must be a mapping")
                continue
            for sub in value:
                if sub not in SCHEMA[key]:
                    err.add((key, sub), f"unknown key '{key}.{sub}'")
    for section in ("state", "bath", "time"):
        if section not in doc:
            err.add((), f"missing required section '{section}'")

    name = str(doc.get("name", name))
    initial, description = _parse_state(doc, err)
    bath = _parse_bath(doc, err)

    policy = _get(doc, ("control", "policy")) or "none"
    if policy not in POLICIES:
        err.add(("control", "policy"), f"policy must be one of {', '.join(POLICIES)}, got {policy!r}")
        policy = "none"
    start = err.number(doc, ("control", "start"), default=0.0, minimum=0.0)
    interval = err.number(doc, ("control", "interval"), positive=True)
    zbar = err.numbers(doc, ("control", "zbar"))
    if policy == "heat":
        if zbar is None:
            err.add(("control",), "heat policy needs 'control.zbar'")
        elif initial is not None and len(zbar) != initial.shape[0] // 2:
            err.add(("control", "zbar"), f"zbar needs one entry per mode ({initial.shape[0] // 2})")
        elif any(z < 1 for z in zbar):
            err.add(("control", "zbar"), "zbar entries must be >= 1")
        elif any(b > a for a, b in zip(zbar, zbar[1:])):
            err.add(("control", "zbar"), "zbar must be sorted in descending order")
    actions = _parse_actions(doc, err, initial) if policy == "actions" else []

    horizon = err.number(doc, ("time", "horizon"), required="time" in doc, positive=True)
    step = err.number(doc, ("time", "step"), positive=True)
    if horizon is not None and step is None:
        step = horizon / 1000.0
    if horizon is not None and step is not None and step > horizon:
        err.add(("time", "step"), "sample step exceeds the horizon")
    if horizon is not None:
        if start is not None and start > horizon:
            err.add(("control", "start"), "control starts after the horizon")
        for t, _ in actions:
            if t > horizon:
                err.add(("control", "actions"), f"action at {t} s is after the horizon")

    purity = err.numbers(doc, ("thresholds", "purity")) or []
    for p in purity:
        if not 0 < p <= 1:
            err.add(("thresholds", "purity"), f"purity thresholds must lie in (0, 1], got {p}")
    deviation = err.number(
        doc, ("thresholds", "relaxation_deviation"), default=DEFAULT_RELAXATION_DEVIATION, positive=True
    )
    epsilon = err.number(doc, ("thresholds", "epsilon"), positive=True)

    figures = _get(doc, ("output", "figures"))
    if figures is None:
        figures = True
    elif not isinstance(figures, bool):
        err.add(("output", "figures"), "'output.figures' must be true or false")
        figures = True
    trajectory_path = str(_get(doc, ("output", "trajectory")) or f"{name}_trajectory.csv")
    summary_path = str(_get(doc, ("output", "summary")) or f"{name}_summary.json")

    if err.errors:
        raise ScenarioError(err.errors)
    return ScenarioFile(
        name=name,
        initial=initial,
        bath=bath,
        policy=policy,
        control_start=start,
        control_interval=interval,
        zbar=zbar,
        actions=actions,
        horizon=horizon,
        step=step,
        purity_thresholds=sorted(purity),
        relaxation_deviation=deviation,
        epsilon=epsilon,
        trajectory_path=trajectory_path,
        summary_path=summary_path,
        figures=figures,
        state_description=description,
    )


def load_scenario(path) -> ScenarioFile:
    path = Path(path)
    return parse_scenario(path.read_text(), name=path.stem)


def _parse_state(doc, err):
    state = doc.get("state")
    if not isinstance(state, dict):
        return None, {}
    kind = state.get("kind")
    if kind not in STATE_KINDS:
        err.add(("state", "kind"), f"state.kind must be one of {', '.join(STATE_KINDS)}, got {kind!r}")
        return None, {}
    description = {"kind": kind}
    try:
        if kind == "vacuum":
            modes = err.number(doc, ("state", "modes"), default=1.0, positive=True)
            if modes is None or modes != int(modes):
                err.add(("state", "modes"), "state.modes must be a positive integer")
                return None, description
            description["modes"] = int(modes)
            return core.vacuum(int(modes)), description
        if kind == "thermal":
            nus = err.numbers(doc, ("state", "nus"))
            if not nus:
                err.add(("state",), "thermal state needs 'state.nus'")
                return None, description
            description["nus"] = nus
            return core.thermal(len(nus), nus), description
        if kind == "two_mode_squeezed":
            gamma = err.number(doc, ("state", "gamma"), required=True)
            r = err.number(doc, ("state", "r"), required=True)
            if gamma is None or r is None:
                return None, description
            if gamma < 1:
                err.add(("state", "gamma"), f"state.gamma must satisfy gamma >= 1, got {gamma}")
                return None, description
            description.update(gamma=gamma, r=r)
            return core.two_mode_squeezed(gamma, r), description
        matrix = _get(doc, ("state", "matrix"))
        sigma = np.asarray(matrix, dtype=float)
        ok, why = core.is_valid_covariance(sigma)
        if not ok:
            err.add(("state", "matrix"), f"state.matrix is not a valid covariance matrix: {why}")
            return None, description
        return sigma, description
    except GaussRelaxError as exc:
        err.add(("state",), str(exc))
    except (TypeError, ValueError) as exc:
        err.add(("state",), f"cannot build state: {exc}")
    return None, description


def _parse_bath(doc, err):
    bath = doc.get("bath")
    if not isinstance(bath, dict):
        return None
    has_chi, has_nbar = "chi" in bath, "nbar" in bath
    if has_chi == has_nbar:
        err.add(("bath",), "bath needs exactly one of 'chi' or 'nbar'")
        return None
    eta = err.number(doc, ("bath", "eta"), default=1.0, positive=True)
    if has_chi:
        chi = err.number(doc, ("bath", "chi"), required=True, minimum=1.0)
    else:
        nbar = err.number(doc, ("bath", "nbar"), required=True, minimum=0.0)
        chi = None if nbar is None else 2.0 * nbar + 1.0
    if chi is None or eta is None:
        return None
    return core.BathParams(chi, eta)


def _parse_actions(doc, err, initial):
    raw = _get(doc, ("control", "actions"))
    if not isinstance(raw, list) or not raw:
        err.add(("control",), "policy 'actions' needs a non-empty 'control.actions' list")
        return []
    out = []
    for i, item in enumerate(raw):
        path = ("control", "actions", i)
        if not isinstance(item, dict) or set(item) != {"time", "matrix"}:
            err.add(path, "each action needs exactly 'time' and 'matrix'")
            continue
        t = err.number(doc, path + ("time",), required=True, minimum=0.0)
        try:
            S = np.asarray(item["matrix"], dtype=float)
            bad = initial is not None and S.shape != initial.shape
            if bad:
                err.add(path + ("matrix",), f"action matrix has shape {S.shape}, state is {initial.shape}")
            elif not core.is_symplectic(S, core.DEFAULT_TOL * max(1.0, np.max(np.abs(S)) ** 2)):
                err.add(path + ("matrix",), "action matrix is not symplectic")
            elif t is not None:
                out.append((t, S))
        except (TypeError, ValueError, GaussRelaxError) as exc:
            err.add(path + ("matrix",), f"bad action matrix: {exc}")
    times = [t for t, _ in out]
    if any(b <= a for a, b in zip(times, times[1:])):
        err.add(("control", "actions"), "action times must be strictly increasing")
    return out
