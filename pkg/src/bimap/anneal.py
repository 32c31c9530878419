"""Simulated annealing over a small named parameter vector."""
from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from bimap.geometry import InputError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParamSpec:
    """Search range of one parameter.  Integer parameters move by +-1."""
    name: str
    lo: float
    hi: float
    step: float = 1.0
    integer: bool = False

    def __post_init__(self):
        if self.hi < self.lo:
            raise InputError(f"{self.name}: empty range [{self.lo}, {self.hi}]")

    def clip(self, v):
        v = min(max(v, self.lo), self.hi)
        return int(round(v)) if self.integer else float(v)


# Mapper thresholds searched by default; ranges bracket the shipped defaults.
SIMR_SPACE = (
    ParamSpec("max_point_dispersal", 1.0, 20.0, 1.5),
    ParamSpec("max_angle_deviation", 2.0, 40.0, 3.0),
    ParamSpec("max_pal", 0, 8, integer=True),
    ParamSpec("lcsr_threshold", 0.5, 0.95, 0.04),
    ParamSpec("chain_size", 6, 9, integer=True),
)


@dataclass(frozen=True)
class Schedule:
    """Geometric cooling.  ``start_temp=None`` picks one giving ~``target_acceptance``
    of uphill moves at the start; a start temperature of 0 is greedy descent."""
    start_temp: float | None = None
    cooling: float = 0.95
    steps_per_temp: int = 50
    max_iterations: int = 2000
    target_acceptance: float = 0.8
    min_step_scale: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.cooling < 1.0:
            raise InputError("cooling must lie in (0, 1)")
        if self.steps_per_temp < 1 or self.max_iterations < 0:
            raise InputError("steps_per_temp must be positive and max_iterations non-negative")
        if self.start_temp is not None and self.start_temp < 0:
            raise InputError("start_temp must be >= 0")


@dataclass
class AnnealResult:
    best: Any
    best_value: float
    initial_value: float
    start_temp: float
    evaluations: int = 0
    accepted: int = 0
    history: list = field(default_factory=list)   # best-ever value after each iteration
    trace: list = field(default_factory=list)     # value of the current state after each iteration


def _get(state, name):
    return state[name] if isinstance(state, dict) else getattr(state, name)


def _with(state, changes):
    if isinstance(state, dict):
        return {**state, **changes}
    return dataclasses.replace(state, **changes)


def _safe(objective, state) -> float:
    try:
        v = float(objective(state))
    except (ValueError, ArithmeticError) as exc:
        log.debug("objective failed at %s: %s", state, exc)
        return math.inf
    return v if math.isfinite(v) else math.inf


def _propose(state, space, rng: np.random.Generator, scale: float):
    p = space[int(rng.integers(len(space)))]
    cur = _get(state, p.name)
    if p.integer:
        choices = [v for v in (cur - 1, cur + 1) if p.lo <= v <= p.hi]
        if not choices:
            return state
        new = int(choices[int(rng.integers(len(choices)))])
    else:
        new = p.clip(cur + rng.normal(0.0, p.step * scale))
    return _with(state, {p.name: new})


def anneal(objective: Callable[[Any], float], initial, space=SIMR_SPACE, schedule: Schedule | None = None,
           seed: int = 0) -> AnnealResult:
    """Minimise ``objective`` from ``initial`` (a dataclass instance or a dict).

    Returns the best state ever evaluated.  Non-finite objective values, and
    states the objective rejects with ``ValueError``, are never accepted.
    Deterministic for a given ``seed``.
    """
    schedule = schedule or Schedule()
    space = tuple(space)
    rng = np.random.default_rng(seed)
    current = initial
    cur_val = _safe(objective, current)
    result = AnnealResult(initial, cur_val, cur_val, 0.0, evaluations=1)
    if schedule.max_iterations == 0 or not space:
        return result

    t0 = schedule.start_temp
    if t0 is None:
        ups = []
        for _ in range(min(20, schedule.max_iterations)):
            v = _safe(objective, _propose(current, space, rng, 1.0))
            result.evaluations += 1
            if math.isfinite(v) and math.isfinite(cur_val) and v > cur_val:
                ups.append(v - cur_val)
        t0 = (float(np.mean(ups)) / -math.log(schedule.target_acceptance)) if ups else 1.0
    result.start_temp = t0

    temp = t0
    for it in range(schedule.max_iterations):
        if it and it % schedule.steps_per_temp == 0:
            temp *= schedule.cooling
        scale = max(schedule.min_step_scale, math.sqrt(temp / t0)) if t0 > 0 else schedule.min_step_scale
        cand = _propose(current, space, rng, scale)
        val = _safe(objective, cand)
        result.evaluations += 1
        if math.isfinite(val):
            delta = val - cur_val
            if delta <= 0 or (temp > 0 and rng.random() < math.exp(-delta / temp)):
                current, cur_val = cand, val
                result.accepted += 1
                if val < result.best_value:
                    result.best, result.best_value = cand, val
        result.history.append(result.best_value)
        result.trace.append(cur_val)
    return result
