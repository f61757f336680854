"""Spectral objectives: target-spectrum distance, gap and gap-ratio goals.

Scores are real numbers where lower is better, so every goal reduces the
evolution step to an argmin over candidates:

* MinimizeDistance  -> Euclidean distance between the leading eigenvalues and
  the target (in lambda space by default, optionally in k = sqrt(lambda));
* MaximizeLambda1   -> -lambda_1        (spectral gap, first nonzero);
* MinimizeLambda1   -> +lambda_1;
* MaximizeRatio     -> -lambda_2/lambda_1;
* Program           -> an ordered list of phases, each a goal plus an optional
  stop condition that hands control to the next phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import ZeroGap
from .spectrum import Spectrum

_GAP_FLOOR = 1e-12


@dataclass(frozen=True)
class TargetSpectrum:
    """Nondecreasing mu_0..mu_N with mu_0 = 0; repeats encode multiplicity."""

    values: tuple[float, ...]
    space: str = "lambda"

    def __post_init__(self) -> None:
        if not self.values or self.values[0] != 0.0:
            raise ValueError("target spectrum must start with mu_0 = 0")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("target spectrum must be nondecreasing")
        if any(v < 0 for v in self.values):
            raise ValueError("target spectrum must be nonnegative")
        if self.space not in ("lambda", "k"):
            raise ValueError(f"space must be 'lambda' or 'k', got {self.space!r}")


@dataclass(frozen=True)
class MinimizeDistance:
    target: TargetSpectrum


@dataclass(frozen=True)
class MaximizeLambda1:
    pass


@dataclass(frozen=True)
class MinimizeLambda1:
    pass


@dataclass(frozen=True)
class MaximizeRatio:
    pass


@dataclass(frozen=True)
class EigenvalueStop:
    """Trigger when lambda_index satisfies the comparison."""

    index: int
    comparator: str
    threshold: float

    def __post_init__(self) -> None:
        if self.comparator not in (">=", "<=", ">", "<"):
            raise ValueError(f"bad comparator {self.comparator!r}")
        if self.index < 0:
            raise ValueError("eigenvalue index must be >= 0")

    def triggered(self, spec: Spectrum) -> bool:
        lam = spec.eigenvalues(self.index + 1)[self.index]
        return {
            ">=": lam >= self.threshold,
            "<=": lam <= self.threshold,
            ">": lam > self.threshold,
            "<": lam < self.threshold,
        }[self.comparator]


@dataclass(frozen=True)
class StepCountStop:
    steps: int

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError("phase step count must be >= 1")


StopCondition = Union[EigenvalueStop, StepCountStop]


@dataclass(frozen=True)
class ProgramPhase:
    goal: "Goal"
    stop: Optional[StopCondition] = None


@dataclass(frozen=True)
class Program:
    phases: tuple[ProgramPhase, ...]

    def __post_init__(self) -> None:
        if not self.phases:
            raise ValueError("program needs at least one phase")


Goal = Union[MinimizeDistance, MaximizeLambda1, MinimizeLambda1, MaximizeRatio, Program]


@dataclass(frozen=True)
class Score:
    value: float
    eigenvalues: tuple[float, ...] = field(default=())

    def __lt__(self, other: "Score") -> bool:
        return self.value < other.value


def spectral_distance(spec: Spectrum, target: TargetSpectrum) -> float:
    """Euclidean distance over the first len(target) eigenvalues."""
    lams = spec.eigenvalues(len(target.values))
    if target.space == "k":
        pairs = zip((math.sqrt(l) for l in lams), (math.sqrt(m) for m in target.values))
    else:
        pairs = zip(lams, target.values)
    return math.sqrt(math.fsum((a - b) ** 2 for a, b in pairs))


def required_eigen_count(goal: Goal) -> int:
    """Eigenvalues (counted from lambda_0) a spectrum must cover for scoring."""
    if isinstance(goal, MinimizeDistance):
        return len(goal.target.values)
    if isinstance(goal, (MaximizeLambda1, MinimizeLambda1)):
        return 2
    if isinstance(goal, MaximizeRatio):
        return 3
    if isinstance(goal, Program):
        return max(required_eigen_count(p.goal) for p in goal.phases)
    raise TypeError(f"not a goal: {goal!r}")


def score(goal: Goal, spec: Spectrum) -> Score:
    """Lower-is-better score of a spectrum under a goal."""
    if isinstance(goal, MinimizeDistance):
        lams = spec.eigenvalues(len(goal.target.values))
        return Score(spectral_distance(spec, goal.target), tuple(lams))
    if isinstance(goal, (MaximizeLambda1, MinimizeLambda1)):
        lams = spec.eigenvalues(2)
        lam1 = lams[1]
        sign = -1.0 if isinstance(goal, MaximizeLambda1) else 1.0
        return Score(sign * lam1, tuple(lams))
    if isinstance(goal, MaximizeRatio):
        lams = spec.eigenvalues(3)
        lam1, lam2 = lams[1], lams[2]
        if lam1 < _GAP_FLOOR:
            raise ZeroGap(f"lambda_1 = {lam1} is numerically zero; ratio undefined")
        return Score(-lam2 / lam1, tuple(lams))
    if isinstance(goal, Program):
        raise TypeError("a Program is scored phase by phase; pass the active phase goal")
    raise TypeError(f"not a goal: {goal!r}")


def as_phases(goal: Goal) -> tuple[ProgramPhase, ...]:
    """View any goal as a program (single open-ended phase if plain)."""
    if isinstance(goal, Program):
        return goal.phases
    return (ProgramPhase(goal, None),)


# ---------------------------------------------------------------------------
# JSON encoding shared by run configs, logs and the HTTP API
# ---------------------------------------------------------------------------

def goal_to_dict(goal: Goal) -> dict:
    if isinstance(goal, MinimizeDistance):
        return {"type": "target", "space": goal.target.space,
                "values": list(goal.target.values)}
    if isinstance(goal, MaximizeLambda1):
        return {"type": "max_lambda1"}
    if isinstance(goal, MinimizeLambda1):
        return {"type": "min_lambda1"}
    if isinstance(goal, MaximizeRatio):
        return {"type": "max_ratio"}
    if isinstance(goal, Program):
        phases = []
        for p in goal.phases:
            entry: dict = {"goal": goal_to_dict(p.goal)}
            if isinstance(p.stop, EigenvalueStop):
                entry["stop"] = {"type": "eigenvalue", "index": p.stop.index,
                                 "comparator": p.stop.comparator,
                                 "threshold": p.stop.threshold}
            elif isinstance(p.stop, StepCountStop):
                entry["stop"] = {"type": "steps", "steps": p.stop.steps}
            phases.append(entry)
        return {"type": "program", "phases": phases}
    raise TypeError(f"not a goal: {goal!r}")


def goal_from_dict(data: dict) -> Goal:
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError("goal block must be an object with a 'type' field")
    kind = data["type"]
    if kind == "target":
        return MinimizeDistance(TargetSpectrum(tuple(float(v) for v in data["values"]),
                                               data.get("space", "lambda")))
    if kind == "max_lambda1":
        return MaximizeLambda1()
    if kind == "min_lambda1":
        return MinimizeLambda1()
    if kind == "max_ratio":
        return MaximizeRatio()
    if kind == "program":
        phases = []
        for p in data["phases"]:
            stop_data = p.get("stop")
            stop: Optional[StopCondition] = None
            if stop_data is not None:
                if stop_data["type"] == "eigenvalue":
                    stop = EigenvalueStop(int(stop_data["index"]), stop_data["comparator"],
                                          float(stop_data["threshold"]))
                elif stop_data["type"] == "steps":
                    stop = StepCountStop(int(stop_data["steps"]))
                else:
                    raise ValueError(f"unknown stop type {stop_data['type']!r}")
            phases.append(ProgramPhase(goal_from_dict(p["goal"]), stop))
        return Program(tuple(phases))
    raise ValueError(f"unknown goal type {kind!r}")
