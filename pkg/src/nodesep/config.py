from __future__ import annotations

import enum
from dataclasses import dataclass, replace


class RatingKind(enum.Enum):
    EXP_STAR = "exp*"
    EXP_2STAR = "exp**"
    MAX = "max"
    LOG = "log"
    WEIGHT = "weight"


class Mode(enum.Enum):
    FLOW_ONLY = "flow"
    LS_PLUS_FLOW = "lsflow"


@dataclass(frozen=True)
class SepConfig:
    """Everything that determines a run besides the graph."""

    epsilon: float = 0.20
    alpha: float = 1.0
    mode: Mode = Mode.LS_PLUS_FLOW
    vcycles: int = 3
    initial_reps: int = 25
    coarsest_target: int = 10_000
    rating: RatingKind = RatingKind.EXP_STAR
    subset_size: int = 5
    topo_orders: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.vcycles < 1:
            raise ValueError("vcycles must be >= 1")
        if self.initial_reps < 1:
            raise ValueError("initial_reps must be >= 1")

    def with_(self, **changes):
        return replace(self, **changes)


PRESETS = {
    "flow0": (Mode.FLOW_ONLY, 0.0),
    "flow0.5": (Mode.FLOW_ONLY, 0.5),
    "flow1": (Mode.FLOW_ONLY, 1.0),
    "lsflow0": (Mode.LS_PLUS_FLOW, 0.0),
    "lsflow0.5": (Mode.LS_PLUS_FLOW, 0.5),
    "lsflow1": (Mode.LS_PLUS_FLOW, 1.0),
}


def preset(name, **overrides):
    """Config for one of the named presets, e.g. ``preset("lsflow1", seed=3)``."""
    try:
        mode, alpha = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return SepConfig(mode=mode, alpha=alpha, **overrides)
