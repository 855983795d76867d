"""Environment registry."""

from __future__ import annotations

from .arm import ArmConfig, ArmReach
from .base import (
    ActionOutOfRange,
    BoxSpace,
    DiscreteSpace,
    Env,
    EnvError,
    Observation,
    ObservationLayout,
    ObsSlice,
    PlacementFailure,
    StepResult,
    SteppedAfterTerminal,
    dump_state_line,
)
from .letter import LetterWorld, LetterWorldConfig
from .zone import ZoneConfig, ZoneEnv

ENV_IDS = ("letter", "zone-point", "zone-car", "zone-multi", "arm-grippers", "arm-full")

# environment id -> corpus environment name (see specs.corpus)
CORPUS_ENV_FOR = {
    "letter": "letter",
    "zone-point": "zone",
    "zone-car": "zone",
    "zone-multi": "zone-multi",
    "arm-grippers": "arm-grippers",
    "arm-full": "arm-grippers-arm",
}


def make_env(env_id: str, **overrides) -> Env:
    """Construct a registered environment, passing config overrides through."""
    if env_id == "letter":
        return LetterWorld(LetterWorldConfig(**overrides))
    if env_id == "zone-point":
        return ZoneEnv(ZoneConfig(robot="point", **overrides))
    if env_id == "zone-car":
        return ZoneEnv(ZoneConfig(robot="car", **overrides))
    if env_id == "zone-multi":
        overrides.setdefault("n_agents", 2)
        return ZoneEnv(ZoneConfig(robot="point", **overrides))
    if env_id == "arm-grippers":
        return ArmReach(ArmConfig(mode="grippers", **overrides))
    if env_id == "arm-full":
        return ArmReach(ArmConfig(mode="grippers-arm", **overrides))
    raise EnvError(f"unknown environment id {env_id!r}; one of {ENV_IDS}")
