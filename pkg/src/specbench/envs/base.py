"""Shared environment machinery: observation containers, step results,
action spaces, seeded stream splitting, and the raw-state dump format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np


class EnvError(Exception):
    pass


class PlacementFailure(EnvError):
    def __init__(self, what: str, attempts: int):
        super().__init__(f"could not place {what} after {attempts} rejection-sampling attempts")


class ActionOutOfRange(EnvError):
    pass


class SteppedAfterTerminal(EnvError):
    def __init__(self):
        super().__init__("step() called after the episode ended; call reset()")


@dataclass(frozen=True)
class ObsSlice:
    name: str
    start: int
    stop: int
    unit: str


@dataclass(frozen=True)
class ObservationLayout:
    """Named slices (with units) into the two observation vectors."""

    ap: tuple[ObsSlice, ...]
    not_ap: tuple[ObsSlice, ...]


@dataclass
class Observation:
    """Proposition-dependent part ``s_ap`` and ego part ``s_not_ap``."""

    s_ap: np.ndarray
    s_not_ap: np.ndarray
    layout: ObservationLayout

    def validate(self) -> None:
        ap_len = self.layout.ap[-1].stop if self.layout.ap else 0
        ego_len = self.layout.not_ap[-1].stop if self.layout.not_ap else 0
        assert self.s_ap.shape == (ap_len,), (self.s_ap.shape, ap_len)
        assert self.s_not_ap.shape == (ego_len,), (self.s_not_ap.shape, ego_len)
        assert np.all(np.isfinite(self.s_ap)) and np.all(np.isfinite(self.s_not_ap))


@dataclass
class StepResult:
    obs: Any  # Observation, or dict agent-id -> Observation
    reward: float
    terminal: bool
    timeout: bool
    propositions: frozenset[str]

    @property
    def info(self) -> dict:
        return {"propositions": sorted(self.propositions)}


@dataclass(frozen=True)
class DiscreteSpace:
    n: int

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.n))

    def contains(self, action) -> bool:
        return isinstance(action, (int, np.integer)) and 0 <= int(action) < self.n


@dataclass(frozen=True)
class BoxSpace:
    low: float
    high: float
    shape: tuple[int, ...]

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.low, self.high, self.shape)

    def contains(self, action) -> bool:
        arr = np.asarray(action, dtype=float)
        return arr.shape == self.shape and bool(
            np.all(arr >= self.low) and np.all(arr <= self.high)
        )


def split_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """One seed, two independent streams: placement and dynamics.  Adding
    dynamics draws never perturbs the layout drawn for the same seed."""
    placement_ss, dynamics_ss = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(placement_ss), np.random.default_rng(dynamics_ss)


def dump_state_line(state: dict) -> str:
    """One raw-state JSON object per step, stable key order."""
    return json.dumps(state, sort_keys=True, separators=(",", ":"))


class Env:
    """Deterministic, seedable environment with proposition labeling.

    Subclasses implement ``_do_reset``/``_do_step``/``raw_state`` and set
    ``horizon``, ``alphabet`` and ``action_space``.  An instance is
    single-owner mutable state; independent instances may run in parallel.
    """

    horizon: int
    alphabet: tuple[str, ...]

    def reset(self, seed: int):
        self._t = 0
        self._done = False
        self._placement_rng, self._dynamics_rng = split_streams(int(seed))
        return self._do_reset()

    def step(self, action) -> StepResult:
        if getattr(self, "_done", True):
            raise SteppedAfterTerminal()
        self._t += 1
        result = self._do_step(action)
        if result.timeout or result.terminal:
            self._done = True
        return result

    @property
    def t(self) -> int:
        return self._t

    def _timeout(self) -> bool:
        return self._t >= self.horizon

    def mutex_groups(self) -> list[frozenset[str]]:
        return []

    def raw_state(self) -> dict:
        raise NotImplementedError
