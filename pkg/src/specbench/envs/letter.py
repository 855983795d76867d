"""Wrapped-grid navigation over lettered cells.

Each letter appears a fixed number of times on the torus grid; the agent
moves up/down/left/right with wrap-around and the label at each step is the
letter under the agent (if any).  Observations are a one-hot letter map:
either the whole grid in the world frame (the ego position then lives in
``s_not_ap``) or an egocentric window under partial observability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import (
    DiscreteSpace,
    Env,
    EnvError,
    ActionOutOfRange,
    Observation,
    ObservationLayout,
    ObsSlice,
    StepResult,
)

DEFAULT_LETTERS = tuple("abcdefghijkl")

# action id -> (d_row, d_col)
MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))  # up, down, left, right


@dataclass(frozen=True)
class LetterWorldConfig:
    grid_size: int = 7
    letters: tuple[str, ...] = DEFAULT_LETTERS
    copies_per_letter: int = 2
    horizon: int = 75
    partial_obs: bool = False
    view_radius: int = 2

    def __post_init__(self):
        cells_needed = len(self.letters) * self.copies_per_letter + 1
        if self.grid_size**2 < cells_needed:
            raise EnvError(
                f"{self.grid_size}x{self.grid_size} grid cannot hold "
                f"{cells_needed - 1} letter cells plus the agent"
            )
        window = 2 * self.view_radius + 1
        if window**2 > self.grid_size**2:
            raise EnvError("view window larger than the grid")


class LetterWorld(Env):
    def __init__(self, config: LetterWorldConfig | None = None):
        self.config = config or LetterWorldConfig()
        self.horizon = self.config.horizon
        self.alphabet = tuple(self.config.letters)
        self.action_space = DiscreteSpace(4)
        self._layout = self._make_layout()

    def _make_layout(self) -> ObservationLayout:
        cfg = self.config
        side = 2 * cfg.view_radius + 1 if cfg.partial_obs else cfg.grid_size
        map_name = "letter_window" if cfg.partial_obs else "letter_map"
        n = len(cfg.letters) * side * side
        return ObservationLayout(
            ap=(ObsSlice(map_name, 0, n, "onehot"),),
            not_ap=(ObsSlice("agent_pos", 0, 2, "normalized_cells"),),
        )

    def mutex_groups(self) -> list[frozenset[str]]:
        return [frozenset(self.config.letters)]

    # -- placement ---------------------------------------------------------

    def _do_reset(self):
        cfg = self.config
        n_cells = cfg.grid_size**2
        perm = self._placement_rng.permutation(n_cells)
        self._letter_at: dict[tuple[int, int], str] = {}
        self._cells_of: dict[str, list[tuple[int, int]]] = {}
        idx = 0
        for letter in cfg.letters:
            cells = []
            for _ in range(cfg.copies_per_letter):
                cell = (int(perm[idx]) // cfg.grid_size, int(perm[idx]) % cfg.grid_size)
                self._letter_at[cell] = letter
                cells.append(cell)
                idx += 1
            self._cells_of[letter] = cells
        self._agent = (int(perm[idx]) // cfg.grid_size, int(perm[idx]) % cfg.grid_size)
        return self._observe(), self._labels()

    # -- stepping ----------------------------------------------------------

    def _do_step(self, action) -> StepResult:
        if not self.action_space.contains(action):
            raise ActionOutOfRange(f"letter action must be 0..3, got {action!r}")
        g = self.config.grid_size
        dr, dc = MOVES[int(action)]
        self._agent = ((self._agent[0] + dr) % g, (self._agent[1] + dc) % g)
        return StepResult(
            obs=self._observe(),
            reward=0.0,
            terminal=False,
            timeout=self._timeout(),
            propositions=self._labels(),
        )

    def _labels(self) -> frozenset[str]:
        letter = self._letter_at.get(self._agent)
        return frozenset((letter,)) if letter else frozenset()

    # -- observations ------------------------------------------------------

    def _observe(self) -> Observation:
        cfg = self.config
        g = cfg.grid_size
        letter_index = {name: i for i, name in enumerate(cfg.letters)}
        if cfg.partial_obs:
            side = 2 * cfg.view_radius + 1
            grid = np.zeros((len(cfg.letters), side, side))
            r0, c0 = self._agent
            for (r, c), letter in self._letter_at.items():
                dr = (r - r0 + cfg.view_radius) % g
                dc = (c - c0 + cfg.view_radius) % g
                if dr < side and dc < side:
                    grid[letter_index[letter], dr, dc] = 1.0
        else:
            grid = np.zeros((len(cfg.letters), g, g))
            for (r, c), letter in self._letter_at.items():
                grid[letter_index[letter], r, c] = 1.0
        denom = max(g - 1, 1)
        ego = np.array([self._agent[0] / denom, self._agent[1] / denom])
        obs = Observation(s_ap=grid.ravel(), s_not_ap=ego, layout=self._layout)
        obs.validate()
        return obs

    def raw_state(self) -> dict:
        return {
            "t": self._t,
            "grid_size": self.config.grid_size,
            "agent": list(self._agent),
            "letters": {
                letter: [list(c) for c in cells]
                for letter, cells in sorted(self._cells_of.items())
            },
        }
