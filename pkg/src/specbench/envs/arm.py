"""End-effector reaching among colored spherical regions in a 3D workspace.

The control is a bounded per-step displacement of the end effector inside
the workspace box.  In grippers-only mode the propositions are the region
colors, true while the end effector is inside the region.  In grippers-arm
mode the arm body is abstracted as the segment from the fixed base to the
end effector: ``g_<c>`` tracks the end effector, ``a_<c>`` is true while
that segment intersects region ``c`` (so a specification can constrain the
arm sweep separately from the grippers).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import (
    ActionOutOfRange,
    BoxSpace,
    Env,
    EnvError,
    Observation,
    ObservationLayout,
    ObsSlice,
    PlacementFailure,
    StepResult,
)
from .geometry import range_bearing, segment_point_distance

ARM_COLORS = ("b", "g", "m", "y")
PLACEMENT_ATTEMPTS = 1000


@dataclass(frozen=True)
class ArmConfig:
    workspace_half: float = 0.5
    colors: tuple[str, ...] = ARM_COLORS
    region_radius: float = 0.08
    mode: str = "grippers"  # "grippers" | "grippers-arm"
    base: tuple[float, float, float] = (-0.5, 0.0, 0.0)
    max_step: float = 0.05
    horizon: int = 200

    def __post_init__(self):
        if self.mode not in ("grippers", "grippers-arm"):
            raise EnvError(f"unknown arm mode {self.mode!r}")


class ArmReach(Env):
    def __init__(self, config: ArmConfig | None = None):
        self.config = config or ArmConfig()
        cfg = self.config
        self.horizon = cfg.horizon
        if cfg.mode == "grippers":
            self.alphabet = tuple(cfg.colors)
        else:
            self.alphabet = tuple(f"g_{c}" for c in cfg.colors) + tuple(
                f"a_{c}" for c in cfg.colors
            )
        self.action_space = BoxSpace(-1.0, 1.0, (3,))
        self._base = np.array(cfg.base, dtype=float)
        self._layout = self._make_layout()

    def _make_layout(self) -> ObservationLayout:
        cfg = self.config
        ap = []
        offset = 0
        for c in cfg.colors:
            ap.append(ObsSlice(f"gripper_rb_{c}", offset, offset + 4, "m_and_unit"))
            offset += 4
        if cfg.mode == "grippers-arm":
            for c in cfg.colors:
                ap.append(ObsSlice(f"arm_rb_{c}", offset, offset + 4, "m_and_unit"))
                offset += 4
        return ObservationLayout(
            ap=tuple(ap),
            not_ap=(ObsSlice("ee_pos", 0, 3, "normalized_m"),),
        )

    def mutex_groups(self) -> list[frozenset[str]]:
        # regions do not overlap and the end effector is a point, so the
        # gripper propositions exclude each other; the base-to-effector
        # segment can cross several regions at once, so the arm ones do not
        if self.config.mode == "grippers":
            return [frozenset(self.config.colors)]
        return [frozenset(f"g_{c}" for c in self.config.colors)]

    # -- placement ---------------------------------------------------------

    def _do_reset(self):
        cfg = self.config
        rng = self._placement_rng
        lo = -cfg.workspace_half + cfg.region_radius
        hi = cfg.workspace_half - cfg.region_radius
        centers: list[np.ndarray] = []
        for color in cfg.colors:
            for attempt in range(PLACEMENT_ATTEMPTS + 1):
                if attempt == PLACEMENT_ATTEMPTS:
                    raise PlacementFailure(f"{color} region", PLACEMENT_ATTEMPTS)
                c = rng.uniform(lo, hi, 3)
                if all(np.linalg.norm(c - o) > 2 * cfg.region_radius for o in centers):
                    centers.append(c)
                    break
        self._centers = np.array(centers)
        for attempt in range(PLACEMENT_ATTEMPTS + 1):
            if attempt == PLACEMENT_ATTEMPTS:
                raise PlacementFailure("end effector", PLACEMENT_ATTEMPTS)
            ee = rng.uniform(-cfg.workspace_half, cfg.workspace_half, 3)
            self._ee = ee
            if not self._labels():
                break
        return self._observe(), self._labels()

    # -- stepping ----------------------------------------------------------

    def _do_step(self, action) -> StepResult:
        cfg = self.config
        arr = np.asarray(action, dtype=float)
        if not self.action_space.contains(arr):
            raise ActionOutOfRange(f"arm action must be three values in [-1, 1], got {action!r}")
        self._ee = np.clip(
            self._ee + arr * cfg.max_step, -cfg.workspace_half, cfg.workspace_half
        )
        return StepResult(
            obs=self._observe(),
            reward=0.0,
            terminal=False,
            timeout=self._timeout(),
            propositions=self._labels(),
        )

    def _labels(self) -> frozenset[str]:
        cfg = self.config
        out = set()
        for c, center in zip(cfg.colors, self._centers):
            in_gripper = np.linalg.norm(self._ee - center) <= cfg.region_radius
            if cfg.mode == "grippers":
                if in_gripper:
                    out.add(c)
            else:
                if in_gripper:
                    out.add(f"g_{c}")
                if segment_point_distance(self._base, self._ee, center) <= cfg.region_radius:
                    out.add(f"a_{c}")
        return frozenset(out)

    # -- observations ------------------------------------------------------

    def _observe(self) -> Observation:
        cfg = self.config
        dist, dirs = range_bearing(self._ee, self._centers)
        parts = [np.concatenate([[dist[i]], dirs[i]]) for i in range(len(cfg.colors))]
        if cfg.mode == "grippers-arm":
            for center in self._centers:
                closest = _closest_segment_point(self._base, self._ee, center)
                d, u = range_bearing(closest, center[None, :])
                parts.append(np.concatenate([[d[0]], u[0]]))
        ego = self._ee / cfg.workspace_half
        obs = Observation(s_ap=np.concatenate(parts), s_not_ap=ego, layout=self._layout)
        obs.validate()
        return obs

    def raw_state(self) -> dict:
        return {
            "t": self._t,
            "workspace_half": self.config.workspace_half,
            "region_radius": self.config.region_radius,
            "mode": self.config.mode,
            "base": [float(v) for v in self._base],
            "ee": [float(v) for v in self._ee],
            "regions": {
                c: [float(v) for v in center]
                for c, center in zip(self.config.colors, self._centers)
            },
        }


def _closest_segment_point(a: np.ndarray, b: np.ndarray, p: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom < 1e-18:
        return a.copy()
    t = min(1.0, max(0.0, float(np.dot(p - a, ab)) / denom))
    return a + t * ab
