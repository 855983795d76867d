"""Planar navigation among colored circular zones.

Kinematic Point (turn + translate) and Car (differential drive) robots move
inside a walled square; color propositions hold while an agent is inside a
zone of that color.  Sensing is an egocentric pseudo-lidar per color.
Optional dynamic zones drift with constant speed and reflect off the walls
(overlap between zones is allowed while moving).  The multi-agent variant
runs several robots in the shared arena and indexes propositions and
observations by agent.
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
from .geometry import lidar_readings, reflect_coordinate

ZONE_COLORS = ("b", "g", "m", "y")  # blue, green, magenta, yellow

POINT_TURN_RATE = 2.0  # rad/s at full deflection
POINT_SPEED = 1.0  # m/s at full throttle
CAR_TRACK = 0.2  # wheel separation, m
CAR_WHEEL_SPEED = 1.0  # m/s at full wheel command
PLACEMENT_ATTEMPTS = 1000


@dataclass(frozen=True)
class ZoneConfig:
    half_extent: float = 2.5
    colors: tuple[str, ...] = ZONE_COLORS
    zones_per_color: int = 2
    zone_radius: float = 0.3
    robot: str = "point"  # "point" | "car"
    lidar_bins: int = 16
    lidar_range: float = 3.0
    dt: float = 0.1
    horizon: int = 1000
    dynamic_zones: int = 0
    zone_speed: float = 0.2
    n_agents: int = 1
    agent_radius: float = 0.15

    def __post_init__(self):
        if self.robot not in ("point", "car"):
            raise EnvError(f"unknown robot {self.robot!r}")
        if self.n_agents < 1:
            raise EnvError("n_agents must be >= 1")


@dataclass
class _Zone:
    color: str
    center: np.ndarray
    velocity: np.ndarray | None = None  # None for static zones


class ZoneEnv(Env):
    def __init__(self, config: ZoneConfig | None = None):
        self.config = config or ZoneConfig()
        cfg = self.config
        self.horizon = cfg.horizon
        if cfg.n_agents == 1:
            self.alphabet = tuple(cfg.colors)
        else:
            self.alphabet = tuple(
                f"{c}_{i}" for i in range(cfg.n_agents) for c in cfg.colors
            )
        self.action_space = BoxSpace(-1.0, 1.0, (2,))
        self._layout = self._make_layout()

    def _make_layout(self) -> ObservationLayout:
        cfg = self.config
        ap = []
        offset = 0
        for c in cfg.colors:
            ap.append(ObsSlice(f"lidar_{c}", offset, offset + cfg.lidar_bins, "occupancy"))
            offset += cfg.lidar_bins
        if cfg.n_agents > 1:
            ap.append(ObsSlice("lidar_peers", offset, offset + cfg.lidar_bins, "occupancy"))
            offset += cfg.lidar_bins
        return ObservationLayout(
            ap=tuple(ap),
            not_ap=(
                ObsSlice("position", 0, 2, "normalized_m"),
                ObsSlice("heading", 2, 4, "cos_sin"),
            ),
        )

    def mutex_groups(self) -> list[frozenset[str]]:
        if self.config.dynamic_zones > 0:
            return []  # moving zones may overlap; colors can co-occur
        if self.config.n_agents == 1:
            return [frozenset(self.config.colors)]
        return [
            frozenset(f"{c}_{i}" for c in self.config.colors)
            for i in range(self.config.n_agents)
        ]

    # -- placement ---------------------------------------------------------

    def _do_reset(self):
        cfg = self.config
        rng = self._placement_rng
        lo = -cfg.half_extent + cfg.zone_radius
        hi = cfg.half_extent - cfg.zone_radius
        zones: list[_Zone] = []
        specs = [(c, False) for c in cfg.colors for _ in range(cfg.zones_per_color)]
        specs += [(cfg.colors[i % len(cfg.colors)], True) for i in range(cfg.dynamic_zones)]
        for color, dynamic in specs:
            for attempt in range(PLACEMENT_ATTEMPTS + 1):
                if attempt == PLACEMENT_ATTEMPTS:
                    raise PlacementFailure(f"{color} zone", PLACEMENT_ATTEMPTS)
                center = rng.uniform(lo, hi, 2)
                if all(
                    np.linalg.norm(center - z.center) >= 2 * cfg.zone_radius for z in zones
                ):
                    zones.append(_Zone(color, center, None))
                    break
        self._zones = zones
        self._agents: list[dict] = []
        for i in range(cfg.n_agents):
            for attempt in range(PLACEMENT_ATTEMPTS + 1):
                if attempt == PLACEMENT_ATTEMPTS:
                    raise PlacementFailure(f"agent {i}", PLACEMENT_ATTEMPTS)
                pos = rng.uniform(-cfg.half_extent, cfg.half_extent, 2)
                if all(
                    np.linalg.norm(pos - z.center) > cfg.zone_radius for z in zones
                ):
                    heading = float(rng.uniform(-np.pi, np.pi))
                    self._agents.append({"pos": pos, "heading": heading})
                    break
        # dynamic-zone headings come from the dynamics stream so that the
        # layout for a seed is identical with and without moving zones
        for z, (_, dynamic) in zip(self._zones, specs):
            if dynamic:
                angle = float(self._dynamics_rng.uniform(-np.pi, np.pi))
                z.velocity = cfg.zone_speed * np.array([np.cos(angle), np.sin(angle)])
        return self._observe_all(), self._labels()

    # -- stepping ----------------------------------------------------------

    def _do_step(self, action) -> StepResult:
        cfg = self.config
        if cfg.n_agents == 1:
            actions = {0: action}
        else:
            if not isinstance(action, dict):
                raise ActionOutOfRange("multi-agent step takes {agent_index: action}")
            actions = {int(k): v for k, v in action.items()}
            if sorted(actions) != list(range(cfg.n_agents)):
                raise ActionOutOfRange(
                    f"need one action per agent 0..{cfg.n_agents - 1}, got {sorted(actions)}"
                )
        for i, act in actions.items():
            self._move_agent(self._agents[i], act)
        self._advance_dynamic_zones()
        return StepResult(
            obs=self._observe_all(),
            reward=0.0,
            terminal=False,
            timeout=self._timeout(),
            propositions=self._labels(),
        )

    def _move_agent(self, agent: dict, action) -> None:
        cfg = self.config
        arr = np.asarray(action, dtype=float)
        if not self.action_space.contains(arr):
            raise ActionOutOfRange(f"zone action must be two values in [-1, 1], got {action!r}")
        if cfg.robot == "point":
            turn, forward = float(arr[0]), float(arr[1])
            agent["heading"] = _wrap_angle(agent["heading"] + turn * POINT_TURN_RATE * cfg.dt)
            speed = forward * POINT_SPEED
        else:  # differential drive from wheel speeds
            w_l, w_r = float(arr[0]), float(arr[1])
            omega = (w_r - w_l) / CAR_TRACK * CAR_WHEEL_SPEED
            agent["heading"] = _wrap_angle(agent["heading"] + omega * cfg.dt)
            speed = (w_l + w_r) / 2.0 * CAR_WHEEL_SPEED
        step = speed * cfg.dt * np.array(
            [np.cos(agent["heading"]), np.sin(agent["heading"])]
        )
        # walls clamp; contact emits no proposition
        agent["pos"] = np.clip(agent["pos"] + step, -cfg.half_extent, cfg.half_extent)

    def _advance_dynamic_zones(self) -> None:
        cfg = self.config
        lo = -cfg.half_extent + cfg.zone_radius
        hi = cfg.half_extent - cfg.zone_radius
        for z in self._zones:
            if z.velocity is None:
                continue
            nxt = z.center + z.velocity * cfg.dt
            x, vx = reflect_coordinate(float(nxt[0]), float(z.velocity[0]), lo, hi)
            y, vy = reflect_coordinate(float(nxt[1]), float(z.velocity[1]), lo, hi)
            z.center = np.array([x, y])
            z.velocity = np.array([vx, vy])

    def _labels(self) -> frozenset[str]:
        cfg = self.config
        out = set()
        for i, agent in enumerate(self._agents):
            for z in self._zones:
                if np.linalg.norm(agent["pos"] - z.center) <= cfg.zone_radius:
                    out.add(z.color if cfg.n_agents == 1 else f"{z.color}_{i}")
        return frozenset(out)

    # -- observations ------------------------------------------------------

    def _observe_all(self):
        if self.config.n_agents == 1:
            return self._observe(0)
        return {i: self._observe(i) for i in range(self.config.n_agents)}

    def _observe(self, index: int) -> Observation:
        cfg = self.config
        agent = self._agents[index]
        parts = []
        for c in cfg.colors:
            centers = np.array([z.center for z in self._zones if z.color == c]).reshape(-1, 2)
            parts.append(
                lidar_readings(
                    agent["pos"], agent["heading"], centers, cfg.zone_radius,
                    cfg.lidar_bins, cfg.lidar_range,
                )
            )
        if cfg.n_agents > 1:
            peers = np.array(
                [a["pos"] for j, a in enumerate(self._agents) if j != index]
            ).reshape(-1, 2)
            parts.append(
                lidar_readings(
                    agent["pos"], agent["heading"], peers, cfg.agent_radius,
                    cfg.lidar_bins, cfg.lidar_range,
                )
            )
        ego = np.array(
            [
                agent["pos"][0] / cfg.half_extent,
                agent["pos"][1] / cfg.half_extent,
                np.cos(agent["heading"]),
                np.sin(agent["heading"]),
            ]
        )
        obs = Observation(s_ap=np.concatenate(parts), s_not_ap=ego, layout=self._layout)
        obs.validate()
        return obs

    def raw_state(self) -> dict:
        return {
            "t": self._t,
            "half_extent": self.config.half_extent,
            "zone_radius": self.config.zone_radius,
            "zones": [
                {
                    "color": z.color,
                    "center": [float(z.center[0]), float(z.center[1])],
                    "velocity": None
                    if z.velocity is None
                    else [float(z.velocity[0]), float(z.velocity[1])],
                }
                for z in self._zones
            ],
            "agents": [
                {
                    "pos": [float(a["pos"][0]), float(a["pos"][1])],
                    "heading": float(a["heading"]),
                }
                for a in self._agents
            ],
        }


def _wrap_angle(theta: float) -> float:
    return float((theta + np.pi) % (2.0 * np.pi) - np.pi)
