"""Indoor scenario construction: LED grid, random user drops, eavesdropper.

Scenarios follow the reference simulation setup: a 10 x 10 x 3 m room
with a ceiling grid of downward LEDs, users and the eavesdropper on a
0.8 m receiver plane, positions drawn uniformly over the floor. The
eavesdropper has a true position and an estimated one; selection
algorithms only ever see the estimate, while realized secrecy rates are
reported against the truth. The estimate is offset from the truth by a
fixed-magnitude displacement at a uniformly random horizontal bearing.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import (
    DOWN,
    UP,
    Emitter,
    Point3,
    Receiver,
    lambertian_order_deg,
    reachable_leds,
)
from .errors import InfeasibleScenarioError, InvalidParameterError
from .rates import NoiseModel, dbm_to_watts

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioConfig:
    """All knobs needed to generate a scenario; defaults match the
    reference parameter table (23 dBm LEDs, -98 dBm noise, 50 degree FoV,
    60 degree half-intensity angle, 1 cm^2 photodiode)."""

    room_width: float = 10.0
    room_depth: float = 10.0
    room_height: float = 3.0
    led_rows: int = 5
    led_cols: int = 5
    led_power_dbm: float = 23.0
    num_ues: int = 5
    ue_fov_deg: float = 50.0
    eve_fov_deg: float = 50.0
    eve_localization_error_m: float = 0.0
    noise_dbm: float = -98.0
    rng_seed: int = 0
    pd_area_m2: float = 1e-4
    refractive_index: float = 1.5
    filter_gain: float = 1.0
    half_intensity_deg: float = 60.0
    receiver_height: float = 0.8

    def __post_init__(self):
        if self.led_rows < 1 or self.led_cols < 1:
            raise InvalidParameterError("LED grid needs at least one row and column")
        if self.led_rows * self.led_cols < self.num_ues:
            raise InvalidParameterError(
                f"{self.num_ues} UEs cannot each get a distinct LED out of "
                f"{self.led_rows * self.led_cols}"
            )
        if self.num_ues < 0:
            raise InvalidParameterError("num_ues must be >= 0")
        if self.eve_localization_error_m < 0:
            raise InvalidParameterError("localization error must be >= 0")
        if not 0 < self.receiver_height < self.room_height:
            raise InvalidParameterError("receiver plane must sit inside the room")

    @property
    def num_leds(self) -> int:
        return self.led_rows * self.led_cols

    def noise_model(self) -> NoiseModel:
        return NoiseModel(dbm_to_watts(self.noise_dbm))


@dataclass(frozen=True)
class Scenario:
    """A concrete instance: geometry plus noise level."""

    room: tuple[float, float, float]
    leds: tuple[Emitter, ...]
    ues: tuple[Receiver, ...]
    eve_true: Receiver
    eve_estimated: Receiver
    noise: NoiseModel


def place_led_grid(config: ScenarioConfig) -> tuple[Emitter, ...]:
    """Cell-centered rows x cols grid of downward LEDs at ceiling height.

    Row-major indexing; a 5x5 grid in a 10 m square room lands on
    x, y in {1, 3, 5, 7, 9}.
    """
    power = dbm_to_watts(config.led_power_dbm)
    half_angle = math.radians(config.half_intensity_deg)
    order = lambertian_order_deg(config.half_intensity_deg)
    dx = config.room_width / config.led_cols
    dy = config.room_depth / config.led_rows
    leds = []
    for r in range(config.led_rows):
        for c in range(config.led_cols):
            leds.append(
                Emitter(
                    position=Point3(
                        (c + 0.5) * dx, (r + 0.5) * dy, config.room_height
                    ),
                    half_intensity_angle=half_angle,
                    power=power,
                    orientation=DOWN,
                    lambertian_order_hint=order,
                )
            )
    return tuple(leds)


def _receiver(config: ScenarioConfig, x: float, y: float, fov_deg: float) -> Receiver:
    return Receiver(
        position=Point3(x, y, config.receiver_height),
        fov=math.radians(fov_deg),
        pd_area=config.pd_area_m2,
        refractive_index=config.refractive_index,
        filter_gain=config.filter_gain,
        orientation=UP,
    )


def _has_one_to_one_assignment(
    reachable: list[tuple[int, ...]], num_leds: int
) -> bool:
    """Whether every user can get a distinct reachable LED (bipartite
    matching via augmenting paths)."""
    match_of_led = [-1] * num_leds

    def augment(m: int, seen: list[bool]) -> bool:
        for k in reachable[m]:
            if seen[k]:
                continue
            seen[k] = True
            if match_of_led[k] == -1 or augment(match_of_led[k], seen):
                match_of_led[k] = m
                return True
        return False

    return all(augment(m, [False] * num_leds) for m in range(len(reachable)))


def sample_instance(
    config: ScenarioConfig,
    rng: np.random.Generator | None = None,
    stats: dict | None = None,
    max_resamples: int = 10_000,
) -> Scenario:
    """Draw one random scenario with uniformly placed users and eavesdropper.

    Instances where some user reaches no LED, or where no one-to-one
    assignment exists, are redrawn; redraw counts go to ``stats`` under
    "resamples" when a dict is provided. The draw order is fixed (user
    positions, eavesdropper position, offset bearing), so two configs that
    differ only in the localization error magnitude yield the same
    geometry from the same generator state.
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    leds = place_led_grid(config)
    resamples = 0
    while True:
        if resamples > max_resamples:
            raise InfeasibleScenarioError(
                f"no feasible instance found after {max_resamples} redraws; "
                "the FoV/grid combination leaves users without reachable LEDs"
            )
        ue_x = rng.uniform(0.0, config.room_width, config.num_ues)
        ue_y = rng.uniform(0.0, config.room_depth, config.num_ues)
        eve_x = rng.uniform(0.0, config.room_width)
        eve_y = rng.uniform(0.0, config.room_depth)
        bearing = rng.uniform(0.0, 2.0 * math.pi)

        ues = tuple(
            _receiver(config, float(x), float(y), config.ue_fov_deg)
            for x, y in zip(ue_x, ue_y)
        )
        reachable = [reachable_leds(list(leds), ue) for ue in ues]
        if all(reachable) and _has_one_to_one_assignment(reachable, len(leds)):
            break
        resamples += 1

    if stats is not None:
        stats["resamples"] = stats.get("resamples", 0) + resamples
    if resamples:
        logger.debug("resampled %d infeasible instance(s)", resamples)

    err = config.eve_localization_error_m
    est_x = min(max(eve_x + err * math.cos(bearing), 0.0), config.room_width)
    est_y = min(max(eve_y + err * math.sin(bearing), 0.0), config.room_depth)
    return Scenario(
        room=(config.room_width, config.room_depth, config.room_height),
        leds=leds,
        ues=ues,
        eve_true=_receiver(config, float(eve_x), float(eve_y), config.eve_fov_deg),
        eve_estimated=_receiver(config, float(est_x), float(est_y), config.eve_fov_deg),
        noise=config.noise_model(),
    )


REFERENCE_UE_POSITIONS = (
    (1.34, 1.59),
    (5.28, 6.05),
    (8.66, 4.19),
    (2.48, 5.89),
    (7.07, 6.00),
)
REFERENCE_EVE_POSITION = (2.13, 4.25)


def reference_layout(config: ScenarioConfig | None = None) -> Scenario:
    """The bundled five-user layout used for regression tests and demos."""
    if config is None:
        config = ScenarioConfig()
    if config.num_ues != len(REFERENCE_UE_POSITIONS):
        config = replace(config, num_ues=len(REFERENCE_UE_POSITIONS))
    eve = _receiver(config, *REFERENCE_EVE_POSITION, config.eve_fov_deg)
    return Scenario(
        room=(config.room_width, config.room_depth, config.room_height),
        leds=place_led_grid(config),
        ues=tuple(
            _receiver(config, x, y, config.ue_fov_deg)
            for x, y in REFERENCE_UE_POSITIONS
        ),
        eve_true=eve,
        eve_estimated=eve,
        noise=config.noise_model(),
    )


def scenario_to_dict(scenario: Scenario) -> dict:
    """JSON-ready dictionary of positions and parameters."""

    def rx(r: Receiver) -> dict:
        return {
            "position": [r.position.x, r.position.y, r.position.z],
            "fov_deg": math.degrees(r.fov),
            "pd_area_m2": r.pd_area,
            "refractive_index": r.refractive_index,
            "filter_gain": r.filter_gain,
        }

    return {
        "room": list(scenario.room),
        "leds": [
            {
                "position": [e.position.x, e.position.y, e.position.z],
                "half_intensity_deg": math.degrees(e.half_intensity_angle),
                "power_w": e.power,
            }
            for e in scenario.leds
        ],
        "ues": [rx(u) for u in scenario.ues],
        "eve_true": rx(scenario.eve_true),
        "eve_estimated": rx(scenario.eve_estimated),
        "noise_variance_w": scenario.noise.variance,
    }


def scenario_from_dict(data: dict) -> Scenario:
    def rx(d: dict) -> Receiver:
        return Receiver(
            position=Point3(*d["position"]),
            fov=math.radians(d["fov_deg"]),
            pd_area=d["pd_area_m2"],
            refractive_index=d["refractive_index"],
            filter_gain=d["filter_gain"],
            orientation=UP,
        )

    leds = tuple(
        Emitter(
            position=Point3(*e["position"]),
            half_intensity_angle=math.radians(e["half_intensity_deg"]),
            power=e["power_w"],
            orientation=DOWN,
            lambertian_order_hint=lambertian_order_deg(e["half_intensity_deg"]),
        )
        for e in data["leds"]
    )
    return Scenario(
        room=tuple(data["room"]),
        leds=leds,
        ues=tuple(rx(u) for u in data["ues"]),
        eve_true=rx(data["eve_true"]),
        eve_estimated=rx(data["eve_estimated"]),
        noise=NoiseModel(data["noise_variance_w"]),
    )


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))
