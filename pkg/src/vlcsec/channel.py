"""Lambertian optical channel model for indoor LED downlinks.

Geometry conventions: LEDs sit on the ceiling facing straight down,
photodiodes face straight up, and all angles are in radians. The DC
channel gain between an emitter and a receiver depends on the Euclidean
distance, the irradiance angle at the emitter, the incidence angle at
the receiver, and the receiver's optical front end (concentrator plus
filter). A receiver detects nothing outside its field-of-view half-angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import (
    DegenerateGeometryError,
    InfeasibleScenarioError,
    InvalidParameterError,
)

DOWN = (0.0, 0.0, -1.0)
UP = (0.0, 0.0, 1.0)

# Half-intensity angles below one degree make the emission order blow up.
MIN_HALF_INTENSITY = math.radians(1.0)


@dataclass(frozen=True)
class Point3:
    """A point in room coordinates, in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise InvalidParameterError(f"non-finite coordinate in {self!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def distance_to(self, other: "Point3") -> float:
        return math.dist((self.x, self.y, self.z), (other.x, other.y, other.z))


def _check_unit(vec: tuple[float, float, float], name: str) -> None:
    norm = math.sqrt(sum(v * v for v in vec))
    if abs(norm - 1.0) > 1e-9:
        raise InvalidParameterError(f"{name} must be a unit vector, got norm {norm}")


@dataclass(frozen=True)
class Emitter:
    """An LED: a Lambertian point source.

    ``power`` is the electrical-domain amplitude scale in watts applied to
    the unit-variance symbol. ``lambertian_order_hint`` optionally pins the
    emission order computed from an exact-degree angle; when absent the
    order is derived from ``half_intensity_angle``.
    """

    position: Point3
    half_intensity_angle: float
    power: float
    orientation: tuple[float, float, float] = DOWN
    lambertian_order_hint: float | None = None

    def __post_init__(self):
        if not MIN_HALF_INTENSITY <= self.half_intensity_angle < math.pi / 2:
            raise InvalidParameterError(
                f"half-intensity angle {self.half_intensity_angle} rad outside "
                f"[{MIN_HALF_INTENSITY:.6f}, pi/2)"
            )
        if self.power < 0:
            raise InvalidParameterError(f"negative emitter power {self.power}")
        _check_unit(self.orientation, "emitter orientation")

    @property
    def lambertian_order(self) -> float:
        if self.lambertian_order_hint is not None:
            return self.lambertian_order_hint
        return lambertian_order(self.half_intensity_angle)


@dataclass(frozen=True)
class Receiver:
    """A photodiode with an optical concentrator and filter."""

    position: Point3
    fov: float
    pd_area: float = 1e-4
    refractive_index: float = 1.5
    filter_gain: float = 1.0
    orientation: tuple[float, float, float] = UP

    def __post_init__(self):
        if not 0.0 < self.fov <= math.pi / 2:
            raise InvalidParameterError(f"FoV {self.fov} rad outside (0, pi/2]")
        if self.pd_area <= 0:
            raise InvalidParameterError(f"photodiode area {self.pd_area} must be > 0")
        if self.refractive_index < 1.0:
            raise InvalidParameterError(
                f"refractive index {self.refractive_index} must be >= 1"
            )
        if self.filter_gain <= 0:
            raise InvalidParameterError(f"filter gain {self.filter_gain} must be > 0")
        _check_unit(self.orientation, "receiver orientation")


def lambertian_order(half_intensity_angle: float) -> float:
    """Emission order of a Lambertian source from its half-intensity angle.

    The order is -1 / log2(cos(angle)); it is 1 for a 60-degree
    half-intensity angle and grows without bound as the beam narrows.
    """
    if not MIN_HALF_INTENSITY <= half_intensity_angle < math.pi / 2:
        raise InvalidParameterError(
            f"half-intensity angle {half_intensity_angle} rad outside valid range"
        )
    return -1.0 / math.log2(math.cos(half_intensity_angle))


def lambertian_order_deg(half_intensity_deg: float) -> float:
    """Emission order from a half-intensity angle given in degrees.

    Benchmark angles such as 60 degrees have no exact radian representation
    in binary floating point, so the cosine is taken of the exact degree
    value in extended precision before rounding once. This makes the
    60-degree order exactly 1.0.
    """
    if not 1.0 <= half_intensity_deg < 90.0:
        raise InvalidParameterError(
            f"half-intensity angle {half_intensity_deg} deg outside [1, 90)"
        )
    with mpmath.workdps(40):
        cos_exact = float(mpmath.cos(mpmath.radians(half_intensity_deg)))
    return -1.0 / math.log2(cos_exact)


def concentrator_gain(
    incidence_angle: float, fov: float, refractive_index: float
) -> float:
    """Optical concentrator gain: q^2 / sin^2(FoV) inside the FoV, else 0.

    The FoV boundary is included; light at exactly the half-angle still
    passes the concentrator.
    """
    if not 0.0 <= incidence_angle <= math.pi:
        raise InvalidParameterError(f"incidence angle {incidence_angle} outside [0, pi]")
    if not 0.0 < fov <= math.pi / 2:
        raise InvalidParameterError(f"FoV {fov} outside (0, pi/2]")
    if incidence_angle > fov:
        return 0.0
    return refractive_index**2 / math.sin(fov) ** 2


def channel_gain(emitter: Emitter, receiver: Receiver) -> float:
    """DC channel gain between one emitter and one receiver.

    Returns (order + 1) * A / (2 pi d^2) * cos(irradiance)^order *
    cos(incidence) * concentrator * filter, and exactly 0 whenever the
    incidence angle exceeds the receiver FoV or either cosine is
    non-positive (source behind the detector plane or vice versa).
    """
    delta = receiver.position.as_array() - emitter.position.as_array()
    d2 = float(delta @ delta)
    if d2 == 0.0:
        raise DegenerateGeometryError(
            f"emitter and receiver coincide at {emitter.position}"
        )
    d = math.sqrt(d2)
    cos_irr = float(np.dot(emitter.orientation, delta)) / d
    cos_inc = float(np.dot(receiver.orientation, -delta)) / d
    if cos_irr <= 0.0 or cos_inc <= 0.0:
        return 0.0
    incidence = math.acos(min(1.0, cos_inc))
    if incidence > receiver.fov:
        return 0.0
    order = emitter.lambertian_order
    conc = concentrator_gain(incidence, receiver.fov, receiver.refractive_index)
    return (
        (order + 1.0)
        * receiver.pd_area
        / (2.0 * math.pi * d2)
        * cos_irr**order
        * cos_inc
        * conc
        * receiver.filter_gain
    )


@dataclass(frozen=True)
class ChannelTable:
    """Precomputed gains for a fixed set of LEDs, users, and one eavesdropper.

    ``gains[k, m]`` is the DC gain from LED k to user m, ``eve_gains[k]``
    the gain from LED k to the eavesdropper position the selection
    algorithms know about. ``reachable_sets[m]`` lists the LEDs with
    strictly positive gain at user m, so reachability and the gain
    predicate can never disagree.
    """

    gains: np.ndarray
    eve_gains: np.ndarray
    reachable_sets: tuple[tuple[int, ...], ...]
    eve_reachable_set: tuple[int, ...]
    led_powers: np.ndarray

    @property
    def num_leds(self) -> int:
        return self.gains.shape[0]

    @property
    def num_ues(self) -> int:
        return self.gains.shape[1]


def reachable_leds(emitters: list[Emitter], receiver: Receiver) -> tuple[int, ...]:
    """Indices of emitters whose gain at ``receiver`` is strictly positive."""
    return tuple(
        k for k, led in enumerate(emitters) if channel_gain(led, receiver) > 0.0
    )


def build_channel_table(scenario, eve_position: str = "estimated") -> ChannelTable:
    """Evaluate all LED-to-receiver gains for a scenario.

    ``eve_position`` selects which eavesdropper location the gain vector is
    computed against: "estimated" (what the selection algorithms know) or
    "true" (for reporting the realized secrecy rate).

    Raises InfeasibleScenarioError if any user reaches no LED at all.
    """
    if eve_position == "estimated":
        eve = scenario.eve_estimated
    elif eve_position == "true":
        eve = scenario.eve_true
    else:
        raise InvalidParameterError(f"unknown eve_position {eve_position!r}")

    leds = scenario.leds
    ues = scenario.ues
    gains = np.zeros((len(leds), len(ues)))
    for k, led in enumerate(leds):
        for m, ue in enumerate(ues):
            gains[k, m] = channel_gain(led, ue)
    eve_gains = np.array([channel_gain(led, eve) for led in leds])

    reachable = []
    for m in range(len(ues)):
        members = tuple(int(k) for k in np.nonzero(gains[:, m] > 0.0)[0])
        if not members:
            raise InfeasibleScenarioError(f"UE {m} has no reachable LED")
        reachable.append(members)
    eve_reachable = tuple(int(k) for k in np.nonzero(eve_gains > 0.0)[0])
    led_powers = np.array([led.power for led in leds])

    return ChannelTable(
        gains=gains,
        eve_gains=eve_gains,
        reachable_sets=tuple(reachable),
        eve_reachable_set=eve_reachable,
        led_powers=led_powers,
    )
