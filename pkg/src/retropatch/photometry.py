"""Photometric conversions for the headlight and ambient light.

Lumens are converted to watts with the 683 lm/W luminous efficacy of the
555 nm reference, and the headlight beam is a uniform cone: the lit area at
distance d is a disc of radius d*tan(spread_half_angle), so irradiance is
flux / (683 * pi * (d tan a)^2).  Ambient light is treated as hemispherically
uniform diffuse irradiance through the same efficacy (lux / 683).

Note on the spread angle: published beam "spread angles" are sometimes
quoted in ways that are geometrically impossible (values above pi); this
module requires a half-angle strictly inside (0, pi/2) and the default
configuration uses 5 degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "LUMENS_PER_WATT",
    "HeadlightSpec",
    "AmbientLight",
    "InvalidDistance",
    "beam_area",
    "headlight_irradiance",
    "ambient_irradiance",
]

LUMENS_PER_WATT = 683.0


class InvalidDistance(ValueError):
    """Distance must be strictly positive."""


@dataclass(frozen=True)
class HeadlightSpec:
    luminous_flux: float  # lumens
    spread_half_angle: float  # radians
    mount_height: float  # meters

    def __post_init__(self):
        if not self.luminous_flux > 0:
            raise ValueError("luminous_flux must be > 0")
        if not 0 < self.spread_half_angle < math.pi / 2:
            raise ValueError("spread_half_angle must be in (0, pi/2)")
        if not self.mount_height > 0:
            raise ValueError("mount_height must be > 0")


@dataclass(frozen=True)
class AmbientLight:
    illuminance: float  # lux

    def __post_init__(self):
        if self.illuminance < 0:
            raise ValueError("illuminance must be >= 0")


def beam_area(headlight: HeadlightSpec, distance: float) -> float:
    """Illuminated disc area (m^2) at ``distance`` meters."""
    if not distance > 0:
        raise InvalidDistance(f"distance must be > 0, got {distance}")
    return math.pi * (distance * math.tan(headlight.spread_half_angle)) ** 2


def headlight_irradiance(headlight: HeadlightSpec, distance: float) -> float:
    """Beam irradiance (W/m^2) at ``distance`` meters."""
    return headlight.luminous_flux / (LUMENS_PER_WATT * beam_area(headlight, distance))


def ambient_irradiance(ambient: AmbientLight) -> float:
    """Diffuse irradiance (W/m^2) equivalent of the ambient illuminance."""
    return ambient.illuminance / LUMENS_PER_WATT
