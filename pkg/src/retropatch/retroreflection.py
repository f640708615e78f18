"""Retroreflective surface model.

A retroreflector bounces light back toward its source.  We model the
returned intensity with two factors:

* an intensity level derived from the sheeting's retroreflection
  coefficient R' (cd/(lx*m^2)) and the entrance/viewing angles:

      r = pi * R' / (cos(beta) * cos(upsilon))

* an angular falloff around the exact return direction.  The lobe is a
  peak-normalized Gaussian in the observation angle (the angle between the
  source and camera directions as seen from the surface):

      falloff(theta) = exp(-(theta / sigma)^2),   sigma = roughness * 0.1 rad

  so a camera co-located with the source always sees the full return and an
  off-axis camera sees more light from rougher (wider-lobe) sheeting.  The
  0.1 rad scale puts typical car geometries (observation angles of 0.01 to
  0.05 rad) in the responsive part of the lobe.

Reflected radiance is then tint * (r/pi) * irradiance * falloff per channel.
Roughness is not directly measurable, so ``fit_roughness`` recovers it from
an observed reflection color by grid search plus golden-section refinement.

Daytime appearance is plain Lambertian: albedo * irradiance * cos / pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .colorimetry import SpectralCurve, TintColor, specular_tint, white_led_illuminant
from .photometry import headlight_irradiance

__all__ = [
    "SIGMA_MAX_RAD",
    "GrazingAngle",
    "DegenerateObservation",
    "MaterialSpec",
    "ReflectionGeometry",
    "FitResult",
    "ior_level",
    "lobe_falloff",
    "retro_radiance",
    "diffuse_radiance",
    "simulated_patch_color",
    "fit_roughness",
    "ior_level_variation",
]

# Lobe width at roughness 1; see module docstring.
SIGMA_MAX_RAD = 0.1

_GRAZING_EPS = 1e-6


class GrazingAngle(ValueError):
    """Entrance/viewing geometry too close to grazing (cos product < 1e-6)."""


class DegenerateObservation(ValueError):
    """Observed reflection color is all-zero; roughness is unidentifiable."""


@dataclass(frozen=True)
class MaterialSpec:
    """Optical description of one retroreflective sheeting product.

    ``tint`` (linear sRGB) takes precedence over ``spectral_reflectance``
    when deriving the reflection color; see ``colorimetry.specular_tint``.
    ``dop_preservation`` is the fraction of incident *polarized* light whose
    polarization survives retroreflection (micro-prisms preserve most of it,
    glass beads scramble more).
    """

    name: str
    r_prime: float  # retroreflection coefficient, cd/(lx*m^2)
    roughness: float  # lobe width fraction, (0, 1]
    dop_preservation: float  # [0, 1]
    diffuse_albedo: tuple  # linear RGB, daytime appearance
    tint: TintColor = None
    spectral_reflectance: SpectralCurve = None
    astm_grade: str = ""
    aashto_grade: str = ""

    def __post_init__(self):
        if self.r_prime < 0:
            raise ValueError("r_prime must be >= 0")
        if not 0 < self.roughness <= 1:
            raise ValueError("roughness must be in (0, 1]")
        if not 0 <= self.dop_preservation <= 1:
            raise ValueError("dop_preservation must be in [0, 1]")
        albedo = tuple(float(c) for c in self.diffuse_albedo)
        if len(albedo) != 3 or any(not 0 <= c <= 1 for c in albedo):
            raise ValueError("diffuse_albedo must be an RGB triple in [0, 1]")
        object.__setattr__(self, "diffuse_albedo", albedo)

    def reflection_tint(self, illuminant: SpectralCurve = None) -> TintColor:
        return specular_tint(self, illuminant or white_led_illuminant())


@dataclass(frozen=True)
class ReflectionGeometry:
    """Angles of one surface interaction (radians).

    ``observation_angle`` separates the source and camera directions as seen
    from the surface point; it can never be smaller than the angular gap
    between the two directions' inclinations, |beta - upsilon|.
    """

    entrance_angle: float
    viewing_angle: float
    observation_angle: float

    def __post_init__(self):
        for label, angle in (
            ("entrance_angle", self.entrance_angle),
            ("viewing_angle", self.viewing_angle),
        ):
            if not 0 <= angle < math.pi / 2:
                raise ValueError(f"{label} must be in [0, pi/2)")
        if self.observation_angle < 0:
            raise ValueError("observation_angle must be >= 0")
        gap = abs(self.entrance_angle - self.viewing_angle)
        if self.observation_angle < gap - 1e-9:
            raise ValueError("observation_angle smaller than |beta - upsilon|")


def ior_level(material: MaterialSpec, geom: ReflectionGeometry) -> float:
    """Reflection intensity level r = pi * R' / (cos(beta) * cos(upsilon))."""
    cos_product = math.cos(geom.entrance_angle) * math.cos(geom.viewing_angle)
    if cos_product < _GRAZING_EPS:
        raise GrazingAngle(f"cos(beta)*cos(upsilon) = {cos_product:.2e}")
    return math.pi * material.r_prime / cos_product


def lobe_falloff(observation_angle, roughness):
    """Peak-normalized Gaussian lobe; accepts scalars or arrays."""
    sigma = roughness * SIGMA_MAX_RAD
    return np.exp(-np.square(np.asarray(observation_angle) / sigma))


def retro_radiance(
    material: MaterialSpec,
    geom: ReflectionGeometry,
    irradiance: float,
    illuminant: SpectralCurve = None,
) -> np.ndarray:
    """Linear RGB radiance returned toward the camera."""
    if irradiance < 0:
        raise ValueError("irradiance must be >= 0")
    if irradiance == 0.0:
        return np.zeros(3)
    level = ior_level(material, geom) / math.pi
    falloff = float(lobe_falloff(geom.observation_angle, material.roughness))
    tint = material.reflection_tint(illuminant).as_array()
    return tint * (level * irradiance * falloff)


def diffuse_radiance(material: MaterialSpec, irradiance: float, cos_incidence: float) -> np.ndarray:
    """Lambertian radiance: albedo * irradiance * cos / pi per channel."""
    if not 0 <= cos_incidence <= 1:
        raise ValueError("cos_incidence must be in [0, 1]")
    return np.array(material.diffuse_albedo) * (irradiance * cos_incidence / math.pi)


@dataclass(frozen=True)
class FitResult:
    roughness: float
    residual: float


def simulated_patch_color(material: MaterialSpec, roughness: float, scene) -> np.ndarray:
    """Exposure-clamped color of a patch swatch at the scene's sign center.

    This is the single-point shading used as C_simulated by the roughness
    fit: nighttime ambient plus the headlight retroreflection, multiplied by
    the scene's night exposure and clamped to [0, 1] (a fixed-exposure
    camera, which saturates exactly like the calibration photographs the
    observed colors come from).
    """
    from .photometry import ambient_irradiance
    from .scene import reflection_geometry_at

    geom = reflection_geometry_at(scene, 0.5, 0.5)
    trial = MaterialSpec(
        name=material.name,
        r_prime=material.r_prime,
        roughness=roughness,
        dop_preservation=material.dop_preservation,
        diffuse_albedo=material.diffuse_albedo,
        tint=material.tint,
        spectral_reflectance=material.spectral_reflectance,
    )
    irradiance = headlight_irradiance(scene.headlight, scene.d_lon)
    radiance = retro_radiance(trial, geom, irradiance)
    radiance = radiance + diffuse_radiance(material, ambient_irradiance(scene.night_ambient), 1.0)
    return np.clip(radiance * scene.night_exposure, 0.0, 1.0)


_FIT_GRID_POINTS = 1000
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def fit_roughness(material: MaterialSpec, observed_night_rgb: TintColor, scene) -> FitResult:
    """Recover the roughness minimizing ||observed - simulated|| at ``scene``.

    Deterministic: a 1000-point grid over (0, 1] picks the best cell, then
    golden-section search refines inside the two neighboring cells.
    """
    target = observed_night_rgb.as_array()
    if np.all(target == 0.0):
        raise DegenerateObservation("observed color is all-zero")

    def residual(alpha: float) -> float:
        return float(np.linalg.norm(simulated_patch_color(material, alpha, scene) - target))

    grid = np.linspace(1.0 / _FIT_GRID_POINTS, 1.0, _FIT_GRID_POINTS)
    losses = np.array([residual(a) for a in grid])
    best = int(np.argmin(losses))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, _FIT_GRID_POINTS - 1)]

    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = residual(c), residual(d)
    while b - a > 1e-7:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = residual(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = residual(d)
    alpha = min(max((a + b) / 2.0, grid[0]), 1.0)
    final = residual(alpha)
    if losses[best] < final:
        alpha, final = float(grid[best]), float(losses[best])
    return FitResult(roughness=alpha, residual=final)


def ior_level_variation(scene, d_min: float, d_max: float) -> float:
    """Largest relative deviation of r from its value at ``d_max``.

    Exact per-distance cosines are evaluated at the sign center over a 1 m
    grid of longitudinal distances.
    """
    import dataclasses

    from .scene import reflection_geometry_at

    if not 0 < d_min < d_max:
        raise ValueError("need 0 < d_min < d_max")
    distances = np.arange(d_min, d_max + 1e-9, 1.0)
    if distances[-1] < d_max:
        distances = np.append(distances, d_max)

    def level_at(d: float) -> float:
        geom = reflection_geometry_at(dataclasses.replace(scene, d_lon=float(d)), 0.5, 0.5)
        return ior_level(scene.base_material, geom)

    reference = level_at(float(distances[-1]))
    levels = np.array([level_at(float(d)) for d in distances])
    return float(np.max(np.abs(levels - reference)) / reference)
