"""retropatch: a desk-scale simulator and optimizer for retroreflective-patch
attacks on traffic-sign recognition, with a polarization-based defense.

Subpackages follow the pipeline: colorimetry/photometry feed the
retroreflection material model, scene + renderer produce day/night sign
crops, tsr provides the surrogate recognizer, optimizer searches patch
placements, defense evaluates the polarizer countermeasure, and experiment
wires everything into reproducible runs.
"""

from .colorimetry import (
    CieObserver,
    SpectralCurve,
    TintColor,
    cie_1931_observer,
    d65_illuminant,
    equal_energy_illuminant,
    normalization_constant,
    specular_tint,
    white_led_illuminant,
    xyz_from_spectra,
    xyz_to_linear_srgb,
)
from .defense import PolarizerConfig, evaluate_defense, polarized_attenuation, render_night_defended
from .materials import builtin_registry, get_material
from .photometry import (
    AmbientLight,
    HeadlightSpec,
    ambient_irradiance,
    beam_area,
    headlight_irradiance,
)
from .renderer import (
    PatchParams,
    PatchSet,
    RenderedImage,
    apply_eot,
    render_day,
    render_night,
    tone_map,
)
from .retroreflection import (
    MaterialSpec,
    ReflectionGeometry,
    diffuse_radiance,
    fit_roughness,
    ior_level,
    ior_level_variation,
    retro_radiance,
)
from .scene import CameraModel, SceneConfig, default_scene, project_sign, reflection_geometry_at
from .signs import Region, SignKind, SignSpec
from .tsr import SignClass, SurrogateModel, confidence, detect, train_surrogate

__version__ = "0.1.0"
