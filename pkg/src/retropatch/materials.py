"""Registry of retroreflective sheeting presets.

Four products spanning the sheeting-grade ladder are built in, ordered by
retroreflection coefficient:

    NittoL     glass beads   ASTM I        R' =  70
    HIP3930    micro-prism   ASTM III/IV   R' = 360
    Nikkalite  micro-prism   ASTM VIII     R' = 700
    DG4090     micro-prism   ASTM XI       R' = 800

R' values are datasheet-derived: the ASTM D4956 minimum coefficient of the
product's grade at 0.2 deg observation / -4 deg entrance, except DG4090
where the grade minimum (580) would fall below the Type VIII product and
the product datasheet level of 800 is used instead.  Override any value via
a registry file.

Day/night calibration colors are 8-bit camera readings of red-film swatches
of each product (daytime at 600 lux, nighttime under a 3400 lm headlight);
daytime albedo is the gamma-decoded day color and the reflection tint is
the gamma-decoded night color.  Degree-of-polarization preservation is a
free parameter: 0.9 for micro-prisms, 0.4 for glass beads, chosen so that a
crossed-polarizer defense suppresses prism returns strongly while merely
darkening glass-bead returns.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import yaml

from .colorimetry import SpectralCurve, TintColor, red_film_reflectance, white_film_reflectance
from .retroreflection import MaterialSpec

__all__ = [
    "PRESET_ORDER",
    "DAY_CALIBRATION_8BIT",
    "NIGHT_CALIBRATION_8BIT",
    "srgb8_to_linear",
    "builtin_registry",
    "get_material",
    "load_registry",
    "save_registry",
]

PRESET_ORDER = ("NittoL", "HIP3930", "Nikkalite", "DG4090")

# 8-bit swatch colors: daytime at 600 lux / nighttime under a 3400 lm headlight.
DAY_CALIBRATION_8BIT = {
    "NittoL": (110, 47, 25),
    "HIP3930": (86, 33, 17),
    "Nikkalite": (93, 39, 24),
    "DG4090": (94, 36, 18),
}
NIGHT_CALIBRATION_8BIT = {
    "NittoL": (255, 246, 80),
    "HIP3930": (252, 244, 156),
    "Nikkalite": (255, 255, 189),
    "DG4090": (255, 255, 254),
}

_PRESET_FIELDS = {
    # name: (r_prime, roughness, dop, astm, aashto)
    "NittoL": (70.0, 0.40, 0.4, "I", ""),
    "HIP3930": (360.0, 0.30, 0.9, "III, IV", "B"),
    "Nikkalite": (700.0, 0.25, 0.9, "VIII", "B"),
    "DG4090": (800.0, 0.20, 0.9, "XI", "D"),
}

_BUILTIN_CURVES = {
    "red_film": red_film_reflectance,
    "white_film": white_film_reflectance,
}


def srgb8_to_linear(rgb8) -> tuple:
    """Gamma-decode an 8-bit display triple to linear RGB in [0, 1]."""
    arr = np.asarray(rgb8, dtype=float) / 255.0
    return tuple(float(c) for c in np.power(arr, 2.2))


def _preset(name: str) -> MaterialSpec:
    r_prime, roughness, dop, astm, aashto = _PRESET_FIELDS[name]
    return MaterialSpec(
        name=name,
        r_prime=r_prime,
        roughness=roughness,
        dop_preservation=dop,
        diffuse_albedo=srgb8_to_linear(DAY_CALIBRATION_8BIT[name]),
        tint=TintColor(srgb8_to_linear(NIGHT_CALIBRATION_8BIT[name])),
        astm_grade=astm,
        aashto_grade=aashto,
    )


def builtin_registry() -> dict:
    """Fresh mapping of the four built-in presets, ascending R'."""
    return {name: _preset(name) for name in PRESET_ORDER}


def get_material(name: str, registry: dict = None) -> MaterialSpec:
    registry = registry if registry is not None else builtin_registry()
    try:
        return registry[name]
    except KeyError:
        raise KeyError(f"unknown material {name!r}; have {sorted(registry)}") from None


def _material_to_dict(mat: MaterialSpec) -> dict:
    entry = {
        "r_prime": mat.r_prime,
        "roughness": mat.roughness,
        "dop_preservation": mat.dop_preservation,
        "diffuse_albedo": list(mat.diffuse_albedo),
        "astm_grade": mat.astm_grade,
        "aashto_grade": mat.aashto_grade,
    }
    if mat.tint is not None:
        entry["tint"] = list(mat.tint.rgb)
    if mat.spectral_reflectance is not None:
        entry["spectrum_csv"] = None  # written separately; see save_registry
    return entry


def _material_from_dict(name: str, entry: dict, base_dir: Path = None) -> MaterialSpec:
    known = {
        "r_prime",
        "roughness",
        "dop_preservation",
        "diffuse_albedo",
        "astm_grade",
        "aashto_grade",
        "tint",
        "spectrum",
        "spectrum_csv",
    }
    unknown = set(entry) - known
    if unknown:
        raise ValueError(f"material {name!r}: unknown keys {sorted(unknown)}")
    tint = TintColor(tuple(entry["tint"])) if "tint" in entry else None
    spectrum = None
    if "spectrum" in entry:
        spectrum = _BUILTIN_CURVES[entry["spectrum"]]()
    elif entry.get("spectrum_csv"):
        path = Path(entry["spectrum_csv"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        spectrum = SpectralCurve.from_csv(path, kind="reflectance")
    return MaterialSpec(
        name=name,
        r_prime=float(entry["r_prime"]),
        roughness=float(entry.get("roughness", 0.3)),
        dop_preservation=float(entry.get("dop_preservation", 0.9)),
        diffuse_albedo=tuple(entry.get("diffuse_albedo", (0.5, 0.5, 0.5))),
        tint=tint,
        spectral_reflectance=spectrum,
        astm_grade=str(entry.get("astm_grade", "")),
        aashto_grade=str(entry.get("aashto_grade", "")),
    )


def load_registry(path) -> dict:
    """Load a YAML material registry, layered on top of the built-ins."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh) or {}
    if set(doc) - {"materials"}:
        raise ValueError(f"{path}: registry top level must be a 'materials' mapping")
    registry = builtin_registry()
    for name, entry in (doc.get("materials") or {}).items():
        registry[name] = _material_from_dict(name, entry or {}, base_dir=path.parent)
    return registry


def save_registry(registry: dict, path) -> None:
    doc = {"materials": {name: _material_to_dict(mat) for name, mat in registry.items()}}
    with open(Path(path), "w", encoding="utf-8") as fh:
        yaml.safe_dump(doc, fh, sort_keys=True)
