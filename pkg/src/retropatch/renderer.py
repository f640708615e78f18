"""Analytic per-pixel rendering of the sign crop.

Only the sign plane is shaded (the rest of the frame is a flat dark
backdrop), which is all the recognition pipeline consumes.  Per pixel:

    day    radiance = albedo * E_ambient / pi
    night  radiance = albedo * E_night_ambient / pi
                    + tint * (R' / (cos b cos u)) * E_headlight * falloff

where the retro term uses the underlying surface: the sign's base sheeting
for bare regions, the patch material for patch pixels.  The stealth
constraint makes a patch's color (albedo and reflection tint alike) equal
to its host region's base color, so day renders with conformant patches
are bit-identical to benign ones and patches only surface at night through
their much larger R'.

Images carry linear radiance plus the exposure to use at display time;
``tone_map`` produces the 8-bit export, clamp(linear * exposure)^(1/2.2).
Everything is deterministic: same scene + patches + seed -> same bytes.

The expectation-over-transformation jitter (``apply_eot``) perturbs
headlight flux and ambient level by uniform factors, adds camera yaw/pitch
jitter and longitudinal distance jitter, each drawn independently from a
seeded generator.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .defense import PolarizerConfig, diffuse_transmission, retro_transmission
from .photometry import LUMENS_PER_WATT
from .retroreflection import SIGMA_MAX_RAD, GrazingAngle, MaterialSpec
from .scene import SceneConfig, project_sign, reflection_angles
from .signs import BACKDROP_ALBEDO, CLEARANCE_GRID, Region, SignSpec, clearance_map, region_color

__all__ = [
    "ConstraintViolation",
    "PatchParams",
    "PatchSet",
    "RenderedImage",
    "patch_region",
    "render_day",
    "render_night",
    "tone_map",
    "save_png",
    "save_ppm",
    "save_metadata",
    "apply_eot",
]


class ConstraintViolation(ValueError):
    """A patch set violates the placement constraints."""


@dataclass(frozen=True)
class PatchParams:
    """One rectangular patch: center (x, y) and extents (w, h), face units."""

    x: float
    y: float
    w: float
    h: float
    material: MaterialSpec

    def __post_init__(self):
        if not (0 < self.w <= 1 and 0 < self.h <= 1):
            raise ValueError("patch extents must be in (0, 1]")
        if not (0 <= self.x <= 1 and 0 <= self.y <= 1):
            raise ValueError("patch center must be in [0, 1]^2")

    @property
    def bounds(self) -> tuple:
        return (self.x - self.w / 2, self.y - self.h / 2,
                self.x + self.w / 2, self.y + self.h / 2)

    @property
    def area(self) -> float:
        return self.w * self.h


def patch_region(sign: SignSpec, patch: PatchParams) -> Region:
    """Host region of a patch: the region under its center cell."""
    regions, _ = clearance_map(sign)
    n = CLEARANCE_GRID
    i = min(max(int(patch.x * n), 0), n - 1)
    j = min(max(int(patch.y * n), 0), n - 1)
    return Region(int(regions[j, i]))


@dataclass(frozen=True)
class PatchSet:
    """Patches plus their shared area budget (fraction of the face box)."""

    patches: tuple
    mpr: float

    def __post_init__(self):
        if not 0 < self.mpr <= 1:
            raise ValueError("mpr must be in (0, 1]")
        object.__setattr__(self, "patches", tuple(self.patches))

    @staticmethod
    def empty(mpr: float = 0.25) -> "PatchSet":
        return PatchSet(patches=(), mpr=mpr)

    @property
    def total_area(self) -> float:
        return sum(p.area for p in self.patches)

    def validate(self, sign: SignSpec) -> None:
        """Raise ConstraintViolation unless all placement invariants hold."""
        if self.total_area > self.mpr + 1e-9:
            raise ConstraintViolation(
                f"total patch area {self.total_area:.4f} exceeds budget {self.mpr}"
            )
        regions, clearance = clearance_map(sign)
        n = CLEARANCE_GRID
        cell = 1.0 / n
        for idx, patch in enumerate(self.patches):
            x0, y0, x1, y1 = patch.bounds
            if x0 < -1e-9 or y0 < -1e-9 or x1 > 1 + 1e-9 or y1 > 1 + 1e-9:
                raise ConstraintViolation(f"patch {idx} leaves the sign face")
            i = min(max(int(patch.x * n), 0), n - 1)
            j = min(max(int(patch.y * n), 0), n - 1)
            if Region(int(regions[j, i])) is Region.OFF:
                raise ConstraintViolation(f"patch {idx} is centered off the sign")
            if max(patch.w, patch.h) / 2 > clearance[j, i] + cell + 1e-9:
                raise ConstraintViolation(f"patch {idx} straddles color regions")
        for a in range(len(self.patches)):
            for b in range(a + 1, len(self.patches)):
                ax0, ay0, ax1, ay1 = self.patches[a].bounds
                bx0, by0, bx1, by1 = self.patches[b].bounds
                if ax0 < bx1 - 1e-12 and bx0 < ax1 - 1e-12 and ay0 < by1 - 1e-12 and by0 < ay1 - 1e-12:
                    raise ConstraintViolation(f"patches {a} and {b} overlap")

    def to_dict(self) -> dict:
        return {
            "mpr": self.mpr,
            "patches": [
                {"x": p.x, "y": p.y, "w": p.w, "h": p.h, "material": p.material.name}
                for p in self.patches
            ],
        }

    @staticmethod
    def from_dict(doc: dict, registry: dict = None) -> "PatchSet":
        from .materials import get_material

        patches = tuple(
            PatchParams(
                x=float(d["x"]), y=float(d["y"]), w=float(d["w"]), h=float(d["h"]),
                material=get_material(d["material"], registry),
            )
            for d in doc.get("patches", [])
        )
        return PatchSet(patches=patches, mpr=float(doc["mpr"]))


@dataclass(frozen=True)
class RenderedImage:
    """Linear-RGB raster of the sign crop plus projection metadata."""

    pixels: np.ndarray  # rows x cols x 3, linear radiance
    exposure: float
    metadata: dict

    def developed(self) -> np.ndarray:
        """Exposure-clamped linear values in [0, 1] (fixed-gain camera)."""
        return np.clip(self.pixels * self.exposure, 0.0, 1.0)


def _scene_snapshot(scene: SceneConfig, mode: str, defense: PolarizerConfig) -> dict:
    snap = {
        "mode": mode,
        "d_lon": scene.d_lon,
        "d_lat": scene.d_lat,
        "h_s": scene.h_s,
        "h_l": scene.h_l,
        "camera_offset": list(scene.camera_offset),
        "camera_yaw": scene.camera_yaw,
        "camera_pitch": scene.camera_pitch,
        "ambient_lux": scene.ambient.illuminance,
        "night_ambient_lux": scene.night_ambient.illuminance,
        "headlight_lumens": scene.headlight.luminous_flux,
        "sign": {"kind": scene.sign.kind.value, "value": scene.sign.value,
                 "width": scene.sign.width, "height": scene.sign.height},
        "base_material": scene.base_material.name,
    }
    if defense is not None and defense.any_filter:
        snap["defense"] = {
            "headlight_axis": defense.headlight_axis,
            "camera_axis": defense.camera_axis,
        }
    return snap


def _region_color_table(sign: SignSpec) -> np.ndarray:
    table = np.empty((len(Region), 3))
    table[int(Region.OFF)] = BACKDROP_ALBEDO
    for region in (Region.BACKGROUND, Region.LEGEND, Region.BORDER):
        table[int(region)] = region_color(sign, region)
    return table


def _shade(scene: SceneConfig, patches: PatchSet, *, headlight_on: bool,
           ambient_lux: float, defense: PolarizerConfig, white_patches: bool,
           exposure: float, mode: str) -> RenderedImage:
    patches.validate(scene.sign)
    defense = defense or PolarizerConfig.none()
    proj = project_sign(scene)
    u = proj.uv[..., 0]
    v = proj.uv[..., 1]

    from .signs import region_map

    regions = region_map(scene.sign, u, v)
    regions[~proj.hit] = int(Region.OFF)
    color_table = _region_color_table(scene.sign)
    albedo = color_table[regions]

    amb_factor = diffuse_transmission(defense)
    e_ambient = ambient_irradiance_from_lux(ambient_lux) * amb_factor
    radiance = albedo * (e_ambient / math.pi)

    if headlight_on:
        beta, ups, obs = reflection_angles(scene, u, v)
        cos_product = np.cos(beta) * np.cos(ups)
        on_sign = regions != int(Region.OFF)
        if np.any(on_sign & (cos_product < 1e-6)):
            raise GrazingAngle("sign pixels at grazing geometry")
        cos_product = np.maximum(cos_product, 1e-6)
        points = scene.sign_point(u, v)
        dist = np.linalg.norm(scene.headlight_position - points, axis=-1)
        beam_radius = dist * math.tan(scene.headlight.spread_half_angle)
        e_head = scene.headlight.luminous_flux / (
            LUMENS_PER_WATT * math.pi * np.square(beam_radius)
        )

        base = scene.base_material
        base_factor = retro_transmission(base.dop_preservation, defense)
        base_level = base.r_prime / cos_product
        base_fall = np.exp(-np.square(obs / (base.roughness * SIGMA_MAX_RAD)))
        retro_scalar = np.where(on_sign, base_level * base_fall * e_head * base_factor, 0.0)
        radiance = radiance + albedo * retro_scalar[..., None]

        for patch in patches.patches:
            x0, y0, x1, y1 = patch.bounds
            mask = proj.hit & (u >= x0) & (u <= x1) & (v >= y0) & (v <= y1)
            if not np.any(mask):
                continue
            if white_patches:
                radiance[mask] = 1.0 / exposure
                continue
            host = patch_region(scene.sign, patch)
            tint = np.array(region_color(scene.sign, host))
            mat = patch.material
            factor = retro_transmission(mat.dop_preservation, defense)
            level = mat.r_prime / cos_product[mask]
            fall = np.exp(-np.square(obs[mask] / (mat.roughness * SIGMA_MAX_RAD)))
            patch_retro = (level * fall * e_head[mask] * factor)[:, None] * tint[None, :]
            ambient_part = albedo[mask] * (e_ambient / math.pi)
            radiance[mask] = ambient_part + patch_retro

    meta = _scene_snapshot(scene, mode, defense)
    meta["bbox"] = list(proj.bbox)
    meta["patches"] = patches.to_dict()
    return RenderedImage(pixels=radiance, exposure=exposure, metadata=meta)


def ambient_irradiance_from_lux(lux: float) -> float:
    return lux / LUMENS_PER_WATT


def render_day(scene: SceneConfig, patches: PatchSet) -> RenderedImage:
    """Daytime render: ambient term only; patches share their host albedo."""
    return _shade(
        scene, patches, headlight_on=False, ambient_lux=scene.ambient.illuminance,
        defense=None, white_patches=False, exposure=scene.day_exposure, mode="day",
    )


def render_night(scene: SceneConfig, patches: PatchSet,
                 defense: PolarizerConfig = None,
                 white_assumption: bool = False) -> RenderedImage:
    """Night render: low ambient plus the headlight retro term.

    ``white_assumption`` replaces patch pixels with full white at the clamp
    level (the naive uniform-white-reflection ablation).
    """
    return _shade(
        scene, patches, headlight_on=True,
        ambient_lux=scene.night_ambient.illuminance, defense=defense,
        white_patches=white_assumption, exposure=scene.night_exposure,
        mode="night_defended" if (defense is not None and defense.any_filter) else "night",
    )


def tone_map(image: RenderedImage) -> np.ndarray:
    """8-bit sRGB raster: round(255 * clamp(linear * exposure)^(1/2.2))."""
    if image.exposure <= 0:
        raise ValueError("exposure must be > 0")
    encoded = np.power(image.developed(), 1.0 / 2.2)
    return np.round(encoded * 255.0).astype(np.uint8)


def save_png(image: RenderedImage, path) -> None:
    from PIL import Image

    Image.fromarray(tone_map(image), mode="RGB").save(path, format="PNG")


def save_ppm(image: RenderedImage, path) -> None:
    """Binary PPM (P6) export, byte-identical to the tone-mapped raster."""
    raster = tone_map(image)
    height, width = raster.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
        fh.write(raster.tobytes())


def save_metadata(image: RenderedImage, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(image.metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")


def apply_eot(scene: SceneConfig, seed: int) -> SceneConfig:
    """One random environment transformation, deterministic per seed.

    Draw order is fixed: flux multiplier, ambient multiplier, yaw, pitch,
    longitudinal jitter.  Degenerate ranges yield the identity transform.
    """
    rng = np.random.default_rng(seed)
    cfg = scene.eot
    flux_mult = rng.uniform(*cfg.flux_range)
    ambient_mult = rng.uniform(*cfg.ambient_range)
    yaw = math.radians(rng.uniform(-cfg.yaw_deg, cfg.yaw_deg)) if cfg.yaw_deg else 0.0
    pitch = math.radians(rng.uniform(-cfg.pitch_deg, cfg.pitch_deg)) if cfg.pitch_deg else 0.0
    jitter = rng.uniform(-cfg.d_lon_jitter_m, cfg.d_lon_jitter_m) if cfg.d_lon_jitter_m else 0.0
    return replace(
        scene,
        headlight=dataclasses.replace(
            scene.headlight, luminous_flux=scene.headlight.luminous_flux * flux_mult
        ),
        ambient=dataclasses.replace(
            scene.ambient, illuminance=scene.ambient.illuminance * ambient_mult
        ),
        night_ambient=dataclasses.replace(
            scene.night_ambient, illuminance=scene.night_ambient.illuminance * ambient_mult
        ),
        camera_yaw=scene.camera_yaw + yaw,
        camera_pitch=scene.camera_pitch + pitch,
        d_lon=max(scene.d_lon + jitter, 1.0),
    )
