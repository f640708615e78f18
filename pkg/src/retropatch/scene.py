"""Encounter geometry and the pinhole camera.

World frame: x runs from the car toward the sign, y is lateral, z is up.
The headlight sits at (0, 0, h_l); the camera sits at the headlight plus a
configurable offset and looks along +x with optional yaw (about z) and
pitch (about y).  The sign is a planar rectangle at x = d_lon, centered at
(d_lon, d_lat, h_s), facing the car with normal (-1, 0, 0); face
coordinates (u, v) in [0, 1]^2 span width (u, toward +y) and height (v,
toward +z).

Projection is an ideal pinhole: a world point P maps to

    column = cx + f * (Y/X) / pixel_pitch_x
    row    = cy - f * (Z/X) / pixel_pitch_y

in camera coordinates (X forward, Y = world y rotated, Z up).  The inverse
map casts per-pixel rays back onto the sign plane, which stays exact under
camera rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .photometry import AmbientLight, HeadlightSpec
from .retroreflection import MaterialSpec, ReflectionGeometry
from .signs import SignSpec

__all__ = [
    "OutOfFrustum",
    "CameraModel",
    "EotConfig",
    "SceneConfig",
    "SignProjection",
    "default_scene",
    "project_sign",
    "reflection_geometry_at",
    "reflection_angles",
]


class OutOfFrustum(ValueError):
    """A sign corner projects behind the camera."""


@dataclass(frozen=True)
class CameraModel:
    """Sensor geometry; defaults mirror a 1/1.8-inch machine-vision camera."""

    sensor_width_mm: float = 7.2
    sensor_height_mm: float = 5.4
    focal_length_mm: float = 12.0
    resolution: tuple = (1440, 1080)

    def __post_init__(self):
        if min(self.sensor_width_mm, self.sensor_height_mm, self.focal_length_mm) <= 0:
            raise ValueError("camera dimensions must be positive")
        nx, ny = self.resolution
        if nx <= 0 or ny <= 0:
            raise ValueError("resolution must be positive")
        sensor_aspect = self.sensor_width_mm / self.sensor_height_mm
        pixel_aspect = nx / ny
        if abs(sensor_aspect - pixel_aspect) > 0.01 * sensor_aspect:
            raise ValueError("sensor and resolution aspect ratios differ by more than 1%")

    @property
    def pixel_pitch_mm(self) -> tuple:
        nx, ny = self.resolution
        return (self.sensor_width_mm / nx, self.sensor_height_mm / ny)


@dataclass(frozen=True)
class EotConfig:
    """Ranges for the environment-transformation jitter (all half-widths)."""

    flux_range: tuple = (0.7, 1.3)
    ambient_range: tuple = (0.7, 1.3)
    yaw_deg: float = 3.0
    pitch_deg: float = 3.0
    d_lon_jitter_m: float = 2.0


@dataclass(frozen=True)
class SceneConfig:
    """Immutable description of one car/sign encounter."""

    d_lon: float = 15.0
    d_lat: float = 0.0
    h_s: float = 1.5
    h_l: float = 0.75
    camera_offset: tuple = (0.0, 0.0, 0.0)
    ambient: AmbientLight = field(default_factory=lambda: AmbientLight(600.0))
    night_ambient: AmbientLight = field(default_factory=lambda: AmbientLight(1.0))
    headlight: HeadlightSpec = field(
        default_factory=lambda: HeadlightSpec(
            luminous_flux=3400.0, spread_half_angle=math.radians(5.0), mount_height=0.75
        )
    )
    camera: CameraModel = field(default_factory=CameraModel)
    sign: SignSpec = field(default_factory=SignSpec.stop)
    base_material: MaterialSpec = None
    camera_yaw: float = 0.0
    camera_pitch: float = 0.0
    day_exposure: float = math.pi * 683.0 / 600.0
    night_exposure: float = 1.0 / 64.0
    eot: EotConfig = field(default_factory=EotConfig)

    def __post_init__(self):
        if self.d_lon <= 0:
            raise ValueError("d_lon must be > 0")
        if self.h_s <= 0 or self.h_l <= 0:
            raise ValueError("heights must be > 0")
        if self.base_material is None:
            from .materials import builtin_registry

            object.__setattr__(self, "base_material", builtin_registry()["NittoL"])
        if self.day_exposure <= 0 or self.night_exposure <= 0:
            raise ValueError("exposures must be > 0")

    @property
    def headlight_position(self) -> np.ndarray:
        return np.array([0.0, 0.0, self.h_l])

    @property
    def camera_position(self) -> np.ndarray:
        return self.headlight_position + np.asarray(self.camera_offset, dtype=float)

    @property
    def sign_center(self) -> np.ndarray:
        return np.array([self.d_lon, self.d_lat, self.h_s])

    def sign_point(self, u, v) -> np.ndarray:
        """World position(s) of face coordinates; broadcasts over arrays."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        x = np.broadcast_to(self.d_lon, u.shape)
        y = self.d_lat + (u - 0.5) * self.sign.width
        z = self.h_s + (v - 0.5) * self.sign.height
        return np.stack([x, y, z], axis=-1)

    def camera_rotation(self) -> np.ndarray:
        """World-from-camera rotation (columns: forward, lateral, up axes)."""
        cy, sy = math.cos(self.camera_yaw), math.sin(self.camera_yaw)
        cp, sp = math.cos(self.camera_pitch), math.sin(self.camera_pitch)
        yaw = np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
        pitch = np.array([[cp, 0.0, -sp], [0.0, 1.0, 0.0], [sp, 0.0, cp]])
        return yaw @ pitch


def default_scene(**overrides) -> SceneConfig:
    """The baseline desk scene: 15 m, no lateral offset, co-located camera."""
    return replace(SceneConfig(), **overrides) if overrides else SceneConfig()


@dataclass(frozen=True)
class SignProjection:
    """Projection of the sign plane into the image.

    ``bbox`` is (col0, row0, width, height) in whole pixels, clipped to the
    frame.  ``uv`` maps every bbox pixel center to sign-face coordinates
    (rows x cols x 2); ``hit`` marks pixels whose ray actually crosses the
    face square.
    """

    quad_px: np.ndarray  # 4 x 2 (col, row) of the face square corners
    bbox: tuple
    uv: np.ndarray
    hit: np.ndarray

    @property
    def bbox_width(self) -> int:
        return self.bbox[2]

    @property
    def bbox_height(self) -> int:
        return self.bbox[3]


def _project_points(scene: SceneConfig, points: np.ndarray) -> np.ndarray:
    """World points (N x 3) -> (N x 2) pixel (col, row); raises OutOfFrustum."""
    rot = scene.camera_rotation()
    cam = (points - scene.camera_position) @ rot  # rows: (X fwd, Y lat, Z up)
    if np.any(cam[:, 0] <= 1e-9):
        raise OutOfFrustum("sign projects behind the camera")
    nx, ny = scene.camera.resolution
    px, py = scene.camera.pixel_pitch_mm
    f = scene.camera.focal_length_mm
    cx, cy = (nx - 1) / 2.0, (ny - 1) / 2.0
    col = cx + f * (cam[:, 1] / cam[:, 0]) / px
    row = cy - f * (cam[:, 2] / cam[:, 0]) / py
    return np.stack([col, row], axis=-1)


def project_sign(scene: SceneConfig) -> SignProjection:
    """Project the face square and build the pixel -> (u, v) inverse map."""
    corners_uv = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    corners = scene.sign_point(corners_uv[:, 0], corners_uv[:, 1])
    quad = _project_points(scene, corners)

    nx, ny = scene.camera.resolution
    col0 = max(int(math.floor(quad[:, 0].min())), 0)
    col1 = min(int(math.ceil(quad[:, 0].max())) + 1, nx)
    row0 = max(int(math.floor(quad[:, 1].min())), 0)
    row1 = min(int(math.ceil(quad[:, 1].max())) + 1, ny)
    if col1 <= col0 or row1 <= row0:
        raise OutOfFrustum("sign bounding box does not intersect the frame")

    cols = np.arange(col0, col1)
    rows = np.arange(row0, row1)
    px, py = scene.camera.pixel_pitch_mm
    f = scene.camera.focal_length_mm
    cx, cy = (nx - 1) / 2.0, (ny - 1) / 2.0
    # Per-pixel ray directions in camera coordinates, rotated to world.
    dir_cam = np.empty((rows.size, cols.size, 3))
    dir_cam[..., 0] = 1.0
    dir_cam[..., 1] = ((cols - cx) * px / f)[None, :]
    dir_cam[..., 2] = ((cy - rows) * py / f)[:, None]
    dir_world = dir_cam @ scene.camera_rotation().T

    cam_pos = scene.camera_position
    denom = dir_world[..., 0]
    t = (scene.d_lon - cam_pos[0]) / denom
    hit_world = cam_pos[None, None, :] + t[..., None] * dir_world
    u = (hit_world[..., 1] - (scene.d_lat - scene.sign.width / 2)) / scene.sign.width
    v = (hit_world[..., 2] - (scene.h_s - scene.sign.height / 2)) / scene.sign.height
    uv = np.stack([u, v], axis=-1)
    hit = (t > 0) & (u >= 0) & (u <= 1) & (v >= 0) & (v <= 1)
    bbox = (col0, row0, col1 - col0, row1 - row0)
    return SignProjection(quad_px=quad, bbox=bbox, uv=uv, hit=hit)


def reflection_angles(scene: SceneConfig, u, v) -> tuple:
    """Vectorized (entrance, viewing, observation) angles at face points."""
    points = scene.sign_point(u, v)
    normal = np.array([-1.0, 0.0, 0.0])
    to_light = scene.headlight_position - points
    to_camera = scene.camera_position - points
    norm_l = np.linalg.norm(to_light, axis=-1)
    norm_c = np.linalg.norm(to_camera, axis=-1)
    cos_beta = np.clip((to_light @ normal) / norm_l, -1.0, 1.0)
    cos_ups = np.clip((to_camera @ normal) / norm_c, -1.0, 1.0)
    cos_obs = np.clip(
        np.sum(to_light * to_camera, axis=-1) / (norm_l * norm_c), -1.0, 1.0
    )
    return np.arccos(cos_beta), np.arccos(cos_ups), np.arccos(cos_obs)


def reflection_geometry_at(scene: SceneConfig, u: float, v: float) -> ReflectionGeometry:
    """Reflection geometry at one face point."""
    if not (0 <= u <= 1 and 0 <= v <= 1):
        raise ValueError("(u, v) must lie in [0, 1]^2")
    beta, ups, obs = reflection_angles(scene, float(u), float(v))
    return ReflectionGeometry(
        entrance_angle=float(beta), viewing_angle=float(ups), observation_angle=float(obs)
    )
