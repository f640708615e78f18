"""Sign faces: layout regions, coarse legend glyphs, and clearance maps.

A sign face lives in normalized coordinates (u, v) in [0, 1]^2 with u
growing rightward and v upward.  Each point belongs to exactly one region:

    OFF         outside the physical sign (bounding-box corners)
    BACKGROUND  the face fill (STOP red, speed-limit white, yield center)
    BORDER      the rim band
    LEGEND      text/numerals

Legends are coarse bar glyphs (seven-segment digits, bar letters): the
renderings feed a surrogate classifier, not human readers.  Region queries
are vectorized closed forms; no raster assets.

Per layout we also precompute a clearance map on a fixed grid: for every
cell, its region and the largest half-extent of an axis-aligned square
centered there that stays inside one region.  Patch repair uses this map to
keep patches from straddling regions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import ndimage

__all__ = [
    "Region",
    "SignKind",
    "SignSpec",
    "REGION_COLORS",
    "BACKDROP_ALBEDO",
    "region_map",
    "region_at",
    "region_color",
    "clearance_map",
    "CLEARANCE_GRID",
]


class Region(enum.IntEnum):
    OFF = 0
    BACKGROUND = 1
    LEGEND = 2
    BORDER = 3


class SignKind(enum.Enum):
    STOP = "stop"
    SPEED_LIMIT = "speed_limit"
    YIELD = "yield"


# Linear-RGB base albedos of sign paints/sheetings (gamma-decoded from
# nominal 8-bit swatches).
_STOP_RED = tuple(float(c) for c in np.power(np.array([112, 42, 22]) / 255.0, 2.2))
_SIGN_WHITE = (0.85, 0.85, 0.85)
_SIGN_BLACK = (0.015, 0.015, 0.015)
BACKDROP_ALBEDO = (0.10, 0.10, 0.10)

REGION_COLORS = {
    SignKind.STOP: {
        Region.BACKGROUND: _STOP_RED,
        Region.LEGEND: _SIGN_WHITE,
        Region.BORDER: _SIGN_WHITE,
    },
    SignKind.SPEED_LIMIT: {
        Region.BACKGROUND: _SIGN_WHITE,
        Region.LEGEND: _SIGN_BLACK,
        Region.BORDER: _SIGN_BLACK,
    },
    SignKind.YIELD: {
        Region.BACKGROUND: _SIGN_WHITE,
        Region.LEGEND: _STOP_RED,
        Region.BORDER: _STOP_RED,
    },
}


@dataclass(frozen=True)
class SignSpec:
    """Physical sign: kind (+ speed value), face size in meters."""

    kind: SignKind
    value: int = None  # speed limit value; None otherwise
    width: float = 0.762
    height: float = 0.762

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("sign dimensions must be positive")
        if self.kind is SignKind.SPEED_LIMIT:
            if self.value is None or not 0 < self.value < 100:
                raise ValueError("speed limit sign needs a two-digit value")
        elif self.value is not None:
            raise ValueError(f"{self.kind} sign takes no value")

    @staticmethod
    def stop() -> "SignSpec":
        return SignSpec(SignKind.STOP, width=0.762, height=0.762)

    @staticmethod
    def speed_limit(value: int) -> "SignSpec":
        return SignSpec(SignKind.SPEED_LIMIT, value=value, width=0.610, height=0.762)

    @staticmethod
    def yield_sign() -> "SignSpec":
        return SignSpec(SignKind.YIELD, width=0.762, height=0.762)

    def layout_key(self) -> tuple:
        return (self.kind, self.value)


# ---------------------------------------------------------------------------
# Glyphs: rectangles in glyph-local [0, 1]^2 coordinates, v upward.

_SEG = {
    "A": (0.10, 0.85, 0.90, 1.00),
    "B": (0.75, 0.50, 1.00, 0.95),
    "C": (0.75, 0.05, 1.00, 0.50),
    "D": (0.10, 0.00, 0.90, 0.15),
    "E": (0.00, 0.05, 0.25, 0.50),
    "F": (0.00, 0.50, 0.25, 0.95),
    "G": (0.10, 0.42, 0.90, 0.58),
}
_DIGIT_SEGMENTS = {
    0: "ABCDEF",
    1: "BC",
    2: "ABGED",
    3: "ABGCD",
    4: "FGBC",
    5: "AFGCD",
    6: "AFGECD",
    7: "ABC",
    8: "ABCDEFG",
    9: "ABCDFG",
}
_LETTER_RECTS = {
    "S": [_SEG[s] for s in "AFGCD"],
    "T": [_SEG["A"], (0.38, 0.00, 0.62, 0.90)],
    "O": [_SEG[s] for s in "ABCDEF"],
    "P": [(0.00, 0.00, 0.25, 1.00), _SEG["A"], _SEG["B"], _SEG["G"]],
}


def _digit_rects(digit: int):
    return [_SEG[s] for s in _DIGIT_SEGMENTS[digit]]


def _rects_mask(u, v, rects, box):
    """Mask of points inside any glyph rect, glyph box = (u0, v0, u1, v1)."""
    u0, v0, u1, v1 = box
    gu = (u - u0) / (u1 - u0)
    gv = (v - v0) / (v1 - v0)
    mask = np.zeros(np.shape(u), dtype=bool)
    for ru0, rv0, ru1, rv1 in rects:
        mask |= (gu >= ru0) & (gu <= ru1) & (gv >= rv0) & (gv <= rv1)
    return mask


# ---------------------------------------------------------------------------
# Layouts.

_OCTAGON_CUT = 0.5 * math.sqrt(2.0)  # |x|+|y| bound for flat-to-flat 1.0
_STOP_BORDER_INSET = 0.92
_SL_BORDER = 0.045
_YIELD_INNER_SCALE = 0.60


def _octagon_mask(x, y, scale=1.0):
    ax, ay = np.abs(x), np.abs(y)
    return (
        (ax <= 0.5 * scale)
        & (ay <= 0.5 * scale)
        & (ax + ay <= _OCTAGON_CUT * scale)
    )


def _stop_regions(u, v):
    x = u - 0.5
    y = v - 0.5
    out = np.full(np.shape(u), int(Region.OFF), dtype=np.int8)
    outer = _octagon_mask(x, y)
    inner = _octagon_mask(x, y, _STOP_BORDER_INSET)
    out[outer] = int(Region.BORDER)
    out[inner] = int(Region.BACKGROUND)
    # "STOP" row: four bar-letter glyphs centered on the face.
    letter_w, gap, letter_h = 0.15, 0.03, 0.24
    total = 4 * letter_w + 3 * gap
    legend = np.zeros(np.shape(u), dtype=bool)
    for i, letter in enumerate("STOP"):
        u0 = 0.5 - total / 2 + i * (letter_w + gap)
        box = (u0, 0.5 - letter_h / 2, u0 + letter_w, 0.5 + letter_h / 2)
        legend |= _rects_mask(u, v, _LETTER_RECTS[letter], box)
    out[legend & inner] = int(Region.LEGEND)
    return out


def _speed_limit_regions(u, v, value: int):
    out = np.full(np.shape(u), int(Region.BACKGROUND), dtype=np.int8)
    b = _SL_BORDER
    ring = (u < b) | (u > 1 - b) | (v < b) | (v > 1 - b)
    out[ring] = int(Region.BORDER)
    legend = np.zeros(np.shape(u), dtype=bool)
    # Word bars standing in for "SPEED" / "LIMIT".
    legend |= (u >= 0.22) & (u <= 0.78) & (v >= 0.80) & (v <= 0.86)
    legend |= (u >= 0.25) & (u <= 0.75) & (v >= 0.69) & (v <= 0.75)
    tens, ones = divmod(value, 10)
    for digit, (u0, u1) in ((tens, (0.16, 0.46)), (ones, (0.54, 0.84))):
        legend |= _rects_mask(u, v, _digit_rects(digit), (u0, 0.12, u1, 0.60))
    out[legend & ~ring] = int(Region.LEGEND)
    return out


def _yield_regions(u, v):
    x = u - 0.5
    y = v - 0.5
    out = np.full(np.shape(u), int(Region.OFF), dtype=np.int8)

    def triangle(scale):
        # Downward-pointing triangle: apex at the bottom, base at the top.
        top = 0.46 * scale
        apex = -0.46 * scale
        half_base = 0.47 * scale
        inside = (y <= top) & (y >= apex)
        # Width shrinks linearly toward the apex.
        frac = (y - apex) / (top - apex)
        return inside & (np.abs(x) <= half_base * frac)

    outer = triangle(1.0)
    inner = triangle(_YIELD_INNER_SCALE) & (y >= -0.46 * _YIELD_INNER_SCALE + 0.10)
    out[outer] = int(Region.BORDER)
    out[inner] = int(Region.BACKGROUND)
    return out


def region_map(sign: SignSpec, u, v) -> np.ndarray:
    """Region ids for arrays of face coordinates; OFF outside [0, 1]^2."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if sign.kind is SignKind.STOP:
        out = _stop_regions(u, v)
    elif sign.kind is SignKind.SPEED_LIMIT:
        out = _speed_limit_regions(u, v, sign.value)
    else:
        out = _yield_regions(u, v)
    out[(u < 0) | (u > 1) | (v < 0) | (v > 1)] = int(Region.OFF)
    return out


def region_at(sign: SignSpec, u: float, v: float) -> Region:
    return Region(int(region_map(sign, np.array([u]), np.array([v]))[0]))


def region_color(sign: SignSpec, region: Region) -> tuple:
    if region is Region.OFF:
        return BACKDROP_ALBEDO
    return REGION_COLORS[sign.kind][region]


# ---------------------------------------------------------------------------
# Clearance maps.

CLEARANCE_GRID = 192


@lru_cache(maxsize=16)
def _clearance_cached(layout_key: tuple) -> tuple:
    kind, value = layout_key
    sign = SignSpec(kind, value=value, width=1.0, height=1.0)
    n = CLEARANCE_GRID
    centers = (np.arange(n) + 0.5) / n
    uu, vv = np.meshgrid(centers, centers, indexing="xy")
    regions = region_map(sign, uu, vv)
    clearance = np.zeros((n, n))
    for rid in np.unique(regions):
        mask = regions == rid
        # Chessboard distance to the nearest cell of a different region,
        # minus one cell of margin, in face units.
        dist = ndimage.distance_transform_cdt(mask, metric="chessboard")
        clearance[mask] = np.maximum(dist[mask] - 1.0, 0.0) / n
    return regions, clearance


def clearance_map(sign: SignSpec) -> tuple:
    """(regions, clearance) arrays on the CLEARANCE_GRID x CLEARANCE_GRID lattice.

    ``clearance[j, i]`` is a safe half-extent: any axis-aligned rectangle
    centered at cell (i, j) with both half-extents below it lies entirely in
    ``regions[j, i]``.  Index order is [v-row, u-col] with cell centers at
    (i + 0.5) / N.
    """
    return _clearance_cached(sign.layout_key())
