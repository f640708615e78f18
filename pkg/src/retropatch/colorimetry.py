"""Spectral-to-RGB colorimetry.

Reflected color is obtained by integrating illuminant x reflectance against
the CIE 1931 2-degree color matching functions on a uniform 5 nm grid over
380-780 nm:

    k         = 100 / sum(S(l) * ybar(l))
    (X, Y, Z) = k * sum(S(l) * R(l) * (xbar, ybar, zbar)(l))

so that a perfect reflector (R = 1) always lands at Y = 100 regardless of
the illuminant.  XYZ is then mapped to linear sRGB with the standard
IEC 61966-2-1 matrix; out-of-gamut values are clamped to [0, 1] (the tint
is a fit target, not display output, so no chromatic gamut mapping is
attempted).

All types are immutable and all operations are pure functions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._spectra_tables import (
    CIE_1931_CMF,
    D65_SPD,
    RED_FILM_REFLECTANCE,
    WAVELENGTH_MAX_NM,
    WAVELENGTH_MIN_NM,
    WAVELENGTH_STEP_NM,
    WHITE_FILM_REFLECTANCE,
    WHITE_LED_SPD,
)

__all__ = [
    "SpectralCurve",
    "CieObserver",
    "TintColor",
    "ZeroIlluminant",
    "GridMismatch",
    "MissingSpectralData",
    "STANDARD_GRID",
    "cie_1931_observer",
    "d65_illuminant",
    "white_led_illuminant",
    "equal_energy_illuminant",
    "red_film_reflectance",
    "white_film_reflectance",
    "normalization_constant",
    "xyz_from_spectra",
    "xyz_to_linear_srgb",
    "specular_tint",
]


class ZeroIlluminant(ValueError):
    """Illuminant has no overlap with the luminosity function."""


class GridMismatch(ValueError):
    """Curves cannot be resampled onto a common wavelength grid."""


class MissingSpectralData(ValueError):
    """Material has neither a reflectance curve nor an explicit tint."""


STANDARD_GRID = np.arange(
    WAVELENGTH_MIN_NM, WAVELENGTH_MAX_NM + WAVELENGTH_STEP_NM / 2, WAVELENGTH_STEP_NM
)

# Linear sRGB <- XYZ (D65 white), IEC 61966-2-1.
_XYZ_TO_SRGB = np.array(
    [
        [3.2406255, -1.5372080, -0.4986286],
        [-0.9689307, 1.8757561, 0.0415175],
        [0.0557101, -0.2040211, 1.0569959],
    ]
)

# Reflectance curves may exceed 1 slightly (fluorescent sheeting headroom).
_REFLECTANCE_CEILING = 1.5


@dataclass(frozen=True)
class SpectralCurve:
    """A sampled spectral quantity on strictly increasing wavelengths (nm).

    Evaluation outside the tabulated range returns 0.  ``kind`` selects the
    invariants: reflectance curves must lie in [0, 1.5], emission curves
    merely have to be finite and nonnegative.
    """

    wavelengths_nm: np.ndarray
    values: np.ndarray
    kind: str = "emission"  # "emission" | "reflectance"

    def __post_init__(self):
        wl = np.asarray(self.wavelengths_nm, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if wl.ndim != 1 or wl.shape != vals.shape or wl.size < 2:
            raise ValueError("curve needs matching 1-D wavelength/value arrays")
        if not np.all(np.diff(wl) > 0):
            raise ValueError("wavelengths must be strictly increasing")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("curve values must be finite and >= 0")
        if self.kind == "reflectance" and np.any(vals > _REFLECTANCE_CEILING):
            raise ValueError(f"reflectance must be <= {_REFLECTANCE_CEILING}")
        object.__setattr__(self, "wavelengths_nm", wl)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_table(cls, table, column=1, kind="emission") -> "SpectralCurve":
        arr = np.asarray(table, dtype=float)
        return cls(arr[:, 0], arr[:, column], kind=kind)

    @classmethod
    def constant(cls, value: float, kind="emission") -> "SpectralCurve":
        return cls(STANDARD_GRID.copy(), np.full(STANDARD_GRID.shape, float(value)), kind=kind)

    @classmethod
    def from_csv(cls, path, kind="emission") -> "SpectralCurve":
        """Load ``wavelength_nm,value`` rows (UTF-8, comma separated)."""
        wavelengths, values = [], []
        with open(Path(path), newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "wavelength_nm" not in reader.fieldnames:
                raise ValueError(f"{path}: expected header 'wavelength_nm,value'")
            for row in reader:
                wavelengths.append(float(row["wavelength_nm"]))
                values.append(float(row["value"]))
        return cls(np.array(wavelengths), np.array(values), kind=kind)

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["wavelength_nm", "value"])
            for wl, val in zip(self.wavelengths_nm, self.values):
                writer.writerow([f"{wl:g}", f"{val:.9g}"])

    def evaluate(self, wavelengths_nm) -> np.ndarray:
        """Linear interpolation; zero outside the tabulated range."""
        return np.interp(
            np.asarray(wavelengths_nm, dtype=float),
            self.wavelengths_nm,
            self.values,
            left=0.0,
            right=0.0,
        )

    def resample(self, grid=None) -> "SpectralCurve":
        """Resample onto ``grid`` (default: the standard 5 nm grid)."""
        grid = STANDARD_GRID if grid is None else np.asarray(grid, dtype=float)
        if grid[-1] < self.wavelengths_nm[0] or grid[0] > self.wavelengths_nm[-1]:
            raise GridMismatch("curve does not overlap the target wavelength grid")
        if self.wavelengths_nm.shape == grid.shape and np.array_equal(self.wavelengths_nm, grid):
            return self
        return SpectralCurve(grid.copy(), self.evaluate(grid), kind=self.kind)


@dataclass(frozen=True)
class CieObserver:
    """Color matching functions xbar/ybar/zbar on a common grid."""

    xbar: SpectralCurve
    ybar: SpectralCurve
    zbar: SpectralCurve

    def __post_init__(self):
        peak = self.ybar.wavelengths_nm[int(np.argmax(self.ybar.values))]
        if not 550.0 <= peak <= 560.0:
            raise ValueError(f"ybar peak at {peak} nm is outside [550, 560]")


@dataclass(frozen=True)
class TintColor:
    """Linear-sRGB triple, each component clamped to [0, 1]."""

    rgb: tuple

    def __post_init__(self):
        rgb = tuple(float(c) for c in self.rgb)
        if len(rgb) != 3 or not all(np.isfinite(rgb)):
            raise ValueError("tint must be a finite RGB triple")
        object.__setattr__(self, "rgb", tuple(min(1.0, max(0.0, c)) for c in rgb))

    def as_array(self) -> np.ndarray:
        return np.array(self.rgb)


def cie_1931_observer() -> CieObserver:
    """The built-in CIE 1931 2-degree standard observer (5 nm table)."""
    arr = np.asarray(CIE_1931_CMF, dtype=float)
    return CieObserver(
        xbar=SpectralCurve(arr[:, 0], arr[:, 1]),
        ybar=SpectralCurve(arr[:, 0], arr[:, 2]),
        zbar=SpectralCurve(arr[:, 0], arr[:, 3]),
    )


def d65_illuminant() -> SpectralCurve:
    return SpectralCurve.from_table(D65_SPD)


def white_led_illuminant() -> SpectralCurve:
    return SpectralCurve.from_table(WHITE_LED_SPD)


def equal_energy_illuminant() -> SpectralCurve:
    return SpectralCurve.constant(1.0)


def red_film_reflectance() -> SpectralCurve:
    return SpectralCurve.from_table(RED_FILM_REFLECTANCE, kind="reflectance")


def white_film_reflectance() -> SpectralCurve:
    return SpectralCurve.from_table(WHITE_FILM_REFLECTANCE, kind="reflectance")


def _on_grid(curve: SpectralCurve) -> np.ndarray:
    return curve.resample(STANDARD_GRID).values


def normalization_constant(illuminant: SpectralCurve, observer: CieObserver) -> float:
    """k = 100 / sum(S * ybar) over the 5 nm grid."""
    s = _on_grid(illuminant)
    y = _on_grid(observer.ybar)
    denom = float(np.sum(s * y))
    if denom <= 0.0:
        raise ZeroIlluminant("illuminant has zero overlap with ybar")
    return 100.0 / denom


def xyz_from_spectra(
    illuminant: SpectralCurve, reflectance: SpectralCurve, observer: CieObserver
) -> tuple:
    """Tristimulus (X, Y, Z) of ``reflectance`` under ``illuminant``."""
    k = normalization_constant(illuminant, observer)
    s = _on_grid(illuminant)
    r = _on_grid(reflectance)
    sr = s * r
    x = k * float(np.sum(sr * _on_grid(observer.xbar)))
    y = k * float(np.sum(sr * _on_grid(observer.ybar)))
    z = k * float(np.sum(sr * _on_grid(observer.zbar)))
    return (x, y, z)


def xyz_to_linear_srgb(xyz) -> TintColor:
    """XYZ (Y = 100 scale) -> linear sRGB, clamped to [0, 1]."""
    vec = np.asarray(xyz, dtype=float) / 100.0
    rgb = _XYZ_TO_SRGB @ vec
    return TintColor(tuple(np.clip(rgb, 0.0, 1.0)))


def specular_tint(material, illuminant: SpectralCurve, observer: CieObserver = None) -> TintColor:
    """Reflection tint of a material: explicit override, else the spectral path.

    ``material`` needs a ``tint`` (TintColor or None) and a
    ``spectral_reflectance`` (SpectralCurve or None) attribute.
    """
    if getattr(material, "tint", None) is not None:
        return material.tint
    reflectance = getattr(material, "spectral_reflectance", None)
    if reflectance is None:
        raise MissingSpectralData(
            f"material {getattr(material, 'name', '?')!r} has no tint and no reflectance curve"
        )
    observer = observer or cie_1931_observer()
    return xyz_to_linear_srgb(xyz_from_spectra(illuminant, reflectance, observer))
