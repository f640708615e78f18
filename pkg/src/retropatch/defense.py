"""Polarization defense: dual (headlight + camera) and single linear filters.

Mechanism for the dual configuration: the headlight filter polarizes the
beam (x0.5 for unpolarized light).  A retroreflector returns fraction p of
that light still polarized along the headlight axis and depolarizes the
rest; the camera filter then passes the polarized part by Malus' law,
cos^2(delta) with delta the angle between the filter axes, and half of the
depolarized part:

    transmission = 0.5 * (p * cos^2(delta) + (1 - p) * 0.5)

Crossed filters (delta = 90 deg) therefore extinguish polarization-
preserving returns entirely (p = 1 -> 0) while fully depolarizing surfaces
keep 0.25.  Filters are ideal: no absorption beyond the 0.5 unpolarized
loss, perfect extinction.

A single filter on either side cannot discriminate: unpolarized light in,
(at most partially polarized) light out, flat x0.5 on everything.  Diffuse
reflection is modeled as fully depolarizing, so under the dual setup the
ambient/diffuse image content is scaled by 0.25, and by 0.5 with one
filter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MissingFilter",
    "PolarizerConfig",
    "polarized_attenuation",
    "retro_transmission",
    "diffuse_transmission",
    "render_night_defended",
    "evaluate_defense",
    "DefenseReport",
]


class MissingFilter(ValueError):
    """Dual-filter attenuation requested without both filters present."""


@dataclass(frozen=True)
class PolarizerConfig:
    """Axis angles (radians, in [0, pi)) of the optional filters."""

    headlight_axis: float = None
    camera_axis: float = None

    def __post_init__(self):
        for label, axis in (("headlight_axis", self.headlight_axis),
                            ("camera_axis", self.camera_axis)):
            if axis is not None and not 0 <= axis < math.pi:
                raise ValueError(f"{label} must lie in [0, pi)")

    @property
    def is_dual(self) -> bool:
        return self.headlight_axis is not None and self.camera_axis is not None

    @property
    def any_filter(self) -> bool:
        return self.headlight_axis is not None or self.camera_axis is not None

    @staticmethod
    def crossed() -> "PolarizerConfig":
        return PolarizerConfig(headlight_axis=0.0, camera_axis=math.pi / 2)

    @staticmethod
    def camera_only(axis: float = math.pi / 2) -> "PolarizerConfig":
        return PolarizerConfig(camera_axis=axis)

    @staticmethod
    def none() -> "PolarizerConfig":
        return PolarizerConfig()


def polarized_attenuation(dop_preservation: float, config: PolarizerConfig) -> float:
    """Dual-filter transmission of retroreflected light; in [0, 0.5]."""
    if not config.is_dual:
        raise MissingFilter("dual-filter attenuation needs both filter axes")
    if not 0 <= dop_preservation <= 1:
        raise ValueError("dop_preservation must be in [0, 1]")
    delta = config.camera_axis - config.headlight_axis
    malus = math.cos(delta) ** 2
    return 0.5 * (dop_preservation * malus + (1.0 - dop_preservation) * 0.5)


def retro_transmission(dop_preservation: float, config: PolarizerConfig) -> float:
    """Transmission of the retro term for any filter configuration."""
    if config.is_dual:
        return polarized_attenuation(dop_preservation, config)
    if config.any_filter:
        return 0.5
    return 1.0


def diffuse_transmission(config: PolarizerConfig) -> float:
    """Transmission of fully-depolarizing (diffuse/ambient) light."""
    if config.is_dual:
        return 0.25
    if config.any_filter:
        return 0.5
    return 1.0


def render_night_defended(scene, patches, config: PolarizerConfig):
    """Night render with the filters applied; no filters == render_night."""
    from .renderer import render_night

    return render_night(scene, patches, defense=config)


@dataclass(frozen=True)
class DefenseReport:
    asr_undefended: float
    asr_defended: float
    benign_accuracy_defended: float


def evaluate_defense(model, scene, patches, config: PolarizerConfig,
                     trials: int, seed: int) -> DefenseReport:
    """Attack rates with/without the filters plus defended benign accuracy.

    All three rates are evaluated on the same expectation-over-
    transformation scene draws so they are directly comparable; the model
    should have seen defended benign renders during training, otherwise the
    numbers include a domain shift.
    """
    from .optimizer import asr
    from .renderer import PatchSet
    from .tsr import attack_success, detect

    report_undefended = asr(model, scene, patches, trials, seed)
    report_defended = asr(model, scene, patches, trials, seed, defense=config)

    from .renderer import apply_eot, render_night

    rng = np.random.default_rng(seed)
    eot_seeds = rng.integers(0, 2**63 - 1, size=trials)
    empty = PatchSet(patches=(), mpr=patches.mpr)
    correct = 0
    true_class = scene_true_class(scene)
    for eot_seed in eot_seeds:
        perturbed = apply_eot(scene, int(eot_seed))
        image = render_night(perturbed, empty, defense=config)
        if not attack_success(detect(model, image, true_class)):
            correct += 1
    return DefenseReport(
        asr_undefended=report_undefended,
        asr_defended=report_defended,
        benign_accuracy_defended=correct / trials,
    )


def scene_true_class(scene):
    from .tsr import sign_class_of

    return sign_class_of(scene.sign)
