"""Day-night opposing-objective patch search.

The optimizer minimizes, over patch position and size,

    mean over EoT draws of  [ night_confidence  -  alpha * day_confidence ]

i.e. kill the true-class confidence at night while keeping the daytime
render recognizable.  Every trial is evaluated on a common batch of
expectation-over-transformation scenes drawn once per run (common random
numbers: trial comparisons are paired, and since conformant patches leave
the day render bit-identical, the stealth term is computed once).

Search is a Tree-structured Parzen Estimator: after ``n_startup`` uniform
trials, the history splits at the gamma quantile of the objective into good
(G) and bad (B) sets (ties broken toward earlier trials), per-dimension
Gaussian-kernel densities l(x) from G and g(x) from B are fitted with
Scott's-rule bandwidths floored at 1% of the dimension range and truncated
to bounds, ``n_ei`` candidate vectors are drawn from l, and the candidate
maximizing l/g is suggested.  Hyperparameters are fixed for
reproducibility: gamma = 0.25, n_startup = 20, n_ei = 24.

Raw samples are repaired into the constraint set: extents are clipped to
bounds and rescaled to the per-patch area budget, centers are pushed inside
the face, patches straddling two sign regions are snapped to the dominant
one via the layout's clearance map, and overlapping patches shrink or
relocate.  Histories therefore only ever contain conformant trials.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import erf

from .renderer import PatchParams, PatchSet, apply_eot, render_day, render_night
from .retroreflection import MaterialSpec
from .scene import SceneConfig
from .signs import CLEARANCE_GRID, Region, SignSpec, clearance_map
from .tsr import DEFAULT_THRESHOLD, SurrogateModel, attack_success, confidence, detect, sign_class_of

__all__ = [
    "InvalidCount",
    "SearchSpace",
    "Trial",
    "TrialHistory",
    "TPE_GAMMA",
    "TPE_N_STARTUP",
    "TPE_N_EI",
    "split_area",
    "objective",
    "tpe_suggest",
    "optimize",
    "random_baseline",
    "asr",
]

TPE_GAMMA = 0.25
TPE_N_STARTUP = 20
TPE_N_EI = 24

_MIN_EXTENT = 0.005


class InvalidCount(ValueError):
    """Patch count outside the supported range [1, 5]."""


@dataclass(frozen=True)
class SearchSpace:
    """Bounds and constraint context for the patch parameters."""

    sign: SignSpec
    material: MaterialSpec
    n_patches: int = 1
    mpr: float = 0.1875
    w_min: float = 0.05
    w_max: float = 0.8

    def __post_init__(self):
        if not 1 <= self.n_patches <= 5:
            raise InvalidCount(f"n_patches must be in [1, 5], got {self.n_patches}")
        if not 0 < self.mpr <= 1:
            raise ValueError("mpr must be in (0, 1]")
        if not 0 < self.w_min < self.w_max <= 1:
            raise ValueError("need 0 < w_min < w_max <= 1")

    @property
    def per_patch_budget(self) -> float:
        return self.mpr / self.n_patches

    @property
    def n_dims(self) -> int:
        return 4 * self.n_patches

    def bounds(self) -> list:
        per_patch = [(0.0, 1.0), (0.0, 1.0), (self.w_min, self.w_max), (self.w_min, self.w_max)]
        return per_patch * self.n_patches

    # -- repair ------------------------------------------------------------

    def _repair_one(self, x, y, w, h):
        budget = self.per_patch_budget
        w = min(max(w, self.w_min), self.w_max)
        h = min(max(h, self.w_min), self.w_max)
        if w * h > budget:
            scale = math.sqrt(budget / (w * h))
            w *= scale
            h *= scale
        x = min(max(x, w / 2), 1 - w / 2)
        y = min(max(y, h / 2), 1 - h / 2)

        regions, clearance = clearance_map(self.sign)
        n = CLEARANCE_GRID
        cell = 1.0 / n
        i = min(max(int(x * n), 0), n - 1)
        j = min(max(int(y * n), 0), n - 1)
        half = max(w, h) / 2
        if regions[j, i] != int(Region.OFF) and clearance[j, i] + cell >= half:
            return x, y, w, h

        # Straddling (or centered off-face): snap to the dominant region.
        i0 = max(int((x - w / 2) * n), 0)
        i1 = min(int(math.ceil((x + w / 2) * n)), n)
        j0 = max(int((y - h / 2) * n), 0)
        j1 = min(int(math.ceil((y + h / 2) * n)), n)
        window = regions[j0:j1, i0:i1]
        candidates = window[window != int(Region.OFF)]
        if candidates.size:
            dominant = int(np.bincount(candidates).argmax())
        else:
            on_sign = regions != int(Region.OFF)
            dominant = int(np.bincount(regions[on_sign]).argmax())

        mask = regions == dominant
        jj, ii = np.nonzero(mask)
        cx = (ii + 0.5) * cell
        cy = (jj + 0.5) * cell
        fits = clearance[jj, ii] + cell >= half
        if np.any(fits):
            dist = (cx[fits] - x) ** 2 + (cy[fits] - y) ** 2
            pick = int(np.argmin(dist))
            x, y = float(cx[fits][pick]), float(cy[fits][pick])
        else:
            best = int(np.argmax(clearance[jj, ii]))
            x, y = float(cx[best]), float(cy[best])
            room = 2.0 * (clearance[jj, ii][best] + cell) * 0.999
            scale = min(1.0, room / max(w, h))
            w = max(w * scale, _MIN_EXTENT)
            h = max(h * scale, _MIN_EXTENT)
        x = min(max(x, w / 2), 1 - w / 2)
        y = min(max(y, h / 2), 1 - h / 2)
        return x, y, w, h

    @staticmethod
    def _overlaps(a, b) -> bool:
        ax0, ay0, ax1, ay1 = a
        bx0, by0, bx1, by1 = b
        return ax0 < bx1 - 1e-12 and bx0 < ax1 - 1e-12 and ay0 < by1 - 1e-12 and by0 < ay1 - 1e-12

    def repair(self, vec) -> np.ndarray:
        """Project a raw parameter vector into the constraint set."""
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (self.n_dims,):
            raise ValueError(f"expected {self.n_dims} parameters, got {vec.shape}")
        placed = []
        out = []
        regions, clearance = clearance_map(self.sign)
        n = CLEARANCE_GRID
        cell = 1.0 / n
        for p in range(self.n_patches):
            x, y, w, h = vec[4 * p:4 * p + 4]
            x, y, w, h = self._repair_one(x, y, w, h)
            bounds = (x - w / 2, y - h / 2, x + w / 2, y + h / 2)
            tries = 0
            while any(self._overlaps(bounds, q) for q in placed) and tries < 12:
                w = max(w * 0.8, _MIN_EXTENT)
                h = max(h * 0.8, _MIN_EXTENT)
                bounds = (x - w / 2, y - h / 2, x + w / 2, y + h / 2)
                tries += 1
            if any(self._overlaps(bounds, q) for q in placed):
                # Relocate to the on-sign cell farthest from everything placed.
                jj, ii = np.nonzero(regions != int(Region.OFF))
                cx = (ii + 0.5) * cell
                cy = (jj + 0.5) * cell
                min_dist = np.full(cx.shape, np.inf)
                for qx0, qy0, qx1, qy1 in placed:
                    qx, qy = (qx0 + qx1) / 2, (qy0 + qy1) / 2
                    min_dist = np.minimum(min_dist, (cx - qx) ** 2 + (cy - qy) ** 2)
                pick = int(np.argmax(min_dist))
                x, y = float(cx[pick]), float(cy[pick])
                w = h = max(min(2.0 * (clearance[jj, ii][pick] + cell) * 0.999, w), _MIN_EXTENT)
                x = min(max(x, w / 2), 1 - w / 2)
                y = min(max(y, h / 2), 1 - h / 2)
                bounds = (x - w / 2, y - h / 2, x + w / 2, y + h / 2)
            placed.append(bounds)
            out.extend([x, y, w, h])
        return np.array(out)

    def patchset(self, vec) -> PatchSet:
        """Repaired vector -> validated PatchSet."""
        vec = np.asarray(vec, dtype=float)
        patches = tuple(
            PatchParams(
                x=float(vec[4 * p]), y=float(vec[4 * p + 1]),
                w=float(vec[4 * p + 2]), h=float(vec[4 * p + 3]),
                material=self.material,
            )
            for p in range(self.n_patches)
        )
        ps = PatchSet(patches=patches, mpr=self.mpr)
        ps.validate(self.sign)
        return ps

    def realize(self, vec):
        repaired = self.repair(vec)
        return self.patchset(repaired), repaired


def split_area(space: SearchSpace, n: int) -> SearchSpace:
    """Split the area budget over n equal patches (bounds unchanged)."""
    if not 1 <= n <= 5:
        raise InvalidCount(f"patch count must be in [1, 5], got {n}")
    return replace(space, n_patches=n)


@dataclass(frozen=True)
class Trial:
    params: np.ndarray
    attack_loss: float
    stealth_loss: float
    objective: float
    seed: int
    eot_sample_count: int


@dataclass
class TrialHistory:
    """Append-only record of trials plus the TPE split parameters."""

    gamma: float = TPE_GAMMA
    n_startup: int = TPE_N_STARTUP
    trials: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.trials)

    def append(self, trial: Trial) -> None:
        self.trials.append(trial)

    def best(self) -> Trial:
        if not self.trials:
            raise ValueError("history is empty")
        return min(self.trials, key=lambda t: t.objective)

    def split(self):
        """(good, bad) by objective quantile; ties go to earlier trials."""
        n = len(self.trials)
        n_good = math.ceil(self.gamma * n)
        order = sorted(range(n), key=lambda i: (self.trials[i].objective, i))
        good = [self.trials[i] for i in order[:n_good]]
        bad = [self.trials[i] for i in order[n_good:]]
        return good, bad

    def to_csv(self, path) -> None:
        if not self.trials:
            raise ValueError("refusing to write an empty trial log")
        n_dims = self.trials[0].params.size
        names = [f"{k}{p}" for p in range(n_dims // 4) for k in ("x", "y", "w", "h")]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["trial", *names, "attack_loss", "stealth_loss",
                             "objective", "seed", "eot_samples"])
            for idx, t in enumerate(self.trials):
                writer.writerow([
                    idx, *[f"{v:.12g}" for v in t.params],
                    f"{t.attack_loss:.12g}", f"{t.stealth_loss:.12g}",
                    f"{t.objective:.12g}", t.seed, t.eot_sample_count,
                ])

    @staticmethod
    def from_csv(path, gamma: float = TPE_GAMMA, n_startup: int = TPE_N_STARTUP) -> "TrialHistory":
        history = TrialHistory(gamma=gamma, n_startup=n_startup)
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            param_names = [n for n in reader.fieldnames if n[0] in "xywh" and n[1:].isdigit()]
            for row in reader:
                history.append(Trial(
                    params=np.array([float(row[n]) for n in param_names]),
                    attack_loss=float(row["attack_loss"]),
                    stealth_loss=float(row["stealth_loss"]),
                    objective=float(row["objective"]),
                    seed=int(row["seed"]),
                    eot_sample_count=int(row["eot_samples"]),
                ))
        return history


# ---------------------------------------------------------------------------
# Objective.


def _eot_seeds(seed: int, count: int) -> list:
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=count)]


def objective(patches: PatchSet, scene: SceneConfig, model: SurrogateModel,
              alpha: float, eot_n: int, seed: int,
              white_assumption: bool = False) -> tuple:
    """(attack_loss, stealth_loss, objective) over ``eot_n`` EoT draws.

    attack_loss is the mean nighttime true-class confidence (lower = more
    effective), stealth_loss the negated mean daytime confidence.
    """
    if eot_n < 1:
        raise ValueError("eot_n must be >= 1")
    true_class = sign_class_of(scene.sign)
    attack, stealth = 0.0, 0.0
    for eot_seed in _eot_seeds(seed, eot_n):
        perturbed = apply_eot(scene, eot_seed)
        night = render_night(perturbed, patches, white_assumption=white_assumption)
        attack += confidence(model, night, true_class)
        stealth -= confidence(model, render_day(perturbed, patches), true_class)
    attack /= eot_n
    stealth /= eot_n
    return attack, stealth, attack + alpha * stealth


# ---------------------------------------------------------------------------
# TPE.


def _norm_cdf(z):
    return 0.5 * (1.0 + erf(z / math.sqrt(2.0)))


class _ParzenDensity:
    """Gaussian-kernel density on a bounded interval (truncated kernels)."""

    def __init__(self, observations, lo: float, hi: float):
        obs = np.asarray(observations, dtype=float)
        if obs.size == 0:
            raise ValueError("Parzen density needs at least one observation")
        self.centers = obs
        span = hi - lo
        scott = obs.std() * obs.size ** (-0.2)
        self.bandwidth = max(scott, 0.01 * span)
        self.lo = lo
        self.hi = hi
        self._norm = _norm_cdf((hi - obs) / self.bandwidth) - _norm_cdf((lo - obs) / self.bandwidth)
        self._norm = np.maximum(self._norm, 1e-12)

    def log_pdf(self, x: float) -> float:
        z = (x - self.centers) / self.bandwidth
        dens = np.exp(-0.5 * z * z) / (math.sqrt(2 * math.pi) * self.bandwidth * self._norm)
        return math.log(max(float(dens.mean()), 1e-300))

    def sample(self, rng: np.random.Generator) -> float:
        center = self.centers[int(rng.integers(self.centers.size))]
        for _ in range(100):
            draw = rng.normal(center, self.bandwidth)
            if self.lo <= draw <= self.hi:
                return float(draw)
        return float(min(max(center, self.lo), self.hi))


def tpe_suggest(history: TrialHistory, space: SearchSpace, rng) -> np.ndarray:
    """Next parameter vector (already repaired into the constraint set)."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    bounds = space.bounds()
    if len(history) < history.n_startup:
        raw = np.array([rng.uniform(lo, hi) for lo, hi in bounds])
        return space.repair(raw)

    good, bad = history.split()
    good_params = np.array([t.params for t in good])
    bad_params = np.array([t.params for t in bad])
    densities = [
        (
            _ParzenDensity(good_params[:, d], *bounds[d]),
            _ParzenDensity(bad_params[:, d], *bounds[d]),
        )
        for d in range(space.n_dims)
    ]
    best_vec, best_score = None, -math.inf
    for _ in range(TPE_N_EI):
        vec = np.array([l.sample(rng) for l, _ in densities])
        score = sum(
            densities[d][0].log_pdf(vec[d]) - densities[d][1].log_pdf(vec[d])
            for d in range(space.n_dims)
        )
        if score > best_score:
            best_vec, best_score = vec, score
    return space.repair(best_vec)


# ---------------------------------------------------------------------------
# Optimization loops.


def _mean_night_confidence(patches, scene, model, true_class, eot_seeds,
                           white_assumption=False) -> float:
    total = 0.0
    for eot_seed in eot_seeds:
        perturbed = apply_eot(scene, eot_seed)
        night = render_night(perturbed, patches, white_assumption=white_assumption)
        total += confidence(model, night, true_class)
    return total / len(eot_seeds)


def _run_search(scene, model, space, budget, alpha, seed, eot_n, suggest,
                white_assumption=False, history: TrialHistory = None):
    rng = np.random.default_rng(seed)
    eot_batch_seed = int(rng.integers(0, 2**63 - 1))
    eot_seeds = _eot_seeds(eot_batch_seed, eot_n)
    true_class = sign_class_of(scene.sign)

    # Conformant patches never alter the day render, so the stealth term is
    # shared by every trial; evaluate it once on the empty set.
    empty = PatchSet.empty(space.mpr)
    stealth = 0.0
    for eot_seed in eot_seeds:
        perturbed = apply_eot(scene, eot_seed)
        stealth -= confidence(model, render_day(perturbed, empty), true_class)
    stealth /= eot_n

    history = history if history is not None else TrialHistory()
    while len(history) < budget:
        vec = suggest(history, rng)
        patches, vec = space.realize(vec)
        attack = _mean_night_confidence(
            patches, scene, model, true_class, eot_seeds, white_assumption=white_assumption
        )
        history.append(Trial(
            params=vec, attack_loss=attack, stealth_loss=stealth,
            objective=attack + alpha * stealth, seed=eot_batch_seed,
            eot_sample_count=eot_n,
        ))
    best = history.best()
    return space.patchset(best.params), history


def optimize(scene: SceneConfig, model: SurrogateModel, space: SearchSpace,
             budget: int, alpha: float = 1.0, seed: int = 0, eot_n: int = 8,
             white_assumption: bool = False, history: TrialHistory = None):
    """TPE search; returns (best PatchSet, TrialHistory of length budget)."""
    if budget < TPE_N_STARTUP and history is None:
        raise ValueError(f"budget must be >= n_startup ({TPE_N_STARTUP})")

    def suggest(hist, rng):
        return tpe_suggest(hist, space, rng)

    return _run_search(scene, model, space, budget, alpha, seed, eot_n, suggest,
                       white_assumption=white_assumption, history=history)


def random_baseline(scene: SceneConfig, model: SurrogateModel, space: SearchSpace,
                    budget: int, alpha: float = 1.0, seed: int = 0, eot_n: int = 8,
                    white_assumption: bool = False):
    """Uniform random square patches within the budget; best-of-budget."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    side_max = min(space.w_max, math.sqrt(space.per_patch_budget))

    def suggest(hist, rng):
        raw = []
        for _ in range(space.n_patches):
            x = rng.uniform(0.0, 1.0)
            y = rng.uniform(0.0, 1.0)
            side = rng.uniform(space.w_min, side_max)
            raw.extend([x, y, side, side])
        return np.array(raw)

    return _run_search(scene, model, space, budget, alpha, seed, eot_n, suggest,
                       white_assumption=white_assumption)


def asr(model: SurrogateModel, scene: SceneConfig, patches: PatchSet,
        trials: int = 100, seed: int = 0, defense=None,
        threshold: float = DEFAULT_THRESHOLD) -> float:
    """Fraction of EoT night renders where the attack predicate holds."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    true_class = sign_class_of(scene.sign)
    hits = 0
    for eot_seed in _eot_seeds(seed, trials):
        perturbed = apply_eot(scene, eot_seed)
        night = render_night(perturbed, patches, defense=defense)
        if attack_success(detect(model, night, true_class, threshold=threshold)):
            hits += 1
    return hits / trials
