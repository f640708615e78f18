"""Surrogate traffic-sign recognition.

A deliberately small, dependency-free stand-in for a production detector:
multinomial logistic regression over a 32x32 exposure-clamped linear-RGB
crop plus three coarse per-channel histograms (computed on brightness-
normalized values, a cheap auto-gain so chromatic structure survives global
dimming).  Trained by full-batch gradient descent with a fixed schedule, so
training and inference are bit-deterministic per seed.

Detection semantics follow single-stage recognizers: a crop counts as
detected when the maximum class confidence reaches the threshold, and an
attack succeeds when the crop is misclassified or falls below it.

Scoring can also be delegated to an external process speaking one JSON
object per line ({"image": path, "classes": [...]} in,
{"confidence": [...]} out), so real models can be plugged in later.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import subprocess
from dataclasses import dataclass, field

import numpy as np

from .renderer import PatchSet, RenderedImage, apply_eot, render_day, render_night
from .scene import SceneConfig
from .signs import SignKind, SignSpec

__all__ = [
    "SignClass",
    "SurrogateModel",
    "DetectionDecision",
    "TrainingDiverged",
    "INPUT_SIZE",
    "HIST_BINS",
    "DEFAULT_THRESHOLD",
    "sign_class_of",
    "sign_spec_for",
    "featurize",
    "softmax",
    "loss_and_grad",
    "train_surrogate",
    "confidence",
    "detect",
    "attack_success",
    "save_model",
    "load_model",
    "SubprocessScorer",
]

INPUT_SIZE = 32
HIST_BINS = 8
DEFAULT_THRESHOLD = 0.3


class TrainingDiverged(RuntimeError):
    """Training loss became non-finite even after the step-size retry."""


class SignClass(enum.Enum):
    STOP = "STOP"
    SL25 = "SL25"
    SL35 = "SL35"
    SL65 = "SL65"
    YIELD = "YIELD"
    BACKGROUND = "BACKGROUND"


DEFAULT_CLASSES = (
    SignClass.STOP,
    SignClass.SL25,
    SignClass.SL35,
    SignClass.SL65,
    SignClass.YIELD,
    SignClass.BACKGROUND,
)


def sign_class_of(sign: SignSpec) -> SignClass:
    if sign.kind is SignKind.STOP:
        return SignClass.STOP
    if sign.kind is SignKind.YIELD:
        return SignClass.YIELD
    return SignClass[f"SL{sign.value}"]


def sign_spec_for(cls: SignClass) -> SignSpec:
    if cls is SignClass.STOP:
        return SignSpec.stop()
    if cls is SignClass.YIELD:
        return SignSpec.yield_sign()
    if cls is SignClass.BACKGROUND:
        raise ValueError("BACKGROUND has no sign")
    return SignSpec.speed_limit(int(cls.value[2:]))


def _resize_bilinear(img: np.ndarray, size: int) -> np.ndarray:
    """Deterministic bilinear resize to size x size."""
    h, w = img.shape[:2]
    if h == size and w == size:
        return img.astype(float)
    ys = (np.arange(size) + 0.5) * h / size - 0.5
    xs = (np.arange(size) + 0.5) * w / size - 0.5
    y0 = np.clip(np.floor(ys).astype(int), 0, h - 1)
    x0 = np.clip(np.floor(xs).astype(int), 0, w - 1)
    y1 = np.clip(y0 + 1, 0, h - 1)
    x1 = np.clip(x0 + 1, 0, w - 1)
    fy = np.clip(ys - y0, 0.0, 1.0)[:, None, None]
    fx = np.clip(xs - x0, 0.0, 1.0)[None, :, None]
    top = img[y0][:, x0] * (1 - fx) + img[y0][:, x1] * fx
    bottom = img[y1][:, x0] * (1 - fx) + img[y1][:, x1] * fx
    return top * (1 - fy) + bottom * fy


def featurize(image: RenderedImage) -> np.ndarray:
    """Feature vector: 32x32x3 developed crop + 3 normalized histograms."""
    crop = _resize_bilinear(image.developed(), INPUT_SIZE)
    vmax = float(crop.max())
    if vmax > 0:
        normalized = crop / vmax
    else:
        normalized = crop
    hists = []
    for channel in range(3):
        counts, _ = np.histogram(normalized[..., channel], bins=HIST_BINS, range=(0.0, 1.0))
        hists.append(counts / crop[..., channel].size)
    return np.concatenate([crop.ravel(), np.concatenate(hists)])


FEATURE_DIM = INPUT_SIZE * INPUT_SIZE * 3 + 3 * HIST_BINS


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class SurrogateModel:
    classes: tuple
    weights: np.ndarray  # FEATURE_DIM x n_classes
    bias: np.ndarray  # n_classes
    meta: dict = field(default_factory=dict)

    def predict_proba_features(self, features: np.ndarray) -> np.ndarray:
        return softmax(features @ self.weights + self.bias)

    def predict_proba(self, image: RenderedImage) -> np.ndarray:
        return self.predict_proba_features(featurize(image))

    def class_index(self, cls: SignClass) -> int:
        return self.classes.index(cls)


@dataclass(frozen=True)
class DetectionDecision:
    detected: bool
    sign_class: SignClass
    confidence: float
    true_class: SignClass
    true_confidence: float
    threshold: float


def loss_and_grad(weights, bias, features, labels, l2: float = 0.0):
    """Mean cross-entropy (+ L2 on weights) and its analytic gradients."""
    n = features.shape[0]
    probs = softmax(features @ weights + bias)
    eps = 1e-12
    loss = -float(np.mean(np.log(probs[np.arange(n), labels] + eps)))
    loss += 0.5 * l2 * float(np.sum(weights * weights))
    delta = probs
    delta[np.arange(n), labels] -= 1.0
    delta /= n
    grad_w = features.T @ delta + l2 * weights
    grad_b = delta.sum(axis=0)
    return loss, grad_w, grad_b


def _background_image(scene: SceneConfig, rng: np.random.Generator) -> RenderedImage:
    """Sign-free crop: backdrop radiance with mild seeded texture."""
    level = scene.ambient.illuminance / 683.0 / np.pi
    base = np.array([0.10, 0.10, 0.10]) * level
    noise = rng.uniform(0.7, 1.3, size=(48, 48, 1))
    pixels = np.broadcast_to(base, (48, 48, 3)) * noise
    return RenderedImage(pixels=pixels, exposure=scene.day_exposure,
                         metadata={"mode": "background"})


def _training_crops(scene: SceneConfig, cls: SignClass, n_per_class: int, seed: int,
                    defense=None) -> list:
    """Benign crops for one class under EoT: day, night, defended night."""
    from .defense import PolarizerConfig
    from .renderer import render_night as _render_night

    defense = defense or PolarizerConfig.crossed()
    rng = np.random.default_rng(seed)
    crops = []
    if cls is SignClass.BACKGROUND:
        day_scene = scene
        for _ in range(n_per_class):
            crops.append(_background_image(day_scene, rng))
        return crops
    sign_scene = dataclasses.replace(scene, sign=sign_spec_for(cls))
    empty = PatchSet.empty()
    conditions = ("day", "night", "night_defended")
    per_condition = (n_per_class + len(conditions) - 1) // len(conditions)
    for condition in conditions:
        for _ in range(per_condition):
            eot_seed = int(rng.integers(0, 2**63 - 1))
            perturbed = apply_eot(sign_scene, eot_seed)
            if condition == "day":
                crops.append(render_day(perturbed, empty))
            elif condition == "night":
                crops.append(_render_night(perturbed, empty))
            else:
                crops.append(_render_night(perturbed, empty, defense=defense))
    return crops[:n_per_class] if len(crops) > n_per_class else crops


def train_surrogate(scene: SceneConfig, classes=DEFAULT_CLASSES, seed: int = 0,
                    n_per_class: int = 240, epochs: int = 350, lr: float = 2.0,
                    l2: float = 1e-5, holdout_fraction: float = 0.25,
                    defense=None) -> SurrogateModel:
    """Train on benign EoT renders of every class; deterministic per seed.

    A quarter of each class's crops is held out; the resulting accuracy is
    stored in ``meta['holdout_accuracy']``.  If the loss ever goes
    non-finite the schedule restarts once at a tenth of the step size.
    """
    classes = tuple(classes)
    if n_per_class < 1:
        raise ValueError("need at least one crop per class")
    features_train, labels_train = [], []
    features_hold, labels_hold = [], []
    for label, cls in enumerate(classes):
        crops = _training_crops(scene, cls, n_per_class, seed + 7919 * label, defense=defense)
        if len(crops) < 4:
            raise ValueError("too few crops to split out a holdout set")
        n_hold = max(1, int(len(crops) * holdout_fraction))
        for crop in crops[:-n_hold]:
            features_train.append(featurize(crop))
            labels_train.append(label)
        for crop in crops[-n_hold:]:
            features_hold.append(featurize(crop))
            labels_hold.append(label)
    x = np.array(features_train)
    y = np.array(labels_train)
    xh = np.array(features_hold)
    yh = np.array(labels_hold)

    def run(step: float):
        weights = np.zeros((x.shape[1], len(classes)))
        bias = np.zeros(len(classes))
        for epoch in range(epochs):
            loss, grad_w, grad_b = loss_and_grad(weights, bias, x, y, l2=l2)
            if not np.isfinite(loss):
                return None
            decay = step / (1.0 + 0.01 * epoch)
            weights -= decay * grad_w
            bias -= decay * grad_b
        return weights, bias

    result = run(lr)
    if result is None:
        result = run(lr / 10.0)
    if result is None:
        raise TrainingDiverged("loss went non-finite at both step sizes")
    weights, bias = result
    probs = softmax(xh @ weights + bias)
    accuracy = float(np.mean(np.argmax(probs, axis=1) == yh))
    meta = {
        "seed": seed,
        "epochs": epochs,
        "lr": lr,
        "n_per_class": n_per_class,
        "holdout_accuracy": accuracy,
    }
    return SurrogateModel(classes=classes, weights=weights, bias=bias, meta=meta)


def confidence(model: SurrogateModel, image: RenderedImage, true_class: SignClass) -> float:
    """Softmax probability of the true class for this crop."""
    return float(model.predict_proba(image)[model.class_index(true_class)])


def detect(model: SurrogateModel, image: RenderedImage, true_class: SignClass,
           threshold: float = DEFAULT_THRESHOLD) -> DetectionDecision:
    if not 0 < threshold < 1:
        raise ValueError("threshold must be in (0, 1)")
    probs = model.predict_proba(image)
    top = int(np.argmax(probs))
    true_idx = model.class_index(true_class)
    return DetectionDecision(
        detected=bool(probs[top] >= threshold),
        sign_class=model.classes[top],
        confidence=float(probs[top]),
        true_class=true_class,
        true_confidence=float(probs[true_idx]),
        threshold=threshold,
    )


def attack_success(decision: DetectionDecision) -> bool:
    """Misclassified, or not detected at all."""
    return (decision.sign_class is not decision.true_class) or not decision.detected


def save_model(model: SurrogateModel, path) -> None:
    doc = {
        "format": "retropatch-surrogate",
        "version": 1,
        "classes": [c.value for c in model.classes],
        "shape": list(model.weights.shape),
        "weights": model.weights.ravel().tolist(),
        "bias": model.bias.tolist(),
        "meta": model.meta,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)


def load_model(path) -> SurrogateModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "retropatch-surrogate" or doc.get("version") != 1:
        raise ValueError(f"{path}: not a version-1 surrogate dump")
    shape = tuple(doc["shape"])
    return SurrogateModel(
        classes=tuple(SignClass(c) for c in doc["classes"]),
        weights=np.array(doc["weights"]).reshape(shape),
        bias=np.array(doc["bias"]),
        meta=doc.get("meta", {}),
    )


class SubprocessScorer:
    """Line-oriented JSON scoring protocol against an external process."""

    def __init__(self, command):
        self._proc = subprocess.Popen(
            command, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True
        )

    def confidences(self, image_path: str, classes) -> list:
        request = {"image": str(image_path), "classes": [c.value for c in classes]}
        self._proc.stdin.write(json.dumps(request) + "\n")
        self._proc.stdin.flush()
        line = self._proc.stdout.readline()
        if not line:
            raise RuntimeError("scorer process closed its output")
        response = json.loads(line)
        values = [float(v) for v in response["confidence"]]
        if len(values) != len(classes):
            raise ValueError("scorer returned a wrong-length confidence vector")
        return values

    def close(self) -> None:
        if self._proc.stdin:
            self._proc.stdin.close()
        self._proc.wait(timeout=10)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
