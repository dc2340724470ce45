"""Feed-forward network mapping a fractional order to optimal (tau, xi).

Tiny fully connected MLPs (1 input, 1-2 hidden layers of 5-25 neurons with
tansig/logsig activations, 2 linear outputs) trained by damped least squares:
solve (J'J + lambda*I) d = J'e on the fitted batch, accept a step only when
its MSE drops, adapting lambda by factors of 10.  Inputs and targets are
affinely normalized to [-1, 1]; all reported MSEs are on normalized targets.

Each training run fits a seeded random subset of the rows (about
three-quarters) and reports its MSE over *all* rows.  Hidden layers start
from a Nguyen-Widrow-style initialization whose magnitude grows with layer
width.  Together these make the 25-restart average MSE a real consistency
measure: oversized, heavily saturated networks interpolate erratically at the
held-out orders and score visibly worse than the small smooth ones, instead
of every architecture driving the residual to zero.  The architecture sweep
retrains every configuration 25 times and reports average/minimum MSE per
configuration.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "ACTIVATIONS",
    "ExtrapolationWarning",
    "TrainingFailure",
    "NetworkSpec",
    "AffineRange",
    "NetworkWeights",
    "Dataset",
    "TrainingReport",
    "forward",
    "train",
    "sweep",
    "sweep_specs",
    "predict_table",
    "save_model",
    "load_model",
]

ACTIVATIONS = ("tansig", "logsig")
NEURON_CHOICES = (5, 10, 15, 20, 25)

MODEL_FORMAT_VERSION = 1

_LAMBDA0 = 1e-3
_LAMBDA_FACTOR = 10.0
_LAMBDA_MAX = 1e10
_MSE_STOP = 1e-10
DEFAULT_MAX_EPOCHS = 50
# fraction of rows fitted per run; the rest only enter the reported MSE
DEFAULT_FIT_FRACTION = 7.0 / 9.0


class ExtrapolationWarning(UserWarning):
    """Prediction requested outside the trained input range."""


class TrainingFailure(RuntimeError):
    """A training run produced a non-finite Jacobian and was aborted."""


def _act(name: str, z: np.ndarray) -> np.ndarray:
    if name == "tansig":
        return np.tanh(z)
    # logsig, overflow-safe on both tails
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _act_deriv(name: str, a: np.ndarray) -> np.ndarray:
    # derivative expressed through the activation value itself
    if name == "tansig":
        return 1.0 - a * a
    return a * (1.0 - a)


@dataclass(frozen=True)
class NetworkSpec:
    """Architecture: equal-width hidden layers, per-layer activation, linear output."""

    hidden_layers: int
    neurons_per_layer: int
    activations: tuple[str, ...]

    def __post_init__(self):
        if self.hidden_layers not in (1, 2):
            raise ValueError("hidden_layers must be 1 or 2")
        if self.neurons_per_layer not in NEURON_CHOICES:
            raise ValueError(f"neurons_per_layer must be one of {NEURON_CHOICES}")
        if len(self.activations) != self.hidden_layers:
            raise ValueError("one activation per hidden layer required")
        for a in self.activations:
            if a not in ACTIVATIONS:
                raise ValueError(f"unknown activation {a!r}")

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (1,) + (self.neurons_per_layer,) * self.hidden_layers + (2,)

    def label(self) -> str:
        return f"{self.hidden_layers}x{self.neurons_per_layer}/" + "/".join(self.activations)


@dataclass(frozen=True)
class AffineRange:
    """Invertible affine map between [lo, hi] and [-1, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.hi > self.lo):
            raise ValueError("range must have hi > lo")

    @classmethod
    def from_values(cls, values: np.ndarray) -> "AffineRange":
        lo, hi = float(np.min(values)), float(np.max(values))
        if hi - lo < 1e-12:
            # degenerate (constant) feature: center a unit span on it
            return cls(lo - 0.5, hi + 0.5)
        return cls(lo, hi)

    def normalize(self, x):
        return 2.0 * (x - self.lo) / (self.hi - self.lo) - 1.0

    def denormalize(self, y):
        return self.lo + (y + 1.0) * (self.hi - self.lo) / 2.0


@dataclass(frozen=True)
class Dataset:
    """Training rows (alpha -> tau, xi) with a provenance tag."""

    alphas: np.ndarray
    taus: np.ndarray
    xis: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        if len(a) == 0:
            raise ValueError("dataset is empty")
        if len(self.taus) != len(a) or len(self.xis) != len(a):
            raise ValueError("column lengths differ")
        if np.any(np.diff(a) <= 0):
            raise ValueError("alphas must be strictly increasing")
        for name in ("alphas", "taus", "xis"):
            v = np.asarray(getattr(self, name), dtype=float)
            if not np.all(np.isfinite(v)) or np.any(v <= 0):
                raise ValueError(f"{name} must be finite and positive")

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[float, float, float]], provenance: str = "") -> "Dataset":
        a, t, x = zip(*rows)
        return cls(np.array(a, float), np.array(t, float), np.array(x, float), provenance)

    def __len__(self) -> int:
        return len(self.alphas)

    @property
    def targets(self) -> np.ndarray:
        """Shape (n, 2): columns tau, xi."""
        return np.column_stack([self.taus, self.xis])


@dataclass
class NetworkWeights:
    """Trained parameters plus the normalization needed to use them."""

    spec: NetworkSpec
    weights: list[np.ndarray]        # per layer, shape (n_out, n_in)
    biases: list[np.ndarray]         # per layer, shape (n_out,)
    input_range: AffineRange
    target_ranges: tuple[AffineRange, AffineRange]
    seed: int = 0
    final_mse: float = math.nan
    epochs_run: int = 0

    def __post_init__(self):
        sizes = self.spec.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ValueError("layer count does not match the spec")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[i + 1], sizes[i]) or b.shape != (sizes[i + 1],):
                raise ValueError(f"layer {i} has shape {w.shape}/{b.shape}, "
                                 f"expected {(sizes[i + 1], sizes[i])}/{(sizes[i + 1],)}")


# ---------------------------------------------------------------------------
# forward / jacobian


def _forward_normalized(w: NetworkWeights, x: np.ndarray) -> list[np.ndarray]:
    """Layer activations for a batch of normalized inputs; x shape (n,)."""
    acts = [x.reshape(1, -1)]
    a = acts[0]
    n_layers = len(w.weights)
    for i, (W, b) in enumerate(zip(w.weights, w.biases)):
        z = W @ a + b[:, None]
        a = z if i == n_layers - 1 else _act(w.spec.activations[i], z)
        acts.append(a)
    return acts


def forward(w: NetworkWeights, alpha: float) -> tuple[float, float]:
    """Predict (tau, xi) for one fractional order.

    Extrapolation outside the trained alpha range is permitted but raises an
    `ExtrapolationWarning`.
    """
    if not math.isfinite(alpha):
        raise ValueError("alpha must be finite")
    if alpha < w.input_range.lo or alpha > w.input_range.hi:
        warnings.warn(
            f"alpha={alpha} is outside the trained range "
            f"[{w.input_range.lo}, {w.input_range.hi}]",
            ExtrapolationWarning,
            stacklevel=2,
        )
    x = np.array([w.input_range.normalize(alpha)])
    y = _forward_normalized(w, x)[-1][:, 0]
    return (
        float(w.target_ranges[0].denormalize(y[0])),
        float(w.target_ranges[1].denormalize(y[1])),
    )


def predict_table(w: NetworkWeights, alphas: Sequence[float]) -> list[tuple[float, float, float]]:
    """Forward applied per alpha, emitted in alpha order."""
    return [(a, *forward(w, a)) for a in sorted(alphas)]


def _pack(weights: list[np.ndarray], biases: list[np.ndarray]) -> np.ndarray:
    return np.concatenate([p.ravel() for pair in zip(weights, biases) for p in pair])


def _unpack(theta: np.ndarray, spec: NetworkSpec) -> tuple[list[np.ndarray], list[np.ndarray]]:
    sizes = spec.layer_sizes
    weights, biases, k = [], [], 0
    for i in range(len(sizes) - 1):
        n_out, n_in = sizes[i + 1], sizes[i]
        weights.append(theta[k:k + n_out * n_in].reshape(n_out, n_in))
        k += n_out * n_in
        biases.append(theta[k:k + n_out])
        k += n_out
    return weights, biases


def _jacobian(w: NetworkWeights, acts: list[np.ndarray]) -> np.ndarray:
    """d(output)/d(theta), rows ordered sample-major then output index.

    Reverse-mode accumulation: one backward pass per output unit, batched
    over samples.
    """
    n = acts[0].shape[1]
    n_layers = len(w.weights)
    blocks_per_output = []
    for o in range(2):
        # delta at the linear output layer: one-hot on output o
        delta = np.zeros((2, n))
        delta[o, :] = 1.0
        layer_grads: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
        for i in range(n_layers - 1, -1, -1):
            a_prev = acts[i]
            # per-sample gradient blocks: dW (n, out, in) then db (n, out)
            dW = delta.T[:, :, None] * a_prev.T[:, None, :]
            db = delta.T
            layer_grads[i] = np.concatenate([dW.reshape(n, -1), db], axis=1)
            if i > 0:
                delta = (w.weights[i].T @ delta) * _act_deriv(w.spec.activations[i - 1], acts[i])
        blocks_per_output.append(np.concatenate(layer_grads, axis=1))
    # interleave so row = sample*2 + output
    J = np.empty((2 * n, blocks_per_output[0].shape[1]))
    J[0::2] = blocks_per_output[0]
    J[1::2] = blocks_per_output[1]
    return J


# ---------------------------------------------------------------------------
# training


def _init_weights(spec: NetworkSpec, rng: np.random.Generator) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Nguyen-Widrow-style hidden layers, small uniform linear output layer.

    Hidden neuron weight vectors are normalized to magnitude
    0.7 * n^(1/fan_in) with biases spread over the same range, so wide layers
    start strongly saturated (their active regions tile the input range).
    """
    sizes = spec.layer_sizes
    weights, biases = [], []
    for i in range(len(sizes) - 1):
        n_out, n_in = sizes[i + 1], sizes[i]
        if i == len(sizes) - 2:  # linear output layer
            scale = 1.0 / math.sqrt(n_in)
            weights.append((rng.random((n_out, n_in)) - 0.5) * scale)
            biases.append((rng.random(n_out) - 0.5) * scale)
        else:
            beta = 0.7 * n_out ** (1.0 / n_in)
            w = rng.random((n_out, n_in)) * 2.0 - 1.0
            w *= beta / np.linalg.norm(w, axis=1, keepdims=True)
            weights.append(w)
            biases.append((rng.random(n_out) * 2.0 - 1.0) * beta)
    return weights, biases


def _lm_step(J: np.ndarray, e: np.ndarray, lam: float) -> np.ndarray:
    """Solve (J'J + lam I) d = J'e, in whichever space is smaller."""
    n_res, n_par = J.shape
    if n_par <= n_res:
        A = J.T @ J + lam * np.eye(n_par)
        return np.linalg.solve(A, J.T @ e)
    A = J @ J.T + lam * np.eye(n_res)
    return J.T @ np.linalg.solve(A, e)


def train(
    spec: NetworkSpec,
    data: Dataset,
    seed: int,
    max_epochs: int = DEFAULT_MAX_EPOCHS,
    fit_fraction: float = DEFAULT_FIT_FRACTION,
    on_step: Optional[Callable[[int, float], None]] = None,
) -> tuple[NetworkWeights, float]:
    """One damped-least-squares training run.

    A seeded random subset of round(fit_fraction * n) rows is fitted; the
    returned final MSE is over all rows (normalized targets), which is what
    the 25-run consistency statistics aggregate.  ``fit_fraction=1.0`` fits
    the full batch.  ``on_step`` is called with (epoch, fit_mse) after each
    accepted step.  With max_epochs=0 the seeded initialization is returned
    untouched.
    """
    if not (0.0 < fit_fraction <= 1.0):
        raise ValueError("fit_fraction must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    weights, biases = _init_weights(spec, rng)
    model = NetworkWeights(
        spec=spec,
        weights=weights,
        biases=biases,
        input_range=AffineRange.from_values(data.alphas),
        target_ranges=(
            AffineRange.from_values(data.taus),
            AffineRange.from_values(data.xis),
        ),
        seed=seed,
    )
    x_all = model.input_range.normalize(data.alphas)
    t_all = np.column_stack([
        model.target_ranges[0].normalize(data.taus),
        model.target_ranges[1].normalize(data.xis),
    ]).ravel()  # sample-major, matching the jacobian rows

    n = len(data)
    n_fit = min(n, max(2, int(round(fit_fraction * n))))
    if n_fit < n:
        fit_idx = np.sort(rng.permutation(n)[:n_fit])
    else:
        fit_idx = np.arange(n)
    x = x_all[fit_idx]
    t_fit = t_all.reshape(n, 2)[fit_idx].ravel()

    def residual(theta: np.ndarray) -> tuple[np.ndarray, float]:
        ws, bs = _unpack(theta, spec)
        model.weights, model.biases = ws, bs
        pred = _forward_normalized(model, x)[-1].T.ravel()
        r = pred - t_fit
        return r, float(np.mean(r * r))

    theta = _pack(weights, biases)
    r, mse = residual(theta)
    lam = _LAMBDA0
    epochs = 0
    while epochs < max_epochs and mse > _MSE_STOP and lam <= _LAMBDA_MAX:
        ws, bs = _unpack(theta, spec)
        model.weights, model.biases = ws, bs
        acts = _forward_normalized(model, x)
        J = _jacobian(model, acts)
        if not np.all(np.isfinite(J)):
            raise TrainingFailure(f"non-finite jacobian at epoch {epochs} (seed {seed})")
        accepted = False
        while lam <= _LAMBDA_MAX:
            delta = _lm_step(J, -r, lam)
            cand = theta + delta
            r2, mse2 = residual(cand)
            if mse2 < mse:
                theta, r, mse = cand, r2, mse2
                lam /= _LAMBDA_FACTOR
                accepted = True
                break
            lam *= _LAMBDA_FACTOR
        epochs += 1
        if not accepted:
            break
        if on_step is not None:
            on_step(epochs, mse)

    model.weights, model.biases = _unpack(theta, spec)
    pred_all = _forward_normalized(model, x_all)[-1].T.ravel()
    full_mse = float(np.mean((pred_all - t_all) ** 2))
    model.final_mse = full_mse
    model.epochs_run = epochs
    return model, full_mse


# ---------------------------------------------------------------------------
# sweep


@dataclass
class TrainingReport:
    """25-run consistency statistics for one architecture."""

    spec: NetworkSpec
    runs: int
    per_run_mse: np.ndarray      # successful runs only
    best_weights: Optional[NetworkWeights]
    failed_runs: int = 0

    @property
    def avg_mse(self) -> float:
        return float(np.mean(self.per_run_mse)) if len(self.per_run_mse) else math.inf

    @property
    def min_mse(self) -> float:
        return float(np.min(self.per_run_mse)) if len(self.per_run_mse) else math.inf

    @property
    def std_mse(self) -> float:
        return float(np.std(self.per_run_mse)) if len(self.per_run_mse) else math.inf


def sweep_specs() -> list[NetworkSpec]:
    """The 30 architectures of the consistency study, in report order."""
    specs = []
    for n in NEURON_CHOICES:
        for a in ACTIVATIONS:
            specs.append(NetworkSpec(1, n, (a,)))
    for n in NEURON_CHOICES:
        for a1 in ACTIVATIONS:
            for a2 in ACTIVATIONS:
                specs.append(NetworkSpec(2, n, (a1, a2)))
    return specs


def train_best_of(
    spec: NetworkSpec,
    data: Dataset,
    runs: int,
    seed: int,
    max_epochs: int = DEFAULT_MAX_EPOCHS,
) -> TrainingReport:
    """Train `runs` times with seeds seed, seed+1, ...; keep the best weights."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    mses: list[float] = []
    best: Optional[NetworkWeights] = None
    failed = 0
    for k in range(runs):
        try:
            model, mse = train(spec, data, seed + k, max_epochs)
        except TrainingFailure:
            failed += 1
            continue
        mses.append(mse)
        if best is None or mse < best.final_mse:
            best = model
    return TrainingReport(spec, runs, np.array(mses), best, failed)


def sweep(
    data: Dataset,
    runs: int = 25,
    seed: int = 0,
    max_epochs: int = DEFAULT_MAX_EPOCHS,
) -> list[TrainingReport]:
    """Retrain all 30 architectures `runs` times each.

    Run k of configuration index c uses seed  seed + 10000*c + k, so the
    whole sweep is reproducible and configurations are independent.
    """
    return [
        train_best_of(spec, data, runs, seed + 10_000 * c, max_epochs)
        for c, spec in enumerate(sweep_specs())
    ]


# ---------------------------------------------------------------------------
# persistence


def save_model(w: NetworkWeights, path: str) -> None:
    """Self-describing JSON model file; floats round-trip exactly."""
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "spec": {
            "hidden_layers": w.spec.hidden_layers,
            "neurons_per_layer": w.spec.neurons_per_layer,
            "activations": list(w.spec.activations),
        },
        "input_range": [w.input_range.lo, w.input_range.hi],
        "target_ranges": [[r.lo, r.hi] for r in w.target_ranges],
        "weights": [m.tolist() for m in w.weights],
        "biases": [b.tolist() for b in w.biases],
        "training": {
            "seed": w.seed,
            "final_mse": w.final_mse,
            "epochs": w.epochs_run,
        },
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path: str) -> NetworkWeights:
    with open(path) as fh:
        doc = json.load(fh)
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {version!r}")
    spec = NetworkSpec(
        hidden_layers=doc["spec"]["hidden_layers"],
        neurons_per_layer=doc["spec"]["neurons_per_layer"],
        activations=tuple(doc["spec"]["activations"]),
    )
    tr = doc["training"]
    return NetworkWeights(
        spec=spec,
        weights=[np.array(m, dtype=float) for m in doc["weights"]],
        biases=[np.array(b, dtype=float) for b in doc["biases"]],
        input_range=AffineRange(*doc["input_range"]),
        target_ranges=tuple(AffineRange(lo, hi) for lo, hi in doc["target_ranges"]),  # type: ignore[arg-type]
        seed=tr["seed"],
        final_mse=tr["final_mse"],
        epochs_run=tr["epochs"],
    )
