"""Single-hidden-layer surrogate for the modified k-value.

The network maps six raw inputs (slab and base thickness, slab, base and
subgrade moduli, bond ratio; SI units) to k in pci.  Inputs and target are
scaled linearly to [-1, 1]; the hidden layer is a log-sigmoid with steepness
``phi`` and the output layer is linear.

Training is Levenberg-Marquardt on the training-split mean square error with
an analytic Jacobian, damping multiplied by 10 on a rejected step and divided
by 10 on an accepted one.  The weights with the lowest validation RMSE seen
are returned.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import linalg

from .errors import DomainError, ExtrapolationWarning, ModelFormatError, TrainingError
from .units import MPA

N_INPUTS = 6
INPUT_NAMES = ("h_s_m", "h_b_m", "e_slab_pa", "e_base_pa", "e_subgrade_pa", "delta")

#: Factorial levels of the training grid, SI units, in INPUT_NAMES order.
GRID_LEVELS = (
    tuple(x * 1e-3 for x in (178, 216, 254, 292, 330)),
    tuple(x * 1e-3 for x in (89, 127, 165.1, 203.2, 254)),
    tuple(x * MPA for x in (20784, 31026, 41368, 51710, 62052, 75842)),
    tuple(x * MPA for x in (34.5, 690, 1724, 3447, 5171, 6895)),
    tuple(x * MPA for x in (34.5, 69, 138, 276, 414, 551)),
    (0.0, 0.25, 0.5, 0.75, 1.0),
)

MODEL_FORMAT = "rigidpave-ann"
MODEL_VERSION = 1

_LAMBDA0 = 1e-3
_LAMBDA_MAX = 1e10


@dataclass(frozen=True)
class NormalizationSpec:
    """Linear maps of inputs and target onto [-1, 1]."""

    x_min: tuple
    x_max: tuple
    y_min: float
    y_max: float

    def __post_init__(self):
        if len(self.x_min) != len(self.x_max):
            raise ModelFormatError("input bound vectors differ in length")
        if any(hi <= lo for lo, hi in zip(self.x_min, self.x_max)) or not self.y_max > self.y_min:
            raise ModelFormatError("every normalisation range needs max > min")

    @classmethod
    def from_levels(cls, levels, y_min: float, y_max: float) -> "NormalizationSpec":
        return cls(tuple(float(min(l)) for l in levels), tuple(float(max(l)) for l in levels), float(y_min), float(y_max))

    def normalize_x(self, x):
        lo, hi = np.asarray(self.x_min), np.asarray(self.x_max)
        return 2.0 * (np.asarray(x, dtype=float) - lo) / (hi - lo) - 1.0

    def denormalize_x(self, xn):
        lo, hi = np.asarray(self.x_min), np.asarray(self.x_max)
        return lo + (np.asarray(xn, dtype=float) + 1.0) * (hi - lo) / 2.0

    def normalize_y(self, y):
        return 2.0 * (np.asarray(y, dtype=float) - self.y_min) / (self.y_max - self.y_min) - 1.0

    def denormalize_y(self, yn):
        return self.y_min + (np.asarray(yn, dtype=float) + 1.0) * (self.y_max - self.y_min) / 2.0


@dataclass
class AnnModel:
    """6-H-1 network.  ``w_hidden`` is H x 6, the rest are vectors/scalars."""

    w_hidden: np.ndarray
    b_hidden: np.ndarray
    w_out: np.ndarray
    b_out: float
    norm: NormalizationSpec
    phi: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.w_hidden = np.asarray(self.w_hidden, dtype=float)
        self.b_hidden = np.asarray(self.b_hidden, dtype=float)
        self.w_out = np.asarray(self.w_out, dtype=float)
        self.b_out = float(self.b_out)
        h = self.w_hidden.shape[0]
        if (
            self.w_hidden.ndim != 2
            or self.w_hidden.shape[1] != len(self.norm.x_min)
            or self.b_hidden.shape != (h,)
            or self.w_out.shape != (h,)
        ):
            raise ModelFormatError(
                f"inconsistent dimensions: hidden {self.w_hidden.shape}, "
                f"biases {self.b_hidden.shape}, output {self.w_out.shape}"
            )
        if not self.phi > 0:
            raise ModelFormatError("sigmoid steepness must be positive")

    @property
    def hidden(self) -> int:
        return self.w_hidden.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.w_hidden.shape[1]

    def params(self) -> np.ndarray:
        return pack(self.w_hidden, self.b_hidden, self.w_out, self.b_out)

    def with_params(self, theta) -> "AnnModel":
        w1, b1, w2, b2 = unpack(theta, self.hidden, self.n_inputs)
        return AnnModel(w1, b1, w2, b2, self.norm, self.phi, dict(self.meta))


def pack(w1, b1, w2, b2) -> np.ndarray:
    return np.concatenate([np.ravel(w1), np.ravel(b1), np.ravel(w2), [b2]])


def unpack(theta, hidden: int, n_in: int = N_INPUTS):
    theta = np.asarray(theta, dtype=float)
    n1 = hidden * n_in
    if theta.size != n1 + 2 * hidden + 1:
        raise ModelFormatError(f"parameter vector of length {theta.size} does not fit {n_in}-{hidden}-1")
    w1 = theta[:n1].reshape(hidden, n_in)
    b1 = theta[n1 : n1 + hidden]
    w2 = theta[n1 + hidden : n1 + 2 * hidden]
    return w1, b1, w2, float(theta[-1])


def logsig(x, phi: float = 1.0):
    """Log-sigmoid 1/(1+exp(-phi x)), evaluated without overflow."""
    return 0.5 * (1.0 + np.tanh(0.5 * phi * np.asarray(x, dtype=float)))


def _hidden(theta, xn, hidden, phi):
    w1, b1, w2, b2 = unpack(theta, hidden, xn.shape[1])
    a = logsig(xn @ w1.T + b1, phi)
    return a, w1, w2, b2


def net_output(theta, xn, hidden: int, phi: float = 1.0) -> np.ndarray:
    """Normalised output for normalised inputs ``xn`` (N x n_in)."""
    a, _, w2, b2 = _hidden(theta, xn, hidden, phi)
    return a @ w2 + b2


def jacobian(theta, xn, hidden: int, phi: float = 1.0) -> np.ndarray:
    """d output / d theta, one row per sample, in :func:`pack` order."""
    xn = np.asarray(xn, dtype=float)
    a, _, w2, _ = _hidden(theta, xn, hidden, phi)
    n, n_in = xn.shape
    # d a_j / d z_j = phi a (1 - a); chain through the linear output weight
    g = phi * a * (1.0 - a) * w2
    d_w1 = (g[:, :, None] * xn[:, None, :]).reshape(n, hidden * n_in)
    return np.hstack([d_w1, g, a, np.ones((n, 1))])


def init_params(hidden: int, n_in: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform in [-0.5, 0.5] scaled by 1/sqrt(fan-in)."""
    w1 = rng.uniform(-0.5, 0.5, (hidden, n_in)) / math.sqrt(n_in)
    b1 = rng.uniform(-0.5, 0.5, hidden) / math.sqrt(n_in)
    w2 = rng.uniform(-0.5, 0.5, hidden) / math.sqrt(hidden)
    b2 = rng.uniform(-0.5, 0.5) / math.sqrt(hidden)
    return pack(w1, b1, w2, b2)


def _check_range(model: AnnModel, x: np.ndarray, guard: float):
    lo, hi = np.asarray(model.norm.x_min), np.asarray(model.norm.x_max)
    span = hi - lo
    bad = (x < lo - guard * span) | (x > hi + guard * span)
    if np.any(bad):
        cols = sorted({INPUT_NAMES[j] if j < len(INPUT_NAMES) else str(j) for j in np.nonzero(bad)[1]})
        warnings.warn(
            f"inputs outside the training range by more than {guard:.0%}: {', '.join(cols)}",
            ExtrapolationWarning,
            stacklevel=3,
        )
        return True
    return False


def forward(model: AnnModel, x, guard: float = 0.10) -> np.ndarray | float:
    """k prediction (pci) for one input row or an N x 6 array of raw inputs."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x2 = np.atleast_2d(x)
    _check_range(model, x2, guard)
    yn = net_output(model.params(), model.norm.normalize_x(x2), model.hidden, model.phi)
    y = model.norm.denormalize_y(yn)
    return float(y[0]) if single else y


def evaluate(model: AnnModel, x, y) -> tuple[float, float]:
    """RMSE (pci) and coefficient of determination."""
    y = np.asarray(y, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExtrapolationWarning)
        pred = forward(model, np.atleast_2d(x))
    return rmse_r2(y, pred)


def rmse_r2(y, pred) -> tuple[float, float]:
    y, pred = np.asarray(y, dtype=float), np.asarray(pred, dtype=float)
    if y.size == 0:
        raise DomainError("no samples to evaluate")
    resid = y - pred
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise DomainError("R^2 undefined for zero-variance targets")
    return float(np.sqrt(np.mean(resid**2))), 1.0 - float(np.sum(resid**2)) / ss_tot


def split(n: int, seed: int, ratio: tuple[int, int] = (4, 1)) -> np.ndarray:
    """Boolean training mask with ``round(n*4/5)`` True entries."""
    if n < sum(ratio):
        raise DomainError(f"need at least {sum(ratio)} rows to split, got {n}")
    n_train = int(round(n * ratio[0] / sum(ratio)))
    perm = np.random.default_rng(seed).permutation(n)
    mask = np.zeros(n, dtype=bool)
    mask[perm[:n_train]] = True
    return mask


@dataclass
class TrainingHistory:
    epoch: list = field(default_factory=list)
    lam: list = field(default_factory=list)
    train_rmse: list = field(default_factory=list)
    val_rmse: list = field(default_factory=list)
    #: training MSE (normalised units) after every accepted step
    train_mse: list = field(default_factory=list)
    stop_reason: str = ""
    best_epoch: int = 0

    def rows(self):
        return list(zip(self.epoch, self.lam, self.train_rmse, self.val_rmse))


def _mse(theta, xn, yn, hidden, phi):
    r = yn - net_output(theta, xn, hidden, phi)
    return float(r @ r) / r.size


def train_lm(
    x,
    y,
    train_mask,
    *,
    hidden: int = 20,
    seed: int = 0,
    max_epochs: int = 1000,
    max_fail: int = 6,
    min_grad: float = 1e-7,
    phi: float = 1.0,
    norm: NormalizationSpec | None = None,
) -> tuple[AnnModel, TrainingHistory]:
    """Levenberg-Marquardt training on the rows where ``train_mask`` is True.

    Stops on a gradient norm below ``min_grad``, damping above 1e10,
    ``max_fail`` consecutive rises of the validation RMSE, or ``max_epochs``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    train_mask = np.asarray(train_mask, dtype=bool)
    if not train_mask.any():
        raise TrainingError("empty training split")
    if norm is None:
        norm = NormalizationSpec.from_levels(x.T, y.min(), y.max()) if y.max() > y.min() else None
        if norm is None:
            raise TrainingError("constant targets cannot be normalised")
    xn, yn = norm.normalize_x(x), norm.normalize_y(y)
    xt, yt = xn[train_mask], yn[train_mask]
    xv, yv = xn[~train_mask], yn[~train_mask]
    has_val = xv.shape[0] > 0
    scale = (norm.y_max - norm.y_min) / 2.0  # normalised -> pci

    def val_rmse(th):
        if not has_val:
            return math.nan
        r = yv - net_output(th, xv, hidden, phi)
        return float(np.sqrt(np.mean(r**2))) * scale

    theta = init_params(hidden, x.shape[1], np.random.default_rng(seed))
    lam = _LAMBDA0
    mse = _mse(theta, xt, yt, hidden, phi)
    hist = TrainingHistory()
    best = (val_rmse(theta) if has_val else math.sqrt(mse) * scale, theta.copy(), 0)
    prev_val, fails = best[0], 0
    eye = np.eye(theta.size)

    for epoch in range(1, max_epochs + 1):
        j = jacobian(theta, xt, hidden, phi)
        e = yt - net_output(theta, xt, hidden, phi)
        jtj, jte = j.T @ j, j.T @ e
        if not np.all(np.isfinite(jtj)):
            raise TrainingError(f"non-finite Jacobian at epoch {epoch}")
        if np.linalg.norm(2.0 * jte / e.size) < min_grad:
            hist.stop_reason = "gradient"
            break
        accepted = False
        while lam <= _LAMBDA_MAX:
            try:
                step = linalg.cho_solve(linalg.cho_factor(jtj + lam * eye), jte)
            except linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = theta + step
            trial_mse = _mse(trial, xt, yt, hidden, phi)
            if not math.isfinite(trial_mse):
                raise TrainingError(f"non-finite loss at epoch {epoch} (lambda={lam:.1e})")
            if trial_mse <= mse:
                theta, mse, accepted = trial, trial_mse, True
                lam /= 10.0
                break
            lam *= 10.0
        if not accepted:
            hist.stop_reason = "lambda"
            break
        v = val_rmse(theta)
        hist.epoch.append(epoch)
        hist.lam.append(lam)
        hist.train_rmse.append(math.sqrt(mse) * scale)
        hist.val_rmse.append(v)
        hist.train_mse.append(mse)
        crit = v if has_val else math.sqrt(mse) * scale
        if crit < best[0]:
            best = (crit, theta.copy(), epoch)
        if has_val:
            fails = fails + 1 if v > prev_val else 0
            prev_val = v
            if fails >= max_fail:
                hist.stop_reason = "validation"
                break
    else:
        hist.stop_reason = "budget"

    hist.best_epoch = best[2]
    w1, b1, w2, b2 = unpack(best[1], hidden, x.shape[1])
    meta = {
        "trainer": "levenberg-marquardt",
        "seed": int(seed),
        "epochs": len(hist.epoch),
        "best_epoch": best[2],
        "stop_reason": hist.stop_reason,
        "target_unit": "pci",
    }
    return AnnModel(w1, b1, w2, b2, norm, phi, meta), hist


def train_gd(
    x,
    y,
    train_mask,
    *,
    hidden: int = 20,
    seed: int = 0,
    epochs: int = 2000,
    rate: float = 0.05,
    phi: float = 1.0,
) -> tuple[AnnModel, TrainingHistory]:
    """Full-batch gradient descent on the same objective, for comparison runs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    train_mask = np.asarray(train_mask, dtype=bool)
    norm = NormalizationSpec.from_levels(x.T, y.min(), y.max())
    xn, yn = norm.normalize_x(x), norm.normalize_y(y)
    xt, yt = xn[train_mask], yn[train_mask]
    xv, yv = xn[~train_mask], yn[~train_mask]
    scale = (norm.y_max - norm.y_min) / 2.0
    theta = init_params(hidden, x.shape[1], np.random.default_rng(seed))
    hist = TrainingHistory()
    for epoch in range(1, epochs + 1):
        e = yt - net_output(theta, xt, hidden, phi)
        grad = -2.0 * jacobian(theta, xt, hidden, phi).T @ e / e.size
        theta = theta - rate * grad
        mse = _mse(theta, xt, yt, hidden, phi)
        hist.epoch.append(epoch)
        hist.lam.append(rate)
        hist.train_rmse.append(math.sqrt(mse) * scale)
        hist.train_mse.append(mse)
        rv = yv - net_output(theta, xv, hidden, phi) if xv.size else np.array([math.nan])
        hist.val_rmse.append(float(np.sqrt(np.mean(rv**2))) * scale)
    hist.stop_reason = "budget"
    hist.best_epoch = epochs
    w1, b1, w2, b2 = unpack(theta, hidden, x.shape[1])
    meta = {"trainer": "gradient-descent", "seed": int(seed), "epochs": epochs, "target_unit": "pci"}
    return AnnModel(w1, b1, w2, b2, norm, phi, meta), hist


def to_json(model: AnnModel) -> str:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "topology": [model.n_inputs, model.hidden, 1],
        "inputs": list(INPUT_NAMES[: model.n_inputs]),
        "target_unit": "pci",
        "phi": model.phi,
        "normalization": {
            "x_min": list(model.norm.x_min),
            "x_max": list(model.norm.x_max),
            "y_min": model.norm.y_min,
            "y_max": model.norm.y_max,
        },
        "weights": {
            "hidden": model.w_hidden.tolist(),
            "hidden_bias": model.b_hidden.tolist(),
            "output": model.w_out.tolist(),
            "output_bias": model.b_out,
        },
        "meta": model.meta,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def from_json(text: str) -> AnnModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not valid JSON: {exc}") from exc
    if doc.get("format") != MODEL_FORMAT or doc.get("version") != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model format {doc.get('format')!r} v{doc.get('version')!r}")
    try:
        n_in, hidden, n_out = doc["topology"]
        nm, w = doc["normalization"], doc["weights"]
        w1 = np.asarray(w["hidden"], dtype=float)
        if n_out != 1 or w1.shape != (hidden, n_in):
            raise ModelFormatError(f"weights {w1.shape} do not match topology {doc['topology']}")
        norm = NormalizationSpec(tuple(nm["x_min"]), tuple(nm["x_max"]), nm["y_min"], nm["y_max"])
        return AnnModel(w1, w["hidden_bias"], w["output"], w["output_bias"], norm, doc["phi"], doc.get("meta", {}))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model file: {exc}") from exc


def save_model(model: AnnModel, path) -> None:
    Path(path).write_text(to_json(model))


def load_model(path) -> AnnModel:
    return from_json(Path(path).read_text())
