"""Tiny trainable feed-forward next-character model.

A fixed window of the last `context_len` characters is embedded, concatenated,
passed through one tanh layer, and projected to vocabulary logits. It exists
to reproduce epoch-level training dynamics (loss curves, overfitting) at desk
scale, with hand-written gradients checked against finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import BOS, EOS, Vocabulary, encode
from .errors import EmptyCorpus, NonFiniteLoss
from .evaluate import evaluate_loss, perplexity
from .rng import SplitMix64, splitmix64

PARAM_NAMES = ("E", "W1", "b1", "W2", "b2")


@dataclass
class TrainConfig:
    epochs: int = 10
    batch_size: int = 32
    learning_rate: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class EpochRow:
    epoch: int
    train_loss: float
    val_loss: float


@dataclass
class TrainReport:
    rows: list[EpochRow]
    final_train_perplexity: float
    final_val_perplexity: float
    best_epoch: int
    best_val_loss: float
    best_model: "NeuralLm" = field(repr=False, default=None)

    def tsv(self) -> str:
        lines = ["epoch\ttrain_loss\tval_loss\ttrain_ppl\tval_ppl"]
        for r in self.rows:
            lines.append(
                f"{r.epoch}\t{r.train_loss:.6f}\t{r.val_loss:.6f}"
                f"\t{math.exp(r.train_loss):.4f}\t{math.exp(r.val_loss):.4f}"
            )
        return "\n".join(lines) + "\n"


class NeuralLm:
    def __init__(self, vocab: Vocabulary, context_len: int, embed_dim: int, hidden_dim: int):
        self.vocab = vocab
        self.context_len = context_len
        self.embed_dim = embed_dim
        self.hidden_dim = hidden_dim
        size = len(vocab)
        self.E = np.zeros((size, embed_dim))
        self.W1 = np.zeros((hidden_dim, context_len * embed_dim))
        self.b1 = np.zeros(hidden_dim)
        self.W2 = np.zeros((size, hidden_dim))
        self.b2 = np.zeros(size)
        self.epochs_trained = 0

    def params(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def clone(self) -> "NeuralLm":
        other = NeuralLm(self.vocab, self.context_len, self.embed_dim, self.hidden_dim)
        for name in PARAM_NAMES:
            setattr(other, name, getattr(self, name).copy())
        other.epochs_trained = self.epochs_trained
        return other

    def _pad(self, context_ids) -> list[int]:
        m = self.context_len
        padded = [BOS] * m + list(context_ids)
        return padded[-m:]

    def _forward_batch(self, ctx: np.ndarray):
        """ctx is (B, m) int array; returns x, a, probs."""
        batch = ctx.shape[0]
        x = self.E[ctx].reshape(batch, -1)
        a = np.tanh(x @ self.W1.T + self.b1)
        logits = a @ self.W2.T + self.b2
        shifted = logits - logits.max(axis=1, keepdims=True)
        expd = np.exp(shifted)
        probs = expd / expd.sum(axis=1, keepdims=True)
        return x, a, probs

    def distribution(self, context_ids) -> np.ndarray:
        ctx = np.array([self._pad(context_ids)], dtype=np.int64)
        return self._forward_batch(ctx)[2][0]


def nn_init(
    vocab: Vocabulary,
    context_len: int = 8,
    embed_dim: int = 32,
    hidden_dim: int = 64,
    seed: int = 0,
) -> NeuralLm:
    """Uniform(-0.1, 0.1) init from a splitmix64 stream, filled E,W1,b1,W2,b2."""
    if min(context_len, embed_dim, hidden_dim) < 1:
        raise ValueError("dimensions must be >= 1")
    model = NeuralLm(vocab, context_len, embed_dim, hidden_dim)
    rng = SplitMix64(seed)
    for name in PARAM_NAMES:
        arr = getattr(model, name)
        flat = arr.reshape(-1)
        for i in range(flat.shape[0]):
            flat[i] = rng.next_double() * 0.2 - 0.1
    return model


def nn_forward(model: NeuralLm, context_ids) -> np.ndarray:
    return model.distribution(context_ids)


def nn_positions(model: NeuralLm, texts: list[str]) -> tuple[np.ndarray, np.ndarray]:
    """All (context window, target) pairs of the corpus; targets include EOS."""
    contexts = []
    targets = []
    m = model.context_len
    for text in texts:
        ids = encode(text, model.vocab)
        padded = [BOS] * m + ids
        seq = ids + [EOS]
        for i, target in enumerate(seq):
            contexts.append(padded[i : i + m])
            targets.append(target)
    if not targets:
        raise EmptyCorpus("no prediction positions")
    return np.array(contexts, dtype=np.int64), np.array(targets, dtype=np.int64)


def nn_loss_and_grads(model: NeuralLm, ctx: np.ndarray, targets: np.ndarray):
    """Mean NLL of a batch and its gradients for every parameter group."""
    batch = ctx.shape[0]
    x, a, probs = model._forward_batch(ctx)
    picked = probs[np.arange(batch), targets]
    with np.errstate(divide="ignore"):  # zero prob surfaces as inf loss
        loss = float(-np.log(picked).mean())

    dlogits = probs.copy()
    dlogits[np.arange(batch), targets] -= 1.0
    dlogits /= batch
    grads = {
        "W2": dlogits.T @ a,
        "b2": dlogits.sum(axis=0),
    }
    da = dlogits @ model.W2
    dpre = da * (1.0 - a * a)
    grads["W1"] = dpre.T @ x
    grads["b1"] = dpre.sum(axis=0)
    dx = (dpre @ model.W1).reshape(batch, model.context_len, model.embed_dim)
    dE = np.zeros_like(model.E)
    np.add.at(dE, ctx.reshape(-1), dx.reshape(-1, model.embed_dim))
    grads["E"] = dE
    return loss, grads


def nn_train_epoch(model: NeuralLm, texts: list[str], config: TrainConfig):
    """One shuffled pass of mini-batch gradient descent; returns (model, loss).

    The reported loss is the position-weighted mean of batch losses measured
    before each update. The shuffle is derived from the config seed and the
    number of epochs already trained, so repeated calls advance identically
    across runs.
    """
    contexts, targets = nn_positions(model, texts)
    n = targets.shape[0]
    order = list(range(n))
    SplitMix64(splitmix64(config.seed ^ model.epochs_trained)).shuffle(order)
    order = np.array(order, dtype=np.int64)

    total = 0.0
    lr = config.learning_rate
    for start in range(0, n, config.batch_size):
        idx = order[start : start + config.batch_size]
        loss, grads = nn_loss_and_grads(model, contexts[idx], targets[idx])
        if not math.isfinite(loss):
            raise NonFiniteLoss(f"batch at offset {start}")
        total += loss * idx.shape[0]
        for name in PARAM_NAMES:
            getattr(model, name)[...] -= lr * grads[name]
    model.epochs_trained += 1
    return model, total / n


def train_loop(
    model: NeuralLm, train_texts: list[str], val_texts: list[str], config: TrainConfig
) -> TrainReport:
    """Epoch loop recording train/validation loss; keeps the best-val snapshot."""
    rows = []
    best_epoch = 0
    best_val = math.inf
    best_model = None
    for epoch in range(1, config.epochs + 1):
        model, train_loss = nn_train_epoch(model, train_texts, config)
        val_loss = evaluate_loss(model, val_texts)
        rows.append(EpochRow(epoch=epoch, train_loss=train_loss, val_loss=val_loss))
        if val_loss < best_val:
            best_val = val_loss
            best_epoch = epoch
            best_model = model.clone()
    return TrainReport(
        rows=rows,
        final_train_perplexity=perplexity(rows[-1].train_loss),
        final_val_perplexity=perplexity(rows[-1].val_loss),
        best_epoch=best_epoch,
        best_val_loss=best_val,
        best_model=best_model,
    )
