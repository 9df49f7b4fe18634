"""LEXLM1 model persistence.

Layout: a text manifest of tab-separated key/value lines ending with "end",
followed by a raw little-endian float64 payload. The vocabulary itself lives
in a sibling LEXVOC1 file; the manifest pins it by hash.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import Vocabulary, read_vocabulary, save_vocabulary
from .errors import BadModelFile, VocabMismatch
from .neural import PARAM_NAMES, NeuralLm
from .ngram import KneserNeyModel
from .remote import vocab_hash

MAGIC = b"LEXLM1\n"


def _kn_payload(model: KneserNeyModel) -> np.ndarray:
    chunks = []
    for k in range(1, model.order + 1):
        entries = []
        for ctx in sorted(model.tables[k]):
            children = model.tables[k][ctx]
            for w in sorted(children):
                entries.append(list(ctx) + [w, children[w]])
        chunks.append(np.array([len(entries)], dtype=np.float64))
        if entries:
            chunks.append(np.array(entries, dtype=np.float64).reshape(-1))
    return np.concatenate(chunks)


def _kn_from_payload(payload: np.ndarray, vocab, order: int, discount: float):
    tables: dict[int, dict[tuple, dict[int, int]]] = {}
    pos = 0
    for k in range(1, order + 1):
        n_entries = int(payload[pos])
        pos += 1
        table: dict[tuple, dict[int, int]] = {}
        width = k + 1
        block = payload[pos : pos + n_entries * width].reshape(n_entries, width)
        pos += n_entries * width
        for row in block:
            ctx = tuple(int(v) for v in row[: k - 1])
            table.setdefault(ctx, {})[int(row[k - 1])] = int(row[k])
        tables[k] = table
    return KneserNeyModel(vocab, order, discount, tables)


def save_model(model, path, vocab_path=None) -> None:
    """Write the model file and its sibling vocabulary file."""
    path = Path(path)
    if isinstance(model, KneserNeyModel):
        manifest = {
            "backend": "kneser-ney",
            "order": str(model.order),
            "discount": repr(model.discount),
        }
        payload = _kn_payload(model)
    elif isinstance(model, NeuralLm):
        manifest = {
            "backend": "neural",
            "context_len": str(model.context_len),
            "embed_dim": str(model.embed_dim),
            "hidden_dim": str(model.hidden_dim),
            "epochs_trained": str(model.epochs_trained),
        }
        payload = np.concatenate(
            [getattr(model, name).reshape(-1) for name in PARAM_NAMES]
        )
    else:
        raise BadModelFile(f"cannot persist {type(model).__name__}")
    manifest["vocab_size"] = str(len(model.vocab))
    manifest["vocab_hash"] = vocab_hash(model.vocab)
    manifest["payload_doubles"] = str(payload.shape[0])
    lines = [MAGIC.decode()]
    for key, value in manifest.items():
        lines.append(f"{key}\t{value}\n")
    lines.append("end\n")
    with open(path, "wb") as f:
        f.write("".join(lines).encode("utf-8"))
        f.write(payload.astype("<f8").tobytes())
    save_vocabulary(model.vocab, vocab_path or path.with_suffix(path.suffix + ".voc"))


def load_model(path, vocab: Vocabulary | None = None):
    """Read a LEXLM1 file; the vocabulary comes from `vocab` or <path>.voc."""
    path = Path(path)
    with open(path, "rb") as f:
        data = f.read()
    if not data.startswith(MAGIC):
        raise BadModelFile("not a LEXLM1 file")
    header_end = data.find(b"end\n", len(MAGIC))
    if header_end < 0:
        raise BadModelFile("unterminated manifest")
    manifest = {}
    for line in data[len(MAGIC) : header_end].decode("utf-8").splitlines():
        key, value = line.split("\t", 1)
        manifest[key] = value
    payload = np.frombuffer(data[header_end + 4 :], dtype="<f8")
    if payload.shape[0] != int(manifest["payload_doubles"]):
        raise BadModelFile("payload length mismatch")
    if vocab is None:
        vocab = read_vocabulary(path.with_suffix(path.suffix + ".voc"))
    if len(vocab) != int(manifest["vocab_size"]):
        raise VocabMismatch("vocabulary size differs from manifest")
    if vocab_hash(vocab) != manifest["vocab_hash"]:
        raise VocabMismatch("vocabulary hash differs from manifest")

    backend = manifest["backend"]
    if backend == "kneser-ney":
        return _kn_from_payload(
            payload, vocab, int(manifest["order"]), float(manifest["discount"])
        )
    if backend == "neural":
        model = NeuralLm(
            vocab,
            int(manifest["context_len"]),
            int(manifest["embed_dim"]),
            int(manifest["hidden_dim"]),
        )
        model.epochs_trained = int(manifest["epochs_trained"])
        pos = 0
        for name in PARAM_NAMES:
            arr = getattr(model, name)
            arr[...] = payload[pos : pos + arr.size].reshape(arr.shape)
            pos += arr.size
        return model
    raise BadModelFile(f"unknown backend {backend!r}")
