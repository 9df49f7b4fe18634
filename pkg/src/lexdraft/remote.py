"""Adapter exposing an externally served next-character model.

The wire protocol is one endpoint: POST <base>/v1/next with JSON
{"context": string, "vocab_hash": string}, answered by {"probs": [...]} over
the shared character vocabulary.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from urllib.parse import urlparse

import numpy as np
import requests

from .corpus import Vocabulary, decode, dump_vocabulary
from .errors import BadResponse, Unreachable, VocabMismatch

NORMALIZATION_DRIFT = 1e-6


def vocab_hash(vocab: Vocabulary) -> str:
    """Stable identity of a vocabulary: sha256 of its LEXVOC1 serialization."""
    return hashlib.sha256(dump_vocabulary(vocab).encode("utf-8")).hexdigest()


@dataclass
class RemoteLmEndpoint:
    base_url: str
    timeout: float = 10.0
    model_name: str = ""

    def __post_init__(self):
        parsed = urlparse(self.base_url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise ValueError(f"invalid base URL: {self.base_url!r}")


def remote_distribution(
    endpoint: RemoteLmEndpoint, context: str, vocab: Vocabulary
) -> np.ndarray:
    """Fetch, validate, and renormalize the next-character distribution."""
    url = endpoint.base_url.rstrip("/") + "/v1/next"
    try:
        resp = requests.post(
            url,
            json={"context": context, "vocab_hash": vocab_hash(vocab)},
            timeout=endpoint.timeout,
        )
    except (requests.ConnectionError, requests.Timeout) as e:
        raise Unreachable(str(e)) from None
    if resp.status_code != 200:
        try:
            err = resp.json().get("error", "")
        except ValueError:
            err = ""
        if err == "vocab_mismatch":
            raise VocabMismatch(endpoint.base_url)
        raise BadResponse(f"status {resp.status_code}")
    try:
        probs = resp.json()["probs"]
    except (ValueError, KeyError, TypeError):
        raise BadResponse("missing probs field") from None
    arr = np.asarray(probs, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != len(vocab):
        raise BadResponse(f"expected {len(vocab)} probabilities, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise BadResponse("probabilities must be finite and non-negative")
    total = float(arr.sum())
    if abs(total - 1.0) > NORMALIZATION_DRIFT:
        raise BadResponse(f"probabilities sum to {total}")
    return arr / total


class RemoteLm:
    """Language-model interface backed by remote_distribution."""

    def __init__(self, endpoint: RemoteLmEndpoint, vocab: Vocabulary):
        self.endpoint = endpoint
        self.vocab = vocab

    def distribution(self, context_ids) -> np.ndarray:
        return remote_distribution(
            self.endpoint, decode(list(context_ids), self.vocab), self.vocab
        )
