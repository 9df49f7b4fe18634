"""Text generation: greedy, beam search, and filtered sampling.

For sampling strategies the distribution is reshaped in a fixed composition
order -- temperature, then top-k, then top-p -- and a character is drawn by
inverse-CDF over ascending token ids using one splitmix64 double per step.
Ties everywhere break toward the lower token id, so every strategy is fully
deterministic given its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import EOS, decode, encode
from .rng import SplitMix64

STRATEGIES = ("greedy", "beam", "sample")


@dataclass
class DecodingConfig:
    strategy: str = "sample"
    k: int = 0  # 0 disables top-k
    p: float = 1.0  # 1 disables top-p
    temperature: float = 1.0
    beam_width: int = 1
    max_tokens: int = 500
    seed: int = 0

    def validate(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not 0.0 < self.p <= 1.0:
            raise ValueError("p must be in (0, 1]")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.beam_width < 1:
            raise ValueError("beam width must be >= 1")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")


@dataclass
class GenerationResult:
    text: str
    token_count: int
    finish_reason: str  # "eos" | "max_tokens"
    logprobs: list[float] = field(default_factory=list)


def apply_temperature(dist: np.ndarray, temperature: float) -> np.ndarray:
    """probs ** (1/T), renormalized in log space; zero entries stay zero."""
    if temperature == 1.0:
        return dist.copy()
    out = np.zeros_like(dist)
    support = dist > 0
    logw = np.log(dist[support]) / temperature
    logw -= logw.max()
    w = np.exp(logw)
    out[support] = w / w.sum()
    return out


def _rank_desc(dist: np.ndarray) -> np.ndarray:
    """Token ids sorted by descending probability, ties toward lower id."""
    return np.lexsort((np.arange(dist.shape[0]), -dist))


def filter_topk(dist: np.ndarray, k: int) -> np.ndarray:
    """Keep the k most probable tokens and renormalize; k=0 disables."""
    support = int(np.count_nonzero(dist > 0))
    if k == 0 or k >= support:
        return dist.copy()
    keep = _rank_desc(dist)[:k]
    out = np.zeros_like(dist)
    out[keep] = dist[keep]
    return out / out.sum()


def filter_topp(dist: np.ndarray, p: float) -> np.ndarray:
    """Keep the smallest probability-mass prefix reaching p; p=1 disables."""
    if p >= 1.0:
        return dist.copy()
    order = _rank_desc(dist)
    cum = 0.0
    keep = []
    for tok in order:
        if dist[tok] <= 0:
            break
        keep.append(tok)
        cum += dist[tok]
        if cum >= p:
            break
    out = np.zeros_like(dist)
    out[keep] = dist[keep]
    return out / out.sum()


def sample_token(dist: np.ndarray, rng: SplitMix64) -> int:
    """Inverse-CDF draw over ascending token ids; advances the rng state."""
    u = rng.next_double()
    cumulative = np.cumsum(dist)
    idx = int(np.searchsorted(cumulative, u, side="right"))
    if idx >= dist.shape[0]:
        idx = int(np.max(np.nonzero(dist > 0)[0]))
    return idx


def _shaped(dist, config):
    d = apply_temperature(dist, config.temperature)
    d = filter_topk(d, config.k)
    return filter_topp(d, config.p)


def generate(lm, prompt: str, config: DecodingConfig, allow_unk: bool = True) -> GenerationResult:
    """Autoregressive loop; stops on EOS or after max_tokens characters."""
    config.validate()
    if config.strategy == "beam":
        return beam_search(lm, prompt, config.beam_width, config.max_tokens, allow_unk)
    context = encode(prompt, lm.vocab, strict=not allow_unk)
    rng = SplitMix64(config.seed)
    generated: list[int] = []
    logprobs: list[float] = []
    finish = "max_tokens"
    for _ in range(config.max_tokens):
        dist = _shaped(lm.distribution(context), config)
        if config.strategy == "greedy":
            tok = int(np.argmax(dist))
        else:
            tok = sample_token(dist, rng)
        logprobs.append(math.log(dist[tok]))
        if tok == EOS:
            finish = "eos"
            break
        generated.append(tok)
        context.append(tok)
    return GenerationResult(
        text=decode(generated, lm.vocab),
        token_count=len(generated),
        finish_reason=finish,
        logprobs=logprobs,
    )


def beam_search(
    lm, prompt: str, beam_width: int, max_tokens: int, allow_unk: bool = True
) -> GenerationResult:
    """Breadth-limited search by cumulative ln-probability, no length penalty.

    Each step ranks every extension of every active hypothesis by
    (score desc, token id asc, parent index asc) and keeps the best
    beam_width; hypotheses that extend with EOS retire to a finished pool.
    Returns the best finished hypothesis, else the best active one.
    """
    if beam_width < 1:
        raise ValueError("beam width must be >= 1")
    prompt_ids = encode(prompt, lm.vocab, strict=not allow_unk)
    # hypothesis: (tokens tuple, score, logprobs tuple)
    active = [((), 0.0, ())]
    pool: list[tuple[tuple, float, tuple]] = []
    for _ in range(max_tokens):
        if not active:
            break
        if pool and max(h[1] for h in pool) > active[0][1]:
            break  # no active hypothesis can catch up; ln-probs only shrink
        candidates = []
        for parent_idx, (tokens, score, lps) in enumerate(active):
            dist = lm.distribution(prompt_ids + list(tokens))
            for tok in _rank_desc(dist)[:beam_width]:
                prob = dist[tok]
                if prob <= 0:
                    break
                lp = math.log(prob)
                candidates.append(
                    (score + lp, int(tok), parent_idx, lps + (lp,))
                )
        candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
        next_active = []
        for score, tok, parent_idx, lps in candidates[:beam_width]:
            tokens = active[parent_idx][0]
            if tok == EOS:
                pool.append((tokens, score, lps))
            else:
                next_active.append((tokens + (tok,), score, lps))
        active = next_active
    if pool:
        tokens, score, lps = max(pool, key=lambda h: h[1])
        finish = "eos"
    else:
        tokens, score, lps = active[0]
        finish = "max_tokens"
    return GenerationResult(
        text=decode(list(tokens), lm.vocab),
        token_count=len(tokens),
        finish_reason=finish,
        logprobs=list(lps),
    )
