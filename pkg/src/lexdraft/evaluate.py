"""Loss and perplexity over any next-character model.

A model is anything with a `vocab` attribute and a
`distribution(context_ids) -> numpy array` method whose output sums to 1 over
the vocabulary.
"""

from __future__ import annotations

import math

from .corpus import EOS, encode
from .errors import EmptyCorpus


def evaluate_loss(lm, texts: list[str]) -> float:
    """Mean negative log-likelihood (nats) of next-character prediction.

    Every prediction position across the corpus is weighted equally; each
    text contributes len(text)+1 positions, the final one targeting EOS.
    """
    if not texts:
        raise EmptyCorpus("no documents")
    total = 0.0
    positions = 0
    for text in texts:
        ids = encode(text, lm.vocab)
        context: list[int] = []
        for target in ids + [EOS]:
            p = lm.distribution(context)[target]
            total += -math.log(p) if p > 0 else math.inf
            context.append(target)
            positions += 1
    if positions == 0:
        raise EmptyCorpus("no prediction positions")
    return total / positions


def perplexity(loss: float) -> float:
    """exp of a mean NLL in nats."""
    return math.exp(loss)
