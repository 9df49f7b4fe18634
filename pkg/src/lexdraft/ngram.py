"""Interpolated Kneser-Ney character n-gram model.

Count-based and trained in a single pass, so it serves as the instant local
backend for pipeline and decoding work. Probability of a character w after
context c interpolates discounted raw counts with the lower order:

    P(w|c) = max(count(cw) - D, 0)/count(c) + D * N1+(c.)/count(c) * P(w|c')

where c' drops the leftmost context character. The recursion bottoms out in a
continuation-count unigram smoothed toward uniform 1/|V|; a context with no
observations backs off directly to the lower order.
"""

from __future__ import annotations

import numpy as np

from .corpus import BOS, EOS, Vocabulary, encode
from .errors import EmptyCorpus


class KneserNeyModel:
    def __init__(self, vocab: Vocabulary, order: int, discount: float, tables):
        if not 1 <= order <= 6:
            raise ValueError("order must be in 1..6")
        if not 0.0 < discount < 1.0:
            raise ValueError("discount must be in (0, 1)")
        self.vocab = vocab
        self.order = order
        self.discount = discount
        # tables[k] maps a (k-1)-tuple context to {token id: count}
        self.tables: dict[int, dict[tuple, dict[int, int]]] = tables
        self._totals = {
            k: {ctx: sum(children.values()) for ctx, children in table.items()}
            for k, table in tables.items()
        }
        self._base = self._build_base()

    def _build_base(self) -> np.ndarray:
        size = len(self.vocab)
        d = self.discount
        if self.order == 1:
            counts = self.tables[1][()]
            total = sum(counts.values())
            base = np.full(size, d * len(counts) / total / size)
            for w, c in counts.items():
                base[w] += (c - d) / total
            return base
        # continuation unigram: how many distinct predecessors each token has
        predecessors: dict[int, int] = {}
        n_bigram_types = 0
        for children in self.tables[2].values():
            for w in children:
                predecessors[w] = predecessors.get(w, 0) + 1
                n_bigram_types += 1
        base = np.full(size, d * len(predecessors) / n_bigram_types / size)
        for w, n in predecessors.items():
            base[w] += (n - d) / n_bigram_types
        return base

    def _vec(self, ctx: tuple) -> np.ndarray:
        if not ctx:
            return self._base.copy()
        children = self.tables[len(ctx) + 1].get(ctx)
        if not children:
            return self._vec(ctx[1:])
        total = self._totals[len(ctx) + 1][ctx]
        d = self.discount
        v = (d * len(children) / total) * self._vec(ctx[1:])
        for w, c in children.items():
            if c > d:
                v[w] += (c - d) / total
        return v

    def distribution(self, context_ids) -> np.ndarray:
        if self.order == 1:
            return self._base.copy()
        padded = [BOS] * (self.order - 1) + list(context_ids)
        return self._vec(tuple(padded[-(self.order - 1) :]))


def kn_train(
    texts: list[str], vocab: Vocabulary, order: int = 5, discount: float = 0.75
) -> KneserNeyModel:
    """Count all k-grams, k <= order, over BOS-padded EOS-terminated texts."""
    if not texts:
        raise EmptyCorpus("no documents")
    tables: dict[int, dict[tuple, dict[int, int]]] = {
        k: {} for k in range(1, order + 1)
    }
    for text in texts:
        seq = [BOS] * (order - 1) + encode(text, vocab) + [EOS]
        for k in range(1, order + 1):
            table = tables[k]
            for i in range(len(seq) - k + 1):
                ctx = tuple(seq[i : i + k - 1])
                w = seq[i + k - 1]
                children = table.get(ctx)
                if children is None:
                    table[ctx] = {w: 1}
                else:
                    children[w] = children.get(w, 0) + 1
    return KneserNeyModel(vocab, order, discount, tables)


def kn_distribution(model: KneserNeyModel, context_ids) -> np.ndarray:
    return model.distribution(context_ids)
