"""Gold-labeled synthetic criminal-facts corpora.

Each document instantiates the canonical element-order template: one lexicon
phrase per tag, joined by connective fillers. The planted span offsets are
returned as gold labels, so the tagger can be scored with an exact oracle.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass

from .corpus import VerdictRecord
from .elements import CANONICAL_ORDER, ElementTag, Gap, LexPattern, Lexicon, TaggedSpan
from .errors import IncompleteLexicon
from .rng import SplitMix64

# Name characters that occur in no default-lexicon pattern, so instantiated
# wildcards can never create or extend a marker match.
_NAME_POOL = "王李張陳黃吳周徐賴郭"

# Connectives all begin with a fullwidth comma so that a greedy CJK wildcard
# in the preceding phrase stops exactly at the planted boundary.
_PLAIN_CONNECTIVES = ("，", "，竟", "，詎", "，而", "，嗣", "，即", "，旋")


@dataclass
class SyntheticSpec:
    n_docs: int
    lexicon: Lexicon
    seed: int


def _instantiable(patterns: list[LexPattern]) -> list[LexPattern]:
    return [p for p in patterns if not p.anchored and not p.lookahead]


def _instantiate(pattern: LexPattern, rng: SplitMix64) -> str:
    parts = []
    for seg in pattern.segments:
        if isinstance(seg, Gap):
            hi = min(seg.max_len, seg.min_len + 3)
            length = seg.min_len + rng.next_below(hi - seg.min_len + 1)
            parts.append("".join(rng.choice(_NAME_POOL) for _ in range(length)))
        else:
            parts.append(seg)
    return "".join(parts)


def _connective(rng: SplitMix64) -> str:
    kind = rng.next_below(3)
    if kind == 0:
        year = 100 + rng.next_below(13)
        month = 1 + rng.next_below(12)
        day = 1 + rng.next_below(28)
        return f"，於民國{year}年{month}月{day}日"
    return rng.choice(_PLAIN_CONNECTIVES)


def synthesize_corpus(
    spec: SyntheticSpec,
) -> tuple[list[VerdictRecord], list[tuple[str, list[TaggedSpan]]]]:
    """Build n_docs template documents plus their gold span annotations."""
    by_tag: dict[ElementTag, list[LexPattern]] = {}
    for tag in CANONICAL_ORDER:
        usable = _instantiable(spec.lexicon.entries(tag))
        if not usable:
            raise IncompleteLexicon(tag.value)
        by_tag[tag] = usable

    rng = SplitMix64(spec.seed)
    records: list[VerdictRecord] = []
    gold: list[tuple[str, list[TaggedSpan]]] = []
    for i in range(spec.n_docs):
        pieces = ["一、"]
        spans: list[TaggedSpan] = []
        offset = len(pieces[0])
        for j, tag in enumerate(CANONICAL_ORDER):
            if j > 0:
                conn = _connective(rng)
                pieces.append(conn)
                offset += len(conn)
            pat = rng.choice(by_tag[tag])
            phrase = _instantiate(pat, rng)
            spans.append(TaggedSpan(offset, offset + len(phrase), tag, pat.raw))
            pieces.append(phrase)
            offset += len(phrase)
        amount = 1 + rng.next_below(200)
        pieces.append(f"，計新臺幣{amount}萬元。")
        text = "".join(pieces)
        doc_id = f"synth-{i:05d}"
        records.append(
            VerdictRecord(
                id=doc_id,
                date=datetime.date(2011, 1, 1) + datetime.timedelta(days=i % 4018),
                cause="fraud",
                raw_text=text,
                facts=text,
            )
        )
        gold.append((doc_id, spans))
    return records, gold
