"""Verdict ingestion, criminal-facts extraction, corpus split, and vocabulary.

Text is processed at the character level throughout; no word segmentation is
performed anywhere in the pipeline.
"""

from __future__ import annotations

import datetime
import json
import re
from dataclasses import dataclass, field

from .errors import (
    DuplicateId,
    EmptyCorpus,
    EmptyDocument,
    EncodingError,
    InvalidEncoding,
    InvalidId,
)
from .rng import fnv1a64, splitmix64

BOS, EOS, UNK = 0, 1, 2
SPECIAL_NAMES = ("BOS", "EOS", "UNK")
SPECIAL_GLYPHS = ("\u3008BOS\u3009", "\u3008EOS\u3009", "\u3008UNK\u3009")

# Section heading that opens the criminal-facts narrative, and the top-level
# headings that terminate it. Longest heading is tried first so that
# 犯罪事實及理由 is not cut short at 犯罪事實.
FACTS_HEADINGS = ("犯罪事實及理由", "犯罪事實")
FACTS_TERMINATORS = ("理\u3000由", "理由", "證據")

# Lines dropped during normalization (page furniture).
DEFAULT_DROP_LINE_PATTERNS = (
    r"^\s*第\s*\d+\s*頁(\s*[,，/]?\s*共\s*\d+\s*頁)?\s*$",
    r"^\s*-\s*\d+\s*-\s*$",
    r"^\s*Page\s+\d+\s*$",
)


@dataclass
class VerdictRecord:
    """One court judgment with its extracted criminal-facts section."""

    id: str
    date: datetime.date
    cause: str
    raw_text: str
    facts: str


@dataclass
class CorpusSplit:
    train: list[VerdictRecord]
    validation: list[VerdictRecord]
    test: list[VerdictRecord]
    seed: int


@dataclass
class Vocabulary:
    """Character inventory with BOS/EOS/UNK pinned at ids 0, 1, 2."""

    tokens: list[str]
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def id_of(self, char: str) -> int:
        return self._index.get(char, UNK)

    def __contains__(self, char: str) -> bool:
        return char in self._index


def normalize(text: str, drop_line_patterns=DEFAULT_DROP_LINE_PATTERNS) -> str:
    """Canonicalize line endings and spaces; drop page header/footer lines.

    CJK characters pass through unchanged, and the function is idempotent.
    """
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = text.replace("\u3000", " ")
    compiled = [re.compile(p) for p in drop_line_patterns]
    lines = []
    for line in text.split("\n"):
        if any(p.match(line) for p in compiled):
            continue
        lines.append(re.sub(r"  +", " ", line))
    return "\n".join(lines)


def extract_criminal_facts(raw: str) -> str:
    """Return the criminal-facts span of a normalized judgment, or "".

    The span starts after the first facts heading and ends before the next
    terminator heading found at the start of a line.
    """
    best_pos = None
    for heading in FACTS_HEADINGS:
        pos = raw.find(heading)
        if pos >= 0 and (best_pos is None or pos < best_pos):
            best_pos = pos
    if best_pos is None:
        return ""
    # longest heading matching at that position wins (及理由 over the prefix)
    matched = max(
        (h for h in FACTS_HEADINGS if raw.startswith(h, best_pos)), key=len
    )
    start = best_pos + len(matched)
    end = len(raw)
    for term in FACTS_TERMINATORS:
        pos = start
        while True:
            pos = raw.find(term, pos)
            if pos < 0:
                break
            if pos == 0 or raw[pos - 1] == "\n":
                end = min(end, pos)
                break
            pos += 1
    return raw[start:end].strip()


def parse_verdict_file(data: bytes, id: str) -> VerdictRecord:
    """Decode and normalize one UTF-8 judgment file into a record."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InvalidEncoding(f"{id}: {e}") from None
    if text.startswith("\ufeff"):
        text = text[1:]
    text = normalize(text)
    if not text.strip():
        raise EmptyDocument(id)
    return VerdictRecord(
        id=id,
        date=datetime.date(1970, 1, 1),
        cause="fraud",
        raw_text=text,
        facts=extract_criminal_facts(text),
    )


def split_corpus(records: list[VerdictRecord], seed: int) -> CorpusSplit:
    """Deterministic 80/10/10 split.

    Records are ordered by splitmix64(seed XOR fnv1a64(id)); the first
    floor(0.8 N) go to train, the next floor(0.1 N) to validation, and the
    remainder to test.
    """
    seen = set()
    for r in records:
        if r.id in seen:
            raise DuplicateId(r.id)
        seen.add(r.id)
    ordered = sorted(records, key=lambda r: (splitmix64(seed ^ fnv1a64(r.id)), r.id))
    n = len(ordered)
    n_train = (8 * n) // 10
    n_val = n // 10
    return CorpusSplit(
        train=ordered[:n_train],
        validation=ordered[n_train : n_train + n_val],
        test=ordered[n_train + n_val :],
        seed=seed,
    )


def build_vocabulary(texts: list[str]) -> Vocabulary:
    """Characters in first-appearance order after the three specials."""
    if not texts:
        raise EmptyCorpus("no documents")
    tokens = list(SPECIAL_NAMES)
    counts: dict[str, int] = {}
    for text in texts:
        for ch in text:
            if ch not in counts:
                tokens.append(ch)
                counts[ch] = 0
            counts[ch] += 1
    if not counts:
        raise EmptyCorpus("documents contain no characters")
    return Vocabulary(tokens=tokens, counts=counts)


def encode(text: str, vocab: Vocabulary, strict: bool = False) -> list[int]:
    """Map characters to token ids; unknown characters become UNK.

    With strict=True an unknown character raises EncodingError instead.
    """
    ids = []
    for ch in text:
        i = vocab.id_of(ch)
        if i == UNK and strict and ch not in vocab:
            raise EncodingError(f"character {ch!r} not in vocabulary")
        ids.append(i)
    return ids


def decode(ids: list[int], vocab: Vocabulary) -> str:
    out = []
    for i in ids:
        if not 0 <= i < len(vocab):
            raise InvalidId(str(i))
        out.append(SPECIAL_GLYPHS[i] if i < 3 else vocab.tokens[i])
    return "".join(out)


def _escape_token(tok: str) -> str:
    return tok.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape_token(tok: str) -> str:
    out, i = [], 0
    while i < len(tok):
        if tok[i] == "\\" and i + 1 < len(tok):
            nxt = tok[i + 1]
            out.append({"t": "\t", "n": "\n", "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(tok[i])
            i += 1
    return "".join(out)


def dump_vocabulary(vocab: Vocabulary) -> str:
    """Serialize to the LEXVOC1 text format (tab/newline chars escaped)."""
    lines = ["LEXVOC1"]
    for i, tok in enumerate(vocab.tokens):
        count = 0 if i < 3 else vocab.counts.get(tok, 0)
        name = tok if i < 3 else _escape_token(tok)
        lines.append(f"{i}\t{name}\t{count}")
    return "\n".join(lines) + "\n"


def load_vocabulary(text: str) -> Vocabulary:
    lines = text.rstrip("\n").split("\n")
    if not lines or lines[0] != "LEXVOC1":
        raise InvalidId("not a LEXVOC1 file")
    tokens: list[str] = []
    counts: dict[str, int] = {}
    for line in lines[1:]:
        idx_s, tok_s, count_s = line.split("\t")
        idx = int(idx_s)
        if idx != len(tokens):
            raise InvalidId(f"non-sequential index {idx}")
        if idx < 3:
            tokens.append(tok_s)
        else:
            tok = _unescape_token(tok_s)
            tokens.append(tok)
            counts[tok] = int(count_s)
    return Vocabulary(tokens=tokens, counts=counts)


def save_vocabulary(vocab: Vocabulary, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(dump_vocabulary(vocab))


def read_vocabulary(path) -> Vocabulary:
    with open(path, encoding="utf-8", newline="") as f:
        return load_vocabulary(f.read())


def write_corpus(records: list[VerdictRecord], path) -> None:
    """Write records as UTF-8 JSONL, one object per line, no BOM."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        for r in records:
            obj = {
                "id": r.id,
                "date": r.date.isoformat(),
                "cause": r.cause,
                "raw_text": r.raw_text,
                "facts": r.facts,
            }
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_corpus(path) -> list[VerdictRecord]:
    records = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            rid = obj["id"]
            if rid in seen:
                raise DuplicateId(rid)
            seen.add(rid)
            records.append(
                VerdictRecord(
                    id=rid,
                    date=datetime.date.fromisoformat(obj["date"]),
                    cause=obj.get("cause", "fraud"),
                    raw_text=obj["raw_text"],
                    facts=obj.get("facts", ""),
                )
            )
    return records
