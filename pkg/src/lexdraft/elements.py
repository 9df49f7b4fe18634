"""Rule-lexicon tagging of the six legal constituent elements.

A well-formed criminal-facts narrative for fraud presents the elements in a
fixed order: subject of crime, subjective element, act, victim, causation,
result of hazard. This module tags literal markers of each element and judges
a draft against that order (strict) or against mere presence (relaxed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import IncompleteLexicon, InvalidLexicon, SpanOutOfRange


class ElementTag(Enum):
    LEO_SOC = "LEO_SOC"  # subject of crime
    LEO_SLE = "LEO_SLE"  # subjective legal element (intent)
    LEO_ACT = "LEO_ACT"  # illegal act
    LEO_VIC = "LEO_VIC"  # victim / object
    LEO_CAU = "LEO_CAU"  # causation
    LEO_ROH = "LEO_ROH"  # result of hazard


CANONICAL_ORDER = (
    ElementTag.LEO_SOC,
    ElementTag.LEO_SLE,
    ElementTag.LEO_ACT,
    ElementTag.LEO_VIC,
    ElementTag.LEO_CAU,
    ElementTag.LEO_ROH,
)

_TAG_RANK = {tag: i for i, tag in enumerate(CANONICAL_ORDER)}

# Characters that end a sentence or enumeration item; anchored patterns only
# match at position 0 or right after one of these.
SENTENCE_BOUNDARY = "。\n！？；、："

GAP_CHAR = "…"  # … in lexicon files: 1-20 arbitrary non-newline chars


@dataclass(frozen=True)
class Gap:
    """Bounded wildcard inside a pattern."""

    min_len: int
    max_len: int
    charset: str = "any"  # "any" (non-newline) or "cjk"


@dataclass(frozen=True)
class LexPattern:
    raw: str  # display form; also the tie-break key
    segments: tuple
    anchored: bool = False
    lookahead: tuple[str, ...] = ()
    note: str = ""


@dataclass
class Lexicon:
    patterns: dict[ElementTag, list[LexPattern]] = field(default_factory=dict)

    def entries(self, tag: ElementTag) -> list[LexPattern]:
        return self.patterns.get(tag, [])

    def add(self, tag: ElementTag, pattern: LexPattern) -> None:
        self.patterns.setdefault(tag, []).append(pattern)

    def require_complete(self) -> None:
        missing = [t.value for t in CANONICAL_ORDER if not self.entries(t)]
        if missing:
            raise IncompleteLexicon(", ".join(missing))

    def stats(self) -> dict[str, int]:
        return {t.value: len(self.entries(t)) for t in CANONICAL_ORDER}


@dataclass(frozen=True)
class TaggedSpan:
    start: int
    end: int
    tag: ElementTag
    pattern: str


@dataclass
class FormatVerdict:
    strict_ok: bool
    relaxed_ok: bool
    first_occurrence_order: list[ElementTag]
    missing: set[ElementTag]


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return 0x4E00 <= cp <= 0x9FFF or 0x3400 <= cp <= 0x4DBF


def _gap_char_ok(ch: str, charset: str) -> bool:
    if charset == "cjk":
        return _is_cjk(ch)
    return ch != "\n"


def _match_segments(text: str, pos: int, segments, idx: int, lookahead) -> int | None:
    """Greedy match of pattern segments at pos; returns end offset or None."""
    if idx == len(segments):
        if lookahead and not any(text.startswith(la, pos) for la in lookahead):
            return None
        return pos
    seg = segments[idx]
    if isinstance(seg, str):
        if text.startswith(seg, pos):
            return _match_segments(text, pos + len(seg), segments, idx + 1, lookahead)
        return None
    # gap: longest admissible run first, backtracking on failure
    limit = 0
    while limit < seg.max_len and pos + limit < len(text) and _gap_char_ok(
        text[pos + limit], seg.charset
    ):
        limit += 1
    for length in range(limit, seg.min_len - 1, -1):
        end = _match_segments(text, pos + length, segments, idx + 1, lookahead)
        if end is not None:
            return end
    return None


def match_at(text: str, pos: int, pattern: LexPattern) -> int | None:
    """Length of the longest match of `pattern` at `pos`, or None."""
    if pattern.anchored and pos != 0 and text[pos - 1] not in SENTENCE_BOUNDARY:
        return None
    end = _match_segments(text, pos, pattern.segments, 0, pattern.lookahead)
    if end is None or end == pos:
        return None
    return end - pos


def tag_text(text: str, lexicon: Lexicon) -> list[TaggedSpan]:
    """Left-to-right longest-match scan; matched regions are consumed.

    Ties at a position break toward the tag earlier in CANONICAL_ORDER, then
    toward the lexicographically smaller pattern.
    """
    spans: list[TaggedSpan] = []
    pos = 0
    n = len(text)
    while pos < n:
        best_key = None
        best = None
        for tag in CANONICAL_ORDER:
            rank = _TAG_RANK[tag]
            for pat in lexicon.entries(tag):
                length = match_at(text, pos, pat)
                if length is None:
                    continue
                key = (-length, rank, pat.raw)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (length, tag, pat)
        if best is None:
            pos += 1
        else:
            length, tag, pat = best
            spans.append(TaggedSpan(pos, pos + length, tag, pat.raw))
            pos += length
    return spans


def first_occurrence_sequence(spans: list[TaggedSpan]) -> list[ElementTag]:
    """Tags ordered by the position of each tag's first span."""
    seen = set()
    order = []
    for span in spans:
        if span.tag not in seen:
            seen.add(span.tag)
            order.append(span.tag)
    return order


def validate_format(text: str, lexicon: Lexicon) -> FormatVerdict:
    spans = tag_text(text, lexicon)
    order = first_occurrence_sequence(spans)
    missing = set(CANONICAL_ORDER) - set(order)
    relaxed = not missing
    strict = relaxed and order == list(CANONICAL_ORDER)
    return FormatVerdict(
        strict_ok=strict,
        relaxed_ok=relaxed,
        first_occurrence_order=order,
        missing=missing,
    )


def annotate(text: str, spans: list[TaggedSpan]) -> str:
    """Replace each span with its <TAG> marker, untagged text kept verbatim."""
    out = []
    prev = 0
    for span in spans:
        if not (0 <= span.start < span.end <= len(text)) or span.start < prev:
            raise SpanOutOfRange(f"{span.start}:{span.end}")
        out.append(text[prev : span.start])
        out.append(f"<{span.tag.value}>")
        prev = span.end
    out.append(text[prev:])
    return "".join(out)


@dataclass
class BatchReport:
    n_docs: int
    strict_count: int
    relaxed_count: int
    strict_rate: float
    relaxed_rate: float
    tag_coverage: dict[ElementTag, float]


def batch_report(texts: list[str], lexicon: Lexicon) -> BatchReport:
    """Aggregate validate_format over a corpus."""
    n = len(texts)
    strict = relaxed = 0
    present = {t: 0 for t in CANONICAL_ORDER}
    for text in texts:
        verdict = validate_format(text, lexicon)
        strict += verdict.strict_ok
        relaxed += verdict.relaxed_ok
        for tag in verdict.first_occurrence_order:
            present[tag] += 1
    return BatchReport(
        n_docs=n,
        strict_count=strict,
        relaxed_count=relaxed,
        strict_rate=strict / n if n else 0.0,
        relaxed_rate=relaxed / n if n else 0.0,
        tag_coverage={t: (present[t] / n if n else 0.0) for t in CANONICAL_ORDER},
    )


def _lit(tag: ElementTag, text: str, note: str) -> tuple[ElementTag, LexPattern]:
    return tag, LexPattern(raw=text, segments=(text,), note=note)


def default_lexicon() -> Lexicon:
    """Built-in marker lexicon for fraud-judgment criminal-facts text.

    Literal entries come from the fraud article of the criminal code and from
    recurring judgment boilerplate; two bounded-gap rules cover defendant and
    victim names.
    """
    lex = Lexicon()
    lex.add(
        ElementTag.LEO_SOC,
        LexPattern(
            raw="^姓名(能|明知|與)",
            segments=(Gap(2, 4, "cjk"),),
            anchored=True,
            lookahead=("能", "明知", "與"),
            note="sentence-initial defendant name before a narrative verb",
        ),
    )
    for tag, pat in [
        _lit(ElementTag.LEO_SOC, "詐騙集團成員", "judgment boilerplate: ring member"),
        _lit(ElementTag.LEO_SOC, "不詳年籍之人", "judgment boilerplate: unidentified person"),
        _lit(ElementTag.LEO_SLE, "意圖為自己或第三人不法之所有", "criminal code art. 339"),
        _lit(ElementTag.LEO_SLE, "意圖為自己不法之所有", "art. 339 variant, first person only"),
        _lit(ElementTag.LEO_SLE, "意圖為自己不法所有", "art. 339 variant without 之"),
        _lit(ElementTag.LEO_SLE, "明知", "knowledge-of-circumstances marker"),
        _lit(ElementTag.LEO_SLE, "預見", "foreseeability marker"),
        _lit(
            ElementTag.LEO_SLE,
            "基於幫助他人從事不法行為之犯意",
            "accessory-intent boilerplate",
        ),
        _lit(ElementTag.LEO_ACT, "詐術", "criminal code art. 339"),
        _lit(ElementTag.LEO_ACT, "詐騙手法", "judgment boilerplate"),
        _lit(ElementTag.LEO_ACT, "撥打電話向", "phone-scam narrative opener"),
        _lit(ElementTag.LEO_VIC, "本人或第三人", "criminal code art. 339"),
        _lit(ElementTag.LEO_CAU, "陷於錯誤", "mistaken-belief marker"),
        _lit(ElementTag.LEO_CAU, "誤以為真", "mistaken-belief marker"),
        _lit(ElementTag.LEO_CAU, "誤信為真", "mistaken-belief marker"),
        _lit(ElementTag.LEO_CAU, "使人", "causal connective of art. 339"),
        _lit(ElementTag.LEO_ROH, "匯出款項", "wire-transfer loss"),
        _lit(ElementTag.LEO_ROH, "將本人或第三人之物交付", "criminal code art. 339 delivery clause"),
        _lit(ElementTag.LEO_ROH, "如數交付", "handed-over-in-full boilerplate"),
    ]:
        lex.add(tag, pat)
    lex.add(
        ElementTag.LEO_ACT,
        LexPattern(
            raw="假冒…謊稱",
            segments=("假冒", Gap(1, 20, "any"), "謊稱"),
            note="impersonation scam phrasing",
        ),
    )
    lex.add(
        ElementTag.LEO_VIC,
        LexPattern(
            raw="被害人○○",
            segments=("被害人", Gap(2, 4, "cjk")),
            note="named victim",
        ),
    )
    lex.require_complete()
    return lex


def parse_lexicon_line(line: str) -> tuple[ElementTag, LexPattern] | None:
    line = line.rstrip("\n")
    if not line or line.startswith("#"):
        return None
    try:
        tag_s, pattern_s = line.split("\t", 1)
    except ValueError:
        raise InvalidLexicon(f"expected TAG<TAB>pattern: {line!r}") from None
    try:
        tag = ElementTag(tag_s)
    except ValueError:
        raise InvalidLexicon(f"unknown tag {tag_s!r}") from None
    if not pattern_s:
        raise InvalidLexicon("empty pattern")
    segments: list = []
    for i, part in enumerate(pattern_s.split(GAP_CHAR)):
        if i > 0:
            segments.append(Gap(1, 20, "any"))
        if part:
            segments.append(part)
    return tag, LexPattern(raw=pattern_s, segments=tuple(segments), note="user lexicon")


def load_lexicon(path) -> Lexicon:
    """Read a TAG<TAB>pattern lexicon file; … marks a 1-20 char wildcard."""
    lex = Lexicon()
    with open(path, encoding="utf-8") as f:
        for line in f:
            parsed = parse_lexicon_line(line)
            if parsed:
                lex.add(*parsed)
    return lex
