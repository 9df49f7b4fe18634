import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexdraft.elements import (
    CANONICAL_ORDER,
    ElementTag,
    Gap,
    LexPattern,
    TaggedSpan,
    annotate,
    batch_report,
    default_lexicon,
    first_occurrence_sequence,
    load_lexicon,
    parse_lexicon_line,
    tag_text,
    validate_format,
)
from lexdraft.errors import InvalidLexicon, SpanOutOfRange

from fixtures import FACTS_SAMPLE, FACTS_SAMPLE_B

T = ElementTag
LEX = default_lexicon()


# -- default lexicon -----------------------------------------------------------


def test_default_lexicon_pins():
    cau = [p.raw for p in LEX.entries(T.LEO_CAU)]
    assert "陷於錯誤" in cau
    assert "誤信為真" in cau


def test_default_lexicon_complete():
    for tag in CANONICAL_ORDER:
        assert LEX.entries(tag), tag


# -- tagging --------------------------------------------------------------------


def test_tag_named_victim():
    spans = tag_text("被害人張培超", LEX)
    assert len(spans) == 1
    assert spans[0].tag == T.LEO_VIC
    assert (spans[0].start, spans[0].end) == (0, 6)


def test_tag_intent_phrase():
    spans = tag_text("意圖為自己不法所有", LEX)
    assert [s.tag for s in spans] == [T.LEO_SLE]


def test_tag_empty():
    assert tag_text("", LEX) == []


def test_tag_longest_match_wins():
    # 意圖為自己或第三人不法之所有 must not stop at a shorter variant
    spans = tag_text("意圖為自己或第三人不法之所有", LEX)
    assert len(spans) == 1
    assert spans[0].end - spans[0].start == len("意圖為自己或第三人不法之所有")


def test_tag_sentence_initial_name():
    spans = tag_text("一、林翊羽能預見", LEX)
    assert [(s.tag, s.start, s.end) for s in spans][:1] == [(T.LEO_SOC, 2, 5)]
    # mid-sentence position is not anchored
    assert all(s.tag != T.LEO_SOC for s in tag_text("據告林翊羽能預見", LEX))


def test_spans_sorted_non_overlapping():
    spans = tag_text(FACTS_SAMPLE, LEX)
    for a, b in zip(spans, spans[1:]):
        assert a.end <= b.start


# -- order ------------------------------------------------------------------------


def test_first_occurrence_forced_example():
    spans = [
        TaggedSpan(0, 1, T.LEO_SOC, "x"),
        TaggedSpan(5, 6, T.LEO_SLE, "x"),
        TaggedSpan(9, 10, T.LEO_SOC, "x"),
        TaggedSpan(12, 13, T.LEO_ACT, "x"),
    ]
    assert first_occurrence_sequence(spans) == [T.LEO_SOC, T.LEO_SLE, T.LEO_ACT]


def _seq_to_spans(tags):
    return [TaggedSpan(i * 2, i * 2 + 1, t, "x") for i, t in enumerate(tags)]


def test_first_occurrence_interleaved_full_narrative():
    # marker layout of the decomposed sample judgment
    tags = [
        T.LEO_SOC, T.LEO_SLE, T.LEO_ACT, T.LEO_SLE, T.LEO_SLE, T.LEO_ACT,
        T.LEO_SOC, T.LEO_ACT, T.LEO_SOC, T.LEO_SOC, T.LEO_SLE, T.LEO_ACT,
        T.LEO_VIC, T.LEO_ACT, T.LEO_CAU, T.LEO_VIC, T.LEO_CAU, T.LEO_ROH,
        T.LEO_SOC, T.LEO_ROH,
    ]
    assert first_occurrence_sequence(_seq_to_spans(tags)) == list(CANONICAL_ORDER)


def test_first_occurrence_interleaved_generated_shape():
    # marker layout of a generated draft with trailing victim mention
    tags = [
        T.LEO_SOC, T.LEO_SLE, T.LEO_ACT, T.LEO_SLE, T.LEO_ACT, T.LEO_SOC,
        T.LEO_ACT, T.LEO_SOC, T.LEO_SLE, T.LEO_VIC, T.LEO_ACT, T.LEO_CAU,
        T.LEO_VIC, T.LEO_CAU, T.LEO_ROH, T.LEO_SOC, T.LEO_ROH, T.LEO_VIC,
    ]
    assert first_occurrence_sequence(_seq_to_spans(tags)) == list(CANONICAL_ORDER)


# -- validate ----------------------------------------------------------------------


def test_validate_facts_sample_strict():
    verdict = validate_format(FACTS_SAMPLE, LEX)
    assert verdict.strict_ok
    assert verdict.relaxed_ok
    assert verdict.first_occurrence_order == list(CANONICAL_ORDER)


def test_validate_facts_sample_b_strict():
    verdict = validate_format(FACTS_SAMPLE_B, LEX)
    assert verdict.strict_ok


def test_validate_missing_causation():
    text = FACTS_SAMPLE.replace("誤以為真", "")
    verdict = validate_format(text, LEX)
    assert not verdict.strict_ok
    assert not verdict.relaxed_ok
    assert verdict.missing == {T.LEO_CAU}


def test_validate_out_of_order_is_relaxed_only():
    # all six present, but victim named before any act marker
    text = "一、詐騙集團成員明知，被害人王大明，詐術，誤以為真，匯出款項。"
    verdict = validate_format(text, LEX)
    assert not verdict.strict_ok
    assert verdict.relaxed_ok
    assert verdict.missing == set()


def test_validate_unrelated_text():
    verdict = validate_format("你好", LEX)
    assert verdict.missing == set(CANONICAL_ORDER)
    assert not verdict.relaxed_ok


def test_strict_implies_relaxed_forced():
    verdict = validate_format(FACTS_SAMPLE, LEX)
    assert verdict.strict_ok <= verdict.relaxed_ok


# -- annotate -----------------------------------------------------------------------


def test_annotate_replaces_span():
    spans = tag_text("X被害人張培超Y", LEX)
    assert annotate("X被害人張培超Y", spans) == "X<LEO_VIC>Y"


def test_annotate_no_spans_identity():
    assert annotate("平文", []) == "平文"


def test_annotate_facts_sample_starts_canonically():
    spans = tag_text(FACTS_SAMPLE, LEX)
    marked = annotate(FACTS_SAMPLE, spans)
    assert marked.startswith("一、<LEO_SOC>能<LEO_SLE>")
    order = [t.value for t in first_occurrence_sequence(spans)]
    assert order == [t.value for t in CANONICAL_ORDER]


def test_annotate_round_trip():
    text = FACTS_SAMPLE
    spans = tag_text(text, LEX)
    marked = annotate(text, spans)
    rebuilt = marked
    for span in spans:
        rebuilt = rebuilt.replace(f"<{span.tag.value}>", text[span.start : span.end], 1)
    assert rebuilt == text


def test_annotate_bad_span():
    with pytest.raises(SpanOutOfRange):
        annotate("ab", [TaggedSpan(1, 5, T.LEO_ACT, "x")])


# -- batch --------------------------------------------------------------------------


def test_batch_report_empty():
    report = batch_report([], LEX)
    assert report.n_docs == 0
    assert report.strict_count == 0
    assert report.strict_rate == 0.0


def test_batch_report_half():
    report = batch_report([FACTS_SAMPLE, "你好"], LEX)
    assert report.n_docs == 2
    assert report.strict_count == 1
    assert report.strict_rate == 0.5
    assert report.tag_coverage[T.LEO_SOC] == 0.5


# -- lexicon files --------------------------------------------------------------------


def test_parse_lexicon_line():
    tag, pattern = parse_lexicon_line("LEO_ACT\t假借…為由\n")
    assert tag == T.LEO_ACT
    assert pattern.segments == ("假借", Gap(1, 20, "any"), "為由")
    assert parse_lexicon_line("# comment\n") is None
    assert parse_lexicon_line("\n") is None
    with pytest.raises(InvalidLexicon):
        parse_lexicon_line("BAD_TAG\tx")
    with pytest.raises(InvalidLexicon):
        parse_lexicon_line("no tab here")


def test_load_lexicon_and_tag(tmp_path):
    path = tmp_path / "lex.tsv"
    path.write_text(
        "# custom markers\nLEO_ACT\t假借…為由\nLEO_CAU\t信以為真\n", encoding="utf-8"
    )
    lex = load_lexicon(path)
    spans = tag_text("甲假借借貸為由，使乙信以為真", lex)
    assert [s.tag for s in spans] == [T.LEO_ACT, T.LEO_CAU]


# -- properties -----------------------------------------------------------------------


@given(st.text(alphabet="被害人張培超意圖為自己不法所有詐術使誤以真，。一二三", max_size=120))
@settings(max_examples=150)
def test_tagging_fuzz_invariants(text):
    spans = tag_text(text, LEX)
    for span in spans:
        assert 0 <= span.start < span.end <= len(text)
    for a, b in zip(spans, spans[1:]):
        assert a.end <= b.start
    verdict = validate_format(text, LEX)
    assert verdict.strict_ok <= verdict.relaxed_ok
    assert verdict.relaxed_ok == (not verdict.missing)
    # determinism
    again = tag_text(text, LEX)
    assert again == spans
