"""Segmentation-free corpus statistics: character counts and n-gram TF-IDF."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .errors import EmptyCorpus


@dataclass
class CorpusSummary:
    n_docs: int
    total_chars: int
    unique_chars: int
    min_chars: int
    mean_chars: float
    max_chars: int


@dataclass
class TermStats:
    term: str
    df: int
    total_tf: int
    max_tfidf: float


@dataclass
class TfIdfReport:
    n_docs: int
    gram_sizes: tuple[int, ...]
    terms: list[TermStats]


def corpus_summary(texts: list[str]) -> CorpusSummary:
    if not texts:
        raise EmptyCorpus("no documents")
    lengths = [len(t) for t in texts]
    unique = set()
    for t in texts:
        unique.update(t)
    return CorpusSummary(
        n_docs=len(texts),
        total_chars=sum(lengths),
        unique_chars=len(unique),
        min_chars=min(lengths),
        mean_chars=sum(lengths) / len(lengths),
        max_chars=max(lengths),
    )


def _doc_grams(text: str, gram_sizes) -> Counter:
    counts: Counter = Counter()
    for n in gram_sizes:
        for i in range(len(text) - n + 1):
            counts[text[i : i + n]] += 1
    return counts


def tfidf(texts: list[str], gram_sizes={1, 2}, top_n: int = 50) -> TfIdfReport:
    """Rank character n-grams by max-over-documents tf * ln(N/df).

    tf is the raw in-document count; ties in the final ranking break toward
    the lexicographically smaller term.
    """
    if not texts:
        raise EmptyCorpus("no documents")
    sizes = tuple(sorted(gram_sizes))
    if any(n < 1 or n > 4 for n in sizes):
        raise ValueError("gram sizes must be within 1..4")
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    n_docs = len(texts)
    df: Counter = Counter()
    total_tf: Counter = Counter()
    max_tf: dict[str, int] = {}
    for text in texts:
        grams = _doc_grams(text, sizes)
        for term, tf in grams.items():
            df[term] += 1
            total_tf[term] += tf
            if tf > max_tf.get(term, 0):
                max_tf[term] = tf
    stats = []
    for term, d in df.items():
        idf = math.log(n_docs / d)
        stats.append(TermStats(term, d, total_tf[term], max_tf[term] * idf))
    stats.sort(key=lambda s: (-s.max_tfidf, s.term))
    return TfIdfReport(n_docs=n_docs, gram_sizes=sizes, terms=stats[:top_n])


def _escape_term(term: str) -> str:
    return term.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def report_tsv(report: TfIdfReport) -> str:
    """Render the report in the delimited output format."""
    lines = ["term\tdf\ttotal_tf\tmax_tfidf"]
    for s in report.terms:
        lines.append(f"{_escape_term(s.term)}\t{s.df}\t{s.total_tf}\t{s.max_tfidf:.6f}")
    return "\n".join(lines) + "\n"


def summary_lines(summary: CorpusSummary) -> str:
    return (
        f"docs\t{summary.n_docs}\n"
        f"total_chars\t{summary.total_chars}\n"
        f"unique_chars\t{summary.unique_chars}\n"
        f"chars_per_doc_min\t{summary.min_chars}\n"
        f"chars_per_doc_mean\t{summary.mean_chars:.2f}\n"
        f"chars_per_doc_max\t{summary.max_chars}\n"
    )
