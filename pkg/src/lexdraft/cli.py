"""Command-line interface.

Subcommands map onto the library operations: ingest, stats, train, eval,
generate, validate, serve, synth. Exit codes: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analytics, corpus, decoding, elements, evaluate, modelfile, neural, ngram
from .errors import LexdraftError
from .service import DraftingService, config_from_env, serve
from .synth import SyntheticSpec, synthesize_corpus


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def _split_texts(records, split_name: str, seed: int) -> list[str]:
    texts = [r.facts for r in records if r.facts]
    if split_name == "all":
        return texts
    split = corpus.split_corpus([r for r in records if r.facts], seed)
    part = getattr(split, split_name)
    return [r.facts for r in part]


def _add_decoding_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", choices=decoding.STRATEGIES, default="sample")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--beam-width", type=int, default=1)
    p.add_argument("--max-tokens", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)


def _decoding_config(args) -> decoding.DecodingConfig:
    return decoding.DecodingConfig(
        strategy=args.strategy,
        k=args.k,
        p=args.p,
        temperature=args.temperature,
        beam_width=args.beam_width,
        max_tokens=args.max_tokens,
        seed=args.seed,
    )


def _load_lexicon(path: str | None) -> elements.Lexicon:
    return elements.load_lexicon(path) if path else elements.default_lexicon()


def cmd_ingest(args) -> int:
    src = Path(args.input)
    if src.is_dir():
        records = []
        for txt in sorted(src.glob("*.txt")):
            records.append(corpus.parse_verdict_file(txt.read_bytes(), txt.stem))
    else:
        records = corpus.read_corpus(src)
    corpus.write_corpus(records, args.out)
    with_facts = sum(1 for r in records if r.facts)
    print(f"ingested {len(records)} records ({with_facts} with facts) -> {args.out}",
          file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    records = corpus.read_corpus(args.corpus)
    texts = _split_texts(records, args.split, args.seed)
    summary = analytics.corpus_summary(texts)
    sys.stderr.write(analytics.summary_lines(summary))
    grams = {int(g) for g in args.grams.split(",")}
    report = analytics.tfidf(texts, gram_sizes=grams, top_n=args.top)
    tsv = analytics.report_tsv(report)
    if args.out:
        Path(args.out).write_text(tsv, encoding="utf-8")
    else:
        sys.stdout.write(tsv)
    if args.figure:
        from .report import save_tfidf_figure

        save_tfidf_figure(report, args.figure)
        print(f"figure -> {args.figure}", file=sys.stderr)
    return 0


def cmd_train(args) -> int:
    records = corpus.read_corpus(args.corpus)
    usable = [r for r in records if r.facts]
    skipped = len(records) - len(usable)
    if skipped:
        print(f"skipping {skipped} records without facts", file=sys.stderr)
    split = corpus.split_corpus(usable, args.seed)
    train_texts = [r.facts for r in split.train]
    val_texts = [r.facts for r in split.validation]
    vocab = corpus.build_vocabulary(train_texts + val_texts + [r.facts for r in split.test])

    if args.backend == "kn":
        model = ngram.kn_train(train_texts, vocab, order=args.order, discount=args.discount)
        modelfile.save_model(model, args.out)
        if val_texts:
            loss = evaluate.evaluate_loss(model, val_texts)
            print(f"validation_loss\t{loss:.6f}", file=sys.stderr)
            print(f"validation_perplexity\t{evaluate.perplexity(loss):.4f}", file=sys.stderr)
    else:
        model = neural.nn_init(
            vocab,
            context_len=args.context_len,
            embed_dim=args.embed_dim,
            hidden_dim=args.hidden_dim,
            seed=args.seed,
        )
        config = neural.TrainConfig(
            epochs=args.epochs,
            batch_size=args.batch_size,
            learning_rate=args.learning_rate,
            seed=args.seed,
        )
        report = neural.train_loop(model, train_texts, val_texts, config)
        sys.stderr.write(report.tsv())
        print(f"best_epoch\t{report.best_epoch}", file=sys.stderr)
        modelfile.save_model(model, args.out)
        if args.best_out and report.best_model is not None:
            modelfile.save_model(report.best_model, args.best_out)
        if args.report:
            Path(args.report).write_text(report.tsv(), encoding="utf-8")
        if args.figure:
            from .report import save_training_figure

            save_training_figure(report, args.figure)
            print(f"figure -> {args.figure}", file=sys.stderr)
    print(f"model -> {args.out}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    model = modelfile.load_model(args.model)
    records = corpus.read_corpus(args.corpus)
    texts = _split_texts(records, args.split, args.seed)
    loss = evaluate.evaluate_loss(model, texts)
    print(f"loss\t{loss:.6f}")
    print(f"perplexity\t{evaluate.perplexity(loss):.4f}")
    return 0


def cmd_generate(args) -> int:
    model = modelfile.load_model(args.model)
    config = _decoding_config(args)
    result = decoding.generate(model, args.prompt, config)
    sys.stdout.write(result.text + "\n")
    print(
        f"tokens\t{result.token_count}\nfinish_reason\t{result.finish_reason}",
        file=sys.stderr,
    )
    return 0


def cmd_validate(args) -> int:
    if args.file:
        text = Path(args.file).read_text(encoding="utf-8")
    else:
        text = args.text
    if not text or not text.strip():
        raise LexdraftError("no text to validate")
    lexicon = _load_lexicon(args.lexicon)
    spans = elements.tag_text(text, lexicon)
    verdict = elements.validate_format(text, lexicon)
    if verdict.strict_ok:
        print("STRICT_OK")
    elif verdict.relaxed_ok:
        print("RELAXED_OK")
    else:
        print("FORMAT_FAIL missing=" + ",".join(sorted(t.value for t in verdict.missing)))
    print("order\t" + "->".join(t.value for t in verdict.first_occurrence_order))
    if args.annotated:
        print(elements.annotate(text, spans))
    return 0


def cmd_serve(args) -> int:
    config = config_from_env()
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port
    if args.model:
        config.model_path = args.model
    if args.lexicon:
        config.lexicon_path = args.lexicon
    if args.static:
        config.static_dir = args.static
    if args.session_log:
        config.session_log_path = args.session_log
    if args.log_full:
        config.log_full = True
    if not config.model_path or not Path(config.model_path).exists():
        raise LexdraftError(f"model file not found: {config.model_path!r}")
    service = DraftingService(config)
    print(f"serving on http://{config.host}:{config.port}/", file=sys.stderr)
    serve(service)
    return 0


def cmd_synth(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    records, gold = synthesize_corpus(
        SyntheticSpec(n_docs=args.n_docs, lexicon=lexicon, seed=args.seed)
    )
    corpus.write_corpus(records, args.out)
    if args.gold:
        with open(args.gold, "w", encoding="utf-8") as f:
            for doc_id, spans in gold:
                obj = {
                    "id": doc_id,
                    "spans": [
                        {"start": s.start, "end": s.end, "tag": s.tag.value,
                         "pattern": s.pattern}
                        for s in spans
                    ],
                }
                f.write(json.dumps(obj, ensure_ascii=False) + "\n")
    print(f"synthesized {len(records)} docs -> {args.out}", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="lexdraft")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read .txt judgments or a JSONL corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="corpus summary and n-gram TF-IDF report")
    p.add_argument("--corpus", required=True)
    p.add_argument("--split", choices=("train", "validation", "test", "all"), default="train")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grams", default="1,2")
    p.add_argument("--top", type=int, default=50)
    p.add_argument("--out")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", help="train a model on the 80/10/10 split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--backend", choices=("kn", "neural"), default="kn")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--discount", type=float, default=0.75)
    p.add_argument("--context-len", type=int, default=8)
    p.add_argument("--embed-dim", type=int, default=32)
    p.add_argument("--hidden-dim", type=int, default=64)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--report")
    p.add_argument("--figure")
    p.add_argument("--best-out")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="loss and perplexity on a corpus split")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--split", choices=("train", "validation", "test", "all"), default="test")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("generate", help="generate a draft from a prompt")
    p.add_argument("--model", required=True)
    p.add_argument("--prompt", required=True)
    _add_decoding_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="check element presence and order")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--file")
    group.add_argument("--text")
    p.add_argument("--lexicon")
    p.add_argument("--annotated", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the drafting HTTP service")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--model")
    p.add_argument("--lexicon")
    p.add_argument("--static")
    p.add_argument("--session-log")
    p.add_argument("--log-full", action="store_true")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("synth", help="write a gold-labeled synthetic corpus")
    p.add_argument("--n-docs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--gold")
    p.add_argument("--lexicon")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return 1
    try:
        return args.func(args)
    except LexdraftError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
