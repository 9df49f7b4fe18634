"""Matplotlib figure rendering for the CLI report paths.

Figures are written next to the delimited outputs: a loss/perplexity curve
for training runs and a top-terms bar chart for corpus statistics. A CJK-
capable font is used when one is installed; otherwise rendering proceeds with
the default font (CJK tick labels may show as boxes on bare systems).
"""

from __future__ import annotations

import logging
import math
import warnings

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib import font_manager  # noqa: E402

from .analytics import TfIdfReport  # noqa: E402
from .neural import TrainReport  # noqa: E402

_CJK_CANDIDATES = (
    "Noto Sans CJK TC",
    "Noto Sans CJK SC",
    "Noto Sans TC",
    "WenQuanYi Zen Hei",
    "AR PL UMing TW",
    "Microsoft JhengHei",
    "PingFang TC",
)


def _configure_fonts() -> None:
    available = {f.name for f in font_manager.fontManager.ttflist}
    for name in _CJK_CANDIDATES:
        if name in available:
            plt.rcParams["font.sans-serif"] = [name] + plt.rcParams["font.sans-serif"]
            return
    logging.getLogger("matplotlib.font_manager").setLevel(logging.ERROR)


_configure_fonts()


def save_training_figure(report: TrainReport, path) -> None:
    """Train/validation loss curves with the best-validation epoch marked."""
    epochs = [r.epoch for r in report.rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.plot(epochs, [r.train_loss for r in report.rows], "o-", label="train")
    ax1.plot(epochs, [r.val_loss for r in report.rows], "s-", label="validation")
    ax1.axvline(report.best_epoch, color="gray", linestyle=":", linewidth=1)
    ax1.set_xlabel("epoch")
    ax1.set_ylabel("mean NLL (nats)")
    ax1.legend()
    ax1.set_title("loss")
    ax2.plot(epochs, [math.exp(r.val_loss) for r in report.rows], "s-", color="tab:red")
    ax2.set_xlabel("epoch")
    ax2.set_ylabel("validation perplexity")
    ax2.set_title("perplexity")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_tfidf_figure(report: TfIdfReport, path, max_terms: int = 25) -> None:
    """Horizontal bar chart of the highest-weight terms."""
    terms = report.terms[:max_terms]
    labels = [t.term.replace("\n", "\\n").replace("\t", "\\t") for t in terms]
    weights = [t.max_tfidf for t in terms]
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.3 * len(terms))))
    ax.barh(range(len(terms)), weights, color="tab:blue")
    ax.set_yticks(range(len(terms)))
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    ax.set_xlabel("max tf-idf")
    ax.set_title(f"top character n-grams ({report.n_docs} docs)")
    with warnings.catch_warnings():
        # without a CJK font installed, glyph fallback is expected
        warnings.filterwarnings("ignore", message="Glyph .* missing")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
    plt.close(fig)
