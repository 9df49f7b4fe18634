"""Workbench-loop contract over live HTTP: the flow the web UI depends on.

Covers the service side of the secondary criterion: a suggest -> accept ->
validate round trip must show the same verdict as a direct /api/validate of
the concatenated text, and fixed seeds must repeat suggestions identically.
"""

import threading

import pytest
import requests

from lexdraft.corpus import build_vocabulary
from lexdraft.decoding import DecodingConfig
from lexdraft.elements import default_lexicon
from lexdraft.modelfile import save_model
from lexdraft.ngram import kn_train
from lexdraft.service import DraftingService, ServiceConfig, make_server
from lexdraft.synth import SyntheticSpec, synthesize_corpus


@pytest.fixture(scope="module")
def live_base(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("workbench")
    records, _ = synthesize_corpus(
        SyntheticSpec(n_docs=120, lexicon=default_lexicon(), seed=7)
    )
    texts = [r.facts for r in records]
    vocab = build_vocabulary(texts)
    model = kn_train(texts, vocab, order=4, discount=0.75)
    model_path = tmp / "m.lm"
    save_model(model, model_path)
    config = ServiceConfig(
        port=0,
        model_path=str(model_path),
        decoding=DecodingConfig(strategy="sample", k=6, p=0.9, max_tokens=500),
    )
    server = make_server(DraftingService(config))
    threading.Thread(target=server.serve_forever, daemon=True).start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


def test_suggest_accept_validate_round_trip(live_base):
    draft = "一、"
    cont = requests.post(
        f"{live_base}/api/continue",
        json={"draft_so_far": draft, "continue_tokens": 40, "seed": 77},
        timeout=10,
    ).json()
    accepted = draft + cont["continuation"]
    direct = requests.post(
        f"{live_base}/api/validate", json={"text": accepted}, timeout=10
    ).json()
    assert cont["verdict"] == direct["verdict"]
    assert cont["spans"] == direct["spans"]


def test_fixed_seed_suggestion_repeats(live_base):
    payload = {"draft_so_far": "一、", "continue_tokens": 30, "seed": 123}
    a = requests.post(f"{live_base}/api/continue", json=payload, timeout=10).json()
    b = requests.post(f"{live_base}/api/continue", json=payload, timeout=10).json()
    assert a["continuation"] == b["continuation"]
    assert a["verdict"] == b["verdict"]


def test_different_seeds_usually_differ(live_base):
    a = requests.post(
        f"{live_base}/api/continue",
        json={"draft_so_far": "一、", "continue_tokens": 40, "seed": 1},
        timeout=10,
    ).json()
    b = requests.post(
        f"{live_base}/api/continue",
        json={"draft_so_far": "一、", "continue_tokens": 40, "seed": 2},
        timeout=10,
    ).json()
    assert a["continuation"] != b["continuation"]
