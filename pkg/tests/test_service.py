import json
import os
import threading

import pytest
import requests

from lexdraft.corpus import build_vocabulary, encode
from lexdraft.decoding import DecodingConfig
from lexdraft.elements import default_lexicon, validate_format
from lexdraft.modelfile import save_model
from lexdraft.ngram import kn_train
from lexdraft.service import (
    DISCLAIMER,
    DraftingService,
    ServiceConfig,
    ServiceError,
    load_service_config,
    make_server,
)
from lexdraft.synth import SyntheticSpec, synthesize_corpus

from fixtures import FACTS_SAMPLE, PROMPT_SAMPLE, ChainLm, small_vocab


@pytest.fixture(scope="module")
def kn_service(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("svc")
    records, _ = synthesize_corpus(
        SyntheticSpec(n_docs=60, lexicon=default_lexicon(), seed=123)
    )
    texts = [r.facts for r in records] + [FACTS_SAMPLE, PROMPT_SAMPLE]
    vocab = build_vocabulary(texts)
    model = kn_train(texts, vocab, order=4, discount=0.75)
    model_path = tmp / "svc.lm"
    save_model(model, model_path)
    config = ServiceConfig(
        model_path=str(model_path),
        session_log_path=str(tmp / "session.log"),
        decoding=DecodingConfig(strategy="sample", k=8, p=0.9, max_tokens=500),
    )
    return DraftingService(config)


def test_generate_response_fields(kn_service):
    resp = kn_service.handle_generate(
        {"prompt": PROMPT_SAMPLE, "max_tokens": 40, "seed": 7}
    )
    assert set(resp) == {
        "text",
        "token_count",
        "finish_reason",
        "verdict",
        "spans",
        "disclaimer",
    }
    assert resp["token_count"] <= 40
    assert resp["disclaimer"] == DISCLAIMER


def test_generate_verdict_matches_offline_validation(kn_service):
    resp = kn_service.handle_generate({"prompt": PROMPT_SAMPLE, "max_tokens": 60, "seed": 3})
    offline = validate_format(PROMPT_SAMPLE + resp["text"], kn_service.lexicon)
    assert resp["verdict"]["strict_ok"] == offline.strict_ok
    assert resp["verdict"]["relaxed_ok"] == offline.relaxed_ok
    assert resp["verdict"]["missing"] == sorted(t.value for t in offline.missing)


def test_generate_deterministic(kn_service):
    a = kn_service.handle_generate({"prompt": "一、", "max_tokens": 50, "seed": 11})
    b = kn_service.handle_generate({"prompt": "一、", "max_tokens": 50, "seed": 11})
    assert a == b


def test_generate_empty_prompt_rejected(kn_service):
    with pytest.raises(ServiceError) as err:
        kn_service.handle_generate({"prompt": ""})
    assert err.value.status == 400


def test_generate_caps_max_tokens(kn_service):
    with pytest.raises(ServiceError):
        kn_service.handle_generate({"prompt": "一", "max_tokens": 0})
    resp = kn_service.handle_generate({"prompt": "一", "max_tokens": 100000, "seed": 1})
    assert resp["token_count"] <= 500


def test_generate_bad_config_rejected(kn_service):
    for overrides in ({"p": 0.0}, {"temperature": -1}, {"strategy": "wat"}, {"k": -2}):
        with pytest.raises(ServiceError) as err:
            kn_service.handle_generate({"prompt": "一", **overrides})
        assert err.value.status == 400
        assert err.value.code == "bad_config"


def test_continue_cap_and_fields(kn_service):
    resp = kn_service.handle_continue(
        {"draft_so_far": "一、詐騙集團成員", "continue_tokens": 1, "seed": 2}
    )
    assert resp["token_count"] <= 1
    assert set(resp) == {
        "continuation",
        "token_count",
        "finish_reason",
        "verdict",
        "spans",
        "disclaimer",
    }
    with pytest.raises(ServiceError):
        kn_service.handle_continue({"draft_so_far": "x", "continue_tokens": 101})
    with pytest.raises(ServiceError):
        kn_service.handle_continue({"draft_so_far": "", "continue_tokens": 5})


def test_two_continues_equal_one_generate_on_deterministic_model():
    vocab = small_vocab("宇宙洪荒")
    chain = ChainLm(vocab, encode("宇宙洪荒宇宙", vocab), stop=False)
    config = ServiceConfig(decoding=DecodingConfig(strategy="greedy", max_tokens=500))
    service = DraftingService(config, lm=chain, lexicon=default_lexicon())
    first = service.handle_continue(
        {"draft_so_far": "宇", "continue_tokens": 3, "strategy": "greedy"}
    )
    second = service.handle_continue(
        {
            "draft_so_far": "宇" + first["continuation"],
            "continue_tokens": 3,
            "strategy": "greedy",
        }
    )
    combined = service.handle_generate(
        {"prompt": "宇", "max_tokens": 6, "strategy": "greedy"}
    )
    assert first["continuation"] + second["continuation"] == combined["text"]


def test_continue_at_eos_certain_state_is_empty():
    vocab = small_vocab("天地")
    chain = ChainLm(vocab, encode("天地", vocab), stop=True)
    config = ServiceConfig(decoding=DecodingConfig(strategy="greedy", max_tokens=500))
    service = DraftingService(config, lm=chain, lexicon=default_lexicon())
    resp = service.handle_continue(
        {"draft_so_far": "天地", "continue_tokens": 10, "strategy": "greedy"}
    )
    assert resp["continuation"] == ""
    assert resp["finish_reason"] == "eos"
    assert resp["token_count"] == 0


def test_validate_handler(kn_service):
    resp = kn_service.handle_validate({"text": FACTS_SAMPLE})
    assert resp["verdict"]["strict_ok"] is True
    assert resp["annotated"].startswith("一、<LEO_SOC>")
    again = kn_service.handle_validate({"text": FACTS_SAMPLE})
    assert resp == again
    with pytest.raises(ServiceError):
        kn_service.handle_validate({"text": ""})
    nothing = kn_service.handle_validate({"text": "你好"})
    assert nothing["verdict"]["relaxed_ok"] is False
    assert len(nothing["verdict"]["missing"]) == 6


def test_info_handler(kn_service):
    info = kn_service.handle_info()
    assert info["backend"] == "kneser-ney"
    assert info["vocab_size"] == len(kn_service.lm.vocab)
    assert len(info["model_hash"]) == 64
    assert info["lexicon_stats"]["LEO_CAU"] >= 3
    assert info["default_config"]["max_tokens"] == 500


def test_model_hash_stable_across_reload(kn_service):
    again = DraftingService(kn_service.config)
    assert again.handle_info()["model_hash"] == kn_service.handle_info()["model_hash"]


def test_session_log_is_metadata_only(kn_service):
    log_path = kn_service.config.session_log_path
    before = open(log_path, encoding="utf-8").read() if os.path.exists(log_path) else ""
    kn_service.handle_generate({"prompt": PROMPT_SAMPLE, "max_tokens": 20, "seed": 5})
    lines = open(log_path, encoding="utf-8").read()[len(before):].strip().split("\n")
    assert len(lines) == 1
    entry = json.loads(lines[0])
    assert entry["kind"] == "generate"
    assert entry["prompt_len"] == len(PROMPT_SAMPLE)
    assert "text" not in entry  # privacy default: no draft content
    assert "strict_ok" in entry and "relaxed_ok" in entry


def test_session_log_full_opt_in(tmp_path):
    vocab = small_vocab("天地玄黃")
    chain = ChainLm(vocab, encode("天地玄黃", vocab), stop=False)
    config = ServiceConfig(
        session_log_path=str(tmp_path / "full.log"),
        log_full=True,
        decoding=DecodingConfig(strategy="greedy"),
    )
    service = DraftingService(config, lm=chain, lexicon=default_lexicon())
    service.handle_generate({"prompt": "天", "max_tokens": 3})
    entry = json.loads(open(config.session_log_path, encoding="utf-8").readline())
    assert "text" in entry


def test_config_file_parsing(tmp_path):
    path = tmp_path / "lexdraft.conf"
    path.write_text(
        "# service settings\n"
        "host = 127.0.0.1\n"
        "port = 9009\n"
        "model = /tmp/m.lm\n"
        "log_full = true\n"
        "k = 12\n"
        "max_tokens = 200\n",
        encoding="utf-8",
    )
    config = load_service_config(path)
    assert config.port == 9009
    assert config.model_path == "/tmp/m.lm"
    assert config.log_full is True
    assert config.decoding.k == 12
    assert config.decoding.max_tokens == 200
    path.write_text("bogus = 1\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_service_config(path)


# -- HTTP layer -----------------------------------------------------------------


@pytest.fixture(scope="module")
def http_base(kn_service):
    config = ServiceConfig(
        port=0,  # ephemeral
        model_path=kn_service.config.model_path,
        decoding=kn_service.config.decoding,
    )
    service = DraftingService(config, lm=kn_service.lm, lexicon=kn_service.lexicon)
    server = make_server(service)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


def test_http_generate(http_base):
    resp = requests.post(
        f"{http_base}/api/generate",
        json={"prompt": "一、", "max_tokens": 30, "seed": 4},
        timeout=10,
    )
    assert resp.status_code == 200
    body = resp.json()
    assert "text" in body and "verdict" in body


def test_http_validate_and_info(http_base):
    resp = requests.post(
        f"{http_base}/api/validate", json={"text": FACTS_SAMPLE}, timeout=10
    )
    assert resp.status_code == 200
    assert resp.json()["verdict"]["strict_ok"] is True
    info = requests.get(f"{http_base}/api/info", timeout=10)
    assert info.status_code == 200
    assert info.json()["backend"] == "kneser-ney"


def test_http_error_shapes(http_base):
    resp = requests.post(f"{http_base}/api/generate", json={"prompt": ""}, timeout=10)
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"] == "bad_config"
    assert "message" in body
    resp = requests.post(f"{http_base}/api/nope", json={}, timeout=10)
    assert resp.status_code == 404
    resp = requests.post(
        f"{http_base}/api/generate", data=b"not json", timeout=10
    )
    assert resp.status_code == 400


def test_http_request_too_large(http_base):
    resp = requests.post(
        f"{http_base}/api/validate",
        json={"text": "x" * (2 << 20)},
        timeout=10,
    )
    assert resp.status_code == 413
    assert resp.json()["error"] == "too_large"


def test_http_fallback_index(http_base):
    resp = requests.get(f"{http_base}/", timeout=10)
    assert resp.status_code == 200
    assert "lexdraft" in resp.text


def test_http_static_dir(tmp_path, kn_service):
    static = tmp_path / "dist"
    static.mkdir()
    (static / "index.html").write_text("<html>workbench</html>", encoding="utf-8")
    (static / "app.js").write_text("console.log(1)", encoding="utf-8")
    config = ServiceConfig(
        model_path=kn_service.config.model_path,
        static_dir=str(static),
        port=0,
        decoding=DecodingConfig(),
    )
    service = DraftingService(config, lm=kn_service.lm, lexicon=kn_service.lexicon)
    server = make_server(service)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    try:
        assert "workbench" in requests.get(f"{base}/", timeout=10).text
        js = requests.get(f"{base}/app.js", timeout=10)
        assert js.status_code == 200
        assert "javascript" in js.headers["Content-Type"]
        assert requests.get(f"{base}/../secret", timeout=10).status_code == 404
        assert requests.get(f"{base}/missing.css", timeout=10).status_code == 404
    finally:
        server.shutdown()
        server.server_close()
