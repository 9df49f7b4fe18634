"""Drafting service: full-draft generation, continuation, and validation.

Handlers are pure functions over the loaded model and lexicon so they can be
called in-process or through the bundled threaded HTTP server. Everything
runs on the local host; no outbound connection is ever made unless a remote
model endpoint is configured explicitly.

By default the session log records request metadata only, never draft text.
"""

from __future__ import annotations

import datetime
import hashlib
import json
import mimetypes
import os
import threading
import uuid
from dataclasses import dataclass, field, replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .decoding import DecodingConfig, generate
from .elements import (
    FormatVerdict,
    Lexicon,
    TaggedSpan,
    annotate,
    default_lexicon,
    load_lexicon,
    tag_text,
    validate_format,
)
from .modelfile import load_model

DISCLAIMER = (
    "Generated names, dates, places and amounts are model output; "
    "revise them to the actual facts of the case."
)

CONTINUE_CAP = 100


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8631
    model_path: str = ""
    lexicon_path: str = ""
    session_log_path: str = ""
    static_dir: str = ""
    log_full: bool = False
    max_request_bytes: int = 1 << 20
    decoding: DecodingConfig = field(default_factory=DecodingConfig)


_CONFIG_KEYS = {
    "host": str,
    "port": int,
    "model": ("model_path", str),
    "lexicon": ("lexicon_path", str),
    "session_log": ("session_log_path", str),
    "static_dir": str,
    "log_full": bool,
    "max_request_bytes": int,
}
_DECODING_KEYS = {
    "strategy": str,
    "k": int,
    "p": float,
    "temperature": float,
    "beam_width": int,
    "max_tokens": int,
    "seed": int,
}


def load_service_config(path) -> ServiceConfig:
    """Parse a key = value config file."""
    config = ServiceConfig()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in _CONFIG_KEYS:
                spec = _CONFIG_KEYS[key]
                attr, typ = spec if isinstance(spec, tuple) else (key, spec)
                if typ is bool:
                    setattr(config, attr, value.lower() in ("1", "true", "yes"))
                else:
                    setattr(config, attr, typ(value))
            elif key in _DECODING_KEYS:
                setattr(config.decoding, key, _DECODING_KEYS[key](value))
            else:
                raise ValueError(f"unknown config key {key!r}")
    return config


def config_from_env() -> ServiceConfig:
    path = os.environ.get("LEXDRAFT_CONFIG")
    return load_service_config(path) if path else ServiceConfig()


def _verdict_json(verdict: FormatVerdict) -> dict:
    return {
        "strict_ok": verdict.strict_ok,
        "relaxed_ok": verdict.relaxed_ok,
        "first_occurrence_order": [t.value for t in verdict.first_occurrence_order],
        "missing": sorted(t.value for t in verdict.missing),
    }


def _spans_json(spans: list[TaggedSpan]) -> list[dict]:
    return [
        {"start": s.start, "end": s.end, "tag": s.tag.value, "pattern": s.pattern}
        for s in spans
    ]


class DraftingService:
    def __init__(self, config: ServiceConfig, lm=None, lexicon: Lexicon | None = None):
        self.config = config
        self.lm = lm if lm is not None else load_model(config.model_path)
        if lexicon is not None:
            self.lexicon = lexicon
        elif config.lexicon_path:
            self.lexicon = load_lexicon(config.lexicon_path)
        else:
            self.lexicon = default_lexicon()
        self._log_lock = threading.Lock()
        self._model_hash = self._hash_model_file(config.model_path)

    @staticmethod
    def _hash_model_file(path) -> str:
        if not path or not Path(path).exists():
            return ""
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()

    # -- request plumbing ------------------------------------------------

    def _merge_config(self, payload: dict) -> DecodingConfig:
        merged = replace(self.config.decoding)
        for key, typ in _DECODING_KEYS.items():
            if key in payload and payload[key] is not None:
                try:
                    setattr(merged, key, typ(payload[key]))
                except (TypeError, ValueError):
                    raise ServiceError(400, "bad_config", f"bad value for {key!r}")
        merged.max_tokens = min(merged.max_tokens, self.config.decoding.max_tokens)
        try:
            merged.validate()
        except ValueError as e:
            raise ServiceError(400, "bad_config", str(e))
        return merged

    def _log(self, kind: str, prompt_len: int, config: DecodingConfig,
             token_count: int, verdict: FormatVerdict, session: str, text: str = ""):
        if not self.config.session_log_path:
            return
        entry = {
            "ts": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "session": session,
            "kind": kind,
            "prompt_len": prompt_len,
            "config": {
                "strategy": config.strategy,
                "k": config.k,
                "p": config.p,
                "temperature": config.temperature,
                "beam_width": config.beam_width,
                "max_tokens": config.max_tokens,
                "seed": config.seed,
            },
            "token_count": token_count,
            "strict_ok": verdict.strict_ok,
            "relaxed_ok": verdict.relaxed_ok,
        }
        if self.config.log_full and text:
            entry["text"] = text
        line = json.dumps(entry, ensure_ascii=False)
        with self._log_lock:
            with open(self.config.session_log_path, "a", encoding="utf-8") as f:
                f.write(line + "\n")

    @staticmethod
    def _session_of(payload: dict) -> str:
        return str(payload.get("session_id") or uuid.uuid4())

    # -- handlers ---------------------------------------------------------

    def handle_generate(self, payload: dict) -> dict:
        prompt = payload.get("prompt", "")
        if not isinstance(prompt, str) or not prompt:
            raise ServiceError(400, "bad_config", "prompt must be a non-empty string")
        config = self._merge_config(payload)
        try:
            result = generate(self.lm, prompt, config)
        except ServiceError:
            raise
        except Exception as e:
            raise ServiceError(500, "generation_failed", str(e))
        full_text = prompt + result.text
        spans = tag_text(full_text, self.lexicon)
        verdict = validate_format(full_text, self.lexicon)
        self._log("generate", len(prompt), config, result.token_count, verdict,
                  self._session_of(payload), full_text)
        return {
            "text": result.text,
            "token_count": result.token_count,
            "finish_reason": result.finish_reason,
            "verdict": _verdict_json(verdict),
            "spans": _spans_json(spans),
            "disclaimer": DISCLAIMER,
        }

    def handle_continue(self, payload: dict) -> dict:
        draft = payload.get("draft_so_far", "")
        if not isinstance(draft, str) or not draft:
            raise ServiceError(400, "bad_config", "draft_so_far must be a non-empty string")
        tokens = payload.get("continue_tokens", 30)
        if not isinstance(tokens, int) or tokens < 1 or tokens > CONTINUE_CAP:
            raise ServiceError(
                400, "bad_config", f"continue_tokens must be in 1..{CONTINUE_CAP}"
            )
        config = self._merge_config(payload)
        config.max_tokens = tokens
        try:
            result = generate(self.lm, draft, config)
        except Exception as e:
            raise ServiceError(500, "generation_failed", str(e))
        full_text = draft + result.text
        spans = tag_text(full_text, self.lexicon)
        verdict = validate_format(full_text, self.lexicon)
        self._log("continue", len(draft), config, result.token_count, verdict,
                  self._session_of(payload), full_text)
        return {
            "continuation": result.text,
            "token_count": result.token_count,
            "finish_reason": result.finish_reason,
            "verdict": _verdict_json(verdict),
            "spans": _spans_json(spans),
            "disclaimer": DISCLAIMER,
        }

    def handle_validate(self, payload: dict) -> dict:
        text = payload.get("text", "")
        if not isinstance(text, str) or not text:
            raise ServiceError(400, "bad_config", "text must be a non-empty string")
        spans = tag_text(text, self.lexicon)
        verdict = validate_format(text, self.lexicon)
        return {
            "verdict": _verdict_json(verdict),
            "spans": _spans_json(spans),
            "annotated": annotate(text, spans),
        }

    def handle_info(self) -> dict:
        backend = type(self.lm).__name__
        kind = {
            "KneserNeyModel": "kneser-ney",
            "NeuralLm": "neural",
            "RemoteLm": "remote",
        }.get(backend, backend)
        d = self.config.decoding
        return {
            "backend": kind,
            "vocab_size": len(self.lm.vocab),
            "model_hash": self._model_hash,
            "default_config": {
                "strategy": d.strategy,
                "k": d.k,
                "p": d.p,
                "temperature": d.temperature,
                "beam_width": d.beam_width,
                "max_tokens": d.max_tokens,
                "seed": d.seed,
            },
            "lexicon_stats": self.lexicon.stats(),
        }


_FALLBACK_INDEX = (
    "<!doctype html><meta charset='utf-8'><title>lexdraft</title>"
    "<h1>lexdraft drafting service</h1>"
    "<p>No web UI bundle is installed. The JSON API is available under "
    "<code>/api/</code>; see <a href='/api/info'>/api/info</a>.</p>"
)


class _Handler(BaseHTTPRequestHandler):
    service: DraftingService = None  # set by make_server

    def log_message(self, format, *args):  # quiet by default
        pass

    def _send_json(self, status: int, obj: dict) -> None:
        body = json.dumps(obj, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        routes = {
            "/api/generate": self.service.handle_generate,
            "/api/continue": self.service.handle_continue,
            "/api/validate": self.service.handle_validate,
        }
        handler = routes.get(self.path)
        if handler is None:
            self._send_json(404, {"error": "not_found", "message": self.path})
            return
        length = int(self.headers.get("Content-Length", 0))
        if length > self.service.config.max_request_bytes:
            self._send_json(413, {"error": "too_large", "message": "request body too large"})
            return
        try:
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
            if not isinstance(payload, dict):
                raise ValueError("body must be a JSON object")
        except (ValueError, UnicodeDecodeError) as e:
            self._send_json(400, {"error": "bad_config", "message": str(e)})
            return
        try:
            self._send_json(200, handler(payload))
        except ServiceError as e:
            self._send_json(e.status, {"error": e.code, "message": e.message})

    def do_GET(self):
        if self.path == "/api/info":
            self._send_json(200, self.service.handle_info())
            return
        self._serve_static()

    def _serve_static(self):
        static_dir = self.service.config.static_dir
        path = self.path.split("?", 1)[0]
        if path == "/":
            path = "/index.html"
        if not static_dir:
            if path == "/index.html":
                body = _FALLBACK_INDEX.encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "text/html; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
            else:
                self._send_json(404, {"error": "not_found", "message": path})
            return
        root = Path(static_dir).resolve()
        target = (root / path.lstrip("/")).resolve()
        inside = target == root or root in target.parents
        if not inside or not target.is_file():
            self._send_json(404, {"error": "not_found", "message": path})
            return
        body = target.read_bytes()
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(service: DraftingService) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((service.config.host, service.config.port), handler)


def serve(service: DraftingService) -> None:
    server = make_server(service)
    try:
        server.serve_forever()
    finally:
        server.server_close()
