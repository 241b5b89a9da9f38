"""Backend abstraction for chat completion.

Four interchangeable mechanisms: a remote chat-completion HTTP endpoint,
a local-model bridge command, a file-export mode for manual chat sessions,
and a deterministic mock for offline testing. Auth tokens come from an
environment variable and are never logged or exported.
"""

from __future__ import annotations

import json
import os
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import BackendError
from .prompts import AssembledPrompt, export_json, extract_payload, prompt_to_payload

BACKEND_KINDS = ("remote", "local", "export", "mock")

DEFAULT_MAX_TOKENS = 4096
DEFAULT_BATCH_SIZE = 8

REQUEST_TIMEOUT_SECONDS = 300.0
TRANSPORT_RETRIES = 2  # retries on transport errors only, with backoff
RETRY_BACKOFF_SECONDS = 0.5

MOCK_FSOURCE_STUB = "! fortran-c interface stub (mock backend)\n"

EXPORT_SENTINEL = (
    "prompt exported to {path}; paste it into a chat interface, save the "
    "reply to a file, then run `scribe resume <stem> <reply-file>`"
)

_sleep = time.sleep  # patched in tests to avoid real backoff delays


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "mock"
    model_name: str = "mock"
    endpoint_url: str | None = None
    max_tokens: int = DEFAULT_MAX_TOKENS
    batch_size: int = DEFAULT_BATCH_SIZE
    temperature: float | None = None
    top_p: float | None = None
    auth_token_env_var: str | None = None
    local_command: tuple[str, ...] | None = None
    export_path: str | None = None

    def validate(self) -> None:
        if self.kind not in BACKEND_KINDS:
            raise BackendError(f"unknown backend kind {self.kind!r}; expected one of {BACKEND_KINDS}")
        if self.max_tokens <= 0:
            raise BackendError("max_tokens must be positive")
        if self.batch_size < 1:
            raise BackendError("batch_size must be at least 1")
        if self.kind == "remote" and not self.endpoint_url:
            raise BackendError("remote backend requires endpoint_url")
        if self.kind == "local" and not self.local_command:
            raise BackendError("local backend requires local_command")
        if self.kind == "export" and not self.export_path:
            raise BackendError("export backend requires export_path (a directory)")


@dataclass
class CompletionResponse:
    text: str
    backend: str
    model_name: str
    finish_reason: str  # "complete", "truncated", or "error"
    error: str | None = None


def _request_body(prompt: AssembledPrompt, cfg: BackendConfig) -> dict:
    body = dict(prompt_to_payload(prompt))
    body["model"] = cfg.model_name
    body["max_tokens"] = cfg.max_tokens
    if cfg.temperature is not None:
        body["temperature"] = cfg.temperature
    if cfg.top_p is not None:
        body["top_p"] = cfg.top_p
    return body


def _remote_complete(prompt: AssembledPrompt, cfg: BackendConfig) -> CompletionResponse:
    headers = {"Content-Type": "application/json"}
    if cfg.auth_token_env_var:
        token = os.environ.get(cfg.auth_token_env_var)
        if not token:
            raise BackendError(
                f"auth token environment variable {cfg.auth_token_env_var} is not set"
            )
        headers["Authorization"] = f"Bearer {token}"

    body = _request_body(prompt, cfg)
    last_exc: Exception | None = None
    for attempt in range(TRANSPORT_RETRIES + 1):
        try:
            resp = requests.post(
                cfg.endpoint_url, json=body, headers=headers, timeout=REQUEST_TIMEOUT_SECONDS
            )
            break
        except (requests.ConnectionError, requests.Timeout) as exc:
            last_exc = exc
            if attempt < TRANSPORT_RETRIES:
                _sleep(RETRY_BACKOFF_SECONDS * (2 ** attempt))
    else:
        raise BackendError(
            f"transport failure after {TRANSPORT_RETRIES + 1} attempts: {last_exc}"
        )

    if resp.status_code != 200:
        snippet = resp.text[:200]
        raise BackendError(f"chat endpoint returned HTTP {resp.status_code}: {snippet}")
    try:
        data = resp.json()
        choice = data["choices"][0]
        text = choice["message"]["content"]
        raw_finish = choice.get("finish_reason")
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise BackendError(f"malformed chat-completion response body: {exc}")
    finish = "truncated" if raw_finish == "length" else "complete"
    return CompletionResponse(
        text=text, backend="remote", model_name=cfg.model_name, finish_reason=finish
    )


def _local_complete(prompt: AssembledPrompt, cfg: BackendConfig) -> CompletionResponse:
    payload = json.dumps(prompt_to_payload(prompt))
    try:
        proc = subprocess.run(
            list(cfg.local_command),
            input=payload,
            capture_output=True,
            text=True,
            timeout=REQUEST_TIMEOUT_SECONDS,
        )
    except OSError as exc:
        raise BackendError(f"local bridge failed to start: {exc}")
    except subprocess.TimeoutExpired:
        raise BackendError("local bridge timed out")
    if proc.returncode != 0:
        raise BackendError(
            f"local bridge exited with status {proc.returncode}: {proc.stderr.strip()[:200]}"
        )
    return CompletionResponse(
        text=proc.stdout, backend="local", model_name=cfg.model_name, finish_reason="complete"
    )


def _export_complete(prompt: AssembledPrompt, cfg: BackendConfig) -> CompletionResponse:
    out_dir = Path(cfg.export_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / f"{prompt.source_file.stem}.prompt.json"
    export_json(prompt, target)
    return CompletionResponse(
        text=EXPORT_SENTINEL.format(path=target),
        backend="export",
        model_name=cfg.model_name,
        finish_reason="complete",
    )


def _mock_complete(prompt: AssembledPrompt, cfg: BackendConfig) -> CompletionResponse:
    """Deterministic synthesis: echo the draft as csource, or the whole message.

    Translate prompts carry a <draft> block; the mock returns it verbatim
    inside <csource> tags plus a fixed <fsource> stub, which makes the full
    pipeline a pure function of its inputs. Prompts without a draft block
    (inspection) are echoed back, proving what context was injected.
    """
    last = prompt.last_content()
    draft = extract_payload("draft", last)
    if draft is not None:
        text = (
            f"<csource>{draft}</csource>\n"
            f"<fsource>{MOCK_FSOURCE_STUB}</fsource>\n"
        )
    else:
        text = last
    return CompletionResponse(
        text=text, backend="mock", model_name=cfg.model_name, finish_reason="complete"
    )


_BACKENDS = {
    "remote": _remote_complete,
    "local": _local_complete,
    "export": _export_complete,
    "mock": _mock_complete,
}


def complete(prompt: AssembledPrompt, cfg: BackendConfig) -> CompletionResponse:
    """One chat completion through the configured backend."""
    cfg.validate()
    return _BACKENDS[cfg.kind](prompt, cfg)


def complete_batch(
    prompts: list[AssembledPrompt], cfg: BackendConfig
) -> list[CompletionResponse]:
    """Complete prompts with at most batch_size requests in flight.

    Responses come back in input order; a failing prompt yields an
    error-marked response at its index instead of aborting the batch.
    """
    if not prompts:
        raise ValueError("complete_batch needs at least one prompt")
    cfg.validate()

    def run_one(prompt: AssembledPrompt) -> CompletionResponse:
        try:
            return complete(prompt, cfg)
        except BackendError as exc:
            return CompletionResponse(
                text="",
                backend=cfg.kind,
                model_name=cfg.model_name,
                finish_reason="error",
                error=str(exc),
            )

    if len(prompts) == 1:
        return [run_one(prompts[0])]
    with ThreadPoolExecutor(max_workers=min(cfg.batch_size, len(prompts))) as pool:
        return list(pool.map(run_one, prompts))
