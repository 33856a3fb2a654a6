"""Chat-completion client contract, adapters, and response plumbing.

A chat client is any callable taking a prompt string and returning the
model's text response. The remote adapter speaks the common chat-completions
wire format; scripted clients exist for tests that need exact responses.
Response parsing helpers live here because every prompt in this package
demands a bare JSON object, with at most one fenced code block tolerated.
"""

from __future__ import annotations

import json
import os
import re
from typing import Collection, Protocol

import requests


class ChatClientError(RuntimeError):
    """Transport or protocol failure while talking to a chat model."""


class ResponseFormatError(ValueError):
    """A client response does not match the schema its prompt demanded."""


class ChatClient(Protocol):
    def __call__(self, prompt: str) -> str: ...


_FENCE = re.compile(r"\A```[A-Za-z0-9_-]*[ \t]*\n(.*?)\n?```\Z", re.DOTALL)


def strip_code_fence(raw: str) -> str:
    """Remove one optional surrounding code fence; reject malformed fences."""
    text = raw.strip()
    if text.startswith("```"):
        fenced = _FENCE.match(text)
        if fenced is None:
            raise ResponseFormatError("unterminated or malformed code fence")
        text = fenced.group(1).strip()
    return text


def parse_json_object(raw: str, keys: Collection[str]) -> dict:
    """Parse a response as a JSON object carrying exactly the given keys.

    Prose before or after the object is rejected; the prompts say the reply
    must not contain anything beyond the object itself.
    """
    text = strip_code_fence(raw)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ResponseFormatError(f"response is not a single JSON object: {exc}") from exc
    if not isinstance(payload, dict):
        raise ResponseFormatError(f"expected a JSON object, got {type(payload).__name__}")
    expected = set(keys)
    missing = expected - payload.keys()
    extra = payload.keys() - expected
    if missing:
        raise ResponseFormatError(f"missing keys: {sorted(missing)}")
    if extra:
        raise ResponseFormatError(f"unexpected keys: {sorted(extra)}")
    return payload


class RemoteChatClient:
    """Adapter for an OpenAI-style chat-completions endpoint.

    The auth token is read from the environment at call time so the service
    can start without credentials when a mock client is selected instead.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        token_env: str = "PHISHBOWL_CHAT_TOKEN",
        timeout: float = 60.0,
    ) -> None:
        self.endpoint = endpoint
        self.model = model
        self.token_env = token_env
        self.timeout = timeout

    def __call__(self, prompt: str) -> str:
        headers = {}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        }
        try:
            response = requests.post(
                self.endpoint, json=payload, headers=headers, timeout=self.timeout
            )
            response.raise_for_status()
            body = response.json()
            return body["choices"][0]["message"]["content"]
        except (requests.RequestException, KeyError, IndexError, TypeError, ValueError) as exc:
            raise ChatClientError(f"chat completion failed: {exc}") from exc


class ScriptedChatClient:
    """Returns canned responses in order; raises when the script runs out."""

    def __init__(self, responses: list[str]) -> None:
        self._responses = list(responses)
        self.calls: list[str] = []

    def __call__(self, prompt: str) -> str:
        self.calls.append(prompt)
        if not self._responses:
            raise ChatClientError("scripted client has no responses left")
        return self._responses.pop(0)
