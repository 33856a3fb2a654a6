"""Text embedding contract, a remote adapter, and a deterministic fallback.

The fallback hashes lowercase word tokens into signed buckets and
L2-normalizes the result. It is stable across runs and platforms (keyed on
blake2b, not Python's salted hash), which lets tests pin exact distances.
"""

from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass
from typing import Protocol

import numpy as np
import requests


class EmbeddingError(RuntimeError):
    """Transport or protocol failure while embedding text."""


class EmbeddingClient(Protocol):
    dimension: int

    def __call__(self, text: str) -> np.ndarray: ...


_TOKEN = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class HashedEmbedderConfig:
    dimension: int = 256

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be positive")


class HashedEmbedder:
    """Feature-hashing embedder: no model, no network, no randomness."""

    def __init__(self, config: HashedEmbedderConfig | None = None) -> None:
        self.config = config or HashedEmbedderConfig()
        self.dimension = self.config.dimension

    def __call__(self, text: str) -> np.ndarray:
        vector = np.zeros(self.dimension, dtype=np.float64)
        for token in _TOKEN.findall(text.lower()):
            digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
            value = int.from_bytes(digest, "little")
            sign = 1.0 if value & 1 else -1.0
            vector[(value >> 1) % self.dimension] += sign
        norm = float(np.linalg.norm(vector))
        if norm > 0.0:
            vector /= norm
        return vector


class RemoteEmbeddingClient:
    """Adapter for an OpenAI-style embeddings endpoint."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        dimension: int,
        token_env: str = "PHISHBOWL_EMBED_TOKEN",
        timeout: float = 60.0,
    ) -> None:
        self.endpoint = endpoint
        self.model = model
        self.dimension = dimension
        self.token_env = token_env
        self.timeout = timeout

    def __call__(self, text: str) -> np.ndarray:
        headers = {}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        payload = {"model": self.model, "input": text}
        try:
            response = requests.post(
                self.endpoint, json=payload, headers=headers, timeout=self.timeout
            )
            response.raise_for_status()
            body = response.json()
            vector = np.asarray(body["data"][0]["embedding"], dtype=np.float64)
        except (requests.RequestException, KeyError, IndexError, TypeError, ValueError) as exc:
            raise EmbeddingError(f"embedding request failed: {exc}") from exc
        if vector.shape != (self.dimension,):
            raise EmbeddingError(
                f"expected {self.dimension}-dimensional embedding, got {vector.shape}"
            )
        return vector
