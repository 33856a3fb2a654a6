"""The phish bowl: an append-only store of labeled emails with exact
nearest-neighbor scoring.

Classification is lazy learning: every stored email is kept verbatim and a
query is scored by the reciprocal-distance weighted vote of its k closest
neighbors. A confidence factor exp(-decay * d0), where d0 is the squared
distance to the nearest record, pulls the score toward zero when nothing
similar is stored, so a sparse bowl abstains rather than guesses.

Persistence is one JSON object per line; the in-memory index is rebuilt by
a full scan at startup. There is no training step to invalidate, so a newly
added record is usable by the very next query.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence
from uuid import uuid4

import numpy as np

from .embedding import EmbeddingClient

SOURCES = ("preloaded", "submitted")


class EmptyBowlError(RuntimeError):
    """Scoring needs at least one stored record."""


class DuplicateRecordError(ValueError):
    """A record with this id is already stored."""


@dataclass(frozen=True)
class BowlConfig:
    k: int = 12
    epsilon: float = 1e-8
    decay: float = 0.5
    decay_enabled: bool = True

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.decay < 0:
            raise ValueError("decay must be non-negative")


@dataclass(frozen=True)
class BowlRecord:
    id: str
    text: str
    label: int
    source: str
    created_at: str
    vector: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}")


@dataclass(frozen=True)
class Neighbor:
    id: str
    distance: float
    label: int
    weight: float


@dataclass(frozen=True)
class BowlScore:
    l_raw: float
    l_conf: float
    d0: float
    neighbors: tuple[Neighbor, ...]


def new_record(
    text: str,
    label: int,
    source: str,
    vector: np.ndarray,
    record_id: Optional[str] = None,
) -> BowlRecord:
    return BowlRecord(
        id=record_id or uuid4().hex,
        text=text,
        label=label,
        source=source,
        created_at=datetime.now(timezone.utc).isoformat(),
        vector=np.asarray(vector, dtype=np.float64),
    )


def reciprocal_weights(distances: Sequence[float], epsilon: float = 1e-8) -> np.ndarray:
    """Normalized reciprocal-distance weights for a neighbor vote.

    A neighbor at distance zero swallows nearly all the mass (its reciprocal
    is 1/epsilon), which is what makes an exact duplicate dictate the label.
    """
    inverse = 1.0 / (np.asarray(distances, dtype=np.float64) + epsilon)
    return inverse / inverse.sum()


def weighted_label(
    labels: Sequence[int], distances: Sequence[float], epsilon: float = 1e-8
) -> float:
    """Reciprocal-distance weighted vote over binary labels.

    Mathematically in [0, 1]; clipped to shed the last-ulp dust the
    normalization can leave behind.
    """
    weights = reciprocal_weights(distances, epsilon)
    votes = float(np.dot(np.asarray(labels, dtype=np.float64), weights))
    return min(1.0, max(0.0, votes))


def confidence_decay(d0: float, decay: float) -> float:
    """exp(-decay * d0); exactly 1.0 at d0 = 0 for any decay setting."""
    return math.exp(-decay * d0)


class PhishBowl:
    """Exact brute-force vector store over labeled email records.

    Reads and writes are serialized by one lock; a write is visible to every
    later read. With an optional path, every accepted record is appended to
    the log before it becomes queryable.
    """

    def __init__(self, dimension: int, path: Optional[Path] = None) -> None:
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.path = Path(path) if path is not None else None
        self._records: list[BowlRecord] = []
        self._by_id: dict[str, int] = {}
        self._matrix: Optional[np.ndarray] = None
        self._lock = threading.RLock()
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        assert self.path is not None
        with self.path.open("r", encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    raw = json.loads(line)
                    record = BowlRecord(
                        id=raw["id"],
                        text=raw["text"],
                        label=raw["label"],
                        source=raw["source"],
                        created_at=raw["created_at"],
                        vector=np.asarray(raw["vector"], dtype=np.float64),
                    )
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise ValueError(f"{self.path}:{number}: bad record: {exc}") from exc
                self._check(record)
                self._append_memory(record)

    def _check(self, record: BowlRecord) -> None:
        if record.vector.shape != (self.dimension,):
            raise ValueError(
                f"vector has shape {record.vector.shape}, store holds"
                f" {self.dimension}-dimensional records"
            )
        if record.id in self._by_id:
            raise DuplicateRecordError(f"record {record.id!r} already stored")

    def _append_memory(self, record: BowlRecord) -> None:
        self._by_id[record.id] = len(self._records)
        self._records.append(record)
        self._matrix = None

    def add_record(self, record: BowlRecord) -> str:
        with self._lock:
            self._check(record)
            if self.path is not None:
                payload = {
                    "id": record.id,
                    "text": record.text,
                    "label": record.label,
                    "source": record.source,
                    "created_at": record.created_at,
                    "vector": record.vector.tolist(),
                }
                with self.path.open("a", encoding="utf-8") as handle:
                    handle.write(json.dumps(payload) + "\n")
            self._append_memory(record)
            return record.id

    def _vectors(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.vstack([record.vector for record in self._records])
        return self._matrix

    def count(self) -> int:
        with self._lock:
            return len(self._records)

    def get(self, record_id: str) -> Optional[BowlRecord]:
        with self._lock:
            index = self._by_id.get(record_id)
            return self._records[index] if index is not None else None

    def records(self) -> Iterable[BowlRecord]:
        with self._lock:
            return list(self._records)

    def _nearest_indices(self, query: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
        query = np.asarray(query, dtype=np.float64)
        if query.shape != (self.dimension,):
            raise ValueError(f"query has shape {query.shape}, expected ({self.dimension},)")
        diff = self._vectors() - query
        distances = np.sum(diff * diff, axis=1)
        # Stable sort keeps insertion order on ties.
        order = np.argsort(distances, kind="stable")[:k]
        return order, distances[order]

    def nearest(self, query: np.ndarray, k: int) -> list[tuple[str, float]]:
        if k < 1:
            raise ValueError("k must be at least 1")
        with self._lock:
            if not self._records:
                raise EmptyBowlError("the bowl holds no records")
            order, distances = self._nearest_indices(query, k)
            return [
                (self._records[index].id, float(distance))
                for index, distance in zip(order, distances)
            ]

    def score(
        self, query_text: str, client: EmbeddingClient, config: BowlConfig
    ) -> BowlScore:
        return self.score_vector(client(query_text), config)

    def score_vector(self, query: np.ndarray, config: BowlConfig) -> BowlScore:
        with self._lock:
            if not self._records:
                raise EmptyBowlError("the bowl holds no records")
            order, distances = self._nearest_indices(query, config.k)
            weights = reciprocal_weights(distances, config.epsilon)
            labels = [self._records[index].label for index in order]
            l_raw = weighted_label(labels, distances, config.epsilon)
            d0 = float(distances[0])
            l_conf = confidence_decay(d0, config.decay) if config.decay_enabled else 1.0
            neighbors = tuple(
                Neighbor(
                    id=self._records[index].id,
                    distance=float(distance),
                    label=self._records[index].label,
                    weight=float(weight),
                )
                for index, distance, weight in zip(order, distances, weights)
            )
            return BowlScore(l_raw=l_raw, l_conf=l_conf, d0=d0, neighbors=neighbors)

    def search(
        self, query_text: str, n: int, client: EmbeddingClient
    ) -> list[tuple[BowlRecord, float]]:
        if n < 1:
            raise ValueError("n must be at least 1")
        with self._lock:
            if not self._records:
                return []
            order, distances = self._nearest_indices(client(query_text), n)
            return [
                (self._records[index], float(distance))
                for index, distance in zip(order, distances)
            ]
