"""Shared fixtures and independent oracles used across the test modules."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import numpy as np

from phishbowl.trends import Alert, TrendConfig, TrendTracker

OCR_HEADER = "\t".join(
    (
        "level",
        "page_num",
        "block_num",
        "par_num",
        "line_num",
        "word_num",
        "left",
        "top",
        "width",
        "height",
        "conf",
        "text",
    )
)


def ocr_row(
    text: str,
    line: int,
    word: int,
    top: int,
    height: int = 20,
    conf: float = 95.0,
    level: int = 5,
    block: int = 1,
    par: int = 1,
    left: int | None = None,
    width: int = 50,
) -> str:
    if left is None:
        left = word * 60
    cells = (level, 1, block, par, line, word, left, top, width, height, conf, text)
    return "\t".join(str(cell) for cell in cells)


def ocr_table(lines: list[list[str]], heights: list[int] | None = None) -> str:
    """Build a word table from line texts; one row per word, 100px per line."""
    rows = [OCR_HEADER]
    for index, words in enumerate(lines):
        height = heights[index] if heights else 20
        for position, word in enumerate(words, start=1):
            rows.append(
                ocr_row(word, line=index + 1, word=position, top=100 * index, height=height)
            )
    return "\n".join(rows) + "\n"


def brute_force_nearest(
    vectors: np.ndarray, ids: list[str], query: np.ndarray, k: int
) -> list[tuple[str, float]]:
    """Independent exact scan: per-row squared distances, ties by row order."""
    scored = []
    for index in range(vectors.shape[0]):
        diff = vectors[index] - query
        scored.append((float(np.sum(diff * diff)), index))
    scored.sort(key=lambda pair: (pair[0], pair[1]))
    return [(ids[index], distance) for distance, index in scored[:k]]


def simulate_campaign(
    p_alert: int,
    k_alert: float,
    days: int,
    t_alert: float,
    daily_volume: int = 100,
) -> tuple[TrendTracker, list[tuple[int, Alert]], float]:
    """Run a campaign at p_alert% of daily volume for `days` days.

    Day 0 is warm-up traffic (filler only) so the daily-volume estimate is
    exact from day 1 on. Within a day every observation carries the same
    timestamp, so decay happens only across the exact one-day boundaries.
    Returns the tracker, the alerts fired tagged with their day, and the
    campaign group's final score.
    """
    config = TrendConfig(
        delta=0.05, k_alert=k_alert, t_alert=t_alert, daily_window_days=7
    )
    tracker = TrendTracker(config)
    dimension = 4
    target = np.zeros(dimension)
    target[0] = 1.0
    filler = np.zeros(dimension)
    filler[1] = 1.0
    start = datetime(2026, 3, 1, 12, 0, tzinfo=timezone.utc)

    fired: list[tuple[int, Alert]] = []
    for _ in range(daily_volume):
        alert = tracker.add_observation(filler, 0.0, start)
        assert alert is None
    for day in range(1, days + 1):
        at = start + timedelta(days=day)
        for _ in range(daily_volume - p_alert):
            alert = tracker.add_observation(filler, 0.0, at)
            assert alert is None
        for _ in range(p_alert):
            alert = tracker.add_observation(target, 1.0, at)
            if alert is not None:
                fired.append((day, alert))
    target_groups = [
        group
        for group in tracker.groups
        if np.array_equal(group.representative_vector, target)
    ]
    assert len(target_groups) == 1
    return tracker, fired, target_groups[0].score
