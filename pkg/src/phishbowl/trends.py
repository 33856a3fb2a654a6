"""Campaign trend tracking over the stream of processed emails.

Each email joins the group whose representative vector is within a squared
distance of delta, or founds a new group. A group's score decays by
k_alert ** t over t idle days and grows by (100 / n_tilde) * label per
email, where n_tilde is the trailing mean of daily traffic, so the score
approximates "percent of recent daily volume looking like this campaign",
accumulated geometrically. One alert fires when an armed group's score
reaches t_alert; the group re-arms once its score decays back below.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Optional

import numpy as np

_SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class TrendConfig:
    delta: float = 0.2
    k_alert: float = 0.5
    t_alert: float = 35.0
    daily_window_days: int = 7

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not 0.0 < self.k_alert < 1.0:
            raise ValueError("k_alert must be in (0, 1)")
        if self.t_alert <= 0:
            raise ValueError("t_alert must be positive")
        if self.daily_window_days < 1:
            raise ValueError("daily_window_days must be at least 1")


@dataclass
class TrendGroup:
    group_id: str
    representative_record_id: Optional[str]
    score: float
    last_update: datetime
    member_count: int
    alert_armed: bool
    representative_vector: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class Alert:
    group_id: str
    representative_record_id: Optional[str]
    score_at_alert: float
    timestamp: str


def calibrate_threshold(p_alert: float, k_alert: float, days: int) -> float:
    """Score reached by a campaign at p_alert% of daily volume after `days`
    consecutive days (geometric accumulation with inter-day decay k_alert).
    """
    if p_alert <= 0:
        raise ValueError("p_alert must be positive")
    if not 0.0 < k_alert < 1.0:
        raise ValueError("k_alert must be in (0, 1)")
    if days < 1:
        raise ValueError("days must be at least 1")
    return p_alert * (1.0 - k_alert**days) / (1.0 - k_alert)


def _as_utc(at: datetime) -> datetime:
    if at.tzinfo is None:
        return at.replace(tzinfo=timezone.utc)
    return at.astimezone(timezone.utc)


class DailyVolume:
    """Trailing mean of per-day processed-email counts, floored at 1.

    Days before the first observation ever seen are not part of the window;
    until a day has completed, the estimate falls back to today's running
    count so early traffic does not produce wild score increments.
    """

    def __init__(self, window_days: int = 7) -> None:
        self.window_days = window_days
        self.counts: dict[date, int] = {}
        self.first_day: Optional[date] = None

    def record(self, day: date) -> None:
        self.counts[day] = self.counts.get(day, 0) + 1
        if self.first_day is None or day < self.first_day:
            self.first_day = day

    def n_tilde(self, day: date) -> float:
        if self.first_day is None or day <= self.first_day:
            return max(1.0, float(self.counts.get(day, 0)))
        start = max(self.first_day, day - timedelta(days=self.window_days))
        span = (day - start).days
        total = sum(
            self.counts.get(start + timedelta(days=offset), 0) for offset in range(span)
        )
        return max(1.0, total / span)


class TrendTracker:
    """Groups observations, maintains decaying scores, and latches alerts.

    Groups live in memory only; alerts are appended to an optional log file
    and reloaded from it on startup.
    """

    def __init__(self, config: TrendConfig, alert_log: Optional[Path] = None) -> None:
        self.config = config
        self.alert_log = Path(alert_log) if alert_log is not None else None
        self.groups: list[TrendGroup] = []
        self.alerts: list[Alert] = []
        self.volume = DailyVolume(config.daily_window_days)
        self._lock = threading.RLock()
        if self.alert_log is not None and self.alert_log.exists():
            self._load_alerts()

    def _load_alerts(self) -> None:
        assert self.alert_log is not None
        with self.alert_log.open("r", encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    raw = json.loads(line)
                    alert = Alert(
                        group_id=raw["group_id"],
                        representative_record_id=raw["representative_record_id"],
                        score_at_alert=raw["score_at_alert"],
                        timestamp=raw["timestamp"],
                    )
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise ValueError(f"{self.alert_log}:{number}: bad alert: {exc}") from exc
                self.alerts.append(alert)

    def _persist_alert(self, alert: Alert) -> None:
        if self.alert_log is None:
            return
        payload = {
            "group_id": alert.group_id,
            "representative_record_id": alert.representative_record_id,
            "score_at_alert": alert.score_at_alert,
            "timestamp": alert.timestamp,
        }
        with self.alert_log.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(payload) + "\n")

    def _nearest_group(self, vector: np.ndarray) -> tuple[Optional[TrendGroup], float]:
        best: Optional[TrendGroup] = None
        best_distance = math.inf
        for group in self.groups:
            diff = group.representative_vector - vector
            distance = float(np.dot(diff, diff))
            if distance < best_distance:
                best, best_distance = group, distance
        return best, best_distance

    def _find_or_create(
        self, vector: np.ndarray, at: datetime, record_id: Optional[str]
    ) -> tuple[TrendGroup, bool]:
        vector = np.asarray(vector, dtype=np.float64)
        nearest, distance = self._nearest_group(vector)
        if nearest is not None and distance <= self.config.delta:
            return nearest, False
        group = TrendGroup(
            group_id=f"group-{len(self.groups) + 1}",
            representative_record_id=record_id,
            score=0.0,
            last_update=at,
            member_count=1,
            alert_armed=True,
            representative_vector=vector,
        )
        self.groups.append(group)
        return group, True

    def assign_group(self, vector: np.ndarray, at: Optional[datetime] = None) -> str:
        with self._lock:
            group, _ = self._find_or_create(
                vector, _as_utc(at or datetime.now(timezone.utc)), None
            )
            return group.group_id

    def add_observation(
        self,
        vector: np.ndarray,
        label: float,
        at: datetime,
        record_id: Optional[str] = None,
    ) -> Optional[Alert]:
        if not 0.0 <= label <= 1.0:
            raise ValueError("label must be in [0, 1]")
        at = _as_utc(at)
        with self._lock:
            day = at.date()
            n_tilde = self.volume.n_tilde(day)
            self.volume.record(day)
            group, created = self._find_or_create(vector, at, record_id)
            if not created:
                elapsed = (at - group.last_update).total_seconds()
                if elapsed < 0:
                    raise ValueError(
                        f"observation at {at.isoformat()} precedes group"
                        f" {group.group_id} last update"
                    )
                group.score *= self.config.k_alert ** (elapsed / _SECONDS_PER_DAY)
                group.member_count += 1
            if not group.alert_armed and group.score < self.config.t_alert:
                group.alert_armed = True
            group.score += (100.0 / n_tilde) * label
            group.last_update = at
            if group.alert_armed and group.score >= self.config.t_alert:
                alert = Alert(
                    group_id=group.group_id,
                    representative_record_id=group.representative_record_id,
                    score_at_alert=group.score,
                    timestamp=at.isoformat(),
                )
                group.alert_armed = False
                self.alerts.append(alert)
                self._persist_alert(alert)
                return alert
            return None

    def snapshot(self, at: Optional[datetime] = None) -> list[TrendGroup]:
        """Groups with scores decayed to `at`, highest score first.

        Read-only: the stored groups are not mutated.
        """
        at = _as_utc(at or datetime.now(timezone.utc))
        with self._lock:
            views = []
            for group in self.groups:
                elapsed = (at - group.last_update).total_seconds()
                factor = (
                    self.config.k_alert ** (elapsed / _SECONDS_PER_DAY)
                    if elapsed > 0
                    else 1.0
                )
                views.append(replace(group, score=group.score * factor))
            views.sort(key=lambda group: group.score, reverse=True)
            return views
