"""Walk a simulated phishing campaign up to its alert threshold.

One group of near-identical phishing emails arrives at a fixed percentage
of daily traffic while the rest of the volume is benign noise. The alert
threshold is calibrated so the campaign group crosses it on the chosen
day; the script prints the group score at each day boundary and the alert
that finally fires.
"""

import argparse
from datetime import datetime, timedelta, timezone

import numpy as np

from phishbowl.trends import TrendConfig, TrendTracker, calibrate_threshold


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--percent", type=float, default=20.0, help="campaign share of daily volume")
    parser.add_argument("--decay", type=float, default=0.5, help="inter-day score decay")
    parser.add_argument("--days", type=int, default=3, help="day the alert should fire")
    parser.add_argument("--volume", type=int, default=100, help="emails per day")
    args = parser.parse_args()

    threshold = calibrate_threshold(args.percent, args.decay, args.days)
    print(f"calibrated alert threshold: {threshold:.4f}")

    tracker = TrendTracker(
        TrendConfig(delta=0.05, k_alert=args.decay, t_alert=threshold)
    )
    campaign = np.array([1.0, 0.0, 0.0, 0.0])
    noise = np.array([0.0, 1.0, 0.0, 0.0])
    start = datetime(2026, 3, 1, 12, 0, tzinfo=timezone.utc)
    per_day = round(args.volume * args.percent / 100)

    # Day 0 is benign warm-up so the daily-volume estimate is settled.
    for _ in range(args.volume):
        tracker.add_observation(noise, 0.0, start)

    for day in range(1, args.days + 1):
        at = start + timedelta(days=day)
        for _ in range(args.volume - per_day):
            tracker.add_observation(noise, 0.0, at)
        fired = None
        for _ in range(per_day):
            fired = tracker.add_observation(campaign, 1.0, at) or fired
        for group in tracker.snapshot(at):
            print(
                f"day {day}: {group.group_id} score={group.score:.4f}"
                f" members={group.member_count} armed={group.alert_armed}"
            )
        if fired is not None:
            print(
                f"ALERT on day {day}: {fired.group_id}"
                f" score={fired.score_at_alert:.4f} at {fired.timestamp}"
            )


if __name__ == "__main__":
    main()
