"""Sweep confidence-decay settings over synthetic corpora.

Runs the bowl-only analyzer against a balanced test set twice per decay
value: once with a balanced training bowl and once with a phish-only bowl.
The phish-only column is the interesting one: without decay the store can
only ever vote "phishing", and the sweep shows how a stronger decay hands
low-similarity queries back to a neutral score.
"""

import argparse

from phishbowl.evaluation import (
    RESULT_HEADER,
    ExperimentSpec,
    format_result_row,
    run_experiment,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--train-size", type=int, default=256)
    parser.add_argument("--test-size", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--decays",
        type=float,
        nargs="+",
        default=[0.1, 0.5, 1.0, 2.0],
        metavar="DECAY",
    )
    args = parser.parse_args()

    for phish_only in (False, True):
        print(f"\nbowl contents: {'phishing only' if phish_only else 'balanced'}")
        print(RESULT_HEADER)
        specs = [None] + list(args.decays)  # None = decay disabled
        for decay in specs:
            result = run_experiment(
                ExperimentSpec(
                    train_size=args.train_size,
                    test_size=args.test_size,
                    analyzer="bowl",
                    phish_only_bowl=phish_only,
                    decay=decay,
                    seed=args.seed,
                )
            )
            tag = "off" if decay is None else f"{decay:g}"
            print(f"{format_result_row(result)}\tdecay={tag}")


if __name__ == "__main__":
    main()
