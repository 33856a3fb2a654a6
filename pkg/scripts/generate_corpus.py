"""Write a synthetic labeled email corpus for experiments and preloading.

Each line is one JSON object with body/sender/subject/label. Vocabulary
overlap between the classes is tunable; zero overlap gives near-orthogonal
classes under the hashed embedder, which is handy for quick sanity checks.
"""

import argparse
from pathlib import Path

from phishbowl.evaluation import synthetic_corpus, write_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("path", type=Path, help="output corpus (JSON lines)")
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--phish-fraction", type=float, default=0.5)
    parser.add_argument(
        "--shared-fraction",
        type=float,
        default=0.0,
        help="rate at which both classes draw from a shared vocabulary",
    )
    args = parser.parse_args()

    emails = synthetic_corpus(
        args.count,
        args.seed,
        phish_fraction=args.phish_fraction,
        shared_fraction=args.shared_fraction,
    )
    write_corpus(args.path, emails)
    phish = sum(email.label == 1 for email in emails)
    print(f"wrote {len(emails)} emails ({phish} phishing) to {args.path}")


if __name__ == "__main__":
    main()
