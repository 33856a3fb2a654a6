"""Metrics, corpus handling, and hermetic classification experiments.

Experiments run fully offline: hashed embedder, heuristic verdict client,
fixed seeds. Absolute accuracies therefore mean little; the point is the
structure (confusion counts, degenerate phish-only behavior, train-size
trends), which is what the tests pin down.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .bowl import BowlConfig, PhishBowl, new_record
from .clients import ChatClient
from .emails import ConverterConfig, EmailContent, LabeledEmail, email_to_text
from .embedding import EmbeddingClient, HashedEmbedder, HashedEmbedderConfig
from .ensemble import EnsembleConfig, combine
from .verdict import HeuristicVerdictClient, classify_text, verdict_to_label

ANALYZERS = ("bowl", "gpt", "ensemble")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        for name, value in (("tp", self.tp), ("fp", self.fp), ("tn", self.tn), ("fn", self.fn)):
            if value < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Metrics:
    accuracy: Optional[float]
    precision: Optional[float]
    recall: Optional[float]


def metrics(counts: ConfusionCounts) -> Metrics:
    """Accuracy, precision, recall; None where the denominator is zero."""
    total = counts.total
    positives = counts.tp + counts.fp
    actual = counts.tp + counts.fn
    return Metrics(
        accuracy=(counts.tp + counts.tn) / total if total else None,
        precision=counts.tp / positives if positives else None,
        recall=counts.tp / actual if actual else None,
    )


def format_metric(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value * 100:.2f}%"


def load_corpus(path: Path) -> list[LabeledEmail]:
    """Read a one-object-per-line corpus of {label, sender?, subject?, body}."""
    emails = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{number}: not valid JSON: {exc}") from exc
            if not isinstance(raw, dict):
                raise ValueError(f"{path}:{number}: each line must be an object")
            unknown = set(raw) - {"label", "sender", "subject", "body"}
            if unknown:
                raise ValueError(f"{path}:{number}: unknown keys: {sorted(unknown)}")
            try:
                emails.append(
                    LabeledEmail(
                        content=EmailContent(
                            body=raw.get("body", ""),
                            sender=raw.get("sender"),
                            subject=raw.get("subject"),
                        ),
                        label=raw.get("label"),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{number}: {exc}") from exc
            if emails[-1].label is None:
                raise ValueError(f"{path}:{number}: label is required")
    return emails


def write_corpus(path: Path, emails: Sequence[LabeledEmail]) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        for email in emails:
            payload = {
                "label": email.label,
                "sender": email.content.sender,
                "subject": email.content.subject,
                "body": email.content.body,
            }
            handle.write(json.dumps(payload) + "\n")


PHISH_TERMS = (
    "urgent", "account", "verify", "password", "suspended", "click", "prize",
    "winner", "security", "alert", "invoice", "payment", "reward", "confirm",
    "bank", "credentials", "transfer", "immediately",
)
BENIGN_TERMS = (
    "meeting", "agenda", "lunch", "notes", "report", "quarterly", "review",
    "schedule", "project", "update", "draft", "minutes", "budget", "plan",
    "standup", "slides", "feedback", "offsite",
)
SHARED_TERMS = ("hello", "thanks", "regards", "please", "team", "tomorrow")


def synthetic_corpus(
    count: int,
    seed: int,
    phish_fraction: float = 0.5,
    words_per_body: int = 12,
    shared_fraction: float = 0.0,
) -> list[LabeledEmail]:
    """Deterministic two-vocabulary corpus; classes share tokens only at the
    requested rate, so shared_fraction=0 gives near-orthogonal classes under
    the hashed embedder.
    """
    if not 0.0 <= phish_fraction <= 1.0:
        raise ValueError("phish_fraction must be in [0, 1]")
    if not 0.0 <= shared_fraction <= 1.0:
        raise ValueError("shared_fraction must be in [0, 1]")
    rng = random.Random(seed)
    n_phish = round(count * phish_fraction)

    def body(vocab: Sequence[str]) -> str:
        words = [
            rng.choice(SHARED_TERMS)
            if shared_fraction and rng.random() < shared_fraction
            else rng.choice(vocab)
            for _ in range(words_per_body)
        ]
        return " ".join(words)

    emails = []
    for index in range(count):
        label = 1 if index < n_phish else 0
        vocab = PHISH_TERMS if label else BENIGN_TERMS
        sender = (
            f"alerts{index}@mail-{rng.randrange(9)}.example"
            if label
            else f"colleague{index}@corp.example"
        )
        emails.append(
            LabeledEmail(
                content=EmailContent(
                    body=body(vocab), sender=sender, subject=body(vocab)[:24]
                ),
                label=label,
            )
        )
    rng.shuffle(emails)
    return emails


@dataclass(frozen=True)
class ExperimentSpec:
    train_size: int = 256
    test_size: int = 200
    corpus_path: Optional[Path] = None
    analyzer: str = "ensemble"
    phish_only_bowl: bool = False
    decay: Optional[float] = 0.5  # None disables confidence decay
    dimension: int = 256
    seed: int = 0

    def __post_init__(self) -> None:
        if self.analyzer not in ANALYZERS:
            raise ValueError(f"analyzer must be one of {ANALYZERS}")
        if self.train_size < 1 or self.test_size < 2:
            raise ValueError("train_size and test_size too small")

    def bowl_config(self) -> BowlConfig:
        if self.decay is None:
            return BowlConfig(decay_enabled=False)
        return BowlConfig(decay=self.decay, decay_enabled=True)


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    counts: ConfusionCounts
    scores: Metrics


def preload_bowl(
    bowl: PhishBowl,
    emails: Sequence[LabeledEmail],
    embedder: EmbeddingClient,
    converter: ConverterConfig = ConverterConfig(),
) -> None:
    """Store emails the same way the service does: labeled text, vector from
    the unlabeled rendering (what future queries will look like)."""
    for email in emails:
        stored_text = email_to_text(email, converter)
        query_text = email_to_text(LabeledEmail(email.content), converter)
        bowl.add_record(
            new_record(stored_text, email.label, "preloaded", embedder(query_text))
        )


def evaluate_split(
    bowl: PhishBowl,
    test: Sequence[LabeledEmail],
    embedder: EmbeddingClient,
    analyzer: str = "ensemble",
    bowl_config: BowlConfig = BowlConfig(),
    ensemble_config: EnsembleConfig = EnsembleConfig(),
    converter: ConverterConfig = ConverterConfig(),
    verdict_client: Optional[ChatClient] = None,
) -> ConfusionCounts:
    """Classify the test split at threshold 0.5 and tally confusion counts."""
    if analyzer not in ANALYZERS:
        raise ValueError(f"analyzer must be one of {ANALYZERS}")
    verdict_client = verdict_client or HeuristicVerdictClient()
    tp = fp = tn = fn = 0
    for email in test:
        text = email_to_text(LabeledEmail(email.content), converter)
        if analyzer == "bowl":
            score = bowl.score(text, embedder, bowl_config)
            value = score.l_raw * score.l_conf
        elif analyzer == "gpt":
            value = verdict_to_label(classify_text(text, verdict_client))
        else:
            score = bowl.score(text, embedder, bowl_config)
            l_gpt = verdict_to_label(classify_text(text, verdict_client))
            value = combine(score.l_raw, score.l_conf, l_gpt, ensemble_config).l_ensemble
        predicted = value >= 0.5
        if email.label == 1:
            tp, fn = (tp + 1, fn) if predicted else (tp, fn + 1)
        else:
            fp, tn = (fp + 1, tn) if predicted else (fp, tn + 1)
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def _split_corpus(
    corpus: Sequence[LabeledEmail], spec: ExperimentSpec, rng: random.Random
) -> tuple[list[LabeledEmail], list[LabeledEmail]]:
    phish = [email for email in corpus if email.label == 1]
    benign = [email for email in corpus if email.label == 0]
    rng.shuffle(phish)
    rng.shuffle(benign)
    half_test = spec.test_size // 2
    test = phish[:half_test] + benign[:half_test]
    rng.shuffle(test)
    phish_pool = phish[half_test:]
    benign_pool = benign[half_test:]
    if spec.phish_only_bowl:
        train = phish_pool[: spec.train_size]
    else:
        half_train = spec.train_size // 2
        train = phish_pool[:half_train] + benign_pool[: spec.train_size - half_train]
    if len(train) < spec.train_size or len(test) < 2 * half_test:
        raise ValueError("corpus too small for the requested train/test sizes")
    return train, test


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    rng = random.Random(spec.seed)
    if spec.corpus_path is not None:
        corpus = load_corpus(spec.corpus_path)
    else:
        corpus = synthetic_corpus(2 * (spec.train_size + spec.test_size), spec.seed)
    train, test = _split_corpus(corpus, spec, rng)
    embedder = HashedEmbedder(HashedEmbedderConfig(dimension=spec.dimension))
    bowl = PhishBowl(spec.dimension)
    preload_bowl(bowl, train, embedder)
    counts = evaluate_split(
        bowl, test, embedder, analyzer=spec.analyzer, bowl_config=spec.bowl_config()
    )
    return ExperimentResult(spec=spec, counts=counts, scores=metrics(counts))


def format_result_row(result: ExperimentResult) -> str:
    """One tab-separated line: analyzer, sizes, counts, then the metrics."""
    counts, scores = result.counts, result.scores
    cells = (
        result.spec.analyzer,
        str(result.spec.train_size),
        str(counts.tp),
        str(counts.fp),
        str(counts.tn),
        str(counts.fn),
        format_metric(scores.accuracy),
        format_metric(scores.precision),
        format_metric(scores.recall),
    )
    return "\t".join(cells)


RESULT_HEADER = "\t".join(
    ("analyzer", "train", "tp", "fp", "tn", "fn", "accuracy", "precision", "recall")
)
