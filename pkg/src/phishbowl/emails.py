"""Structured email types, the email-to-text renderer, and token-budget truncation.

Converted text always opens with a label line ("This is a phishing email:",
"This is a benign email:", or "This is a email:" when no label is known),
followed by optional "From:"/"To:" lines and the body. Four truncation
strategies fit the result into a token budget; token counts default to a
characters-times-0.2815 estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

DEFAULT_TOKENS_PER_CHAR = 0.2815

# Any callable mapping text to a non-negative token count. Must be monotone
# non-decreasing in text length for end-truncation to be well defined.
TokenCounter = Callable[[str], int]


class TruncationStrategy(Enum):
    NO_TRUNCATION = "none"
    END = "end"
    CONTENT = "content"
    CONTENT_END = "content_end"


class TruncationError(ValueError):
    """The converted email cannot be made to fit the token limit."""


@dataclass(frozen=True)
class EmailContent:
    """An email as received. Absent sender/subject is distinct from empty."""

    body: str
    sender: str | None = None
    subject: str | None = None

    def __post_init__(self) -> None:
        if not self.body.strip():
            raise ValueError("email body must be non-empty")


@dataclass(frozen=True)
class LabeledEmail:
    """Email content plus an optional binary label (1 phishing, 0 benign)."""

    content: EmailContent
    label: int | None = None

    def __post_init__(self) -> None:
        if self.label is not None and self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class ConverterConfig:
    strategy: TruncationStrategy = TruncationStrategy.NO_TRUNCATION
    token_limit: int = 8192
    tokens_per_char: float = DEFAULT_TOKENS_PER_CHAR

    def __post_init__(self) -> None:
        if self.token_limit < 8:
            raise ValueError("token_limit must be at least 8")
        if self.tokens_per_char <= 0:
            raise ValueError("tokens_per_char must be positive")


def estimate_tokens(text: str, tokens_per_char: float = DEFAULT_TOKENS_PER_CHAR) -> int:
    """Estimate the token count of `text` as ceil(chars * tokens_per_char).

    Characters are Unicode scalar values, not bytes; the ceiling keeps the
    estimate conservative for budget checks.
    """
    if tokens_per_char <= 0:
        raise ValueError("tokens_per_char must be positive")
    return math.ceil(len(text) * tokens_per_char)


@dataclass(frozen=True)
class CharTokenEstimator:
    """Default token counter: linear in character count, rounded up."""

    tokens_per_char: float = DEFAULT_TOKENS_PER_CHAR

    def __call__(self, text: str) -> int:
        return estimate_tokens(text, self.tokens_per_char)


def _label_line(label: int | None) -> str:
    if label == 1:
        return "This is a phishing email:"
    if label == 0:
        return "This is a benign email:"
    return "This is a email:"


def _render(
    email: LabeledEmail,
    keep_label: bool = True,
    keep_sender: bool = True,
    keep_subject: bool = True,
) -> str:
    content = email.content
    lines = [_label_line(email.label if keep_label else None)]
    if keep_sender and content.sender is not None:
        lines.append(f"From: {content.sender}")
    if keep_subject and content.subject is not None:
        lines.append(f"To: {content.subject}")
    lines.append(content.body)
    return "\n".join(lines)


def _longest_fitting_prefix(text: str, counter: TokenCounter, limit: int) -> str:
    if counter(text) <= limit:
        return text
    if counter("") > limit:
        raise TruncationError("token_limit too small: even the empty text exceeds it")
    # Counter is monotone in length, so binary-search the cut point and the
    # result is exact after the final verification above.
    lo, hi = 0, len(text)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if counter(text[:mid]) <= limit:
            lo = mid
        else:
            hi = mid - 1
    return text[:lo]


# Drop order for the content-priority strategies: subject first, then sender,
# then the label word (the opening line stays, reading "This is a email:").
# The body is only ever cut by end-truncation, after everything else is gone.
_DROP_STAGES = (
    (True, True, True),
    (True, True, False),
    (True, False, False),
    (False, False, False),
)


def email_to_text(
    email: LabeledEmail,
    config: ConverterConfig,
    counter: TokenCounter | None = None,
) -> str:
    """Render an email to a single text string, truncated per the strategy.

    Deterministic: identical inputs yield byte-identical outputs. For every
    strategy except NO_TRUNCATION the returned text satisfies
    counter(text) <= config.token_limit; CONTENT raises TruncationError when
    the body alone cannot fit, since it never cuts the body.
    """
    if counter is None:
        counter = CharTokenEstimator(config.tokens_per_char)
    strategy = config.strategy
    if strategy is TruncationStrategy.NO_TRUNCATION:
        return _render(email)
    limit = config.token_limit
    if strategy is TruncationStrategy.END:
        return _longest_fitting_prefix(_render(email), counter, limit)

    for keep_label, keep_sender, keep_subject in _DROP_STAGES:
        text = _render(email, keep_label, keep_sender, keep_subject)
        if counter(text) <= limit:
            return text
    if strategy is TruncationStrategy.CONTENT:
        raise TruncationError(
            f"body alone exceeds the token limit of {limit}; "
            "strategy 'content' does not cut the body"
        )
    return _longest_fitting_prefix(_render(email, False, False, False), counter, limit)
