"""Turn an OCR engine's word table into sender, subject, and body fields.

Consumes the 12-column tab-separated word-level output of common OCR engines
(level, page, block, paragraph, line, word, left, top, width, height, conf,
text). Extraction works line by line: confidence filtering, header-term
matching to bound the header, greeting matching to find the body start,
text-height statistics to pick out the subject, and an address regex for the
sender.
"""

from __future__ import annotations

import re
import statistics
from dataclasses import dataclass, field

DEFAULT_EMAIL_PATTERN = r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}"

_WORD_LEVEL = 5
_COLUMNS = 12


class OcrParseError(ValueError):
    """The word table is malformed (bad header, row shape, or field type)."""


class NoConfidentTextError(ValueError):
    """No word survives the confidence filter."""


@dataclass(frozen=True)
class OcrWord:
    text: str
    confidence: float
    line_key: tuple[int, int, int]  # (block, paragraph, line)
    left: int
    top: int
    width: int
    height: int


@dataclass(frozen=True)
class OcrConfig:
    t_ocr: float = 80.0
    t_header: int = 7
    k_subject: float = 1.25
    k_logo: float = 1.5
    header_terms: tuple[str, ...] = ("from", "to", "subject", "sender")
    greeting_terms: tuple[str, ...] = ("hi", "hello", "dear")
    email_pattern: str = DEFAULT_EMAIL_PATTERN

    def __post_init__(self) -> None:
        if not 0 <= self.t_ocr <= 100:
            raise ValueError("t_ocr must be in [0, 100]")
        if self.t_header < 1:
            raise ValueError("t_header must be at least 1")
        if not self.k_logo >= self.k_subject > 0:
            raise ValueError("need k_logo >= k_subject > 0")


@dataclass(frozen=True)
class ExtractedEmail:
    sender: str | None
    subject: str | None
    body: str
    header_until: int
    body_from: int


@dataclass(frozen=True)
class _Line:
    key: tuple[int, int, int]
    words: tuple[OcrWord, ...]
    text: str = field(init=False)
    mean_height: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "text", " ".join(w.text for w in self.words))
        object.__setattr__(
            self, "mean_height", sum(w.height for w in self.words) / len(self.words)
        )


def parse_word_table(raw: str) -> list[OcrWord]:
    """Parse a tab-separated word table into word-level entries.

    Only word-level rows with non-empty text and a real confidence score are
    kept (the engine marks structural rows with confidence -1). Row order is
    preserved. Raises OcrParseError with the offending 1-based line number.
    """
    lines = raw.splitlines()
    if not lines:
        raise OcrParseError("empty input: expected a 12-column header row")
    header = lines[0].lstrip("﻿").split("\t")
    if len(header) != _COLUMNS or header[0].strip().lower() != "level":
        raise OcrParseError(
            f"header row must name the {_COLUMNS} standard columns, got {len(header)}"
        )

    words: list[OcrWord] = []
    for row_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t", _COLUMNS - 1)
        if len(fields) < _COLUMNS:
            raise OcrParseError(f"row {row_no}: expected {_COLUMNS} columns, got {len(fields)}")
        try:
            level = int(fields[0])
            block = int(fields[2])
            paragraph = int(fields[3])
            line_num = int(fields[4])
            left = int(fields[6])
            top = int(fields[7])
            width = int(fields[8])
            height = int(fields[9])
            conf = float(fields[10])
        except ValueError as exc:
            raise OcrParseError(f"row {row_no}: non-numeric field ({exc})") from None
        text = fields[11]
        if level != _WORD_LEVEL or conf < 0 or not text.strip():
            continue
        if conf > 100:
            raise OcrParseError(f"row {row_no}: confidence {conf} outside [0, 100]")
        if height <= 0:
            raise OcrParseError(f"row {row_no}: word row with non-positive height")
        words.append(
            OcrWord(
                text=text,
                confidence=conf,
                line_key=(block, paragraph, line_num),
                left=left,
                top=top,
                width=width,
                height=height,
            )
        )
    return words


def _group_lines(words: list[OcrWord]) -> list[_Line]:
    by_key: dict[tuple[int, int, int], list[OcrWord]] = {}
    for word in words:
        by_key.setdefault(word.line_key, []).append(word)
    lines = []
    for key, group in by_key.items():
        group.sort(key=lambda w: w.left)
        lines.append(_Line(key=key, words=tuple(group)))
    # Visual order first; the engine's own numbering breaks ties.
    lines.sort(key=lambda ln: (ln.words[0].top, ln.key))
    return lines


def _whole_word_pattern(terms: tuple[str, ...]) -> re.Pattern[str]:
    alternation = "|".join(re.escape(t) for t in terms)
    return re.compile(rf"\b(?:{alternation})\b", re.IGNORECASE)


def extract_email(words: list[OcrWord], config: OcrConfig = OcrConfig()) -> ExtractedEmail:
    """Extract sender, subject, and body from parsed OCR words.

    Steps: (1) drop words below t_ocr; (2) group into lines and take height
    statistics; (3) the header ends after the last header-term line, capped at
    t_header; (4) the body starts at the first greeting line at or past the
    header end, falling back to line 0 so nothing is lost; (5) the subject is
    the text after a literal "subject:" or, failing that, the lines whose mean
    height sits between k_subject and k_logo times the median (taller text is
    assumed to be a logo); (6) the sender is the first address-like match,
    preferring header lines.
    """
    kept = [w for w in words if w.confidence >= config.t_ocr]
    if not kept:
        raise NoConfidentTextError(
            f"no text with confidence >= {config.t_ocr} to extract from"
        )
    lines = _group_lines(kept)
    median_height = statistics.median(line.mean_height for line in lines)

    header_re = _whole_word_pattern(config.header_terms)
    header_until = 0
    for index, line in enumerate(lines):
        if header_re.search(line.text):
            header_until = index + 1
    header_until = min(header_until, config.t_header)

    greeting_re = _whole_word_pattern(config.greeting_terms)
    body_from = 0
    for index in range(header_until, len(lines)):
        if greeting_re.search(lines[index].text):
            body_from = index
            break
    body = "\n".join(line.text for line in lines[body_from:])

    subject: str | None = None
    subject_re = re.compile(r"subject\s*:", re.IGNORECASE)
    for line in lines:
        match = subject_re.search(line.text)
        if match:
            subject = line.text[match.end():].strip() or None
            break
    if subject is None:
        low = median_height * config.k_subject
        high = median_height * config.k_logo
        candidates = [line.text for line in lines if low < line.mean_height <= high]
        subject = " ".join(candidates) if candidates else None

    email_re = re.compile(config.email_pattern)
    sender: str | None = None
    for line in list(lines[:header_until]) + list(lines):
        match = email_re.search(line.text)
        if match:
            sender = match.group(0)
            break

    return ExtractedEmail(
        sender=sender,
        subject=subject,
        body=body,
        header_until=header_until,
        body_from=body_from,
    )
