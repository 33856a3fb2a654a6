"""Blend the bowl analyzer's score with the chat-model verdict.

The bowl's vote only counts when the bowl is confident: its weight is
coefficient * l_conf ** exponent, the verdict takes the rest. With an empty
bowl the confidence is zero and the verdict decides alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

Mode = Literal["ensemble", "gpt_only"]


@dataclass(frozen=True)
class EnsembleConfig:
    coefficient: float = 0.8
    exponent: float = 0.5
    decision_threshold: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.coefficient <= 1.0:
            raise ValueError("coefficient must be in [0, 1]")
        # exponent = 0 would hand the bowl full weight at zero confidence
        if self.exponent <= 0.0:
            raise ValueError("exponent must be positive")
        if not 0.0 < self.decision_threshold < 1.0:
            raise ValueError("decision_threshold must be in (0, 1)")


@dataclass(frozen=True)
class Classification:
    l_ensemble: float
    is_phishing: bool
    l_raw: float
    l_conf: float
    l_gpt: float
    mode: Mode


def weight_policy(l_conf: float, config: EnsembleConfig) -> float:
    """Bowl weight in [0, coefficient], increasing with bowl confidence."""
    if not 0.0 <= l_conf <= 1.0:
        raise ValueError("l_conf must be in [0, 1]")
    return config.coefficient * l_conf**config.exponent


def combine(
    l_raw: float,
    l_conf: float,
    l_gpt: float,
    config: EnsembleConfig,
    mode: Mode = "ensemble",
) -> Classification:
    for name, value in (("l_raw", l_raw), ("l_conf", l_conf), ("l_gpt", l_gpt)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    weight = weight_policy(l_conf, config)
    blended = l_raw * l_conf * weight + l_gpt * (1.0 - weight)
    # Provably in [0, 1] for unit-cube inputs; clip only strips float dust.
    l_ensemble = min(1.0, max(0.0, blended))
    return Classification(
        l_ensemble=l_ensemble,
        is_phishing=l_ensemble >= config.decision_threshold,
        l_raw=l_raw,
        l_conf=l_conf,
        l_gpt=l_gpt,
        mode=mode,
    )


def gpt_only(l_gpt: float, config: EnsembleConfig) -> Classification:
    """Cold-bowl path: zero confidence leaves the verdict label untouched."""
    return combine(0.0, 0.0, l_gpt, config, mode="gpt_only")
