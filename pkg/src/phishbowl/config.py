"""Platform configuration: dataclass defaults plus an optional TOML file.

Every section and key is optional; unknown keys are rejected so a typo in a
config file fails loudly instead of silently running with defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .bowl import BowlConfig
from .emails import ConverterConfig, TruncationStrategy
from .ensemble import EnsembleConfig
from .ocr import OcrConfig
from .trends import TrendConfig


class ConfigError(ValueError):
    """The configuration file is malformed or inconsistent."""


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000


@dataclass(frozen=True)
class StorageConfig:
    bowl_path: Optional[Path] = None
    alert_log_path: Optional[Path] = None


@dataclass(frozen=True)
class EmbedderConfig:
    kind: str = "hashed"  # hashed | remote
    dimension: int = 256
    endpoint: str = ""
    model: str = ""

    def __post_init__(self) -> None:
        if self.kind not in ("hashed", "remote"):
            raise ValueError(f"embedder kind must be 'hashed' or 'remote', got {self.kind!r}")
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote embedder needs an endpoint")


@dataclass(frozen=True)
class ChatConfig:
    kind: str = "mock"  # mock | remote
    endpoint: str = ""
    model: str = ""
    max_attempts: int = 2

    def __post_init__(self) -> None:
        if self.kind not in ("mock", "remote"):
            raise ValueError(f"chat kind must be 'mock' or 'remote', got {self.kind!r}")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote chat client needs an endpoint")


@dataclass(frozen=True)
class PlatformConfig:
    service: ServiceConfig = ServiceConfig()
    storage: StorageConfig = StorageConfig()
    embedder: EmbedderConfig = EmbedderConfig()
    chat: ChatConfig = ChatConfig()
    converter: ConverterConfig = ConverterConfig()
    ocr: OcrConfig = OcrConfig()
    bowl: BowlConfig = BowlConfig()
    ensemble: EnsembleConfig = EnsembleConfig()
    trends: TrendConfig = TrendConfig()


def _build(cls: type, section: str, values: dict[str, Any]) -> Any:
    allowed = {field.name for field in fields(cls)}
    unknown = set(values) - allowed
    if unknown:
        raise ConfigError(f"[{section}] has unknown keys: {sorted(unknown)}")
    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def _coerce(section: str, values: dict[str, Any]) -> dict[str, Any]:
    values = dict(values)
    if section == "storage":
        for key in ("bowl_path", "alert_log_path"):
            if values.get(key) is not None:
                values[key] = Path(values[key])
    if section == "converter" and "strategy" in values:
        try:
            values["strategy"] = TruncationStrategy(values["strategy"])
        except ValueError as exc:
            names = [member.value for member in TruncationStrategy]
            raise ConfigError(f"[converter] strategy must be one of {names}") from exc
    if section == "ocr":
        for key in ("header_terms", "greeting_terms"):
            if key in values:
                values[key] = tuple(values[key])
    return values


_SECTIONS = {
    "service": ServiceConfig,
    "storage": StorageConfig,
    "embedder": EmbedderConfig,
    "chat": ChatConfig,
    "converter": ConverterConfig,
    "ocr": OcrConfig,
    "bowl": BowlConfig,
    "ensemble": EnsembleConfig,
    "trends": TrendConfig,
}


def config_from_dict(data: dict[str, Any]) -> PlatformConfig:
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    parts = {}
    for section, cls in _SECTIONS.items():
        raw = data.get(section, {})
        if not isinstance(raw, dict):
            raise ConfigError(f"[{section}] must be a table")
        parts[section] = _build(cls, section, _coerce(section, raw))
    return PlatformConfig(**parts)


def load_config(path: Optional[Path] = None) -> PlatformConfig:
    if path is None:
        return PlatformConfig()
    try:
        with Path(path).open("rb") as handle:
            data = tomllib.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
    return config_from_dict(data)


def with_storage(
    config: PlatformConfig,
    bowl_path: Optional[Path],
    alert_log_path: Optional[Path],
) -> PlatformConfig:
    """Copy of `config` with storage paths filled in where still unset."""
    storage = config.storage
    if storage.bowl_path is None and bowl_path is not None:
        storage = replace(storage, bowl_path=Path(bowl_path))
    if storage.alert_log_path is None and alert_log_path is not None:
        storage = replace(storage, alert_log_path=Path(alert_log_path))
    return replace(config, storage=storage)
