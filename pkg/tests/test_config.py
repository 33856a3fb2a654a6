from pathlib import Path

import pytest

from phishbowl.config import (
    ChatConfig,
    ConfigError,
    EmbedderConfig,
    PlatformConfig,
    config_from_dict,
    load_config,
    with_storage,
)
from phishbowl.emails import TruncationStrategy


def write_toml(tmp_path, text):
    path = tmp_path / "config.toml"
    path.write_text(text, encoding="utf-8")
    return path


class TestDefaults:
    def test_no_file_gives_defaults(self):
        config = load_config(None)
        assert config == PlatformConfig()
        assert config.service.port == 8000
        assert config.embedder.kind == "hashed"
        assert config.chat.kind == "mock"
        assert config.storage.bowl_path is None
        assert config.bowl.k == 12
        assert config.ensemble.coefficient == 0.8
        assert config.trends.t_alert == 35.0

    def test_empty_dict_gives_defaults(self):
        assert config_from_dict({}) == PlatformConfig()


class TestTomlLoading:
    def test_sections_parsed(self, tmp_path):
        path = write_toml(
            tmp_path,
            """
            [service]
            host = "0.0.0.0"
            port = 9001

            [storage]
            bowl_path = "data/bowl.jsonl"

            [embedder]
            dimension = 64

            [bowl]
            k = 5
            decay = 1.5

            [converter]
            token_limit = 512
            strategy = "content_end"

            [trends]
            t_alert = 20.0
            """,
        )
        config = load_config(path)
        assert config.service.host == "0.0.0.0"
        assert config.service.port == 9001
        assert config.storage.bowl_path == Path("data/bowl.jsonl")
        assert config.embedder.dimension == 64
        assert config.bowl.k == 5
        assert config.bowl.decay == 1.5
        assert config.converter.token_limit == 512
        assert config.converter.strategy is TruncationStrategy.CONTENT_END
        assert config.trends.t_alert == 20.0
        # untouched sections keep their defaults
        assert config.ensemble == PlatformConfig().ensemble

    def test_ocr_term_lists_become_tuples(self, tmp_path):
        path = write_toml(
            tmp_path,
            """
            [ocr]
            header_terms = ["de", "aan"]
            greeting_terms = ["hoi"]
            """,
        )
        config = load_config(path)
        assert config.ocr.header_terms == ("de", "aan")
        assert config.ocr.greeting_terms == ("hoi",)

    def test_unknown_section_rejected(self, tmp_path):
        path = write_toml(tmp_path, "[databse]\nurl = 'x'\n")
        with pytest.raises(ConfigError, match="databse"):
            load_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_toml(tmp_path, "[service]\nprot = 8000\n")
        with pytest.raises(ConfigError, match=r"\[service\].*prot"):
            load_config(path)

    def test_invalid_toml_rejected(self, tmp_path):
        path = write_toml(tmp_path, "not toml ===\n")
        with pytest.raises(ConfigError, match="TOML"):
            load_config(path)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "absent.toml")

    def test_bad_strategy_lists_options(self, tmp_path):
        path = write_toml(tmp_path, "[converter]\nstrategy = 'truncate'\n")
        with pytest.raises(ConfigError, match="content_end"):
            load_config(path)

    def test_constraint_violations_name_section(self, tmp_path):
        path = write_toml(tmp_path, "[bowl]\nk = 0\n")
        with pytest.raises(ConfigError, match=r"\[bowl\]"):
            load_config(path)

    def test_scalar_section_rejected(self):
        with pytest.raises(ConfigError, match="table"):
            config_from_dict({"service": 5})


class TestKindValidation:
    def test_remote_embedder_needs_endpoint(self):
        with pytest.raises(ValueError, match="endpoint"):
            EmbedderConfig(kind="remote")

    def test_remote_chat_needs_endpoint(self):
        with pytest.raises(ValueError, match="endpoint"):
            ChatConfig(kind="remote")

    def test_unknown_kinds_rejected(self):
        with pytest.raises(ValueError):
            EmbedderConfig(kind="onnx")
        with pytest.raises(ValueError):
            ChatConfig(kind="scripted")

    def test_remote_with_endpoint_accepted(self):
        config = EmbedderConfig(kind="remote", endpoint="https://e.example", model="m")
        assert config.endpoint == "https://e.example"


class TestWithStorage:
    def test_fills_unset_paths(self):
        config = with_storage(PlatformConfig(), Path("a.jsonl"), Path("b.jsonl"))
        assert config.storage.bowl_path == Path("a.jsonl")
        assert config.storage.alert_log_path == Path("b.jsonl")

    def test_keeps_explicit_paths(self, tmp_path):
        explicit = config_from_dict({"storage": {"bowl_path": "explicit.jsonl"}})
        config = with_storage(explicit, Path("default.jsonl"), None)
        assert config.storage.bowl_path == Path("explicit.jsonl")

    def test_none_defaults_leave_paths_unset(self):
        config = with_storage(PlatformConfig(), None, None)
        assert config.storage.bowl_path is None
        assert config.storage.alert_log_path is None
