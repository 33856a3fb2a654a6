"""phishbowl: adaptive phishing detection over a shared bowl of known phish.

Submitted emails are anonymized, rendered to text, embedded, and stored;
new emails are classified by blending a nearest-neighbor vote over the
stored samples with a chat-model verdict, and a trend tracker raises
alerts when one campaign starts dominating daily traffic.
"""

from .anonymizer import (
    ANONYMIZE_PROMPT,
    AnonymizationError,
    AnonymizedEmail,
    DeterministicAnonymizerClient,
    anonymize,
    build_anonymize_prompt,
    parse_anonymizer_response,
)
from .bowl import (
    BowlConfig,
    BowlRecord,
    BowlScore,
    DuplicateRecordError,
    EmptyBowlError,
    Neighbor,
    PhishBowl,
    confidence_decay,
    new_record,
    reciprocal_weights,
    weighted_label,
)
from .clients import (
    ChatClient,
    ChatClientError,
    RemoteChatClient,
    ResponseFormatError,
    ScriptedChatClient,
)
from .config import (
    ChatConfig,
    ConfigError,
    EmbedderConfig,
    PlatformConfig,
    ServiceConfig,
    StorageConfig,
    config_from_dict,
    load_config,
)
from .emails import (
    CharTokenEstimator,
    ConverterConfig,
    EmailContent,
    LabeledEmail,
    TruncationError,
    TruncationStrategy,
    email_to_text,
    estimate_tokens,
)
from .embedding import (
    EmbeddingClient,
    EmbeddingError,
    HashedEmbedder,
    HashedEmbedderConfig,
    RemoteEmbeddingClient,
)
from .ensemble import (
    Classification,
    EnsembleConfig,
    combine,
    gpt_only,
    weight_policy,
)
from .evaluation import (
    ConfusionCounts,
    ExperimentResult,
    ExperimentSpec,
    Metrics,
    format_metric,
    format_result_row,
    load_corpus,
    metrics,
    run_experiment,
    synthetic_corpus,
    write_corpus,
)
from .ocr import (
    ExtractedEmail,
    NoConfidentTextError,
    OcrConfig,
    OcrParseError,
    OcrWord,
    extract_email,
    parse_word_table,
)
from .service import PipelineError, Platform, create_app, serve
from .trends import (
    Alert,
    DailyVolume,
    TrendConfig,
    TrendGroup,
    TrendTracker,
    calibrate_threshold,
)
from .verdict import (
    CLASSIFY_PROMPT,
    GptVerdict,
    HeuristicVerdictClient,
    VerdictError,
    build_classify_prompt,
    classify_text,
    parse_verdict,
    verdict_to_label,
)

__version__ = "0.1.0"
