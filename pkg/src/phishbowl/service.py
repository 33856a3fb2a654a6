"""The HTTP service tying the pipeline together.

Request handling is deliberately manual (no schema framework) so every
failure surfaces as the same {stage, message} object, whichever pipeline
stage produced it: request validation 400, unknown ids 404, everything
else 422.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .anonymizer import (
    AnonymizationError,
    AnonymizedEmail,
    DeterministicAnonymizerClient,
    anonymize,
)
from .bowl import BowlScore, EmptyBowlError, PhishBowl, new_record
from .clients import ChatClient, RemoteChatClient
from .config import PlatformConfig
from .emails import EmailContent, LabeledEmail, TruncationError, email_to_text
from .embedding import (
    EmbeddingClient,
    HashedEmbedder,
    HashedEmbedderConfig,
    RemoteEmbeddingClient,
)
from .ensemble import Classification, combine, gpt_only
from .evaluation import load_corpus
from .ocr import NoConfidentTextError, OcrParseError, extract_email, parse_word_table
from .trends import Alert, TrendTracker
from .verdict import (
    GptVerdict,
    HeuristicVerdictClient,
    VerdictError,
    classify_text,
    verdict_to_label,
)

_STATUS_BY_STAGE = {"request": 400, "lookup": 404}


class PipelineError(Exception):
    """A pipeline failure with the stage it happened in."""

    def __init__(self, stage: str, message: str) -> None:
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.message = message
        self.status = _STATUS_BY_STAGE.get(stage, 422)


def _build_embedder(config: PlatformConfig) -> EmbeddingClient:
    if config.embedder.kind == "hashed":
        return HashedEmbedder(HashedEmbedderConfig(dimension=config.embedder.dimension))
    return RemoteEmbeddingClient(
        endpoint=config.embedder.endpoint,
        model=config.embedder.model,
        dimension=config.embedder.dimension,
    )


def _build_chat_clients(config: PlatformConfig) -> tuple[ChatClient, ChatClient]:
    if config.chat.kind == "mock":
        return DeterministicAnonymizerClient(), HeuristicVerdictClient()
    remote = RemoteChatClient(endpoint=config.chat.endpoint, model=config.chat.model)
    return remote, remote


class Platform:
    """All pipeline state: embedder, chat clients, bowl, and trend tracker."""

    def __init__(
        self,
        config: Optional[PlatformConfig] = None,
        embedder: Optional[EmbeddingClient] = None,
        anonymizer_client: Optional[ChatClient] = None,
        verdict_client: Optional[ChatClient] = None,
    ) -> None:
        self.config = config or PlatformConfig()
        self.embedder = embedder or _build_embedder(self.config)
        if anonymizer_client is None or verdict_client is None:
            default_anon, default_verdict = _build_chat_clients(self.config)
            anonymizer_client = anonymizer_client or default_anon
            verdict_client = verdict_client or default_verdict
        self.anonymizer_client = anonymizer_client
        self.verdict_client = verdict_client
        storage = self.config.storage
        for path in (storage.bowl_path, storage.alert_log_path):
            if path is not None:
                Path(path).parent.mkdir(parents=True, exist_ok=True)
        self.bowl = PhishBowl(self.embedder.dimension, storage.bowl_path)
        self.trends = TrendTracker(self.config.trends, storage.alert_log_path)

    # -- pipeline stages -----------------------------------------------

    def _content_from_fields(self, payload: dict[str, Any]) -> EmailContent:
        for key in ("sender", "subject"):
            value = payload.get(key)
            if value is not None and not isinstance(value, str):
                raise PipelineError("request", f"{key} must be a string or null")
        body = payload.get("body")
        if not isinstance(body, str):
            raise PipelineError("request", "body must be a string")
        try:
            return EmailContent(
                body=body, sender=payload.get("sender"), subject=payload.get("subject")
            )
        except ValueError as exc:
            raise PipelineError("request", str(exc)) from exc

    def _content_from_ocr(self, raw: Any) -> EmailContent:
        if not isinstance(raw, str) or not raw.strip():
            raise PipelineError("request", "ocr_table must be a non-empty string")
        try:
            words = parse_word_table(raw)
            extracted = extract_email(words, self.config.ocr)
            return EmailContent(
                body=extracted.body,
                sender=extracted.sender,
                subject=extracted.subject,
            )
        except (OcrParseError, NoConfidentTextError, ValueError) as exc:
            raise PipelineError("ocr", str(exc)) from exc

    def _email_from_request(self, payload: dict[str, Any]) -> EmailContent:
        has_text = "body" in payload
        has_table = "ocr_table" in payload
        if has_text and has_table:
            raise PipelineError(
                "request", "provide either email fields or ocr_table, not both"
            )
        if has_table:
            return self._content_from_ocr(payload["ocr_table"])
        if has_text:
            allowed = {"sender", "subject", "body"}
            unknown = set(payload) - allowed
            if unknown:
                raise PipelineError("request", f"unknown fields: {sorted(unknown)}")
            return self._content_from_fields(payload)
        raise PipelineError("request", "provide email fields (body) or ocr_table")

    def _anonymize(self, content: EmailContent) -> AnonymizedEmail:
        try:
            return anonymize(
                content, self.anonymizer_client, self.config.chat.max_attempts
            )
        except AnonymizationError as exc:
            raise PipelineError("anonymize", str(exc)) from exc

    def _convert(self, email: LabeledEmail) -> str:
        try:
            return email_to_text(email, self.config.converter)
        except TruncationError as exc:
            raise PipelineError("convert", str(exc)) from exc

    def _verdict(self, text: str) -> GptVerdict:
        try:
            return classify_text(text, self.verdict_client, self.config.chat.max_attempts)
        except VerdictError as exc:
            raise PipelineError("verdict", str(exc)) from exc

    # -- operations ----------------------------------------------------

    def classify_email(
        self, content: EmailContent, at: Optional[datetime] = None
    ) -> dict[str, Any]:
        """Full pipeline; feeds the trend tracker, never writes the bowl."""
        anonymized = self._anonymize(content)
        text = self._convert(LabeledEmail(anonymized.as_content()))
        vector = self.embedder(text)
        score: Optional[BowlScore] = None
        try:
            score = self.bowl.score_vector(vector, self.config.bowl)
        except EmptyBowlError:
            pass
        verdict = self._verdict(text)
        l_gpt = verdict_to_label(verdict)
        if score is None:
            result = gpt_only(l_gpt, self.config.ensemble)
        else:
            result = combine(score.l_raw, score.l_conf, l_gpt, self.config.ensemble)
        alert = self.trends.add_observation(
            vector, result.l_ensemble, at or datetime.now(timezone.utc)
        )
        return _classify_payload(result, text, score, verdict, alert)

    def submit_email(
        self, content: EmailContent, at: Optional[datetime] = None
    ) -> dict[str, Any]:
        """Anonymize and store a user-submitted phish (label 1)."""
        anonymized = self._anonymize(content)
        stored_text = self._convert(LabeledEmail(anonymized.as_content(), label=1))
        query_text = self._convert(LabeledEmail(anonymized.as_content()))
        vector = self.embedder(query_text)
        record = new_record(stored_text, 1, "submitted", vector)
        self.bowl.add_record(record)
        alert = self.trends.add_observation(
            vector, 1.0, at or datetime.now(timezone.utc), record_id=record.id
        )
        return {
            "id": record.id,
            "anonymized_text": stored_text,
            "alert": _alert_payload(alert) if alert else None,
        }

    def classify_request(self, payload: dict[str, Any]) -> dict[str, Any]:
        return self.classify_email(self._email_from_request(payload))

    def submit_request(self, payload: dict[str, Any]) -> dict[str, Any]:
        allowed = {"sender", "subject", "body"}
        unknown = set(payload) - allowed
        if unknown:
            raise PipelineError("request", f"unknown fields: {sorted(unknown)}")
        return self.submit_email(self._content_from_fields(payload))

    def search(self, query: str, n: int) -> dict[str, Any]:
        results = self.bowl.search(query, n, self.embedder)
        return {
            "results": [
                {
                    "id": record.id,
                    "text": record.text,
                    "label": record.label,
                    "source": record.source,
                    "created_at": record.created_at,
                    "distance": distance,
                }
                for record, distance in results
            ]
        }

    def trends_view(self, at: Optional[datetime] = None) -> dict[str, Any]:
        return {
            "groups": [
                {
                    "group_id": group.group_id,
                    "score": group.score,
                    "member_count": group.member_count,
                    "last_update": group.last_update.isoformat(),
                    "alert_armed": group.alert_armed,
                    "representative_record_id": group.representative_record_id,
                }
                for group in self.trends.snapshot(at)
            ]
        }

    def alerts_view(self) -> dict[str, Any]:
        return {
            "alerts": [_alert_payload(alert) for alert in reversed(self.trends.alerts)]
        }

    def email_view(self, record_id: str) -> dict[str, Any]:
        record = self.bowl.get(record_id)
        if record is None:
            raise PipelineError("lookup", f"no email with id {record_id!r}")
        return {
            "id": record.id,
            "text": record.text,
            "label": record.label,
            "source": record.source,
            "created_at": record.created_at,
        }

    def preload(self, corpus_path: Path) -> int:
        """Bulk-ingest a pre-anonymized labeled corpus; skips the anonymizer
        and the trend tracker (historical data is not live traffic)."""
        added = 0
        for email in load_corpus(corpus_path):
            stored_text = self._convert(email)
            query_text = self._convert(LabeledEmail(email.content))
            vector = self.embedder(query_text)
            self.bowl.add_record(
                new_record(stored_text, email.label, "preloaded", vector)
            )
            added += 1
        return added


def _alert_payload(alert: Alert) -> dict[str, Any]:
    return {
        "group_id": alert.group_id,
        "representative_record_id": alert.representative_record_id,
        "score_at_alert": alert.score_at_alert,
        "timestamp": alert.timestamp,
    }


def _classify_payload(
    result: Classification,
    text: str,
    score: Optional[BowlScore],
    verdict: GptVerdict,
    alert: Optional[Alert],
) -> dict[str, Any]:
    return {
        "is_phishing": result.is_phishing,
        "l_ensemble": result.l_ensemble,
        "l_raw": result.l_raw,
        "l_conf": result.l_conf,
        "l_gpt": result.l_gpt,
        "mode": result.mode,
        "anonymized_text": text,
        "d0": score.d0 if score else None,
        "neighbors": [
            {
                "id": neighbor.id,
                "distance": neighbor.distance,
                "label": neighbor.label,
                "weight": neighbor.weight,
            }
            for neighbor in (score.neighbors if score else ())
        ],
        "verdict": {
            "is_phishing": verdict.is_phishing,
            "confidence": verdict.confidence,
            "is_impersonating": verdict.is_impersonating,
            "reason": verdict.reason,
        },
        "alert": _alert_payload(alert) if alert else None,
    }


async def _read_json_object(request: Request) -> dict[str, Any]:
    try:
        payload = json.loads(await request.body())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise PipelineError("request", f"body must be valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise PipelineError("request", "body must be a JSON object")
    return payload


def create_app(platform: Platform) -> FastAPI:
    app = FastAPI(title="phishbowl")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(PipelineError)
    async def _pipeline_error(_request: Request, exc: PipelineError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status,
            content={"stage": exc.stage, "message": exc.message},
        )

    @app.post("/api/classify")
    async def _classify(request: Request) -> dict[str, Any]:
        return platform.classify_request(await _read_json_object(request))

    @app.post("/api/submit")
    async def _submit(request: Request) -> dict[str, Any]:
        return platform.submit_request(await _read_json_object(request))

    @app.get("/api/search")
    async def _search(request: Request) -> dict[str, Any]:
        params = request.query_params
        query = params.get("q", "")
        if not query.strip():
            raise PipelineError("request", "query parameter q is required")
        raw_n = params.get("n", "10")
        try:
            n = int(raw_n)
        except ValueError:
            raise PipelineError("request", f"n must be an integer, got {raw_n!r}")
        if not 1 <= n <= 100:
            raise PipelineError("request", "n must be between 1 and 100")
        return platform.search(query, n)

    @app.get("/api/trends")
    async def _trends() -> dict[str, Any]:
        return platform.trends_view()

    @app.get("/api/alerts")
    async def _alerts() -> dict[str, Any]:
        return platform.alerts_view()

    @app.get("/api/emails/{record_id}")
    async def _email(record_id: str) -> dict[str, Any]:
        return platform.email_view(record_id)

    return app


def serve(platform: Platform) -> None:
    import uvicorn

    uvicorn.run(
        create_app(platform),
        host=platform.config.service.host,
        port=platform.config.service.port,
    )
