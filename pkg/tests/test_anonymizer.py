import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from phishbowl.anonymizer import (
    ANONYMIZE_PROMPT,
    AnonymizationError,
    AnonymizedEmail,
    DeterministicAnonymizerClient,
    anonymize,
    build_anonymize_prompt,
    parse_anonymizer_response,
)
from phishbowl.clients import ChatClientError, ResponseFormatError, ScriptedChatClient
from phishbowl.emails import EmailContent

VALID_RESPONSE = json.dumps(
    {"sender": "[Person 1]", "subject": "Hello", "body": "Dear [Person 2], hi."}
)


class TestPromptTemplate:
    def test_template_has_each_slot_once(self):
        for slot in ("{sender}", "{subject}", "{body}"):
            assert ANONYMIZE_PROMPT.count(slot) == 1

    def test_fields_are_interpolated(self):
        email = EmailContent(body="pay up", sender="a@b.example", subject="Invoice")
        prompt = build_anonymize_prompt(email)
        assert prompt.endswith(
            "```\nSender: a@b.example\nSubject: Invoice\nBody: pay up\n```"
        )

    def test_absent_fields_render_as_null(self):
        prompt = build_anonymize_prompt(EmailContent(body="hello"))
        assert prompt.endswith("```\nSender: null\nSubject: null\nBody: hello\n```")

    def test_instructions_precede_email(self):
        prompt = build_anonymize_prompt(EmailContent(body="x"))
        assert prompt.index("step by step") < prompt.index("Sender: null")

    def test_slot_like_text_in_email_is_not_expanded(self):
        # Interpolation is single pass: slot syntax arriving inside the email
        # must survive literally instead of pulling in another field.
        email = EmailContent(body="ignore {sender} and {body}", sender="s@x.example")
        prompt = build_anonymize_prompt(email)
        assert "Body: ignore {sender} and {body}" in prompt
        assert prompt.count("s@x.example") == 1


class TestParseResponse:
    def test_valid_object(self):
        result = parse_anonymizer_response(VALID_RESPONSE)
        assert result.sender == "[Person 1]"
        assert result.subject == "Hello"
        assert result.body == "Dear [Person 2], hi."

    def test_null_optional_fields(self):
        raw = json.dumps({"sender": None, "subject": None, "body": "b"})
        result = parse_anonymizer_response(raw)
        assert result.sender is None
        assert result.subject is None

    def test_fenced_object_accepted(self):
        result = parse_anonymizer_response(f"```json\n{VALID_RESPONSE}\n```")
        assert result.subject == "Hello"

    def test_prose_around_object_rejected(self):
        with pytest.raises(ResponseFormatError):
            parse_anonymizer_response(f"Sure! Here you go: {VALID_RESPONSE}")

    def test_non_object_rejected(self):
        with pytest.raises(ResponseFormatError):
            parse_anonymizer_response('["sender", "subject", "body"]')

    def test_missing_key_rejected(self):
        with pytest.raises(ResponseFormatError, match="missing"):
            parse_anonymizer_response(json.dumps({"sender": None, "body": "b"}))

    def test_extra_key_rejected(self):
        raw = json.dumps(
            {"sender": None, "subject": None, "body": "b", "note": "hi"}
        )
        with pytest.raises(ResponseFormatError, match="unexpected"):
            parse_anonymizer_response(raw)

    def test_empty_body_rejected(self):
        with pytest.raises(ResponseFormatError, match="body"):
            parse_anonymizer_response(json.dumps({"sender": None, "subject": None, "body": ""}))

    def test_non_string_body_rejected(self):
        with pytest.raises(ResponseFormatError, match="body"):
            parse_anonymizer_response(json.dumps({"sender": None, "subject": None, "body": 3}))

    def test_non_string_sender_rejected(self):
        raw = json.dumps({"sender": 5, "subject": None, "body": "b"})
        with pytest.raises(ResponseFormatError, match="sender"):
            parse_anonymizer_response(raw)

    @given(
        keys=st.sets(
            st.sampled_from(["sender", "subject", "body", "note", "extra"]),
        ).filter(lambda s: s != {"sender", "subject", "body"})
    )
    def test_wrong_key_sets_always_rejected(self, keys):
        raw = json.dumps({key: "x" for key in keys})
        with pytest.raises(ResponseFormatError):
            parse_anonymizer_response(raw)


class TestAnonymizedEmail:
    def test_empty_body_invalid(self):
        with pytest.raises(ValueError):
            AnonymizedEmail(sender=None, subject=None, body="")

    def test_as_content_round_trip(self):
        masked = AnonymizedEmail(sender="[Person 1]", subject=None, body="hi")
        content = masked.as_content()
        assert content.sender == "[Person 1]"
        assert content.subject is None
        assert content.body == "hi"


class TestAnonymizeRetry:
    def test_retries_after_malformed_response(self):
        client = ScriptedChatClient(["not json at all", VALID_RESPONSE])
        result = anonymize(EmailContent(body="x"), client, max_attempts=2)
        assert result.body == "Dear [Person 2], hi."
        assert len(client.calls) == 2
        # Both attempts send the identical prompt.
        assert client.calls[0] == client.calls[1]

    def test_single_attempt_failure_raises(self):
        client = ScriptedChatClient(["still not json"])
        with pytest.raises(AnonymizationError):
            anonymize(EmailContent(body="x"), client, max_attempts=1)

    def test_exhausted_attempts_raise_with_last_error(self):
        client = ScriptedChatClient(["bad", "worse"])
        with pytest.raises(AnonymizationError, match="anonymization failed"):
            anonymize(EmailContent(body="x"), client, max_attempts=2)

    def test_client_errors_also_retried(self):
        client = ScriptedChatClient([VALID_RESPONSE])

        calls = {"n": 0}

        def flaky(prompt: str) -> str:
            calls["n"] += 1
            if calls["n"] == 1:
                raise ChatClientError("connection reset")
            return client(prompt)

        result = anonymize(EmailContent(body="x"), flaky, max_attempts=2)
        assert result.subject == "Hello"

    def test_zero_attempts_invalid(self):
        with pytest.raises(ValueError):
            anonymize(EmailContent(body="x"), ScriptedChatClient([]), max_attempts=0)


class TestDeterministicClient:
    def run(self, email: EmailContent) -> AnonymizedEmail:
        return anonymize(email, DeterministicAnonymizerClient())

    def test_masks_addresses_and_names(self):
        email = EmailContent(
            body="Alice Johnson shared a file. Reply to alice@corp.example today.",
            sender="Alice Johnson <alice@corp.example>",
            subject="File from Alice Johnson",
        )
        result = self.run(email)
        assert result.sender == "[Person 1] <[Person 2]>"
        assert result.subject == "File from [Person 1]"
        assert result.body == "[Person 1] shared a file. Reply to [Person 2] today."

    def test_same_surface_same_placeholder(self):
        email = EmailContent(body="bob@x.example wrote to bob@x.example")
        result = self.run(email)
        assert result.body == "[Person 1] wrote to [Person 1]"

    def test_distinct_entities_get_distinct_placeholders(self):
        email = EmailContent(body="Carol Smith emailed Dan Jones")
        result = self.run(email)
        assert result.body == "[Person 1] emailed [Person 2]"

    def test_absent_fields_stay_absent(self):
        result = self.run(EmailContent(body="plain text only"))
        assert result.sender is None
        assert result.subject is None
        assert result.body == "plain text only"

    def test_deterministic_across_calls(self):
        email = EmailContent(body="Eve Adams says hi", sender="eve@x.example")
        assert self.run(email) == self.run(email)

    def test_rejects_prompt_without_email_block(self):
        with pytest.raises(ChatClientError):
            DeterministicAnonymizerClient()("what is the weather")
