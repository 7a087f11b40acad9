"""Wire-format tests: canonical bytes, strict decoding, fuzz resilience."""

import json
import random

from hypothesis import given, settings
from hypothesis import strategies as st

import generators
from loide.protocol import (
    Envelope,
    OptionEntry,
    ProblemCode,
    ProblemReport,
    RunRequest,
    RunResult,
    decode,
    encode,
    malformed,
    salvage_id,
)

RUN = Envelope(
    "run",
    "r-1",
    RunRequest(
        language="asp",
        engine="builtin",
        options=(OptionEntry("filter", ("p", "q")),),
        sources=("a.", "b :- a."),
    ),
)


def test_encoding_is_canonical_bytes():
    assert encode(RUN) == (
        b'{"type":"run","id":"r-1","payload":{"language":"asp","engine":"builtin",'
        b'"options":[{"name":"filter","values":["p","q"]}],"sources":["a.","b :- a."]}}'
    )


def test_encoding_is_deterministic_and_newline_free():
    one, two = encode(RUN), encode(RUN)
    assert one == two
    assert b"\n" not in one


def test_result_and_problem_payload_shapes():
    result = encode(Envelope("result", "x", RunResult("m", "e")))
    assert json.loads(result)["payload"] == {"model": "m", "error": "e"}
    problem = encode(
        Envelope("problem", "x", ProblemReport(ProblemCode.TIMEOUT, "too slow"))
    )
    assert json.loads(problem)["payload"] == {"code": "timeout", "detail": "too slow"}


def test_ping_pong_have_empty_payload():
    assert json.loads(encode(Envelope("ping", "7")))["payload"] == {}
    assert decode(encode(Envelope("pong", "7"))) == Envelope("pong", "7")


def test_unicode_survives_round_trip():
    message = Envelope("result", "猫-🚀", RunResult("Answer set 1\n{p(猫)}", ""))
    data = encode(message)
    assert "猫".encode("utf-8") in data  # ensure_ascii off: readable frames
    assert decode(data) == message


def test_round_trip_seeded_sample():
    rng = random.Random(7)
    for _ in range(300):
        message = generators.random_envelope(rng)
        data = encode(message)
        assert decode(data) == message
        assert encode(decode(data)) == data


def test_encode_rejects_invalid_envelopes():
    import pytest

    with pytest.raises(ValueError):
        encode(Envelope("shout", "x"))
    with pytest.raises(ValueError):
        encode(Envelope("run", "x", RunRequest("ASP", "builtin")))  # bad identifier
    with pytest.raises(ValueError):
        encode(Envelope("run", "x", RunRequest("asp", "builtin", (OptionEntry(""),))))


def test_decode_reports_first_missing_field():
    got = decode(b'{"type":"run","id":"x","payload":{"language":"asp"}}')
    assert isinstance(got, ProblemReport)
    assert got.code is ProblemCode.MALFORMED_MESSAGE
    assert "engine" in got.detail


def test_decode_rejects_wrong_types_not_coerces():
    frames = [
        b'{"type":"run","id":5,"payload":{}}',
        b'{"type":"result","id":"x","payload":{"model":3,"error":""}}',
        b'{"type":"problem","id":"x","payload":{"code":"nope","detail":"d"}}',
        b'{"type":"problem","id":"x","payload":{"code":"timeout","detail":""}}',
        b'{"type":"engines","id":"x","payload":{"engines":[{"language":"asp","engine":"e","kind":"magic","allowed_options":[],"default_timeout":1}]}}',
        b'{"type":"engines","id":"x","payload":{"engines":[{"language":"asp","engine":"e","kind":"builtin","allowed_options":[],"default_timeout":true}]}}',
        b'{"type":"ping","id":"x","payload":[]}',
        b'[1,2,3]',
        b'"just a string"',
    ]
    for frame in frames:
        got = decode(frame)
        assert isinstance(got, ProblemReport), frame
        assert got.code is ProblemCode.MALFORMED_MESSAGE


def test_decode_ignores_unknown_extra_keys():
    got = decode(
        b'{"type":"ping","id":"x","payload":{},"trace":"abc","v":2}'
    )
    assert got == Envelope("ping", "x")


def test_salvage_id_from_broken_frames():
    assert salvage_id(b'{"id":"r-9","type":"run","payload":{"oops') == ""
    assert salvage_id(b'{"id":"r-9","type":"nope","payload":{}}') == "r-9"
    assert salvage_id(b"\xff\xfe") == ""
    assert salvage_id(b'{"id":17}') == ""


def test_malformed_helper():
    report = malformed("why")
    assert report.code is ProblemCode.MALFORMED_MESSAGE
    assert report.detail == "why"


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=400))
def test_decode_never_raises_on_arbitrary_bytes(data):
    got = decode(data)
    assert isinstance(got, (Envelope, ProblemReport))


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=300))
def test_decode_never_raises_on_arbitrary_text(text):
    got = decode(text)
    assert isinstance(got, (Envelope, ProblemReport))
