import io

import pytest

from sybilgraph.errors import IngestIOError, RecordFormatError, RegistryConsistencyError
from sybilgraph.ingest import (
    RecordFormat,
    parse_proposals,
    parse_registry,
    parse_votes,
    serialize_proposals,
    serialize_votes,
)

VOTE_HEADER = "voter,proposal,space,choice,voting_power,timestamp\n"


def test_parse_votes_csv_lowercases_addresses():
    data = (VOTE_HEADER + "0xABC,p1,s1,1,2.5,1000\n0xdef,p2,s1,0,0,1001\n").encode()
    parsed = parse_votes(data)
    assert [v.voter_address for v in parsed.records] == ["0xabc", "0xdef"]
    assert parsed.records[0].voting_power == 2.5
    assert parsed.records[0].timestamp == 1000
    assert parsed.diagnostics == []


def test_parse_votes_reports_malformed_lines():
    data = (
        VOTE_HEADER
        + "0xa,p1,s1,1,1.0,1000\n"
        + "0xb,p1,s1,1,-3,1000\n"
        + "0xc,p1,s1,1,1.0,1001\n"
        + "0xd,p1,s1,1,1.0,0\n"
        + "0xe,p1,s1,1,1.0,1002\n"
    ).encode()
    parsed = parse_votes(data)
    assert len(parsed.records) == 3
    assert [d.line for d in parsed.diagnostics] == [3, 5]
    assert "negative voting_power" in parsed.diagnostics[0].reason


def test_parse_votes_rejects_mostly_malformed_input():
    data = (VOTE_HEADER + "0xa,p1,s1,1,x,1000\n0xb,p1,s1,1,y,1000\n0xc,p1,s1,1,1,1000\n").encode()
    with pytest.raises(RecordFormatError):
        parse_votes(data)


def test_parse_votes_requires_csv_header_columns():
    with pytest.raises(RecordFormatError, match="missing columns"):
        parse_votes(b"voter,proposal\n0xa,p1\n")


def test_parse_votes_json_lines():
    lines = (
        '{"voter": "0xA", "proposal": "p1", "space": "s", "choice": 2, "voting_power": 1.5, "timestamp": 7}\n'
        "\n"
        "not json\n"
        '{"voter": "0xb", "proposal": "p1", "space": "s", "choice": 1, "voting_power": 1, "timestamp": 8}\n'
    )
    parsed = parse_votes(io.BytesIO(lines.encode()), RecordFormat.JSON_LINES)
    assert [v.voter_address for v in parsed.records] == ["0xa", "0xb"]
    assert parsed.diagnostics[0].line == 3


def test_parse_votes_missing_file(tmp_path):
    with pytest.raises(IngestIOError):
        parse_votes(tmp_path / "absent.csv")


def test_parse_proposals_end_before_start_is_malformed():
    data = b"proposal,space,start,end\np1,s,10,20\np2,s,30,20\np3,s,5,5\n"
    parsed = parse_proposals(data)
    assert [p.proposal_id for p in parsed.records] == ["p1", "p3"]
    assert parsed.records[0].duration == 10
    assert parsed.malformed_count == 1


def test_parse_registry_allows_duplicate_rows():
    data = b"address,name\n0xAA,alice.eth\n0xaa,alice.eth\n0xbb,bob.eth\n"
    assert parse_registry(data) == {"0xaa": "alice.eth", "0xbb": "bob.eth"}


def test_parse_registry_conflicting_names():
    data = b"address,name\n0xaa,alice.eth\n0xAA,mallory.eth\n"
    with pytest.raises(RegistryConsistencyError):
        parse_registry(data)


def test_serialized_votes_parse_back(small_votes):
    for fmt in RecordFormat:
        assert parse_votes(serialize_votes(small_votes, fmt), fmt).records == small_votes


def test_serialized_proposals_parse_back(small_proposals):
    assert parse_proposals(serialize_proposals(small_proposals)).records == small_proposals


def test_record_format_from_path():
    assert RecordFormat.from_path("votes.JSONL") is RecordFormat.JSON_LINES
    assert RecordFormat.from_path("votes.ndjson") is RecordFormat.JSON_LINES
    assert RecordFormat.from_path("votes.csv") is RecordFormat.CSV
