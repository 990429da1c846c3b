import pytest

from sybilgraph.artifacts import (
    ARTIFACT_FORMAT_VERSION,
    check_config_hash,
    make_meta,
    read_csv,
    read_json,
    write_csv,
    write_json,
)
from sybilgraph.errors import ArtifactMismatchError, StageDependencyError


def test_meta_fields():
    meta = make_meta("abc", 7, created_at="2024-01-01T00:00:00+00:00")
    assert meta == {
        "format_version": ARTIFACT_FORMAT_VERSION,
        "config_hash": "abc",
        "seed": 7,
        "created_at": "2024-01-01T00:00:00+00:00",
    }
    assert make_meta("abc", 7)["created_at"]


def test_csv_carries_meta_comment(tmp_path):
    path = write_csv(tmp_path / "sizes.csv", ("size", "count"), [(2, 5), (3, 1)], make_meta("abc", 7))
    assert path.read_text().splitlines()[0] == "# config_hash=abc seed=7"
    comment, rows = read_csv(path)
    assert comment == {"config_hash": "abc", "seed": "7"}
    assert rows == [{"size": "2", "count": "5"}, {"size": "3", "count": "1"}]


def test_json_round_trip(tmp_path):
    path = write_json(tmp_path / "a.json", {"value": [1, 2]}, make_meta("abc", 1))
    document = read_json(path)
    assert document["value"] == [1, 2]
    assert document["meta"]["config_hash"] == "abc"


def test_missing_artifacts_name_the_path(tmp_path):
    with pytest.raises(StageDependencyError, match="absent.json"):
        read_json(tmp_path / "absent.json")
    with pytest.raises(StageDependencyError):
        read_csv(tmp_path / "absent.csv")


def test_config_hash_check_names_the_mismatch():
    check_config_hash("abc", ("graph.json", {"config_hash": "abc"}))
    with pytest.raises(ArtifactMismatchError, match="clusters.json"):
        check_config_hash("abc", ("graph.json", {"config_hash": "abc"}), ("clusters.json", {"config_hash": "xyz"}))
