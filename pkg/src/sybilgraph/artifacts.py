"""
Artifact metadata and the small readers and writers every stage shares.

JSON and NPZ artifacts carry a ``meta`` block of ``format_version``,
``config_hash``, ``seed`` and ``created_at``. CSV artifacts start with a
``# config_hash=... seed=...`` comment line instead.
"""

import csv
import json
from collections.abc import Iterable, Sequence
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

from sybilgraph.errors import ArtifactMismatchError, StageDependencyError

ARTIFACT_FORMAT_VERSION = 1


def make_meta(config_hash: str, seed: int, created_at: str | None = None) -> dict[str, Any]:
    """
    Build the metadata block embedded in every artifact.

    Parameters
    ----------
    config_hash : str
        Hash of the run configuration.
    seed : int
        Run seed.
    created_at : str | None, optional
        ISO-8601 creation time; the current UTC time when omitted.

    Returns
    -------
    dict[str, Any]
        ``format_version``, ``config_hash``, ``seed`` and ``created_at``.
    """
    return {
        "format_version": ARTIFACT_FORMAT_VERSION,
        "config_hash": config_hash,
        "seed": seed,
        "created_at": created_at or datetime.now(UTC).isoformat(timespec="seconds"),
    }


def csv_comment(meta: dict[str, Any]) -> str:
    return f"# config_hash={meta.get('config_hash', '')} seed={meta.get('seed', '')}"


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    meta: dict[str, Any] | None = None,
) -> Path:
    """Write ``rows`` under ``header``, preceded by the meta comment when given."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        if meta is not None:
            handle.write(csv_comment(meta) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def read_csv(path: str | Path) -> tuple[dict[str, str], list[dict[str, str]]]:
    """
    Read a CSV artifact written by :func:`write_csv`.

    Returns
    -------
    tuple[dict[str, str], list[dict[str, str]]]
        The ``key=value`` pairs of the comment line and the data rows.

    Raises
    ------
    StageDependencyError
        If the file does not exist.
    """
    path = Path(path)
    if not path.exists():
        raise StageDependencyError(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    comment: dict[str, str] = {}
    if lines and lines[0].startswith("#"):
        for token in lines[0].lstrip("#").split():
            key, _, value = token.partition("=")
            comment[key] = value
        lines = lines[1:]
    return comment, list(csv.DictReader(lines))


def write_json(path: str | Path, payload: dict[str, Any], meta: dict[str, Any]) -> Path:
    path = Path(path)
    document = {"meta": meta, **payload}
    path.write_text(json.dumps(document, indent=1) + "\n", encoding="utf-8")
    return path


def read_json(path: str | Path) -> dict[str, Any]:
    """
    Raises
    ------
    StageDependencyError
        If the file does not exist.
    """
    path = Path(path)
    if not path.exists():
        raise StageDependencyError(path)
    return json.loads(path.read_text(encoding="utf-8"))


def check_config_hash(expected: str, *artifacts: tuple[str, dict[str, Any]]) -> None:
    """
    Refuse to combine artifacts produced under a different configuration.

    Parameters
    ----------
    expected : str
        Config hash of the current run.
    *artifacts : tuple[str, dict]
        ``(name, meta)`` pairs of the artifacts being combined.

    Raises
    ------
    ArtifactMismatchError
        Naming the first artifact whose hash differs.
    """
    for name, meta in artifacts:
        found = meta.get("config_hash")
        if found != expected:
            raise ArtifactMismatchError(
                f"{name} was produced with config hash {found}, current run is {expected}"
            )
