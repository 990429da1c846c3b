"""
Parsers and serializers for vote, proposal, and registry files.

Parsers never raise on a single bad line. Each malformed line is skipped and
reported as a RecordDiagnostic; the whole input is rejected only when more
than half of its rows are malformed, which almost always means the wrong
format was declared.
"""

import csv
import io
import json
import math
from collections.abc import Callable, Iterable
from pathlib import Path
from typing import Any, BinaryIO, TypeVar

from sybilgraph.errors import IngestIOError, RecordFormatError, RegistryConsistencyError
from sybilgraph.ingest.enums import RecordFormat
from sybilgraph.ingest.records import (
    ParsedRecords,
    ProposalRecord,
    RecordDiagnostic,
    VoteRecord,
)
from sybilgraph.log import get_logger

logger = get_logger(__name__)

VOTE_COLUMNS = ("voter", "proposal", "space", "choice", "voting_power", "timestamp")
PROPOSAL_COLUMNS = ("proposal", "space", "start", "end")
REGISTRY_COLUMNS = ("address", "name")

MAX_MALFORMED_FRACTION = 0.5

Source = str | Path | bytes | BinaryIO

T = TypeVar("T")


class _MalformedRecord(ValueError):
    """Internal signal that one row cannot be converted."""


def _read_text(source: Source) -> str:
    """
    Read a whole input as UTF-8 text.

    Parameters
    ----------
    source : str | Path | bytes | BinaryIO
        A path, raw bytes, or a binary stream.

    Returns
    -------
    str
        Decoded text with any byte-order mark removed.

    Raises
    ------
    IngestIOError
        If the input cannot be read or is not valid UTF-8.
    """
    try:
        if isinstance(source, bytes):
            raw = source
        elif isinstance(source, (str, Path)):
            raw = Path(source).read_bytes()
        else:
            raw = source.read()
        return raw.decode("utf-8-sig")
    except (OSError, UnicodeDecodeError) as e:
        raise IngestIOError(f"cannot read input: {e}") from e


def _iter_rows(
    text: str, fmt: RecordFormat, columns: tuple[str, ...]
) -> Iterable[tuple[int, dict[str, Any] | None, str | None]]:
    """
    Yield (line number, row, error) triples for every data line.

    Raises
    ------
    RecordFormatError
        If a CSV header is missing any required column.
    """
    if fmt is RecordFormat.CSV:
        reader = csv.DictReader(io.StringIO(text))
        header = reader.fieldnames
        if header is None:
            return
        missing = [c for c in columns if c not in header]
        if missing:
            raise RecordFormatError(f"CSV header is missing columns {missing}; got {header}")
        for row in reader:
            if None in row:
                yield reader.line_num, None, "too many fields"
                continue
            yield reader.line_num, row, None
        return

    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as e:
            yield line_number, None, f"invalid JSON: {e.msg}"
            continue
        if not isinstance(row, dict):
            yield line_number, None, "JSON line is not an object"
            continue
        yield line_number, row, None


def _parse(
    source: Source,
    fmt: RecordFormat,
    columns: tuple[str, ...],
    convert: Callable[[dict[str, Any]], T],
    kind: str,
) -> ParsedRecords[T]:
    text = _read_text(source)
    parsed: ParsedRecords[T] = ParsedRecords()
    total = 0

    for line_number, row, error in _iter_rows(text, fmt, columns):
        total += 1
        if error is None:
            missing = [c for c in columns if row.get(c) is None]
            if missing:
                error = f"missing fields {missing}"
        if error is None:
            try:
                parsed.records.append(convert(row))
                continue
            except _MalformedRecord as e:
                error = str(e)
        parsed.diagnostics.append(RecordDiagnostic(line=line_number, reason=error))
        logger.debug("Skipping %s line %d: %s", kind, line_number, error)

    if total and parsed.malformed_count > MAX_MALFORMED_FRACTION * total:
        raise RecordFormatError(
            f"{parsed.malformed_count} of {total} {kind} rows are malformed; "
            f"is the input really {fmt.value}?"
        )
    if parsed.diagnostics:
        logger.warning(
            "Skipped %d malformed %s rows out of %d", parsed.malformed_count, kind, total
        )
    logger.info("Parsed %d %s records", len(parsed.records), kind)
    return parsed


def _key(value: Any, field: str, lower: bool = False) -> str:
    text = str(value).strip()
    if lower:
        text = text.lower()
    if not text:
        raise _MalformedRecord(f"empty {field}")
    return text


def _integer(value: Any, field: str) -> int:
    if isinstance(value, bool):
        raise _MalformedRecord(f"{field} is not an integer: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    try:
        return int(str(value).strip())
    except ValueError:
        raise _MalformedRecord(f"{field} is not an integer: {value!r}") from None


def _real(value: Any, field: str) -> float:
    if isinstance(value, bool):
        raise _MalformedRecord(f"{field} is not a number: {value!r}")
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise _MalformedRecord(f"{field} is not a number: {value!r}") from None
    if not math.isfinite(number):
        raise _MalformedRecord(f"{field} is not finite: {value!r}")
    return number


def _vote_from_row(row: dict[str, Any]) -> VoteRecord:
    power = _real(row["voting_power"], "voting_power")
    if power < 0:
        raise _MalformedRecord(f"negative voting_power {power}")
    timestamp = _integer(row["timestamp"], "timestamp")
    if timestamp <= 0:
        raise _MalformedRecord(f"non-positive timestamp {timestamp}")
    return VoteRecord(
        voter_address=_key(row["voter"], "voter", lower=True),
        proposal_id=_key(row["proposal"], "proposal"),
        space_id=_key(row["space"], "space"),
        voting_power=power,
        timestamp=timestamp,
        choice=_integer(row["choice"], "choice"),
    )


def _proposal_from_row(row: dict[str, Any]) -> ProposalRecord:
    start = _integer(row["start"], "start")
    end = _integer(row["end"], "end")
    if end < start:
        raise _MalformedRecord(f"end {end} is before start {start}")
    return ProposalRecord(
        proposal_id=_key(row["proposal"], "proposal"),
        space_id=_key(row["space"], "space"),
        start=start,
        end=end,
    )


def parse_votes(source: Source, fmt: RecordFormat = RecordFormat.CSV) -> ParsedRecords[VoteRecord]:
    """
    Parse line-delimited vote records.

    Parameters
    ----------
    source : str | Path | bytes | BinaryIO
        Path, raw bytes, or binary stream holding the records.
    fmt : RecordFormat, optional
        Declared format. Default is CSV, which requires the header
        ``voter,proposal,space,choice,voting_power,timestamp``.

    Returns
    -------
    ParsedRecords[VoteRecord]
        Well-formed records in input order (voter addresses lower-cased) and
        one diagnostic per skipped row.

    Raises
    ------
    IngestIOError
        If the input cannot be read.
    RecordFormatError
        If the CSV header is incomplete or more than half the rows are malformed.
    """
    return _parse(source, fmt, VOTE_COLUMNS, _vote_from_row, "vote")


def parse_proposals(
    source: Source, fmt: RecordFormat = RecordFormat.CSV
) -> ParsedRecords[ProposalRecord]:
    """
    Parse proposal records (``proposal,space,start,end``).

    Parameters
    ----------
    source : str | Path | bytes | BinaryIO
        Path, raw bytes, or binary stream holding the records.
    fmt : RecordFormat, optional
        Declared format. Default is CSV.

    Returns
    -------
    ParsedRecords[ProposalRecord]
        Well-formed proposals and diagnostics; rows with ``end < start`` are
        malformed.

    Raises
    ------
    IngestIOError
        If the input cannot be read.
    RecordFormatError
        If the CSV header is incomplete or more than half the rows are malformed.
    """
    return _parse(source, fmt, PROPOSAL_COLUMNS, _proposal_from_row, "proposal")


def parse_registry(source: Source) -> dict[str, str]:
    """
    Parse the ``address,name`` registry of persistent voter names.

    Parameters
    ----------
    source : str | Path | bytes | BinaryIO
        Registry CSV with a header row.

    Returns
    -------
    dict[str, str]
        Lower-cased address to persistent name.

    Raises
    ------
    RegistryConsistencyError
        If one address is listed with two different names.
    RecordFormatError
        If the header is incomplete or more than half the rows are malformed.
    """

    def convert(row: dict[str, Any]) -> tuple[str, str]:
        return _key(row["address"], "address", lower=True), _key(row["name"], "name")

    parsed = _parse(source, RecordFormat.CSV, REGISTRY_COLUMNS, convert, "registry")

    registry: dict[str, str] = {}
    for address, name in parsed.records:
        existing = registry.setdefault(address, name)
        if existing != name:
            raise RegistryConsistencyError(
                f"address {address} is registered to both {existing!r} and {name!r}"
            )
    return registry


def _write_rows(rows: Iterable[dict[str, Any]], fmt: RecordFormat, columns: tuple[str, ...]) -> bytes:
    buffer = io.StringIO()
    if fmt is RecordFormat.CSV:
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        for row in rows:
            buffer.write(json.dumps(row))
            buffer.write("\n")
    return buffer.getvalue().encode("utf-8")


def serialize_votes(records: Iterable[VoteRecord], fmt: RecordFormat = RecordFormat.CSV) -> bytes:
    """
    Serialize votes in the format :func:`parse_votes` reads.

    Floats are written with ``repr`` precision so parsing the output
    reproduces every field exactly.
    """
    rows = (
        {
            "voter": r.voter_address,
            "proposal": r.proposal_id,
            "space": r.space_id,
            "choice": r.choice,
            "voting_power": repr(r.voting_power) if fmt is RecordFormat.CSV else r.voting_power,
            "timestamp": r.timestamp,
        }
        for r in records
    )
    return _write_rows(rows, fmt, VOTE_COLUMNS)


def serialize_proposals(
    records: Iterable[ProposalRecord], fmt: RecordFormat = RecordFormat.CSV
) -> bytes:
    """Serialize proposals in the format :func:`parse_proposals` reads."""
    rows = (
        {"proposal": r.proposal_id, "space": r.space_id, "start": r.start, "end": r.end}
        for r in records
    )
    return _write_rows(rows, fmt, PROPOSAL_COLUMNS)


def serialize_registry(registry: dict[str, str]) -> bytes:
    """Serialize a registry mapping as ``address,name`` CSV, sorted by address."""
    rows = ({"address": a, "name": n} for a, n in sorted(registry.items()))
    return _write_rows(rows, RecordFormat.CSV, REGISTRY_COLUMNS)
