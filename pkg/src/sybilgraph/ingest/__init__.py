"""
Ingest module.

Parses, sanitizes, filters, and time-orders raw vote and proposal records
before graph construction.

Functions
---------
parse_votes
    Parse CSV or JSON-lines vote records with per-row diagnostics.
parse_proposals
    Parse proposal records and derive durations.
parse_registry
    Parse the address to persistent-name registry.
filter_proposals
    Keep proposals within duration bounds.
window_and_sort
    Restrict votes to a time window and order them deterministically.
"""

from sybilgraph.ingest.config import IngestConfig
from sybilgraph.ingest.enums import RecordFormat
from sybilgraph.ingest.filters import (
    duration_histogram,
    filter_proposals,
    restrict_votes_to_proposals,
    window_and_sort,
)
from sybilgraph.ingest.parsers import (
    parse_proposals,
    parse_registry,
    parse_votes,
    serialize_proposals,
    serialize_registry,
    serialize_votes,
)
from sybilgraph.ingest.records import (
    DatasetWindow,
    ParsedRecords,
    ProposalFilterResult,
    ProposalRecord,
    RecordDiagnostic,
    VoteRecord,
)

__all__ = [
    "IngestConfig",
    "RecordFormat",
    "VoteRecord",
    "ProposalRecord",
    "DatasetWindow",
    "RecordDiagnostic",
    "ParsedRecords",
    "ProposalFilterResult",
    "parse_votes",
    "parse_proposals",
    "parse_registry",
    "serialize_votes",
    "serialize_proposals",
    "serialize_registry",
    "filter_proposals",
    "restrict_votes_to_proposals",
    "window_and_sort",
    "duration_histogram",
]
