"""
Record types produced by the ingest stage.

VoteRecord and ProposalRecord are immutable value objects; DatasetWindow
summarizes the time window the pipeline runs on.
"""

from dataclasses import dataclass, field
from datetime import UTC, datetime
from typing import Generic, TypeVar

SECONDS_PER_DAY = 86_400

T = TypeVar("T")


@dataclass(frozen=True, slots=True)
class VoteRecord:
    """
    One vote event.

    Parameters
    ----------
    voter_address : str
        Lower-cased wallet address of the voter.
    proposal_id : str
        Opaque proposal key.
    space_id : str
        Opaque key of the DAO space the proposal belongs to.
    voting_power : float
        Non-negative token weight used for this vote.
    timestamp : int
        Seconds since the Unix epoch.
    choice : int
        Option index chosen by the voter.
    """

    voter_address: str
    proposal_id: str
    space_id: str
    voting_power: float
    timestamp: int
    choice: int

    def sort_key(self) -> tuple[int, str, str]:
        """Total order used by :func:`window_and_sort`."""
        return (self.timestamp, self.voter_address, self.proposal_id)


@dataclass(frozen=True, slots=True)
class ProposalRecord:
    """
    One governance proposal.

    Parameters
    ----------
    proposal_id : str
        Opaque proposal key.
    space_id : str
        Opaque DAO space key.
    start : int
        Voting start in epoch seconds.
    end : int
        Voting end in epoch seconds; never earlier than ``start``.
    """

    proposal_id: str
    space_id: str
    start: int
    end: int

    @property
    def duration(self) -> int:
        """Voting period length in seconds."""
        return self.end - self.start


@dataclass(frozen=True, slots=True)
class DatasetWindow:
    """
    Summary of the time window a pipeline run covers.

    ``start_date`` and ``end_date`` are the first and last vote timestamps
    inside the requested window. An empty window collapses to the requested
    lower bound.

    Parameters
    ----------
    start_date : int
        Earliest vote timestamp in epoch seconds.
    end_date : int
        Latest vote timestamp in epoch seconds.
    vote_count : int
        Number of votes in the window.
    proposal_count : int
        Number of distinct proposals voted on in the window.
    voter_count : int
        Number of distinct voter addresses in the window.
    """

    start_date: int
    end_date: int
    vote_count: int
    proposal_count: int
    voter_count: int

    @property
    def duration_days(self) -> int:
        """Whole days between start and end."""
        return (self.end_date - self.start_date) // SECONDS_PER_DAY

    def duration_label(self) -> str:
        """Duration rendered as ``"<y> years and <d> days"``."""
        years, days = divmod(self.duration_days, 365)
        return f"{years} years and {days} days"

    def start_iso(self) -> str:
        """Start date as ``YYYY-MM-DD`` (UTC)."""
        return datetime.fromtimestamp(self.start_date, UTC).strftime("%Y-%m-%d")

    def end_iso(self) -> str:
        """End date as ``YYYY-MM-DD`` (UTC)."""
        return datetime.fromtimestamp(self.end_date, UTC).strftime("%Y-%m-%d")

    def to_dict(self) -> dict:
        return {
            "start_date": self.start_date,
            "end_date": self.end_date,
            "vote_count": self.vote_count,
            "proposal_count": self.proposal_count,
            "voter_count": self.voter_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetWindow":
        return cls(
            start_date=int(data["start_date"]),
            end_date=int(data["end_date"]),
            vote_count=int(data["vote_count"]),
            proposal_count=int(data["proposal_count"]),
            voter_count=int(data["voter_count"]),
        )


@dataclass(frozen=True, slots=True)
class RecordDiagnostic:
    """
    Why one input line was skipped.

    Parameters
    ----------
    line : int
        1-indexed physical line number in the input.
    reason : str
        Description of the problem.
    """

    line: int
    reason: str


@dataclass(slots=True)
class ParsedRecords(Generic[T]):
    """
    Parser output: the well-formed records and diagnostics for the rest.

    Parameters
    ----------
    records : list
        Records in input order.
    diagnostics : list[RecordDiagnostic]
        One entry per skipped line.
    """

    records: list[T] = field(default_factory=list)
    diagnostics: list[RecordDiagnostic] = field(default_factory=list)

    @property
    def malformed_count(self) -> int:
        return len(self.diagnostics)


@dataclass(slots=True)
class ProposalFilterResult:
    """
    Output of :func:`filter_proposals`.

    Parameters
    ----------
    kept : list[ProposalRecord]
        Proposals within the duration bounds, original order preserved.
    rejected_count : int
        Number of proposals outside the bounds.
    """

    kept: list[ProposalRecord]
    rejected_count: int
