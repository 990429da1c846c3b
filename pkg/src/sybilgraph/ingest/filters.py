"""
Proposal filtering, vote windowing, and duration histograms.
"""

import math
from collections.abc import Iterable, Sequence

import numpy as np

from sybilgraph.errors import ConfigError
from sybilgraph.ingest.records import (
    DatasetWindow,
    ProposalFilterResult,
    ProposalRecord,
    VoteRecord,
)
from sybilgraph.log import get_logger

logger = get_logger(__name__)


def filter_proposals(
    proposals: Sequence[ProposalRecord],
    min_duration: float = 0,
    max_duration: float = math.inf,
) -> ProposalFilterResult:
    """
    Keep proposals whose duration lies within [min_duration, max_duration].

    Parameters
    ----------
    proposals : Sequence[ProposalRecord]
        Candidate proposals.
    min_duration : float, optional
        Inclusive lower bound in seconds. Default is 0.
    max_duration : float, optional
        Inclusive upper bound in seconds. Default is unbounded.

    Returns
    -------
    ProposalFilterResult
        Kept proposals in original order and the rejected count.

    Raises
    ------
    ConfigError
        If ``min_duration > max_duration``.
    """
    if min_duration > max_duration:
        raise ConfigError(f"min_duration {min_duration} exceeds max_duration {max_duration}")

    kept = [p for p in proposals if min_duration <= p.duration <= max_duration]
    rejected = len(proposals) - len(kept)
    logger.info("Kept %d proposals, rejected %d by duration", len(kept), rejected)
    return ProposalFilterResult(kept=kept, rejected_count=rejected)


def restrict_votes_to_proposals(
    votes: Iterable[VoteRecord],
    proposals: Iterable[ProposalRecord],
    listed: Iterable[ProposalRecord] | None = None,
    keep_unknown: bool = False,
) -> list[VoteRecord]:
    """
    Drop votes cast on proposals that are not in ``proposals``.

    With ``keep_unknown``, votes on proposals absent from ``listed`` (the full
    proposal file, before filtering) are kept as well.
    """
    allowed = {p.proposal_id for p in proposals}
    if not keep_unknown:
        return [v for v in votes if v.proposal_id in allowed]
    known = {p.proposal_id for p in (listed or ())} | allowed
    return [v for v in votes if v.proposal_id in allowed or v.proposal_id not in known]


def window_and_sort(
    votes: Iterable[VoteRecord],
    start: float = 0,
    end: float = math.inf,
) -> tuple[list[VoteRecord], DatasetWindow]:
    """
    Restrict votes to [start, end] and order them deterministically.

    Parameters
    ----------
    votes : Iterable[VoteRecord]
        Votes in any order.
    start : float, optional
        Inclusive lower timestamp bound. Default is 0.
    end : float, optional
        Inclusive upper timestamp bound. Default is unbounded.

    Returns
    -------
    tuple[list[VoteRecord], DatasetWindow]
        Votes sorted by (timestamp, voter_address, proposal_id) and the
        window summary.

    Raises
    ------
    ConfigError
        If ``start > end``.
    """
    if start > end:
        raise ConfigError(f"window start {start} is after end {end}")

    windowed = sorted(
        (v for v in votes if start <= v.timestamp <= end),
        key=VoteRecord.sort_key,
    )

    if windowed:
        start_date, end_date = windowed[0].timestamp, windowed[-1].timestamp
    else:
        start_date = end_date = int(start)

    window = DatasetWindow(
        start_date=start_date,
        end_date=end_date,
        vote_count=len(windowed),
        proposal_count=len({v.proposal_id for v in windowed}),
        voter_count=len({v.voter_address for v in windowed}),
    )
    return windowed, window


def duration_histogram(
    proposals: Sequence[ProposalRecord], bins: int = 30
) -> list[tuple[float, float, int]]:
    """
    Histogram of proposal durations over log-spaced bins.

    Parameters
    ----------
    proposals : Sequence[ProposalRecord]
        Proposals to bin.
    bins : int, optional
        Number of bins. Default is 30.

    Returns
    -------
    list[tuple[float, float, int]]
        (bin_start, bin_end, count) rows in seconds; empty for no proposals.
    """
    if not proposals:
        return []
    durations = np.array([max(p.duration, 1) for p in proposals], dtype=np.float64)
    low, high = durations.min(), durations.max()
    if low == high:
        high = low * 10.0
    edges = np.geomspace(low, high, bins + 1)
    counts, edges = np.histogram(durations, bins=edges)
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)
    ]
