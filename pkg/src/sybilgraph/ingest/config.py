"""
Configuration dataclass for the ingest stage.
"""

import math
from dataclasses import dataclass

from sybilgraph.errors import ConfigError

HOUR = 3_600
DAY = 86_400


@dataclass
class IngestConfig:
    """
    Bounds applied while filtering proposals and windowing votes.

    Parameters
    ----------
    min_duration : int, optional
        Shortest accepted proposal duration in seconds. Default is one hour.
    max_duration : float, optional
        Longest accepted proposal duration in seconds. Default is 90 days.
    start : int | None, optional
        Earliest vote timestamp to keep. None keeps everything from the epoch.
    end : int | None, optional
        Latest vote timestamp to keep. None keeps everything.
    keep_unknown_proposals : bool, optional
        Keep votes on proposals missing from the proposal file. Default is False.
    histogram_bins : int, optional
        Number of log-spaced bins in the duration histogram. Default is 30.

    Examples
    --------
    >>> config = IngestConfig(min_duration=3600, max_duration=7 * 86400)
    """

    min_duration: int = HOUR
    max_duration: float = 90 * DAY
    start: int | None = None
    end: int | None = None
    keep_unknown_proposals: bool = False
    histogram_bins: int = 30

    @property
    def window(self) -> tuple[int, float]:
        """Vote window as (start, end) with open bounds filled in."""
        start = 0 if self.start is None else self.start
        end = math.inf if self.end is None else self.end
        return start, end

    def validate(self) -> None:
        """
        Check the bounds for consistency.

        Raises
        ------
        ConfigError
            If a lower bound exceeds its upper bound or the bin count is invalid.
        """
        if self.min_duration < 0 or self.min_duration > self.max_duration:
            raise ConfigError(
                f"ingest: min_duration {self.min_duration} must be in [0, max_duration={self.max_duration}]"
            )
        start, end = self.window
        if start > end:
            raise ConfigError(f"ingest: window start {start} is after end {end}")
        if self.histogram_bins < 1:
            raise ConfigError("ingest: histogram_bins must be >= 1")
