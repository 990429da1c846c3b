"""
Enumerations for vote and proposal file formats.
"""

from enum import Enum
from pathlib import Path


class RecordFormat(Enum):
    """
    Line-delimited record formats accepted by the parsers.

    Attributes
    ----------
    CSV : str
        Comma-separated values with a required header row.
    JSON_LINES : str
        One JSON object per line.
    """

    CSV = "csv"
    JSON_LINES = "jsonl"

    @classmethod
    def from_path(cls, path: str | Path) -> "RecordFormat":
        """
        Infer the format from a file extension.

        Parameters
        ----------
        path : str | Path
            File path; ``.jsonl`` and ``.ndjson`` map to JSON_LINES, anything
            else to CSV.

        Returns
        -------
        RecordFormat
            The inferred format.
        """
        suffix = Path(path).suffix.lower()
        if suffix in (".jsonl", ".ndjson"):
            return cls.JSON_LINES
        return cls.CSV
