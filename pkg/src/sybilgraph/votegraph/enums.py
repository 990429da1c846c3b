"""
Enumerations for voting-graph nodes.
"""

from enum import Enum


class NodeKind(Enum):
    """
    Partition a node belongs to in the bipartite voting graph.

    Attributes
    ----------
    VOTER : str
        A voter identity (one or more wallets).
    PROPOSAL : str
        A governance proposal.
    """

    VOTER = "voter"
    PROPOSAL = "proposal"


class Identity(Enum):
    """
    Whether a voter node is linked to a persistent name.

    Attributes
    ----------
    KNOWN : str
        At least one wallet is registered to a persistent name.
    UNKNOWN : str
        Anonymous wallet(s) only.
    """

    KNOWN = "known"
    UNKNOWN = "unknown"
