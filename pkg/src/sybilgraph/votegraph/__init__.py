"""
Voting graph module.

Builds the bipartite voting multigraph with wallet-reuse merging and
known-voter labels, and computes sociometric statistics.

Classes
-------
VotingGraph
    Voters, proposals, and one attributed edge per vote.
VoterNode, ProposalNode, VoteEdge
    Graph elements.
StatsReport
    Density, degree histogram, and centralities.
"""

from sybilgraph.votegraph.builder import build_voting_graph, normalize_registry
from sybilgraph.votegraph.cache import load_graph, save_graph, validate_graph
from sybilgraph.votegraph.enums import Identity, NodeKind
from sybilgraph.votegraph.models import ProposalNode, VoteEdge, VoterNode, VotingGraph
from sybilgraph.votegraph.stats import StatsReport, simple_projection, sociometrics

__all__ = [
    "VotingGraph",
    "VoterNode",
    "ProposalNode",
    "VoteEdge",
    "Identity",
    "NodeKind",
    "StatsReport",
    "build_voting_graph",
    "normalize_registry",
    "sociometrics",
    "simple_projection",
    "validate_graph",
    "save_graph",
    "load_graph",
]
