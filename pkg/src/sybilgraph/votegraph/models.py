"""
Node, edge, and graph types of the bipartite voting multigraph.

Node ids are dense integers shared by both partitions: ``node_count`` equals
``len(voters) + len(proposals)`` and every id in ``range(node_count)`` names
exactly one voter or proposal.
"""

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from sybilgraph.votegraph.enums import Identity, NodeKind


@dataclass(frozen=True, slots=True)
class VoterNode:
    """
    A voter identity.

    Parameters
    ----------
    node_id : int
        Dense node index.
    wallet_addresses : frozenset[str]
        Every wallet merged into this node; never empty.
    total_power : float
        Sum of voting power over the node's vote edges.
    vote_count : int
        Number of incident vote edges.
    persistent_name : str | None, optional
        Registry name for Known voters, None for Unknown ones.
    cluster_label : str | None, optional
        Propagated label when the node stands for a merged sybil cluster.
    """

    node_id: int
    wallet_addresses: frozenset[str]
    total_power: float
    vote_count: int
    persistent_name: str | None = None
    cluster_label: str | None = None

    @property
    def identity(self) -> Identity:
        return Identity.KNOWN if self.persistent_name is not None else Identity.UNKNOWN

    @property
    def is_known(self) -> bool:
        return self.persistent_name is not None


@dataclass(frozen=True, slots=True)
class ProposalNode:
    """
    A governance proposal.

    Parameters
    ----------
    node_id : int
        Dense node index.
    proposal_id : str
        Opaque proposal key, unique among proposal nodes.
    space_id : str
        DAO space the proposal belongs to.
    """

    node_id: int
    proposal_id: str
    space_id: str


@dataclass(frozen=True, slots=True)
class VoteEdge:
    """
    One vote, joining a voter node to a proposal node.

    Parameters
    ----------
    voter : int
        Voter node id.
    proposal : int
        Proposal node id.
    voting_power : float
        Power used for the vote.
    timestamp : int
        Epoch seconds.
    choice : int
        Option index.
    """

    voter: int
    proposal: int
    voting_power: float
    timestamp: int
    choice: int


@dataclass
class VotingGraph:
    """
    Bipartite multigraph of voters and proposals.

    Parallel edges between the same voter and proposal are kept. The graph is
    treated as immutable once built.

    Parameters
    ----------
    voters : list[VoterNode]
        Voter nodes ordered by node id.
    proposals : list[ProposalNode]
        Proposal nodes ordered by node id.
    edges : list[VoteEdge]
        One edge per vote.
    label_index : dict[str, int]
        Persistent name to the node id of the Known voter carrying it.
    """

    voters: list[VoterNode] = field(default_factory=list)
    proposals: list[ProposalNode] = field(default_factory=list)
    edges: list[VoteEdge] = field(default_factory=list)
    label_index: dict[str, int] = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return len(self.voters) + len(self.proposals)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def _voters_by_id(self) -> dict[int, VoterNode]:
        return {v.node_id: v for v in self.voters}

    @cached_property
    def _proposals_by_id(self) -> dict[int, ProposalNode]:
        return {p.node_id: p for p in self.proposals}

    @property
    def voter_ids(self) -> list[int]:
        return [v.node_id for v in self.voters]

    @property
    def proposal_ids(self) -> list[int]:
        return [p.node_id for p in self.proposals]

    @property
    def known_voter_ids(self) -> list[int]:
        return [v.node_id for v in self.voters if v.is_known]

    @property
    def unknown_voter_ids(self) -> list[int]:
        return [v.node_id for v in self.voters if not v.is_known]

    def is_voter(self, node_id: int) -> bool:
        return node_id in self._voters_by_id

    def kind(self, node_id: int) -> NodeKind:
        """
        Return the partition of ``node_id``.

        Raises
        ------
        KeyError
            If the id is not a node of this graph.
        """
        if node_id in self._voters_by_id:
            return NodeKind.VOTER
        if node_id in self._proposals_by_id:
            return NodeKind.PROPOSAL
        raise KeyError(node_id)

    def voter(self, node_id: int) -> VoterNode:
        return self._voters_by_id[node_id]

    def proposal(self, node_id: int) -> ProposalNode:
        return self._proposals_by_id[node_id]

    @cached_property
    def neighbors(self) -> dict[int, list[int]]:
        """Adjacency lists with one entry per incident edge (multiplicity kept)."""
        adjacency: dict[int, list[int]] = {i: [] for i in range(self.node_count)}
        for edge in self.edges:
            adjacency[edge.voter].append(edge.proposal)
            adjacency[edge.proposal].append(edge.voter)
        return adjacency

    def multi_degrees(self) -> Counter[int]:
        """Degree of every node counting parallel edges."""
        degrees: Counter[int] = Counter({i: 0 for i in range(self.node_count)})
        for edge in self.edges:
            degrees[edge.voter] += 1
            degrees[edge.proposal] += 1
        return degrees

    def total_power(self) -> float:
        return float(sum(e.voting_power for e in self.edges))
