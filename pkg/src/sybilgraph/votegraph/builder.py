"""
Construction of the voting multigraph from time-ordered votes.

Wallet re-use and registry names are the only merge evidence: every vote
from one address lands on one voter node, and every registered address
sharing a persistent name lands on one Known node.
"""

from collections.abc import Iterable, Mapping, Sequence

from sybilgraph.errors import RegistryConsistencyError
from sybilgraph.ingest.records import VoteRecord
from sybilgraph.log import get_logger
from sybilgraph.votegraph.models import ProposalNode, VoteEdge, VoterNode, VotingGraph

logger = get_logger(__name__)

RegistryLike = Mapping[str, str] | Iterable[tuple[str, str]]


def normalize_registry(registry: RegistryLike | None) -> dict[str, str]:
    """
    Lower-case registry addresses and check that each maps to one name.

    Parameters
    ----------
    registry : Mapping[str, str] | Iterable[tuple[str, str]] | None
        Address to persistent name, as a mapping or as pairs.

    Returns
    -------
    dict[str, str]
        Normalized registry.

    Raises
    ------
    RegistryConsistencyError
        If one address (after lower-casing) maps to two names, or a name is empty.
    """
    if registry is None:
        return {}
    pairs = registry.items() if isinstance(registry, Mapping) else registry

    normalized: dict[str, str] = {}
    for address, name in pairs:
        address = address.strip().lower()
        name = name.strip()
        if not name:
            raise RegistryConsistencyError(f"address {address} has an empty persistent name")
        existing = normalized.setdefault(address, name)
        if existing != name:
            raise RegistryConsistencyError(
                f"address {address} is registered to both {existing!r} and {name!r}"
            )
    return normalized


def build_voting_graph(
    votes: Sequence[VoteRecord],
    registry: RegistryLike | None = None,
) -> VotingGraph:
    """
    Build the bipartite voting multigraph.

    Node ids are assigned by first appearance in ``votes``: for each vote the
    voter is numbered before the proposal. Rebuilding from the same inputs
    therefore yields identical ids.

    Parameters
    ----------
    votes : Sequence[VoteRecord]
        Time-ordered votes, as returned by ``window_and_sort``.
    registry : Mapping[str, str] | Iterable[tuple[str, str]] | None, optional
        Address to persistent name (ENS-like). Addresses sharing a name merge
        into one Known voter node.

    Returns
    -------
    VotingGraph
        Graph with exactly one edge per vote.

    Raises
    ------
    RegistryConsistencyError
        If the registry maps one address to two names.
    """
    names = normalize_registry(registry)

    next_id = 0
    voter_ids: dict[str, int] = {}
    proposal_ids: dict[str, int] = {}
    proposal_spaces: dict[int, str] = {}
    voter_names: dict[int, str | None] = {}
    wallets: dict[int, set[str]] = {}
    powers: dict[int, float] = {}
    counts: dict[int, int] = {}
    edges: list[VoteEdge] = []

    for vote in votes:
        name = names.get(vote.voter_address)
        key = f"name:{name}" if name is not None else f"addr:{vote.voter_address}"
        voter = voter_ids.get(key)
        if voter is None:
            voter = voter_ids[key] = next_id
            next_id += 1
            voter_names[voter] = name
            wallets[voter] = set()
            powers[voter] = 0.0
            counts[voter] = 0

        proposal = proposal_ids.get(vote.proposal_id)
        if proposal is None:
            proposal = proposal_ids[vote.proposal_id] = next_id
            next_id += 1
            proposal_spaces[proposal] = vote.space_id

        wallets[voter].add(vote.voter_address)
        powers[voter] += vote.voting_power
        counts[voter] += 1
        edges.append(
            VoteEdge(
                voter=voter,
                proposal=proposal,
                voting_power=vote.voting_power,
                timestamp=vote.timestamp,
                choice=vote.choice,
            )
        )

    voters = [
        VoterNode(
            node_id=node_id,
            wallet_addresses=frozenset(wallets[node_id]),
            total_power=powers[node_id],
            vote_count=counts[node_id],
            persistent_name=voter_names[node_id],
        )
        for node_id in sorted(wallets)
    ]
    proposals = [
        ProposalNode(node_id=node_id, proposal_id=proposal_id, space_id=proposal_spaces[node_id])
        for proposal_id, node_id in sorted(proposal_ids.items(), key=lambda item: item[1])
    ]
    label_index = {
        v.persistent_name: v.node_id for v in voters if v.persistent_name is not None
    }

    graph = VotingGraph(voters=voters, proposals=proposals, edges=edges, label_index=label_index)
    logger.info(
        "Built voting graph: %d voters (%d known), %d proposals, %d edges",
        len(voters),
        len(label_index),
        len(proposals),
        len(edges),
    )
    return graph
