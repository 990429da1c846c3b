"""
Versioned JSON cache of a built voting graph.

The container holds ``format_version``, an artifact ``meta`` block, and the
``voters``, ``proposals``, ``edges`` and ``label_index`` arrays. Loading
re-checks every graph invariant.
"""

import json
from collections import Counter
from pathlib import Path
from typing import Any

from sybilgraph.errors import GraphValidationError, StageDependencyError
from sybilgraph.votegraph.models import ProposalNode, VoteEdge, VoterNode, VotingGraph

GRAPH_FORMAT_VERSION = 1


def validate_graph(graph: VotingGraph) -> None:
    """
    Check every VotingGraph invariant.

    Raises
    ------
    GraphValidationError
        Naming the first violated invariant.
    """
    voter_ids = [v.node_id for v in graph.voters]
    proposal_ids = [p.node_id for p in graph.proposals]
    all_ids = voter_ids + proposal_ids
    if sorted(all_ids) != list(range(graph.node_count)):
        raise GraphValidationError("node ids are not a dense range shared by both partitions")

    seen_proposals: set[str] = set()
    for proposal in graph.proposals:
        if proposal.proposal_id in seen_proposals:
            raise GraphValidationError(f"duplicate proposal id {proposal.proposal_id!r}")
        seen_proposals.add(proposal.proposal_id)

    voters = set(voter_ids)
    proposals = set(proposal_ids)
    incident: Counter[int] = Counter()
    for index, edge in enumerate(graph.edges):
        if edge.voter not in voters or edge.proposal not in proposals:
            raise GraphValidationError(
                f"edge {index} does not join a voter to a proposal: {edge.voter} -> {edge.proposal}"
            )
        if edge.voting_power < 0:
            raise GraphValidationError(f"edge {index} has negative voting power")
        incident[edge.voter] += 1

    for voter in graph.voters:
        if not voter.wallet_addresses:
            raise GraphValidationError(f"voter {voter.node_id} has no wallet addresses")
        if voter.persistent_name is not None and not voter.persistent_name:
            raise GraphValidationError(f"voter {voter.node_id} has an empty persistent name")
        if voter.vote_count != incident[voter.node_id]:
            raise GraphValidationError(
                f"voter {voter.node_id} vote_count {voter.vote_count} != {incident[voter.node_id]} incident edges"
            )
        if voter.total_power < 0:
            raise GraphValidationError(f"voter {voter.node_id} has negative total power")

    for name, node_id in graph.label_index.items():
        if node_id not in voters or graph.voter(node_id).persistent_name != name:
            raise GraphValidationError(f"label {name!r} does not point at its Known voter")


def graph_to_dict(graph: VotingGraph) -> dict[str, Any]:
    """Plain-data form of the graph's VotingGraph fields."""
    return {
        "voters": [
            {
                "node_id": v.node_id,
                "wallet_addresses": sorted(v.wallet_addresses),
                "total_power": v.total_power,
                "vote_count": v.vote_count,
                "persistent_name": v.persistent_name,
                "cluster_label": v.cluster_label,
            }
            for v in graph.voters
        ],
        "proposals": [
            {"node_id": p.node_id, "proposal_id": p.proposal_id, "space_id": p.space_id}
            for p in graph.proposals
        ],
        "edges": [
            [e.voter, e.proposal, e.voting_power, e.timestamp, e.choice] for e in graph.edges
        ],
        "label_index": dict(sorted(graph.label_index.items())),
    }


def graph_fields_from_dict(data: dict[str, Any]) -> dict[str, Any]:
    """
    Rebuild VotingGraph constructor arguments from :func:`graph_to_dict` output.

    Raises
    ------
    GraphValidationError
        If a required key is missing or malformed.
    """
    try:
        voters = [
            VoterNode(
                node_id=int(v["node_id"]),
                wallet_addresses=frozenset(v["wallet_addresses"]),
                total_power=float(v["total_power"]),
                vote_count=int(v["vote_count"]),
                persistent_name=v.get("persistent_name"),
                cluster_label=v.get("cluster_label"),
            )
            for v in data["voters"]
        ]
        proposals = [
            ProposalNode(
                node_id=int(p["node_id"]),
                proposal_id=str(p["proposal_id"]),
                space_id=str(p["space_id"]),
            )
            for p in data["proposals"]
        ]
        edges = [
            VoteEdge(
                voter=int(voter),
                proposal=int(proposal),
                voting_power=float(power),
                timestamp=int(timestamp),
                choice=int(choice),
            )
            for voter, proposal, power, timestamp, choice in data["edges"]
        ]
        label_index = {str(k): int(v) for k, v in data["label_index"].items()}
    except (KeyError, TypeError, ValueError) as e:
        raise GraphValidationError(f"malformed graph container: {e}") from e
    return {"voters": voters, "proposals": proposals, "edges": edges, "label_index": label_index}


def read_container(path: str | Path) -> dict[str, Any]:
    """
    Read and version-check a JSON graph container.

    Raises
    ------
    StageDependencyError
        If the file does not exist.
    GraphValidationError
        If the file is not a supported container.
    """
    path = Path(path)
    if not path.exists():
        raise StageDependencyError(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise GraphValidationError(f"{path} is not valid JSON: {e}") from e
    version = data.get("format_version")
    if version != GRAPH_FORMAT_VERSION:
        raise GraphValidationError(
            f"{path} has format_version {version}, expected {GRAPH_FORMAT_VERSION}"
        )
    return data


def write_container(path: str | Path, payload: dict[str, Any], meta: dict | None = None) -> Path:
    """Write ``payload`` as a versioned JSON container and return the path."""
    path = Path(path)
    document = {"format_version": GRAPH_FORMAT_VERSION, "meta": meta or {}, **payload}
    path.write_text(json.dumps(document, indent=1, sort_keys=False) + "\n", encoding="utf-8")
    return path


def save_graph(graph: VotingGraph, path: str | Path, meta: dict | None = None) -> Path:
    """
    Write a voting graph cache file.

    Parameters
    ----------
    graph : VotingGraph
        Graph to store.
    path : str | Path
        Destination JSON file.
    meta : dict | None, optional
        Artifact metadata (config hash, seed, ...).

    Returns
    -------
    Path
        Path to the written file.
    """
    return write_container(path, graph_to_dict(graph), meta)


def load_graph(path: str | Path) -> VotingGraph:
    """
    Load and validate a voting graph cache file.

    Raises
    ------
    StageDependencyError
        If the file does not exist.
    GraphValidationError
        If the container or the graph it holds is invalid.
    """
    graph = VotingGraph(**graph_fields_from_dict(read_container(path)))
    validate_graph(graph)
    return graph
