"""
Sociometric statistics of a voting graph.

Centralities are computed with networkx on the simple (deduplicated)
undirected projection; parallel-edge weight is reported separately through
the degree histogram and voter vote counts.
"""

from collections import Counter
from dataclasses import dataclass, field

import networkx as nx

from sybilgraph.log import get_logger
from sybilgraph.votegraph.models import VotingGraph

logger = get_logger(__name__)

EIGENVECTOR_MAX_ITER = 1000
EIGENVECTOR_TOL = 1e-8


@dataclass
class StatsReport:
    """
    Sociometric summary of a voting graph.

    Parameters
    ----------
    node_count, edge_count : int
        Graph size; edges count parallel votes.
    voter_count, proposal_count : int
        Partition sizes.
    known_voters, unknown_voters : int
        Voters with and without a persistent name.
    density : float
        Distinct voter-proposal pairs over ``voter_count * proposal_count``.
    degree_histogram : dict[int, int]
        Multigraph degree to number of nodes with that degree.
    top_betweenness : list[tuple[int, float]]
        Highest normalized betweenness centralities as (node_id, value).
    top_eigenvector : list[tuple[int, float]]
        Highest eigenvector centralities as (node_id, value).
    """

    node_count: int = 0
    edge_count: int = 0
    voter_count: int = 0
    proposal_count: int = 0
    known_voters: int = 0
    unknown_voters: int = 0
    density: float = 0.0
    degree_histogram: dict[int, int] = field(default_factory=dict)
    top_betweenness: list[tuple[int, float]] = field(default_factory=list)
    top_eigenvector: list[tuple[int, float]] = field(default_factory=list)

    def degree_histogram_rows(self) -> list[tuple[int, int]]:
        return sorted(self.degree_histogram.items())

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "voter_count": self.voter_count,
            "proposal_count": self.proposal_count,
            "known_voters": self.known_voters,
            "unknown_voters": self.unknown_voters,
            "density": self.density,
            "degree_histogram": {str(k): v for k, v in self.degree_histogram_rows()},
            "top_betweenness": [[n, v] for n, v in self.top_betweenness],
            "top_eigenvector": [[n, v] for n, v in self.top_eigenvector],
        }


def simple_projection(graph: VotingGraph) -> nx.Graph:
    """Undirected simple graph over all node ids with one edge per voter-proposal pair."""
    projection = nx.Graph()
    projection.add_nodes_from(range(graph.node_count))
    projection.add_edges_from((e.voter, e.proposal) for e in graph.edges)
    return projection


def _top(values: dict[int, float], k: int) -> list[tuple[int, float]]:
    ranked = sorted(values.items(), key=lambda item: (-item[1], item[0]))
    return [(int(node), float(value)) for node, value in ranked[:k]]


def sociometrics(graph: VotingGraph, top_k: int = 10) -> StatsReport:
    """
    Compute density, degree distribution, and centralities.

    Parameters
    ----------
    graph : VotingGraph
        A valid voting graph.
    top_k : int, optional
        Number of nodes reported per centrality. Default is 10.

    Returns
    -------
    StatsReport
        The summary. An empty graph yields an empty report.

    Notes
    -----
    Betweenness is exact (Brandes). Eigenvector centrality uses networkx
    power iteration with tolerance 1e-8 and at most 1000 iterations; when it
    fails to converge the list is left empty and a warning is logged.
    """
    report = StatsReport(
        node_count=graph.node_count,
        edge_count=graph.edge_count,
        voter_count=len(graph.voters),
        proposal_count=len(graph.proposals),
        known_voters=len(graph.known_voter_ids),
        unknown_voters=len(graph.unknown_voter_ids),
    )
    if graph.node_count == 0:
        return report

    degrees = graph.multi_degrees()
    report.degree_histogram = dict(Counter(degrees.values()))

    projection = simple_projection(graph)
    pairs = projection.number_of_edges()
    capacity = report.voter_count * report.proposal_count
    report.density = pairs / capacity if capacity else 0.0

    report.top_betweenness = _top(nx.betweenness_centrality(projection, normalized=True), top_k)

    try:
        eigenvector = nx.eigenvector_centrality(
            projection, max_iter=EIGENVECTOR_MAX_ITER, tol=EIGENVECTOR_TOL
        )
        report.top_eigenvector = _top(eigenvector, top_k)
    except nx.PowerIterationFailedConvergence:
        logger.warning(
            "Eigenvector centrality did not converge within %d iterations", EIGENVECTOR_MAX_ITER
        )

    logger.info(
        "Sociometrics: %d nodes, %d edges, density %.6f", report.node_count, report.edge_count, report.density
    )
    return report
