"""Shared fixtures: a hand-built vote list, its registry and graph, and a tiny model config."""

import pytest

from sybilgraph.embedder.config import GridSpec, TrainConfig
from sybilgraph.ingest.records import ProposalRecord, VoteRecord
from sybilgraph.log import reset_logging
from sybilgraph.votegraph.builder import build_voting_graph


@pytest.fixture(autouse=True)
def detached_logging():
    yield
    reset_logging()


def vote(voter, proposal, timestamp, power=1.0, space="space-a", choice=1):
    return VoteRecord(
        voter_address=voter,
        proposal_id=proposal,
        space_id=space,
        voting_power=power,
        timestamp=timestamp,
        choice=choice,
    )


@pytest.fixture
def small_votes():
    # node ids by first appearance: alice=0, p1=1, 0xcc=2, p2=3, 0xdd=4, bob=5, p3=6
    return [
        vote("0xaa", "p1", 1_000, power=2.0),
        vote("0xcc", "p1", 1_100),
        vote("0xab", "p2", 1_200, power=3.0, space="space-b"),
        vote("0xdd", "p2", 1_300, space="space-b"),
        vote("0xbb", "p3", 1_400, power=5.0, choice=2),
        vote("0xcc", "p2", 1_500, space="space-b"),
        vote("0xdd", "p3", 1_600, power=2.0),
        vote("0xcc", "p2", 1_700, space="space-b", choice=0),
    ]


@pytest.fixture
def small_registry():
    return {"0xaa": "alice.eth", "0xab": "alice.eth", "0xbb": "bob.eth"}


@pytest.fixture
def small_graph(small_votes, small_registry):
    return build_voting_graph(small_votes, small_registry)


@pytest.fixture
def small_proposals():
    day = 86_400
    return [
        ProposalRecord(proposal_id="p1", space_id="space-a", start=0, end=2 * day),
        ProposalRecord(proposal_id="p2", space_id="space-b", start=0, end=600),
        ProposalRecord(proposal_id="p3", space_id="space-a", start=0, end=200 * day),
    ]


@pytest.fixture
def tiny_train_config():
    return TrainConfig(
        embedding_dim=4,
        hidden_dim=4,
        sequence_length=3,
        heads=2,
        head_dim=2,
        learning_rate=0.01,
        epochs=3,
        grid=GridSpec(embedding_dim=(3, 4), learning_rate=(0.01,), heads=(1,)),
    )
