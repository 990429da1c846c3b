from dataclasses import replace

import pytest

from sybilgraph.errors import ConfigError, RecordFormatError, StageDependencyError
from sybilgraph.ingest.parsers import parse_proposals, parse_registry, parse_votes
from sybilgraph.synth import EntityType, SynthConfig, generate_dataset, read_truth, write_dataset


@pytest.fixture
def config():
    return SynthConfig(
        honest_voters=30,
        sybil_entities=4,
        wallets_per_sybil=(3, 3),
        proposals=20,
        votes_per_voter=(3, 6),
        known_fraction=0.2,
        seed=5,
    )


def test_same_seed_same_dataset(config):
    assert generate_dataset(config) == generate_dataset(config)


def test_seed_changes_dataset(config):
    other = replace(config, seed=6)
    assert generate_dataset(config).votes != generate_dataset(other).votes


def test_truth_shape(config):
    dataset = generate_dataset(config)
    truth = dataset.truth
    assert len(truth.wallets_of(EntityType.HONEST)) == 30
    assert len(truth.sybil_wallets) == 12
    assert all(len(wallets) == 3 for wallets in truth.entities(EntityType.SYBIL).values())
    assert sorted(truth.entities(EntityType.SYBIL)) == [30, 31, 32, 33]


def test_registry_lists_only_honest_voters(config):
    dataset = generate_dataset(config)
    assert len(dataset.registry) == 6
    honest = set(dataset.truth.wallets_of(EntityType.HONEST))
    assert set(dataset.registry) <= honest
    assert all(name.endswith(".eth") for name in dataset.registry.values())


def test_votes_are_sorted_and_inside_their_proposals(config):
    dataset = generate_dataset(config)
    assert dataset.votes == sorted(dataset.votes, key=lambda v: v.sort_key())
    periods = {p.proposal_id: p for p in dataset.proposals}
    for vote in dataset.votes:
        proposal = periods[vote.proposal_id]
        assert proposal.start <= vote.timestamp <= proposal.end
        assert vote.space_id == proposal.space_id


def test_noiseless_sybil_wallets_vote_identically(config):
    config.behavior_noise = 0.0
    dataset = generate_dataset(config)
    for wallets in dataset.truth.entities(EntityType.SYBIL).values():
        histories = [
            [(v.proposal_id, v.timestamp, v.voting_power, v.choice) for v in dataset.votes if v.voter_address == w]
            for w in wallets
        ]
        assert histories[0]
        assert all(history == histories[0] for history in histories)


def test_written_dataset_reads_back(tmp_path, config):
    dataset = generate_dataset(config)
    paths = write_dataset(dataset, tmp_path / "synth")
    assert parse_votes(paths.votes).records == dataset.votes
    assert parse_proposals(paths.proposals).records == dataset.proposals
    assert parse_registry(paths.registry) == dataset.registry
    assert read_truth(paths.truth) == dataset.truth


def test_read_truth_errors(tmp_path):
    with pytest.raises(StageDependencyError):
        read_truth(tmp_path / "missing.csv")
    bad = tmp_path / "truth.csv"
    bad.write_text("wallet,entity_id,type\n0xaa,1,sybil\n0xbb,1,honest\n")
    with pytest.raises(RecordFormatError, match="two types"):
        read_truth(bad)
    bad.write_text("wallet,entity_id,type\n0xaa,x,sybil\n")
    with pytest.raises(RecordFormatError):
        read_truth(bad)


@pytest.mark.parametrize(
    "overrides",
    [{"honest_voters": -1}, {"wallets_per_sybil": (3, 2)}, {"behavior_noise": 1.5}, {"proposals": 0}],
)
def test_invalid_config(overrides):
    with pytest.raises(ConfigError):
        SynthConfig(**overrides).validate()
