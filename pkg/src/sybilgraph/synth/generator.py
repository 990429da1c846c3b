"""
Synthetic voting networks with planted sybil entities.

Every entity draws a latent behavior profile: a sparse preference over
proposals, a log-normal power scale, a timing offset inside each voting
period, and a favored choice. Honest voters vote once from their own
profile. A sybil entity's wallets all replay the entity's votes, each vote
perturbed by ``behavior_noise``.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from sybilgraph.errors import RecordFormatError, StageDependencyError
from sybilgraph.ingest.enums import RecordFormat
from sybilgraph.ingest.parsers import serialize_proposals, serialize_registry, serialize_votes
from sybilgraph.ingest.records import SECONDS_PER_DAY, ProposalRecord, VoteRecord
from sybilgraph.log import get_logger
from sybilgraph.synth.config import SynthConfig
from sybilgraph.synth.enums import EntityType

logger = get_logger(__name__)

PREFERENCE_CONCENTRATION = 0.1
CHOICES = 3
TRUTH_COLUMNS = ("wallet", "entity_id", "type")


@dataclass
class GroundTruth:
    """
    Wallet ownership of a generated dataset.

    Parameters
    ----------
    wallet_entity : dict[str, int]
        Every generated wallet address to its entity id.
    entity_types : dict[int, EntityType]
        Kind of every entity.
    """

    wallet_entity: dict[str, int] = field(default_factory=dict)
    entity_types: dict[int, EntityType] = field(default_factory=dict)

    def wallets_of(self, kind: EntityType) -> list[str]:
        return sorted(w for w, e in self.wallet_entity.items() if self.entity_types[e] is kind)

    @property
    def sybil_wallets(self) -> list[str]:
        return self.wallets_of(EntityType.SYBIL)

    def entities(self, kind: EntityType | None = None) -> dict[int, list[str]]:
        """Entity id to its sorted wallets, optionally of one kind."""
        groups: dict[int, list[str]] = {}
        for wallet, entity in sorted(self.wallet_entity.items()):
            if kind is None or self.entity_types[entity] is kind:
                groups.setdefault(entity, []).append(wallet)
        return groups

    def to_rows(self) -> list[tuple[str, int, str]]:
        return [
            (wallet, entity, self.entity_types[entity].value)
            for wallet, entity in sorted(self.wallet_entity.items())
        ]


@dataclass
class SynthDataset:
    """Votes, proposals, registry, and truth of one generated network."""

    votes: list[VoteRecord]
    proposals: list[ProposalRecord]
    registry: dict[str, str]
    truth: GroundTruth


@dataclass(frozen=True)
class _Profile:
    preference: np.ndarray
    power_scale: float
    delay: float
    choice: int
    vote_count: int


@dataclass(frozen=True)
class _Vote:
    proposal: int
    power: float
    timestamp: int
    choice: int


def _draw_profile(rng: np.random.Generator, config: SynthConfig) -> _Profile:
    preference = rng.dirichlet(np.full(config.proposals, PREFERENCE_CONCENTRATION)) + 1e-12
    low, high = config.votes_per_voter
    return _Profile(
        preference=preference / preference.sum(),
        power_scale=float(rng.lognormal(mean=2.0, sigma=1.5)),
        delay=float(rng.beta(2.0, 5.0)),
        choice=int(rng.integers(CHOICES)),
        vote_count=min(config.proposals, int(rng.integers(low, high + 1))),
    )


def _timestamp(proposal: ProposalRecord, fraction: float) -> int:
    fraction = min(1.0, max(0.0, fraction))
    return proposal.start + int(round(fraction * proposal.duration))


def _profile_votes(
    rng: np.random.Generator, profile: _Profile, proposals: list[ProposalRecord]
) -> list[_Vote]:
    chosen = rng.choice(len(proposals), size=profile.vote_count, replace=False, p=profile.preference)
    votes = []
    for index in sorted(int(i) for i in chosen):
        power = round(profile.power_scale * float(rng.lognormal(0.0, 0.25)), 6)
        votes.append(
            _Vote(
                proposal=index,
                power=power,
                timestamp=_timestamp(proposals[index], profile.delay),
                choice=profile.choice,
            )
        )
    return votes


def _perturb(
    rng: np.random.Generator,
    votes: list[_Vote],
    profile: _Profile,
    proposals: list[ProposalRecord],
    noise: float,
) -> list[_Vote]:
    used = {v.proposal for v in votes}
    perturbed = []
    for vote in votes:
        proposal = vote.proposal
        if rng.random() < noise:
            candidate = int(rng.choice(len(proposals), p=profile.preference))
            if candidate not in used:
                used.discard(proposal)
                used.add(candidate)
                proposal = candidate
        choice = int(rng.integers(CHOICES)) if rng.random() < noise else vote.choice
        power = round(vote.power * float(np.exp(noise * rng.normal())), 6)
        jitter = noise * float(rng.normal())
        perturbed.append(
            _Vote(
                proposal=proposal,
                power=power,
                timestamp=_timestamp(proposals[proposal], profile.delay + jitter),
                choice=choice,
            )
        )
    return perturbed


def _address(rng: np.random.Generator, taken: set[str]) -> str:
    while True:
        address = "0x" + rng.bytes(20).hex()
        if address not in taken:
            taken.add(address)
            return address


def generate_dataset(config: SynthConfig) -> SynthDataset:
    """
    Generate a voting network with planted sybil entities.

    Entity ids ``0 .. honest_voters - 1`` are honest voters and the following
    ``sybil_entities`` ids are sybils. Only honest voters are registered.

    Parameters
    ----------
    config : SynthConfig
        Dataset shape and seed.

    Returns
    -------
    SynthDataset
        Votes in (timestamp, voter, proposal) order, proposals, registry,
        and ground truth. Identical for identical configs.
    """
    config.validate()
    rng = np.random.default_rng(config.seed)

    span = config.span_days * SECONDS_PER_DAY
    proposals = []
    for index in range(config.proposals):
        start = config.start_ts + int(rng.integers(span))
        duration = int(rng.integers(SECONDS_PER_DAY, 14 * SECONDS_PER_DAY + 1))
        proposals.append(
            ProposalRecord(
                proposal_id=f"proposal-{index:05d}",
                space_id=f"space-{index % config.spaces:02d}",
                start=start,
                end=start + duration,
            )
        )

    truth = GroundTruth()
    taken: set[str] = set()
    wallet_votes: list[tuple[str, list[_Vote]]] = []

    for entity in range(config.honest_voters):
        profile = _draw_profile(rng, config)
        address = _address(rng, taken)
        truth.wallet_entity[address] = entity
        truth.entity_types[entity] = EntityType.HONEST
        wallet_votes.append((address, _profile_votes(rng, profile, proposals)))

    low, high = config.wallets_per_sybil
    for offset in range(config.sybil_entities):
        entity = config.honest_voters + offset
        truth.entity_types[entity] = EntityType.SYBIL
        profile = _draw_profile(rng, config)
        template = _profile_votes(rng, profile, proposals)
        for _ in range(int(rng.integers(low, high + 1))):
            address = _address(rng, taken)
            truth.wallet_entity[address] = entity
            wallet_votes.append(
                (address, _perturb(rng, template, profile, proposals, config.behavior_noise))
            )

    honest = truth.wallets_of(EntityType.HONEST)
    known_count = int(round(config.known_fraction * len(honest)))
    known = sorted(rng.choice(len(honest), size=known_count, replace=False).tolist()) if known_count else []
    registry = {
        honest[i]: f"voter-{truth.wallet_entity[honest[i]]}{config.name_suffix}" for i in known
    }

    votes = sorted(
        (
            VoteRecord(
                voter_address=address,
                proposal_id=proposals[v.proposal].proposal_id,
                space_id=proposals[v.proposal].space_id,
                voting_power=v.power,
                timestamp=v.timestamp,
                choice=v.choice,
            )
            for address, wallet in wallet_votes
            for v in wallet
        ),
        key=VoteRecord.sort_key,
    )
    logger.info(
        "Generated %d votes from %d wallets (%d sybil entities) on %d proposals, %d registered",
        len(votes),
        len(truth.wallet_entity),
        config.sybil_entities,
        len(proposals),
        len(registry),
    )
    return SynthDataset(votes=votes, proposals=proposals, registry=registry, truth=truth)


@dataclass(frozen=True)
class DatasetPaths:
    votes: Path
    proposals: Path
    registry: Path
    truth: Path


def write_dataset(
    dataset: SynthDataset, directory: str | Path, fmt: RecordFormat = RecordFormat.CSV
) -> DatasetPaths:
    """
    Write a dataset in the formats the ingest stage reads.

    Parameters
    ----------
    dataset : SynthDataset
        Generated dataset.
    directory : str | Path
        Output directory, created when missing.
    fmt : RecordFormat, optional
        Format of the vote and proposal files. Default is CSV.

    Returns
    -------
    DatasetPaths
        Paths of the votes, proposals, registry, and truth files.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    suffix = "jsonl" if fmt is RecordFormat.JSON_LINES else "csv"
    paths = DatasetPaths(
        votes=directory / f"votes.{suffix}",
        proposals=directory / f"proposals.{suffix}",
        registry=directory / "registry.csv",
        truth=directory / "truth.csv",
    )
    paths.votes.write_bytes(serialize_votes(dataset.votes, fmt))
    paths.proposals.write_bytes(serialize_proposals(dataset.proposals, fmt))
    paths.registry.write_bytes(serialize_registry(dataset.registry))
    with paths.truth.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRUTH_COLUMNS)
        writer.writerows(dataset.truth.to_rows())
    logger.info("Wrote synthetic dataset to %s", directory)
    return paths


def read_truth(path: str | Path) -> GroundTruth:
    """
    Read a ``wallet,entity_id,type`` truth file.

    Raises
    ------
    StageDependencyError
        If the file does not exist.
    RecordFormatError
        If a row is malformed or an entity has two types.
    """
    path = Path(path)
    if not path.exists():
        raise StageDependencyError(path)
    truth = GroundTruth()
    with path.open(newline="", encoding="utf-8") as handle:
        for line, row in enumerate(csv.DictReader(handle), start=2):
            try:
                entity = int(row["entity_id"])
                kind = EntityType(row["type"])
                wallet = row["wallet"].strip().lower()
            except (KeyError, ValueError, AttributeError) as e:
                raise RecordFormatError(f"{path}:{line}: malformed truth row: {e}") from e
            if truth.entity_types.setdefault(entity, kind) is not kind:
                raise RecordFormatError(f"{path}:{line}: entity {entity} has two types")
            truth.wallet_entity[wallet] = entity
    return truth
