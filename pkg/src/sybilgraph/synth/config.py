"""
Configuration dataclass for synthetic voting datasets.
"""

from dataclasses import dataclass

from sybilgraph.errors import ConfigError


@dataclass
class SynthConfig:
    """
    Shape of a synthetic voting network with planted sybil entities.

    Parameters
    ----------
    honest_voters : int, optional
        Independent single-wallet voters. Default is 1000.
    sybil_entities : int, optional
        Hidden entities that each control several wallets. Default is 50.
    wallets_per_sybil : tuple[int, int], optional
        Inclusive (min, max) wallets per sybil entity. Default is (5, 5).
    proposals : int, optional
        Number of proposals. Default is 200.
    votes_per_voter : tuple[int, int], optional
        Inclusive (min, max) votes drawn per entity profile. Default is (5, 20).
    behavior_noise : float, optional
        Perturbation of sybil wallets around their entity's votes, in [0, 1].
        0 makes every wallet of an entity vote identically. Default is 0.05.
    known_fraction : float, optional
        Fraction of honest voters listed in the registry. Default is 0.1.
    spaces : int, optional
        Number of DAO spaces proposals are spread over. Default is 10.
    start_ts : int, optional
        Earliest proposal start, epoch seconds. Default is 1_600_000_000.
    span_days : int, optional
        Days over which proposal starts are spread. Default is 365.
    name_suffix : str, optional
        Suffix of generated registry names. Default is ".eth".
    seed : int, optional
        Generator seed. Default is 0.

    Examples
    --------
    >>> config = SynthConfig(honest_voters=100, sybil_entities=10, wallets_per_sybil=(5, 5))
    >>> config.validate()
    """

    honest_voters: int = 1000
    sybil_entities: int = 50
    wallets_per_sybil: tuple[int, int] = (5, 5)
    proposals: int = 200
    votes_per_voter: tuple[int, int] = (5, 20)
    behavior_noise: float = 0.05
    known_fraction: float = 0.1
    spaces: int = 10
    start_ts: int = 1_600_000_000
    span_days: int = 365
    name_suffix: str = ".eth"
    seed: int = 0

    def validate(self) -> None:
        """
        Raises
        ------
        ConfigError
            If a count is negative, a range is inverted, or a fraction lies
            outside [0, 1].
        """
        for name in ("honest_voters", "sybil_entities"):
            if getattr(self, name) < 0:
                raise ConfigError(f"synth: {name} must be >= 0")
        for name in ("proposals", "spaces", "span_days"):
            if getattr(self, name) < 1:
                raise ConfigError(f"synth: {name} must be >= 1")
        for name in ("wallets_per_sybil", "votes_per_voter"):
            low, high = getattr(self, name)
            if low < 1 or high < low:
                raise ConfigError(f"synth: {name} must be a range 1 <= min <= max, got {(low, high)}")
        for name in ("behavior_noise", "known_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"synth: {name} must lie in [0, 1]")
        if self.start_ts <= 0:
            raise ConfigError("synth: start_ts must be positive")
