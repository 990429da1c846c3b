from enum import Enum


class EntityType(Enum):
    """
    Ground-truth kind of a generated entity.

    Attributes
    ----------
    HONEST : str
        One voter controlling one wallet.
    SYBIL : str
        One hidden entity controlling several wallets.
    """

    HONEST = "honest"
    SYBIL = "sybil"
