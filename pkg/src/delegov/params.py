"""System-wide parameters and the shared percentage function.

The basis-point function is the single quantization used by the authority,
the board, and the ideal-functionality oracle, so tallies can be compared
for exact equality.
"""

from dataclasses import dataclass, field

from .hashing import DOMAIN_TAGS

OPTION_NAMES = ("yes", "no", "abstain")


@dataclass(frozen=True)
class SystemParams:
    max_total: int            # total token supply; plaintext bound for decryption
    num_options: int = 3
    domain_tags: frozenset = field(default=DOMAIN_TAGS)

    def __post_init__(self):
        if self.max_total < 1:
            raise ValueError("max_total must be >= 1")
        if self.num_options < 2:
            raise ValueError("num_options must be >= 2")


def basis_points(counts: list[int]) -> tuple[list[int], bool]:
    """Floor of 10000 * count / total per option.

    Returns (percentages, no_votes); an all-zero count vector yields all-zero
    percentages with the no_votes flag set.
    """
    total = sum(counts)
    if total == 0:
        return [0] * len(counts), True
    return [10000 * c // total for c in counts], False
