"""Prime-order cyclic group arithmetic.

The default group is the order-q subgroup of quadratic residues mod a fixed
256-bit safe prime p = 2q + 1.  Elements are Python ints in [1, p); scalars
live in Z_q.  All protocol crypto (encryption, sigma protocols) works over an
abstract GroupParams so the group can be swapped without touching callers.
"""

from dataclasses import dataclass, field

from .encoding import dec_elem, enc_elem

# Fixed safe prime: p = 2q + 1 with q prime, q > 2^254.
_P = 0x8ADF9550CB618E4F46E39D4CC6307A3BB7E2C0AB7D3CF27BF026D09040E776FF
_Q = 0x456FCAA865B0C727A371CEA663183D1DDBF16055BE9E793DF81368482073BB7F
_G = 4  # 2^2, a quadratic residue, hence order q


class NotInGroup(ValueError):
    """Deserialized value is not in the prime-order subgroup."""


@dataclass(frozen=True)
class GroupParams:
    group_id: str
    p: int
    q: int
    g: int

    @property
    def identity(self) -> int:
        return 1

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def exp(self, base: int, e: int) -> int:
        return pow(base, e % self.q, self.p)

    def inv(self, a: int) -> int:
        return pow(a, self.p - 2, self.p)

    def is_member(self, x: int) -> bool:
        return 0 < x < self.p and pow(x, self.q, self.p) == 1

    def elem_from_bytes(self, b: bytes) -> int:
        x = dec_elem(b)
        if not self.is_member(x):
            raise NotInGroup(x)
        return x

    def elem_to_bytes(self, x: int) -> bytes:
        return enc_elem(x)

    def rand_scalar(self, rng) -> int:
        """Uniform scalar in [1, q-1]; rng exposes randrange()."""
        return rng.randrange(1, self.q)


DEFAULT_GROUP = GroupParams(group_id="modp256-safe", p=_P, q=_Q, g=_G)
