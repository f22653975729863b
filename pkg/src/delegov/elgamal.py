"""Exponential ElGamal: additively homomorphic encryption.

Messages live in the exponent, so ciphertexts add under componentwise group
multiplication.  Decryption recovers the bounded plaintext with a
baby-step/giant-step search over [-M, M]; the baby-step table depends only on
the generator and the bound, so it is cached process-wide.
"""

from dataclasses import dataclass

from .encoding import enc_elem
from .group import DEFAULT_GROUP, GroupParams


class MessageOutOfRange(ValueError):
    pass


class DlogNotFound(ValueError):
    """No plaintext in [-M, M] matches; malformed or out-of-range ciphertext."""


@dataclass(frozen=True)
class EncKeyPair:
    params: GroupParams
    pk: int
    sk: int


@dataclass(frozen=True)
class Ciphertext:
    c1: int
    c2: int

    def to_bytes(self) -> bytes:
        return enc_elem(self.c1) + enc_elem(self.c2)

    @classmethod
    def from_bytes(cls, b: bytes, params: GroupParams = DEFAULT_GROUP) -> "Ciphertext":
        if len(b) != 64:
            raise ValueError(f"ciphertext must be 64 bytes, got {len(b)}")
        c1 = params.elem_from_bytes(b[:32])
        c2 = params.elem_from_bytes(b[32:])
        return cls(c1, c2)


def enc_keygen(params: GroupParams, rng) -> EncKeyPair:
    sk = params.rand_scalar(rng)
    return EncKeyPair(params=params, pk=params.exp(params.g, sk), sk=sk)


def encrypt(params: GroupParams, pk: int, m: int, r: int, max_total: int | None = None) -> Ciphertext:
    if max_total is not None and abs(m) > max_total:
        raise MessageOutOfRange(m)
    c1 = params.exp(params.g, r)
    c2 = params.mul(params.exp(params.g, m), params.exp(pk, r))
    return Ciphertext(c1, c2)


def ct_add(params: GroupParams, a: Ciphertext, b: Ciphertext) -> Ciphertext:
    return Ciphertext(params.mul(a.c1, b.c1), params.mul(a.c2, b.c2))


def ct_neg(params: GroupParams, ct: Ciphertext) -> Ciphertext:
    return Ciphertext(params.inv(ct.c1), params.inv(ct.c2))


def rerandomize(params: GroupParams, pk: int, ct: Ciphertext, r: int) -> Ciphertext:
    return ct_add(params, ct, encrypt(params, pk, 0, r))


_BSGS_CACHE: dict[tuple[str, int], tuple[dict[int, int], int, int]] = {}


def _bsgs_table(params: GroupParams, max_total: int):
    key = (params.group_id, max_total)
    cached = _BSGS_CACHE.get(key)
    if cached is None:
        n = 2 * max_total + 1
        step = max(1, int(n**0.5) + 1)
        table = {}
        cur = params.identity
        for j in range(step):
            table.setdefault(cur, j)
            cur = params.mul(cur, params.g)
        giant = params.inv(params.exp(params.g, step))
        cached = (table, step, giant)
        _BSGS_CACHE[key] = cached
    return cached


def decrypt(params: GroupParams, sk: int, ct: Ciphertext, max_total: int) -> int:
    """Recover m in [-M, M] with c2 / c1^sk = g^m."""
    table, step, giant = _bsgs_table(params, max_total)
    target = params.mul(ct.c2, params.inv(params.exp(ct.c1, sk)))
    # Solve g^y = target * g^M for y = m + M in [0, 2M].
    cur = params.mul(target, params.exp(params.g, max_total))
    n = 2 * max_total + 1
    for i in range(n // step + 2):
        j = table.get(cur)
        if j is not None:
            y = i * step + j
            if y <= 2 * max_total:
                return y - max_total
        cur = params.mul(cur, giant)
    raise DlogNotFound("no plaintext in range")
