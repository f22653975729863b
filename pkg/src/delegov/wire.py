"""Leaf layouts and the delegation identifier.

Token-tree leaf: party index (u32) followed by token count (u64).
Snapshot-tree leaf: party index (u32) followed by the 64-byte ciphertext.
The delegation identifier commits to the anonymity-set indices together with
the ciphertext vector, since undelegation must subtract at the same indices.
"""

from .elgamal import Ciphertext
from .encoding import enc_u32, enc_u64, enc_vec
from .hashing import hash_tagged


def token_leaf(party: int, tokens: int) -> bytes:
    return enc_u32(party) + enc_u64(tokens)


def power_leaf(party: int, ct: Ciphertext) -> bytes:
    return enc_u32(party) + ct.to_bytes()


def serialize_delegation(anon_set: list[int], ct_vec: list[Ciphertext]) -> bytes:
    return enc_vec([enc_u32(i) for i in anon_set]) + enc_vec([c.to_bytes() for c in ct_vec])


def delegation_id(anon_set: list[int], ct_vec: list[Ciphertext]) -> bytes:
    return hash_tagged("did", serialize_delegation(anon_set, ct_vec))
