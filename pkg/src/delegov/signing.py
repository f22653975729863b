"""Ed25519 signatures behind the keygen/sign/verify interface.

Deterministic keygen from a seed is supported for tests; production callers
pass a SystemRandom-backed rng.
"""

from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .hashing import hash_tagged


@dataclass(frozen=True)
class SigKeyPair:
    vk: bytes  # raw 32-byte verification key
    sk: Ed25519PrivateKey


def sig_keygen(rng) -> SigKeyPair:
    seed = rng.randrange(0, 2**256).to_bytes(32, "big")
    sk = Ed25519PrivateKey.from_private_bytes(hash_tagged("keyseed", seed))
    vk = sk.public_key().public_bytes_raw()
    return SigKeyPair(vk=vk, sk=sk)


def sig_sign(sk: Ed25519PrivateKey, msg: bytes) -> bytes:
    return sk.sign(msg)


def sig_verify(vk: bytes, msg: bytes, sig: bytes) -> bool:
    try:
        Ed25519PublicKey.from_public_bytes(vk).verify(sig, msg)
        return True
    except (InvalidSignature, ValueError):
        return False
