"""Domain-separated 256-bit hash.

One SHA-256 instance per registered domain tag; distinct tags behave as
independent functions because the tag is length-prefixed into the input.
"""

import hashlib

DIGEST_LEN = 32

# Every tag used anywhere in the system.  Hashing under an unregistered tag
# is a programming error, not an input error.
DOMAIN_TAGS = frozenset(
    {
        "leaf",      # Merkle leaf hashing
        "node",      # Merkle inner-node hashing
        "did",       # delegation identifiers over (anonSet, ctVec)
        "fs/del",    # Fiat-Shamir challenge, delegation relation
        "fs/vote",   # Fiat-Shamir challenge, private-vote relation
        "fs/dec",    # Fiat-Shamir challenge, decryption relation
        "state",     # board state hashing
        "keyseed",   # deterministic key derivation from seeds
    }
)


class UnknownDomainTag(ValueError):
    pass


def hash_tagged(tag: str, data: bytes) -> bytes:
    if tag not in DOMAIN_TAGS:
        raise UnknownDomainTag(tag)
    tag_bytes = tag.encode("ascii")
    h = hashlib.sha256()
    h.update(len(tag_bytes).to_bytes(1, "big"))
    h.update(tag_bytes)
    h.update(data)
    return h.digest()
