"""Canonical byte encodings.

Everything that gets hashed or challenged (Merkle leaves, delegation
identifiers, Fiat-Shamir transcripts) is serialized through these helpers so
that digests are bit-reproducible: fixed-length big-endian integers, vectors
length-prefixed with a 32-bit count.
"""

ELEM_LEN = 32    # group elements mod p, p < 2^256
SCALAR_LEN = 32  # scalars mod q


def enc_u32(n: int) -> bytes:
    return n.to_bytes(4, "big")


def enc_u64(n: int) -> bytes:
    return n.to_bytes(8, "big")


def enc_elem(x: int) -> bytes:
    return x.to_bytes(ELEM_LEN, "big")


def dec_elem(b: bytes) -> int:
    if len(b) != ELEM_LEN:
        raise ValueError(f"group element must be {ELEM_LEN} bytes, got {len(b)}")
    return int.from_bytes(b, "big")


def enc_scalar(x: int) -> bytes:
    return x.to_bytes(SCALAR_LEN, "big")


def dec_scalar(b: bytes) -> int:
    if len(b) != SCALAR_LEN:
        raise ValueError(f"scalar must be {SCALAR_LEN} bytes, got {len(b)}")
    return int.from_bytes(b, "big")


def enc_bytes(b: bytes) -> bytes:
    """Length-prefixed variable-size byte string."""
    return enc_u32(len(b)) + b


def enc_vec(items) -> bytes:
    """Length-prefixed concatenation of already-encoded items."""
    out = [enc_u32(len(items))]
    out.extend(items)
    return b"".join(out)
