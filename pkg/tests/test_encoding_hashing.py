import pytest
from hypothesis import given
from hypothesis import strategies as st

from delegov.encoding import (
    dec_elem,
    dec_scalar,
    enc_bytes,
    enc_elem,
    enc_scalar,
    enc_u32,
    enc_u64,
    enc_vec,
)
from delegov.hashing import DIGEST_LEN, DOMAIN_TAGS, UnknownDomainTag, hash_tagged


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_u32_roundtrip(n):
    assert int.from_bytes(enc_u32(n), "big") == n
    assert len(enc_u32(n)) == 4


@given(st.integers(min_value=0, max_value=2**64 - 1))
def test_u64_roundtrip(n):
    assert int.from_bytes(enc_u64(n), "big") == n
    assert len(enc_u64(n)) == 8


@given(st.integers(min_value=0, max_value=2**256 - 1))
def test_elem_scalar_roundtrip(x):
    assert dec_elem(enc_elem(x)) == x
    assert dec_scalar(enc_scalar(x)) == x


def test_elem_wrong_length_rejected():
    with pytest.raises(ValueError):
        dec_elem(b"\x00" * 31)
    with pytest.raises(ValueError):
        dec_scalar(b"\x00" * 33)


def test_enc_bytes_prefixes_length():
    assert enc_bytes(b"abc") == b"\x00\x00\x00\x03abc"
    assert enc_bytes(b"") == b"\x00\x00\x00\x00"


def test_enc_vec_counts_items():
    assert enc_vec([b"aa", b"bb"]) == b"\x00\x00\x00\x02aabb"
    # injective on structure: [b"aabb"] differs from [b"aa", b"bb"]
    assert enc_vec([b"aabb"]) != enc_vec([b"aa", b"bb"])


def test_hash_tagged_separates_domains():
    digests = {tag: hash_tagged(tag, b"same input") for tag in DOMAIN_TAGS}
    assert len(set(digests.values())) == len(DOMAIN_TAGS)
    assert all(len(d) == DIGEST_LEN for d in digests.values())


def test_hash_tagged_deterministic():
    assert hash_tagged("leaf", b"x") == hash_tagged("leaf", b"x")
    assert hash_tagged("leaf", b"x") != hash_tagged("leaf", b"y")


def test_unknown_tag_rejected():
    with pytest.raises(UnknownDomainTag):
        hash_tagged("nonsense", b"")


def test_tag_is_length_prefixed():
    # "leaf" || data must not collide with a tagless concatenation trick
    assert hash_tagged("leaf", b"x") != hash_tagged("node", b"x")
