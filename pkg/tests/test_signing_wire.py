import random

from delegov.elgamal import enc_keygen, encrypt
from delegov.group import DEFAULT_GROUP as G
from delegov.signing import sig_keygen, sig_sign, sig_verify
from delegov.wire import delegation_id, power_leaf, serialize_delegation, token_leaf


def test_sign_verify_roundtrip():
    keys = sig_keygen(random.Random(1))
    sig = sig_sign(keys.sk, b"message")
    assert sig_verify(keys.vk, b"message", sig)
    assert not sig_verify(keys.vk, b"other", sig)
    assert not sig_verify(keys.vk, b"message", sig[:-1] + bytes([sig[-1] ^ 1]))


def test_keygen_deterministic_from_seed():
    a = sig_keygen(random.Random(7))
    b = sig_keygen(random.Random(7))
    c = sig_keygen(random.Random(8))
    assert a.vk == b.vk
    assert a.vk != c.vk


def test_wrong_key_rejected():
    a = sig_keygen(random.Random(1))
    b = sig_keygen(random.Random(2))
    sig = sig_sign(a.sk, b"m")
    assert not sig_verify(b.vk, b"m", sig)


def test_token_leaf_layout():
    assert token_leaf(3, 10) == (3).to_bytes(4, "big") + (10).to_bytes(8, "big")
    assert token_leaf(3, 10) != token_leaf(10, 3)


def test_power_leaf_binds_index():
    keys = enc_keygen(G, random.Random(3))
    ct = encrypt(G, keys.pk, 1, 5)
    assert power_leaf(0, ct) != power_leaf(1, ct)
    assert len(power_leaf(0, ct)) == 4 + 64


def test_delegation_id_binds_set_and_vector():
    keys = enc_keygen(G, random.Random(3))
    cts = [encrypt(G, keys.pk, m, m + 1) for m in range(3)]
    base = delegation_id([1, 2, 3], cts)
    assert base == delegation_id([1, 2, 3], cts)
    assert base != delegation_id([1, 3, 2], cts)
    assert base != delegation_id([1, 2, 3], cts[::-1])
    assert base != delegation_id([1, 2], cts[:2])


def test_serialize_delegation_unambiguous():
    keys = enc_keygen(G, random.Random(3))
    cts = [encrypt(G, keys.pk, 0, i + 1) for i in range(2)]
    # moving an index across the set/vector boundary changes the encoding
    assert serialize_delegation([1, 2], cts) != serialize_delegation([1], cts + cts[:1])
