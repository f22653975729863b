import random

import pytest

from delegov.authority import Authority, InconsistentEvents, TokenOutOfBound
from delegov.elgamal import encrypt
from delegov.group import DEFAULT_GROUP as G
from delegov.merkle import MerkleTree
from delegov.nizk import DecryptionStatement, verify_decryption
from delegov.signing import sig_verify
from delegov.wire import token_leaf


def test_setup_bundle_is_verifiable():
    auth = Authority(G, random.Random(1))
    bundle = auth.setup([4, 0, 6])
    assert sig_verify(bundle.vk_sig, bundle.token_root, bundle.root_sig)
    expected = MerkleTree([token_leaf(i, t) for i, t in enumerate([4, 0, 6])]).root
    assert bundle.token_root == expected
    assert G.is_member(bundle.pk_enc)


def test_setup_rejects_negative_tokens():
    auth = Authority(G, random.Random(1))
    with pytest.raises(TokenOutOfBound):
        auth.setup([4, -1])


def test_refresh_root_applies_transfers():
    auth = Authority(G, random.Random(2))
    auth.setup([4, 0, 6])
    root, sig = auth.refresh_root([{"from": 0, "to": 1, "amount": 3}])
    assert sig_verify(auth.sig_keys.vk, root, sig)
    assert auth.token_list == [1, 3, 6]
    expected = MerkleTree([token_leaf(i, t) for i, t in enumerate([1, 3, 6])]).root
    assert root == expected


def test_refresh_root_rejects_bad_events():
    auth = Authority(G, random.Random(3))
    auth.setup([4, 0])
    with pytest.raises(InconsistentEvents):
        auth.refresh_root([{"from": 0, "to": 5, "amount": 1}])
    with pytest.raises(InconsistentEvents):
        auth.refresh_root([{"from": 1, "to": 0, "amount": 1}])  # overdraw


def test_tally_decrypt_returns_percentages_not_counts():
    rng = random.Random(4)
    auth = Authority(G, rng)
    auth.setup([10, 10, 10])
    counts = [12, 4, 0]
    cts = [encrypt(G, auth.enc_keys.pk, d, G.rand_scalar(rng)) for d in counts]
    result, proof = auth.tally_decrypt("e1", cts)
    assert result.percentages == [7500, 2500, 0]
    assert not result.no_votes
    assert not hasattr(result, "counts")
    stmt = DecryptionStatement(pk=auth.enc_keys.pk, tally_cts=tuple(cts),
                               plain_counts=proof.counts)
    assert verify_decryption(G, stmt, proof)


def test_tally_decrypt_no_votes():
    rng = random.Random(5)
    auth = Authority(G, rng)
    auth.setup([5])
    cts = [encrypt(G, auth.enc_keys.pk, 0, G.rand_scalar(rng)) for _ in range(3)]
    result, _ = auth.tally_decrypt("e1", cts)
    assert result.no_votes
    assert result.percentages == [0, 0, 0]
