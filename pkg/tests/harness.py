"""Shared fixture builders and the adversarial proof mutator.

Used by both the unit tests and the acceptance suite, so negative-case
construction is identical everywhere.  A "case" returns True when the
forgery/mutation was rejected (verification returned False or deserialization
raised) and False when a bad proof was accepted.
"""

import random

from delegov.elgamal import Ciphertext, encrypt, rerandomize
from delegov.group import DEFAULT_GROUP as G
from delegov.group import NotInGroup
from delegov.merkle import MerkleTree
from delegov.nizk import (
    DecryptionProof,
    DecryptionStatement,
    DelegationStatement,
    DelegationWitness,
    VectorProof,
    VoteStatement,
    VoteWitness,
    _prove_vector,
    _del_branch_targets,
    _vote_branch_targets,
    prove_decryption,
    prove_delegation,
    prove_vote,
    verify_decryption,
    verify_delegation,
    verify_vote,
)
from delegov.wire import power_leaf, token_leaf


def make_delegation(rng: random.Random, pk: int, set_size: int, n_parties: int = 8):
    """Honest delegation fixture: (stmt, wit, proof)."""
    n_parties = max(n_parties, set_size)
    tokens = [rng.randint(1, 10) for _ in range(n_parties)]
    voter = rng.randrange(n_parties)
    t = tokens[voter]
    anon_set = tuple(rng.sample(range(n_parties), set_size))
    target_pos = rng.randrange(set_size)
    r_vec = tuple(G.rand_scalar(rng) for _ in range(set_size))
    ct_vec = tuple(
        encrypt(G, pk, t if k == target_pos else 0, r_vec[k]) for k in range(set_size)
    )
    tree = MerkleTree([token_leaf(i, tok) for i, tok in enumerate(tokens)])
    stmt = DelegationStatement(
        pk=pk, anon_set=anon_set, ct_vec=ct_vec, t=t, token_root=tree.root,
        token_proof=tree.prove(voter), voter_index=voter,
    )
    wit = DelegationWitness(target_pos=target_pos, r_vec=r_vec)
    return stmt, wit, prove_delegation(G, stmt, wit, rng)


def make_vote(rng: random.Random, pk: int, num_options: int, n_parties: int = 6):
    """Honest private-vote fixture: (stmt, wit, proof)."""
    powers = [encrypt(G, pk, rng.randint(1, 10), G.rand_scalar(rng))
              for _ in range(n_parties)]
    voter = rng.randrange(n_parties)
    choice = rng.randrange(num_options)
    r_vec = tuple(G.rand_scalar(rng) for _ in range(num_options))
    vote_vec = tuple(
        rerandomize(G, pk, powers[voter], r_vec[j]) if j == choice
        else encrypt(G, pk, 0, r_vec[j])
        for j in range(num_options)
    )
    tree = MerkleTree([power_leaf(i, ct) for i, ct in enumerate(powers)])
    stmt = VoteStatement(
        pk=pk, power_ct=powers[voter], vote_vec=vote_vec, delegate_index=voter,
        snapshot_root=tree.root, snapshot_proof=tree.prove(voter),
    )
    wit = VoteWitness(choice=choice, r_vec=r_vec)
    return stmt, wit, prove_vote(G, stmt, wit, rng)


def make_decryption(rng: random.Random, keys, n_cts: int = 3):
    """Honest decryption fixture: (stmt, proof)."""
    counts = tuple(rng.randint(0, 30) for _ in range(n_cts))
    cts = tuple(encrypt(G, keys.pk, d, G.rand_scalar(rng)) for d in counts)
    stmt = DecryptionStatement(pk=keys.pk, tally_cts=cts, plain_counts=counts)
    return stmt, prove_decryption(G, stmt, keys.sk, rng)


# ---------------------------------------------------------------------------
# Adversarial cases; each returns True iff the attack was rejected.


def _safe_verify(verify, stmt, raw, decode):
    try:
        proof = decode(raw)
    except (ValueError, NotInGroup):
        return True
    return not verify(G, stmt, proof)


def delegation_negative(rng: random.Random, pk: int, kind: str) -> bool:
    stmt, wit, proof = make_delegation(rng, pk, set_size=rng.choice([2, 3, 5]))
    n = len(stmt.ct_vec)
    if kind == "double_target":
        # two entries encrypt t; forge entry proofs honestly, sum encrypts 2t
        other = (wit.target_pos + 1) % n
        ct_vec = list(stmt.ct_vec)
        ct_vec[other] = encrypt(G, pk, stmt.t, wit.r_vec[other])
        bad = stmt.__class__(**{**stmt.__dict__, "ct_vec": tuple(ct_vec)})
        branches = [_del_branch_targets(G, ct, stmt.t) for ct in bad.ct_vec]
        forged = _prove_vector(G, "del", bad.to_bytes(), pk, branches,
                               real_branch_at=wit.target_pos, r_vec=wit.r_vec, rng=rng)
        return not verify_delegation(G, bad, forged)
    if kind == "wrong_sum":
        # all entries encrypt zero: every disjunction holds, the sum does not
        r_vec = tuple(G.rand_scalar(rng) for _ in range(n))
        ct_vec = tuple(encrypt(G, pk, 0, r) for r in r_vec)
        bad = stmt.__class__(**{**stmt.__dict__, "ct_vec": ct_vec})
        branches = [_del_branch_targets(G, ct, stmt.t) for ct in ct_vec]
        forged = _prove_vector(G, "del", bad.to_bytes(), pk, branches,
                               real_branch_at=0, r_vec=r_vec, rng=rng)
        return not verify_delegation(G, bad, forged)
    if kind == "mutated_statement":
        field = rng.choice(["t", "voter", "anon_set", "ct_swap"])
        if field == "t":
            bad = stmt.__class__(**{**stmt.__dict__, "t": stmt.t + 1})
        elif field == "voter":
            bad = stmt.__class__(**{**stmt.__dict__,
                                    "voter_index": (stmt.voter_index + 1) % 8})
        elif field == "anon_set":
            rolled = stmt.anon_set[1:] + stmt.anon_set[:1]
            bad = stmt.__class__(**{**stmt.__dict__, "anon_set": rolled})
        else:
            swapped = stmt.ct_vec[::-1]
            bad = stmt.__class__(**{**stmt.__dict__, "ct_vec": swapped})
        if bad == stmt:
            return True
        return not verify_delegation(G, bad, proof)
    if kind == "byte_flip":
        raw = bytearray(proof.to_bytes())
        pos = rng.randrange(len(raw))
        raw[pos] ^= 1 << rng.randrange(8)
        return _safe_verify(verify_delegation, stmt, bytes(raw),
                            lambda b: VectorProof.from_bytes(b, G))
    if kind == "replay":
        # proof replayed against a fresh statement with different randomness
        stmt2, _, _ = make_delegation(rng, pk, set_size=n)
        return not verify_delegation(G, stmt2, proof)
    if kind == "duplicate_index":
        dup = (stmt.anon_set[0],) * n
        bad = stmt.__class__(**{**stmt.__dict__, "anon_set": dup})
        if n == 1:
            return True
        return not verify_delegation(G, bad, proof)
    raise ValueError(kind)


DELEGATION_KINDS = ("double_target", "wrong_sum", "mutated_statement",
                    "byte_flip", "replay", "duplicate_index")


def vote_negative(rng: random.Random, pk: int, kind: str) -> bool:
    stmt, wit, proof = make_vote(rng, pk, num_options=3)
    n = len(stmt.vote_vec)
    if kind == "double_target":
        other = (wit.choice + 1) % n
        vote_vec = list(stmt.vote_vec)
        vote_vec[other] = rerandomize(G, pk, stmt.power_ct, wit.r_vec[other])
        bad = stmt.__class__(**{**stmt.__dict__, "vote_vec": tuple(vote_vec)})
        branches = [_vote_branch_targets(G, ct, stmt.power_ct) for ct in bad.vote_vec]
        forged = _prove_vector(G, "vote", bad.to_bytes(), pk, branches,
                               real_branch_at=wit.choice, r_vec=wit.r_vec, rng=rng)
        return not verify_vote(G, bad, forged)
    if kind == "wrong_sum":
        # all entries encrypt zero: every disjunction holds, but the vector
        # sums to zero instead of the voting power
        r_vec = tuple(G.rand_scalar(rng) for _ in range(n))
        vote_vec = tuple(encrypt(G, pk, 0, r) for r in r_vec)
        bad = stmt.__class__(**{**stmt.__dict__, "vote_vec": vote_vec})
        branches = [_vote_branch_targets(G, ct, stmt.power_ct) for ct in vote_vec]
        forged = _prove_vector(G, "vote", bad.to_bytes(), pk, branches,
                               real_branch_at=0, r_vec=r_vec, rng=rng)
        return not verify_vote(G, bad, forged)
    if kind == "mutated_statement":
        if rng.random() < 0.5:
            bad = stmt.__class__(**{**stmt.__dict__,
                                    "delegate_index": stmt.delegate_index + 1})
        else:
            bad = stmt.__class__(**{**stmt.__dict__, "vote_vec": stmt.vote_vec[::-1]})
        return not verify_vote(G, bad, proof)
    if kind == "byte_flip":
        raw = bytearray(proof.to_bytes())
        pos = rng.randrange(len(raw))
        raw[pos] ^= 1 << rng.randrange(8)
        return _safe_verify(verify_vote, stmt, bytes(raw),
                            lambda b: VectorProof.from_bytes(b, G))
    if kind == "replay":
        stmt2, _, _ = make_vote(rng, pk, num_options=n)
        return not verify_vote(G, stmt2, proof)
    if kind == "foreign_power":
        # claim a different (larger) snapshot power under the same proof
        fake_power = rerandomize(G, pk, stmt.power_ct, G.rand_scalar(rng))
        bad = stmt.__class__(**{**stmt.__dict__, "power_ct": fake_power})
        return not verify_vote(G, bad, proof)
    raise ValueError(kind)


VOTE_KINDS = ("double_target", "wrong_sum", "mutated_statement",
              "byte_flip", "replay", "foreign_power")


def decryption_negative(rng: random.Random, keys, other_keys, kind: str) -> bool:
    stmt, proof = make_decryption(rng, keys)
    if kind == "wrong_counts":
        j = rng.randrange(len(stmt.plain_counts))
        counts = list(stmt.plain_counts)
        counts[j] += rng.choice([-1, 1])
        if counts[j] < 0:
            counts[j] = stmt.plain_counts[j] + 1
        bad_counts = tuple(counts)
        bad = DecryptionStatement(pk=stmt.pk, tally_cts=stmt.tally_cts,
                                  plain_counts=bad_counts)
        forged = DecryptionProof(counts=bad_counts, a=proof.a,
                                 b_vec=proof.b_vec, z=proof.z)
        return not verify_decryption(G, bad, forged)
    if kind == "cross_key":
        # honest proof under keys, verified against other_keys' public key
        bad = DecryptionStatement(pk=other_keys.pk, tally_cts=stmt.tally_cts,
                                  plain_counts=stmt.plain_counts)
        return not verify_decryption(G, bad, proof)
    if kind == "byte_flip":
        raw = bytearray(proof.to_bytes())
        pos = rng.randrange(len(raw))
        raw[pos] ^= 1 << rng.randrange(8)
        return _safe_verify(verify_decryption, stmt, bytes(raw),
                            lambda b: DecryptionProof.from_bytes(b, G))
    if kind == "replay":
        stmt2, _ = make_decryption(rng, keys)
        if stmt2 == stmt:
            return True
        return not verify_decryption(G, stmt2, proof)
    if kind == "mutated_ciphertext":
        cts = list(stmt.tally_cts)
        j = rng.randrange(len(cts))
        cts[j] = rerandomize(G, keys.pk, cts[j], G.rand_scalar(rng))
        bad = DecryptionStatement(pk=stmt.pk, tally_cts=tuple(cts),
                                  plain_counts=stmt.plain_counts)
        return not verify_decryption(G, bad, proof)
    raise ValueError(kind)


DECRYPTION_KINDS = ("wrong_counts", "cross_key", "byte_flip", "replay",
                    "mutated_ciphertext")
