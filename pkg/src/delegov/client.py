"""Honest voter/delegate logic.

Builds delegation vectors over a sampled anonymity set, generates the validity
proofs, and casts public or private votes.  The randomness vector and the
target position never leave the client; only the bundle (indices, ciphertexts,
proofs) is transmitted.
"""

import random
from dataclasses import dataclass

from .elgamal import Ciphertext, encrypt, rerandomize
from .group import DEFAULT_GROUP, GroupParams
from .merkle import MerkleProof, MerkleTree
from .nizk import (
    DelegationStatement,
    DelegationWitness,
    VectorProof,
    VoteStatement,
    VoteWitness,
    prove_delegation,
    prove_vote,
)
from .wire import power_leaf, token_leaf


class ClientError(Exception):
    pass


class UnknownParty(ClientError): ...
class PoolTooSmall(ClientError): ...
class ZeroPower(ClientError): ...
class AlreadyDelegated(ClientError): ...
class NothingToUndelegate(ClientError): ...
class BadOption(ClientError): ...


@dataclass(frozen=True)
class DelegationBundle:
    """The public message a delegating voter posts."""

    anon_set: tuple[int, ...]
    ct_vec: tuple[Ciphertext, ...]
    proof: VectorProof
    token_proof: MerkleProof

    def to_command(self, party: int) -> dict:
        return {
            "op": "delegate",
            "party": party,
            "anon_set": list(self.anon_set),
            "ct_vec": [c.to_bytes().hex() for c in self.ct_vec],
            "proof": self.proof.to_bytes().hex(),
            "token_proof": self.token_proof.to_bytes().hex(),
        }


@dataclass
class VoterState:
    party_index: int
    tokens: int
    stored_anon_set: tuple[int, ...] | None = None
    stored_ct_vec: tuple[Ciphertext, ...] | None = None

    @property
    def role(self) -> str:
        return "voter"

    def to_json(self) -> dict:
        return {
            "party_index": self.party_index,
            "tokens": self.tokens,
            "anon_set": list(self.stored_anon_set) if self.stored_anon_set else None,
            "ct_vec": [c.to_bytes().hex() for c in self.stored_ct_vec]
            if self.stored_ct_vec else None,
        }

    @classmethod
    def from_json(cls, doc: dict, group: GroupParams = DEFAULT_GROUP) -> "VoterState":
        anon = doc.get("anon_set")
        cts = doc.get("ct_vec")
        return cls(
            party_index=doc["party_index"],
            tokens=doc["tokens"],
            stored_anon_set=tuple(anon) if anon else None,
            stored_ct_vec=tuple(Ciphertext.from_bytes(bytes.fromhex(h), group) for h in cts)
            if cts else None,
        )


def voter_setup(token_list: list[int], party_index: int) -> VoterState:
    if not 0 <= party_index < len(token_list):
        raise UnknownParty(party_index)
    return VoterState(party_index=party_index, tokens=token_list[party_index])


def build_delegation(state: VoterState, target: int, set_size: int,
                     delegate_pool: list[int], pk: int, token_list: list[int],
                     rng: random.Random, group: GroupParams = DEFAULT_GROUP) -> DelegationBundle:
    """Sample the anonymity set, encrypt the delegation vector, prove validity.

    The target is inserted at a uniform position among set_size slots so its
    location carries no information.
    """
    if state.stored_anon_set is not None:
        raise AlreadyDelegated(state.party_index)
    if state.tokens < 1:
        raise ZeroPower(state.party_index)
    if target not in delegate_pool:
        raise PoolTooSmall(f"target {target} not in pool")
    if set_size > len(delegate_pool) or set_size < 1:
        raise PoolTooSmall(f"need {set_size}, pool has {len(delegate_pool)}")
    others = [d for d in delegate_pool if d != target]
    sampled = rng.sample(others, set_size - 1)
    target_pos = rng.randrange(set_size)
    anon_set = sampled[:target_pos] + [target] + sampled[target_pos:]

    r_vec = tuple(group.rand_scalar(rng) for _ in range(set_size))
    ct_vec = tuple(
        encrypt(group, pk, state.tokens if k == target_pos else 0, r_vec[k])
        for k in range(set_size)
    )
    token_tree = MerkleTree([token_leaf(i, t) for i, t in enumerate(token_list)])
    token_proof = token_tree.prove(state.party_index)
    stmt = DelegationStatement(
        pk=pk, anon_set=tuple(anon_set), ct_vec=ct_vec, t=state.tokens,
        token_root=token_tree.root, token_proof=token_proof,
        voter_index=state.party_index,
    )
    wit = DelegationWitness(target_pos=target_pos, r_vec=r_vec)
    proof = prove_delegation(group, stmt, wit, rng)
    return DelegationBundle(anon_set=tuple(anon_set), ct_vec=ct_vec,
                            proof=proof, token_proof=token_proof)


def mark_delegated(state: VoterState, bundle: DelegationBundle):
    """Record the accepted bundle; required later for undelegation."""
    state.stored_anon_set = bundle.anon_set
    state.stored_ct_vec = bundle.ct_vec


def build_undelegation(state: VoterState) -> dict:
    if state.stored_anon_set is None:
        raise NothingToUndelegate(state.party_index)
    return {
        "op": "undelegate",
        "party": state.party_index,
        "anon_set": list(state.stored_anon_set),
        "ct_vec": [c.to_bytes().hex() for c in state.stored_ct_vec],
    }


def mark_undelegated(state: VoterState):
    state.stored_anon_set = None
    state.stored_ct_vec = None


def _snapshot_tree(snapshot_powers: dict[int, Ciphertext]) -> MerkleTree:
    n = len(snapshot_powers)
    return MerkleTree([power_leaf(i, snapshot_powers[i]) for i in range(n)])


def cast_public_vote(state: VoterState, eid: str, v: int, num_options: int,
                     snapshot_powers: dict[int, Ciphertext]) -> dict:
    if not 0 <= v < num_options:
        raise BadOption(v)
    tree = _snapshot_tree(snapshot_powers)
    p = state.party_index
    return {
        "op": "vote_public",
        "eid": eid,
        "party": p,
        "choice": v,
        "snapshot_proof": tree.prove(p).to_bytes().hex(),
        "power_ct": snapshot_powers[p].to_bytes().hex(),
    }


def cast_private_vote(state: VoterState, eid: str, v: int, num_options: int,
                      snapshot_powers: dict[int, Ciphertext], pk: int,
                      rng: random.Random, group: GroupParams = DEFAULT_GROUP) -> dict:
    if not 0 <= v < num_options:
        raise BadOption(v)
    p = state.party_index
    power_ct = snapshot_powers[p]
    r_vec = tuple(group.rand_scalar(rng) for _ in range(num_options))
    vote_vec = tuple(
        rerandomize(group, pk, power_ct, r_vec[j]) if j == v
        else encrypt(group, pk, 0, r_vec[j])
        for j in range(num_options)
    )
    tree = _snapshot_tree(snapshot_powers)
    snapshot_proof = tree.prove(p)
    stmt = VoteStatement(
        pk=pk, power_ct=power_ct, vote_vec=vote_vec, delegate_index=p,
        snapshot_root=tree.root, snapshot_proof=snapshot_proof,
    )
    proof = prove_vote(group, stmt, VoteWitness(choice=v, r_vec=r_vec), rng)
    return {
        "op": "vote_private",
        "eid": eid,
        "party": p,
        "vote_vec": [c.to_bytes().hex() for c in vote_vec],
        "proof": proof.to_bytes().hex(),
        "snapshot_proof": snapshot_proof.to_bytes().hex(),
        "power_ct": power_ct.to_bytes().hex(),
    }
