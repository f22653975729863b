"""Zero-knowledge proofs for the three protocol relations.

Each relation is realized as a three-move honest-verifier protocol compiled
non-interactively with a Fiat-Shamir challenge over the canonical transcript:

* delegation validity -- per-entry disjunction "encrypts 0 OR encrypts t"
  plus a proof that the homomorphic sum encrypts exactly t;
* private-vote validity -- per-option disjunction "encrypts 0 OR equals the
  rerandomized voting power" plus a sum constraint;
* decryption correctness -- equality of discrete logs between the public key
  and each tally ciphertext.

The Merkle sub-statements (token inclusion, snapshot inclusion) are public,
so the verifier checks them in the clear rather than inside the protocol.
"""

from dataclasses import dataclass

from .elgamal import Ciphertext, ct_add, ct_neg, encrypt, rerandomize
from .encoding import enc_bytes, enc_elem, enc_scalar, enc_u32, enc_u64, enc_vec
from .group import GroupParams
from .hashing import hash_tagged
from .merkle import MerkleProof, mt_verify
from .wire import power_leaf, token_leaf


class WitnessMismatch(ValueError):
    """Statement and witness are inconsistent; refusing to prove."""


def fs_challenge(params: GroupParams, relation_tag: str, statement: bytes, commitments: bytes) -> int:
    digest = hash_tagged(f"fs/{relation_tag}", enc_bytes(statement) + enc_bytes(commitments))
    return int.from_bytes(digest, "big") % params.q


# ---------------------------------------------------------------------------
# Chaum-Pedersen building block: knowledge of r with u1 = g^r and u2 = h^r.


def _cp_respond(params: GroupParams, w: int, c: int, r: int) -> int:
    return (w + c * r) % params.q


def _cp_verify(params: GroupParams, h: int, u1: int, u2: int, a: int, b: int, c: int, z: int) -> bool:
    g = params.g
    return (
        params.exp(g, z) == params.mul(a, params.exp(u1, c))
        and params.exp(h, z) == params.mul(b, params.exp(u2, c))
    )


def simulate_or_branch(params: GroupParams, h: int, u1: int, u2: int, challenge: int, rng):
    """Accepting transcript (a, b, z) for the branch without any witness."""
    z = params.rand_scalar(rng)
    a = params.mul(params.exp(params.g, z), params.inv(params.exp(u1, challenge)))
    b = params.mul(params.exp(h, z), params.inv(params.exp(u2, challenge)))
    return a, b, z


# ---------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class DelegationStatement:
    pk: int
    anon_set: tuple[int, ...]
    ct_vec: tuple[Ciphertext, ...]
    t: int
    token_root: bytes
    token_proof: MerkleProof
    voter_index: int

    def to_bytes(self) -> bytes:
        return (
            enc_elem(self.pk)
            + enc_vec([enc_u32(i) for i in self.anon_set])
            + enc_vec([c.to_bytes() for c in self.ct_vec])
            + enc_u64(self.t)
            + self.token_root
            + enc_bytes(self.token_proof.to_bytes())
            + enc_u32(self.voter_index)
        )


@dataclass(frozen=True)
class DelegationWitness:
    target_pos: int
    r_vec: tuple[int, ...]


@dataclass(frozen=True)
class VoteStatement:
    pk: int
    power_ct: Ciphertext
    vote_vec: tuple[Ciphertext, ...]
    delegate_index: int
    snapshot_root: bytes
    snapshot_proof: MerkleProof

    def to_bytes(self) -> bytes:
        return (
            enc_elem(self.pk)
            + self.power_ct.to_bytes()
            + enc_vec([c.to_bytes() for c in self.vote_vec])
            + enc_u32(self.delegate_index)
            + self.snapshot_root
            + enc_bytes(self.snapshot_proof.to_bytes())
        )


@dataclass(frozen=True)
class VoteWitness:
    choice: int
    r_vec: tuple[int, ...]


@dataclass(frozen=True)
class DecryptionStatement:
    pk: int
    tally_cts: tuple[Ciphertext, ...]
    plain_counts: tuple[int, ...]

    def to_bytes(self) -> bytes:
        return (
            enc_elem(self.pk)
            + enc_vec([c.to_bytes() for c in self.tally_cts])
            + enc_vec([enc_u64(d) for d in self.plain_counts])
        )


# ---------------------------------------------------------------------------
# Proof objects and wire format


@dataclass(frozen=True)
class OrEntry:
    """One two-branch disjunction: commitments, branch-0 challenge, responses."""

    a0: int
    b0: int
    a1: int
    b1: int
    c0: int
    z0: int
    z1: int

    def to_bytes(self) -> bytes:
        return b"".join(
            [enc_elem(self.a0), enc_elem(self.b0), enc_elem(self.a1), enc_elem(self.b1),
             enc_scalar(self.c0), enc_scalar(self.z0), enc_scalar(self.z1)]
        )

    @classmethod
    def from_bytes(cls, b: bytes, params: GroupParams) -> "OrEntry":
        if len(b) != 224:
            raise ValueError("malformed disjunction entry")
        return cls(
            a0=params.elem_from_bytes(b[0:32]),
            b0=params.elem_from_bytes(b[32:64]),
            a1=params.elem_from_bytes(b[64:96]),
            b1=params.elem_from_bytes(b[96:128]),
            c0=int.from_bytes(b[128:160], "big"),
            z0=int.from_bytes(b[160:192], "big"),
            z1=int.from_bytes(b[192:224], "big"),
        )

    def commitment_bytes(self) -> bytes:
        return enc_elem(self.a0) + enc_elem(self.b0) + enc_elem(self.a1) + enc_elem(self.b1)


@dataclass(frozen=True)
class VectorProof:
    """Proof for the delegation and private-vote relations."""

    relation_tag: str  # "del" or "vote"
    entries: tuple[OrEntry, ...]
    sum_a: int
    sum_b: int
    sum_z: int

    _TAGS = {"del": 1, "vote": 2}

    def to_bytes(self) -> bytes:
        tag = bytes([self._TAGS[self.relation_tag]])
        return (
            tag
            + enc_vec([e.to_bytes() for e in self.entries])
            + enc_elem(self.sum_a)
            + enc_elem(self.sum_b)
            + enc_scalar(self.sum_z)
        )

    @classmethod
    def from_bytes(cls, b: bytes, params: GroupParams) -> "VectorProof":
        tags = {v: k for k, v in cls._TAGS.items()}
        if not b or b[0] not in tags:
            raise ValueError("unknown relation tag")
        relation_tag = tags[b[0]]
        count = int.from_bytes(b[1:5], "big")
        off = 5
        entries = []
        for _ in range(count):
            entries.append(OrEntry.from_bytes(b[off : off + 224], params))
            off += 224
        if len(b) != off + 96:
            raise ValueError("malformed proof")
        return cls(
            relation_tag=relation_tag,
            entries=tuple(entries),
            sum_a=params.elem_from_bytes(b[off : off + 32]),
            sum_b=params.elem_from_bytes(b[off + 32 : off + 64]),
            sum_z=int.from_bytes(b[off + 64 : off + 96], "big"),
        )

    def commitment_bytes(self) -> bytes:
        return (
            b"".join(e.commitment_bytes() for e in self.entries)
            + enc_elem(self.sum_a)
            + enc_elem(self.sum_b)
        )


@dataclass(frozen=True)
class DecryptionProof:
    """Equality-of-dlogs proof; carries the decrypted counts in its transcript."""

    counts: tuple[int, ...]
    a: int
    b_vec: tuple[int, ...]
    z: int

    def to_bytes(self) -> bytes:
        return (
            b"\x03"
            + enc_vec([enc_u64(d) for d in self.counts])
            + enc_elem(self.a)
            + enc_vec([enc_elem(x) for x in self.b_vec])
            + enc_scalar(self.z)
        )

    @classmethod
    def from_bytes(cls, b: bytes, params: GroupParams) -> "DecryptionProof":
        if not b or b[0] != 3:
            raise ValueError("unknown relation tag")
        n = int.from_bytes(b[1:5], "big")
        off = 5
        counts = []
        for _ in range(n):
            counts.append(int.from_bytes(b[off : off + 8], "big"))
            off += 8
        a = params.elem_from_bytes(b[off : off + 32])
        off += 32
        m = int.from_bytes(b[off : off + 4], "big")
        off += 4
        b_vec = []
        for _ in range(m):
            b_vec.append(params.elem_from_bytes(b[off : off + 32]))
            off += 32
        if len(b) != off + 32:
            raise ValueError("malformed proof")
        z = int.from_bytes(b[off : off + 32], "big")
        return cls(counts=tuple(counts), a=a, b_vec=tuple(b_vec), z=z)


# ---------------------------------------------------------------------------
# Delegation relation


def _del_branch_targets(params: GroupParams, ct: Ciphertext, t: int):
    """(u1, u2) pairs for the two branches: encrypts 0, encrypts t."""
    zero = (ct.c1, ct.c2)
    shifted = (ct.c1, params.mul(ct.c2, params.inv(params.exp(params.g, t))))
    return zero, shifted


def prove_delegation(params: GroupParams, stmt: DelegationStatement, wit: DelegationWitness, rng) -> VectorProof:
    n = len(stmt.ct_vec)
    if len(stmt.anon_set) != n or len(wit.r_vec) != n or not 0 <= wit.target_pos < n:
        raise WitnessMismatch("shape mismatch")
    if stmt.t < 1:
        raise WitnessMismatch("zero-power delegation")
    for k in range(n):
        want = stmt.t if k == wit.target_pos else 0
        if stmt.ct_vec[k] != encrypt(params, stmt.pk, want, wit.r_vec[k]):
            raise WitnessMismatch(f"ciphertext {k} does not match witness")
    return _prove_vector(params, "del", stmt.to_bytes(), stmt.pk,
                         [_del_branch_targets(params, ct, stmt.t) for ct in stmt.ct_vec],
                         real_branch_at=wit.target_pos, r_vec=wit.r_vec, rng=rng)


def _del_sum_targets(params: GroupParams, stmt: DelegationStatement):
    agg = stmt.ct_vec[0]
    for ct in stmt.ct_vec[1:]:
        agg = ct_add(params, agg, ct)
    return (agg.c1, params.mul(agg.c2, params.inv(params.exp(params.g, stmt.t))))


def verify_delegation(params: GroupParams, stmt: DelegationStatement, proof: VectorProof) -> bool:
    n = len(stmt.ct_vec)
    if proof.relation_tag != "del" or len(proof.entries) != n or len(stmt.anon_set) != n:
        return False
    if n == 0 or stmt.t < 1 or len(set(stmt.anon_set)) != n:
        return False
    if not mt_verify(token_leaf(stmt.voter_index, stmt.t), stmt.voter_index,
                     stmt.token_proof, stmt.token_root):
        return False
    branches = [_del_branch_targets(params, ct, stmt.t) for ct in stmt.ct_vec]
    return _verify_vector(params, "del", stmt.to_bytes(), stmt.pk, branches,
                          _del_sum_targets(params, stmt), proof)


# ---------------------------------------------------------------------------
# Private-vote relation


def _vote_branch_targets(params: GroupParams, ct: Ciphertext, power: Ciphertext):
    zero = (ct.c1, ct.c2)
    diff = ct_add(params, ct, ct_neg(params, power))
    return zero, (diff.c1, diff.c2)


def _vote_sum_targets(params: GroupParams, stmt: VoteStatement):
    agg = stmt.vote_vec[0]
    for ct in stmt.vote_vec[1:]:
        agg = ct_add(params, agg, ct)
    diff = ct_add(params, agg, ct_neg(params, stmt.power_ct))
    return (diff.c1, diff.c2)


def prove_vote(params: GroupParams, stmt: VoteStatement, wit: VoteWitness, rng) -> VectorProof:
    n = len(stmt.vote_vec)
    if len(wit.r_vec) != n or not 0 <= wit.choice < n:
        raise WitnessMismatch("shape mismatch")
    for j in range(n):
        if j == wit.choice:
            want = rerandomize(params, stmt.pk, stmt.power_ct, wit.r_vec[j])
        else:
            want = encrypt(params, stmt.pk, 0, wit.r_vec[j])
        if stmt.vote_vec[j] != want:
            raise WitnessMismatch(f"vote entry {j} does not match witness")
    return _prove_vector(params, "vote", stmt.to_bytes(), stmt.pk,
                         [_vote_branch_targets(params, ct, stmt.power_ct) for ct in stmt.vote_vec],
                         real_branch_at=wit.choice, r_vec=wit.r_vec, rng=rng)


def verify_vote(params: GroupParams, stmt: VoteStatement, proof: VectorProof) -> bool:
    n = len(stmt.vote_vec)
    if proof.relation_tag != "vote" or len(proof.entries) != n or n == 0:
        return False
    if not mt_verify(power_leaf(stmt.delegate_index, stmt.power_ct), stmt.delegate_index,
                     stmt.snapshot_proof, stmt.snapshot_root):
        return False
    branches = [_vote_branch_targets(params, ct, stmt.power_ct) for ct in stmt.vote_vec]
    return _verify_vector(params, "vote", stmt.to_bytes(), stmt.pk, branches,
                          _vote_sum_targets(params, stmt), proof)


# ---------------------------------------------------------------------------
# Shared disjunction-vector machinery


def _prove_vector(params, relation_tag, stmt_bytes, pk, branches, real_branch_at, r_vec, rng):
    """branches[k] = ((u1,u2) for 'zero', (u1,u2) for 'target').

    Position real_branch_at proves the target branch honestly; all others
    prove the zero branch; the opposite branch is simulated.
    """
    n = len(branches)
    pending = []  # (real_is_one, w, c_sim, sim transcript pieces)
    comm = []
    for k in range(n):
        zero_t, tgt_t = branches[k]
        real_is_one = k == real_branch_at
        w = params.rand_scalar(rng)
        c_sim = params.rand_scalar(rng)
        if real_is_one:
            a1, b1 = params.exp(params.g, w), params.exp(pk, w)
            a0, b0, z0 = simulate_or_branch(params, pk, zero_t[0], zero_t[1], c_sim, rng)
            pending.append((True, w, c_sim, z0, None))
        else:
            a0, b0 = params.exp(params.g, w), params.exp(pk, w)
            a1, b1, z1 = simulate_or_branch(params, pk, tgt_t[0], tgt_t[1], c_sim, rng)
            pending.append((False, w, c_sim, None, z1))
        comm.append((a0, b0, a1, b1))
    w_sum = params.rand_scalar(rng)
    sum_a, sum_b = params.exp(params.g, w_sum), params.exp(pk, w_sum)

    comm_bytes = b"".join(
        enc_elem(a0) + enc_elem(b0) + enc_elem(a1) + enc_elem(b1) for a0, b0, a1, b1 in comm
    ) + enc_elem(sum_a) + enc_elem(sum_b)
    c = fs_challenge(params, relation_tag, stmt_bytes, comm_bytes)

    entries = []
    for k in range(n):
        real_is_one, w, c_sim, z0_sim, z1_sim = pending[k]
        a0, b0, a1, b1 = comm[k]
        c_real = (c - c_sim) % params.q
        z_real = _cp_respond(params, w, c_real, r_vec[k])
        if real_is_one:
            entries.append(OrEntry(a0, b0, a1, b1, c0=c_sim, z0=z0_sim, z1=z_real))
        else:
            entries.append(OrEntry(a0, b0, a1, b1, c0=c_real, z0=z_real, z1=z1_sim))
    r_sum = sum(r_vec) % params.q
    sum_z = _cp_respond(params, w_sum, c, r_sum)
    return VectorProof(relation_tag=relation_tag, entries=tuple(entries),
                       sum_a=sum_a, sum_b=sum_b, sum_z=sum_z)


def _verify_vector(params, relation_tag, stmt_bytes, pk, branches, sum_targets, proof) -> bool:
    c = fs_challenge(params, relation_tag, stmt_bytes, proof.commitment_bytes())
    for entry, (zero_t, tgt_t) in zip(proof.entries, branches):
        c1ch = (c - entry.c0) % params.q
        if not _cp_verify(params, pk, zero_t[0], zero_t[1], entry.a0, entry.b0, entry.c0, entry.z0):
            return False
        if not _cp_verify(params, pk, tgt_t[0], tgt_t[1], entry.a1, entry.b1, c1ch, entry.z1):
            return False
    return _cp_verify(params, pk, sum_targets[0], sum_targets[1],
                      proof.sum_a, proof.sum_b, c, proof.sum_z)


# ---------------------------------------------------------------------------
# Decryption relation


def prove_decryption(params: GroupParams, stmt: DecryptionStatement, sk: int, rng) -> DecryptionProof:
    if len(stmt.tally_cts) != len(stmt.plain_counts):
        raise WitnessMismatch("shape mismatch")
    if params.exp(params.g, sk) != stmt.pk:
        raise WitnessMismatch("secret key does not match public key")
    for ct, d in zip(stmt.tally_cts, stmt.plain_counts):
        lhs = params.mul(ct.c2, params.inv(params.exp(params.g, d)))
        if lhs != params.exp(ct.c1, sk):
            raise WitnessMismatch("claimed count does not decrypt")
    w = params.rand_scalar(rng)
    a = params.exp(params.g, w)
    b_vec = tuple(params.exp(ct.c1, w) for ct in stmt.tally_cts)
    comm = enc_elem(a) + b"".join(enc_elem(b) for b in b_vec)
    c = fs_challenge(params, "dec", stmt.to_bytes(), comm)
    z = (w + c * sk) % params.q
    return DecryptionProof(counts=tuple(stmt.plain_counts), a=a, b_vec=b_vec, z=z)


def verify_decryption(params: GroupParams, stmt: DecryptionStatement, proof: DecryptionProof) -> bool:
    if len(proof.b_vec) != len(stmt.tally_cts) or proof.counts != tuple(stmt.plain_counts):
        return False
    comm = enc_elem(proof.a) + b"".join(enc_elem(b) for b in proof.b_vec)
    c = fs_challenge(params, "dec", stmt.to_bytes(), comm)
    if params.exp(params.g, proof.z) != params.mul(proof.a, params.exp(stmt.pk, c)):
        return False
    for ct, d, b in zip(stmt.tally_cts, stmt.plain_counts, proof.b_vec):
        u2 = params.mul(ct.c2, params.inv(params.exp(params.g, d)))
        if params.exp(ct.c1, proof.z) != params.mul(b, params.exp(u2, c)):
            return False
    return True
