"""The bulletin-board state machine.

An executable rendering of the on-chain contract: lock-aware token ledger,
encrypted delegate powers, delegation identifiers, election lifecycle, and an
append-only event log.  All mutating operations either succeed and log the
specified payload, or reject with a typed error plus a Rejected log entry and
leave the (non-log) state untouched.  Replaying the logged input commands
from genesis reproduces the state bit-exactly.
"""

import json
from dataclasses import dataclass, field

from .elgamal import Ciphertext, ct_add, ct_neg, encrypt
from .group import DEFAULT_GROUP, GroupParams
from .hashing import hash_tagged
from .merkle import MerkleProof, MerkleTree, mt_verify
from .nizk import (
    DecryptionProof,
    DecryptionStatement,
    DelegationStatement,
    VectorProof,
    VoteStatement,
    verify_decryption,
    verify_delegation,
    verify_vote,
)
from .params import SystemParams, basis_points
from .signing import sig_verify
from .wire import delegation_id, power_leaf, token_leaf


class BoardError(Exception):
    @property
    def reason(self) -> str:
        return type(self).__name__


class NotInitialized(BoardError): ...
class AlreadyInitialized(BoardError): ...
class BadSignature(BoardError): ...
class LockedTokens(BoardError): ...
class NotLocked(BoardError): ...
class NotEligible(BoardError): ...
class InvalidProof(BoardError): ...
class StaleRoot(BoardError): ...
class NoSuchDelegation(BoardError): ...
class DuplicateElection(BoardError): ...
class NoSuchElection(BoardError): ...
class NotCreator(BoardError): ...
class WrongPhase(BoardError): ...
class ElectionNotStarted(BoardError): ...
class NotActive(BoardError): ...
class AlreadyVoted(BoardError): ...
class BadOption(BoardError): ...
class BadSnapshotProof(BoardError): ...
class InvalidDecryptionProof(BoardError): ...
class TokensLocked(BoardError): ...
class InsufficientBalance(BoardError): ...
class UnknownParty(BoardError): ...


@dataclass
class Event:
    seq: int
    kind: str
    payload: dict

    def to_record(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, "payload": self.payload}


@dataclass
class ElectionState:
    eid: str
    desc: str
    creator: int
    tallies: list[Ciphertext]
    voted: dict[int, int] = field(default_factory=dict)
    snapshot_root: bytes | None = None
    snapshot_powers: dict[int, Ciphertext] | None = None
    phase: str = "Created"  # Created | Started | Tallied
    result: list[int] | None = None
    no_votes: bool = False


class Board:
    """Single-writer contract state; callers serialize mutations externally."""

    def __init__(self, group: GroupParams = DEFAULT_GROUP):
        self.group = group
        self.initialized = False
        self.params: SystemParams | None = None
        self.pk_enc: int | None = None
        self.vk_sig: bytes | None = None
        self.balances: dict[int, int] = {}
        self.locks: dict[int, int] = {}
        self.token_root: bytes | None = None
        self.root_sig: bytes | None = None
        self.stale_root = False
        self.delegate_powers: dict[int, Ciphertext] = {}
        self.delegation_ids: dict[int, bytes] = {}
        self.active: dict[int, int] = {}
        self.elections: dict[str, ElectionState] = {}
        self.event_log: list[Event] = []

    # -- logging ------------------------------------------------------------

    def _log(self, kind: str, payload: dict) -> Event:
        ev = Event(seq=len(self.event_log), kind=kind, payload=payload)
        self.event_log.append(ev)
        return ev

    def _reject(self, op: str, err: BoardError, **ctx):
        payload = {"op": op, "reason": err.reason, **ctx}
        kind = "TransferLocked" if isinstance(err, TokensLocked) else "Rejected"
        self._log(kind, payload)
        raise err

    def _require_init(self, op: str):
        if not self.initialized:
            self._reject(op, NotInitialized())

    @property
    def num_parties(self) -> int:
        return len(self.balances)

    # -- merkle helpers -----------------------------------------------------

    def token_tree(self) -> MerkleTree:
        return MerkleTree([token_leaf(i, self.balances[i]) for i in range(self.num_parties)])

    def power_tree(self) -> MerkleTree:
        return MerkleTree([power_leaf(i, self.delegate_powers[i]) for i in range(self.num_parties)])

    # -- operations ---------------------------------------------------------

    def setup(self, pk_enc: int, vk_sig: bytes, token_list: list[int],
              token_root: bytes, sig: bytes, num_options: int = 3) -> Event:
        if self.initialized:
            self._reject("setup", AlreadyInitialized())
        if not sig_verify(vk_sig, token_root, sig):
            self._reject("setup", BadSignature())
        self.params = SystemParams(max_total=max(1, sum(token_list)), num_options=num_options)
        self.pk_enc = pk_enc
        self.vk_sig = vk_sig
        self.balances = {i: t for i, t in enumerate(token_list)}
        self.locks = {i: 0 for i in range(len(token_list))}
        self.token_root = token_root
        self.root_sig = sig
        zero = encrypt(self.group, pk_enc, 0, 0)
        self.delegate_powers = {i: zero for i in range(len(token_list))}
        self.delegation_ids = {i: b"" for i in range(len(token_list))}
        self.active = {i: 0 for i in range(len(token_list))}
        self.initialized = True
        return self._log("Setup", {
            "tokens": token_list,
            "root": token_root.hex(),
            "pk_enc": hex(pk_enc),
            "vk_sig": vk_sig.hex(),
            "num_options": num_options,
        })

    def register(self, p: int) -> Event:
        self._require_init("register")
        if p not in self.balances:
            self._reject("register", UnknownParty(), party=p)
        if not (self.active[p] == 0 and self.locks[p] == 0):
            self._reject("register", NotEligible(), party=p)
        self.locks[p] = 1
        self.active[p] = 1
        self.delegate_powers[p] = encrypt(self.group, self.pk_enc, self.balances[p], 0)
        return self._log("Registered", {
            "party": p, "lock": 1, "active": 1,
            "power_ct": self.delegate_powers[p].to_bytes().hex(),
        })

    def unregister(self, p: int) -> Event:
        self._require_init("unregister")
        if p not in self.balances:
            self._reject("unregister", UnknownParty(), party=p)
        if not (self.active[p] == 1 and self.locks[p] == 1):
            self._reject("unregister", NotEligible(), party=p)
        self.locks[p] = 0
        self.active[p] = 0
        neg = encrypt(self.group, self.pk_enc, -self.balances[p], 0)
        self.delegate_powers[p] = ct_add(self.group, self.delegate_powers[p], neg)
        return self._log("Unregistered", {
            "party": p, "lock": 0, "active": 0,
            "power_ct": self.delegate_powers[p].to_bytes().hex(),
        })

    def delegate(self, p: int, anon_set: list[int], ct_vec: list[Ciphertext],
                 proof: VectorProof, token_proof: MerkleProof) -> Event:
        self._require_init("delegate")
        if p not in self.balances:
            self._reject("delegate", UnknownParty(), party=p)
        if self.locks[p] != 0:
            self._reject("delegate", LockedTokens(), party=p)
        if self.stale_root:
            self._reject("delegate", StaleRoot(), party=p)
        if any(i not in self.balances for i in anon_set):
            self._reject("delegate", UnknownParty(), party=p)
        stmt = DelegationStatement(
            pk=self.pk_enc, anon_set=tuple(anon_set), ct_vec=tuple(ct_vec),
            t=self.balances[p], token_root=self.token_root,
            token_proof=token_proof, voter_index=p,
        )
        if not verify_delegation(self.group, stmt, proof):
            self._reject("delegate", InvalidProof(), party=p)
        self.locks[p] = 1
        for k, idx in enumerate(anon_set):
            self.delegate_powers[idx] = ct_add(self.group, self.delegate_powers[idx], ct_vec[k])
        did = delegation_id(anon_set, ct_vec)
        self.delegation_ids[p] = did
        return self._log("Delegated", {
            "party": p, "lock": 1,
            "updated": {str(i): self.delegate_powers[i].to_bytes().hex() for i in anon_set},
            "did": did.hex(),
        })

    def undelegate(self, p: int, anon_set: list[int], ct_vec: list[Ciphertext]) -> Event:
        self._require_init("undelegate")
        if p not in self.balances:
            self._reject("undelegate", UnknownParty(), party=p)
        if self.locks[p] != 1:
            self._reject("undelegate", NotLocked(), party=p)
        stored = self.delegation_ids.get(p, b"")
        if not stored or stored != delegation_id(anon_set, ct_vec):
            self._reject("undelegate", NoSuchDelegation(), party=p)
        self.locks[p] = 0
        for k, idx in enumerate(anon_set):
            self.delegate_powers[idx] = ct_add(
                self.group, self.delegate_powers[idx], ct_neg(self.group, ct_vec[k])
            )
        self.delegation_ids[p] = b""
        return self._log("Undelegated", {
            "party": p, "lock": 0,
            "updated": {str(i): self.delegate_powers[i].to_bytes().hex() for i in anon_set},
        })

    def election_setup(self, p: int, eid: str, desc: str) -> Event:
        self._require_init("election_setup")
        if eid in self.elections:
            self._reject("election_setup", DuplicateElection(), eid=eid)
        zero = encrypt(self.group, self.pk_enc, 0, 0)
        self.elections[eid] = ElectionState(
            eid=eid, desc=desc, creator=p,
            tallies=[zero] * self.params.num_options,
        )
        return self._log("ElectionCreated", {
            "eid": eid, "desc": desc, "creator": p,
            "tallies": [zero.to_bytes().hex()] * self.params.num_options,
        })

    def election_start(self, p: int, eid: str) -> Event:
        self._require_init("election_start")
        el = self.elections.get(eid)
        if el is None:
            self._reject("election_start", NoSuchElection(), eid=eid)
        if el.creator != p:
            self._reject("election_start", NotCreator(), eid=eid, party=p)
        if el.phase != "Created":
            self._reject("election_start", WrongPhase(), eid=eid)
        el.snapshot_powers = dict(self.delegate_powers)
        el.snapshot_root = self.power_tree().root
        el.phase = "Started"
        return self._log("ElectionStarted", {"eid": eid, "snapshot_root": el.snapshot_root.hex()})

    def _vote_guards(self, op: str, eid: str, p: int) -> ElectionState:
        el = self.elections.get(eid)
        if el is None:
            self._reject(op, NoSuchElection(), eid=eid)
        if el.phase != "Started" or el.snapshot_root is None:
            self._reject(op, ElectionNotStarted(), eid=eid, party=p)
        if p not in self.balances:
            self._reject(op, UnknownParty(), party=p)
        if self.active[p] != 1:
            self._reject(op, NotActive(), eid=eid, party=p)
        if el.voted.get(p, 0):
            self._reject(op, AlreadyVoted(), eid=eid, party=p)
        return el

    def vote_public(self, eid: str, p: int, v: int,
                    snapshot_proof: MerkleProof, power_ct: Ciphertext) -> Event:
        self._require_init("vote_public")
        el = self._vote_guards("vote_public", eid, p)
        if not 0 <= v < self.params.num_options:
            self._reject("vote_public", BadOption(), eid=eid, party=p)
        if not mt_verify(power_leaf(p, power_ct), p, snapshot_proof, el.snapshot_root):
            self._reject("vote_public", BadSnapshotProof(), eid=eid, party=p)
        el.voted[p] = 1
        el.tallies[v] = ct_add(self.group, el.tallies[v], power_ct)
        return self._log("Voted", {
            "eid": eid, "party": p, "choice": v,
            "tally_ct": el.tallies[v].to_bytes().hex(),
        })

    def vote_private(self, eid: str, p: int, vote_vec: list[Ciphertext],
                     proof: VectorProof, snapshot_proof: MerkleProof,
                     power_ct: Ciphertext) -> Event:
        self._require_init("vote_private")
        el = self._vote_guards("vote_private", eid, p)
        if len(vote_vec) != self.params.num_options:
            self._reject("vote_private", InvalidProof(), eid=eid, party=p)
        stmt = VoteStatement(
            pk=self.pk_enc, power_ct=power_ct, vote_vec=tuple(vote_vec),
            delegate_index=p, snapshot_root=el.snapshot_root,
            snapshot_proof=snapshot_proof,
        )
        if not verify_vote(self.group, stmt, proof):
            self._reject("vote_private", InvalidProof(), eid=eid, party=p)
        el.voted[p] = 1
        for j in range(self.params.num_options):
            el.tallies[j] = ct_add(self.group, el.tallies[j], vote_vec[j])
        # The option never appears in a private-vote payload.
        return self._log("Voted", {
            "eid": eid, "party": p,
            "tallies": [ct.to_bytes().hex() for ct in el.tallies],
        })

    def tally(self, eid: str, percentages: list[int], dec_proof: DecryptionProof) -> Event:
        self._require_init("tally")
        el = self.elections.get(eid)
        if el is None:
            self._reject("tally", NoSuchElection(), eid=eid)
        if el.phase != "Started":
            self._reject("tally", WrongPhase(), eid=eid)
        stmt = DecryptionStatement(
            pk=self.pk_enc, tally_cts=tuple(el.tallies),
            plain_counts=tuple(dec_proof.counts),
        )
        if not verify_decryption(self.group, stmt, dec_proof):
            self._reject("tally", InvalidDecryptionProof(), eid=eid)
        expected, no_votes = basis_points(list(dec_proof.counts))
        if list(percentages) != expected:
            self._reject("tally", InvalidDecryptionProof(), eid=eid)
        el.result = list(percentages)
        el.no_votes = no_votes
        el.phase = "Tallied"
        return self._log("Tallied", {
            "eid": eid, "percentages": list(percentages), "no_votes": no_votes,
            "dec_proof": dec_proof.to_bytes().hex(),
        })

    def transfer(self, frm: int, to: int, amount: int) -> Event:
        self._require_init("transfer")
        if frm not in self.balances or to not in self.balances:
            self._reject("transfer", UnknownParty())
        if self.locks[frm] != 0 or self.locks[to] != 0:
            self._reject("transfer", TokensLocked(), **{"from": frm, "to": to})
        if amount < 0 or self.balances[frm] < amount:
            self._reject("transfer", InsufficientBalance(), **{"from": frm, "to": to})
        self.balances[frm] -= amount
        self.balances[to] += amount
        self.stale_root = True
        return self._log("Transferred", {"from": frm, "to": to, "amount": amount})

    def refresh_root(self, new_root: bytes, sig: bytes) -> Event:
        self._require_init("refresh_root")
        if not sig_verify(self.vk_sig, new_root, sig):
            self._reject("refresh_root", BadSignature())
        if new_root != self.token_tree().root:
            self._reject("refresh_root", BadSignature())
        self.token_root = new_root
        self.root_sig = sig
        self.stale_root = False
        return self._log("RootRefreshed", {"root": new_root.hex()})

    # -- state identity and replay -----------------------------------------

    def state_hash(self) -> bytes:
        """Digest of the full public state, excluding the event log."""
        def el_dump(el: ElectionState):
            return {
                "eid": el.eid, "desc": el.desc, "creator": el.creator,
                "tallies": [c.to_bytes().hex() for c in el.tallies],
                "voted": {str(k): v for k, v in sorted(el.voted.items())},
                "snapshot_root": el.snapshot_root.hex() if el.snapshot_root else "",
                "phase": el.phase, "result": el.result, "no_votes": el.no_votes,
            }

        doc = {
            "initialized": self.initialized,
            "pk_enc": hex(self.pk_enc) if self.pk_enc else "",
            "vk_sig": self.vk_sig.hex() if self.vk_sig else "",
            "balances": {str(k): v for k, v in sorted(self.balances.items())},
            "locks": {str(k): v for k, v in sorted(self.locks.items())},
            "token_root": self.token_root.hex() if self.token_root else "",
            "stale_root": self.stale_root,
            "powers": {str(k): v.to_bytes().hex() for k, v in sorted(self.delegate_powers.items())},
            "dids": {str(k): v.hex() for k, v in sorted(self.delegation_ids.items())},
            "active": {str(k): v for k, v in sorted(self.active.items())},
            "elections": {eid: el_dump(el) for eid, el in sorted(self.elections.items())},
        }
        return hash_tagged("state", json.dumps(doc, sort_keys=True).encode())

    def check_invariants(self):
        """No party may be unlocked and active; delegation ids imply delegator state."""
        for p in self.balances:
            assert not (self.locks[p] == 0 and self.active[p] == 1), f"party {p} unlocked+active"
            if self.delegation_ids.get(p):
                assert self.locks[p] == 1 and self.active[p] == 0, f"party {p} bad did state"

    # -- command dispatch ---------------------------------------------------

    def apply_command(self, cmd: dict) -> Event:
        """Apply one self-describing command record; used by log replay and API."""
        op = cmd["op"]
        g = self.group
        if op == "setup":
            return self.setup(
                pk_enc=int(cmd["pk_enc"], 16), vk_sig=bytes.fromhex(cmd["vk_sig"]),
                token_list=list(cmd["tokens"]), token_root=bytes.fromhex(cmd["root"]),
                sig=bytes.fromhex(cmd["sig"]), num_options=cmd.get("num_options", 3),
            )
        if op == "register":
            return self.register(cmd["party"])
        if op == "unregister":
            return self.unregister(cmd["party"])
        if op == "delegate":
            return self.delegate(
                cmd["party"], list(cmd["anon_set"]),
                [Ciphertext.from_bytes(bytes.fromhex(h), g) for h in cmd["ct_vec"]],
                VectorProof.from_bytes(bytes.fromhex(cmd["proof"]), g),
                MerkleProof.from_bytes(bytes.fromhex(cmd["token_proof"])),
            )
        if op == "undelegate":
            return self.undelegate(
                cmd["party"], list(cmd["anon_set"]),
                [Ciphertext.from_bytes(bytes.fromhex(h), g) for h in cmd["ct_vec"]],
            )
        if op == "election_setup":
            return self.election_setup(cmd["party"], cmd["eid"], cmd.get("desc", ""))
        if op == "election_start":
            return self.election_start(cmd["party"], cmd["eid"])
        if op == "vote_public":
            return self.vote_public(
                cmd["eid"], cmd["party"], cmd["choice"],
                MerkleProof.from_bytes(bytes.fromhex(cmd["snapshot_proof"])),
                Ciphertext.from_bytes(bytes.fromhex(cmd["power_ct"]), g),
            )
        if op == "vote_private":
            return self.vote_private(
                cmd["eid"], cmd["party"],
                [Ciphertext.from_bytes(bytes.fromhex(h), g) for h in cmd["vote_vec"]],
                VectorProof.from_bytes(bytes.fromhex(cmd["proof"]), g),
                MerkleProof.from_bytes(bytes.fromhex(cmd["snapshot_proof"])),
                Ciphertext.from_bytes(bytes.fromhex(cmd["power_ct"]), g),
            )
        if op == "tally":
            return self.tally(
                cmd["eid"], list(cmd["percentages"]),
                DecryptionProof.from_bytes(bytes.fromhex(cmd["dec_proof"]), g),
            )
        if op == "transfer":
            return self.transfer(cmd["from"], cmd["to"], cmd["amount"])
        if op == "refresh_root":
            return self.refresh_root(bytes.fromhex(cmd["root"]), bytes.fromhex(cmd["sig"]))
        raise ValueError(f"unknown op {op!r}")

    @classmethod
    def replay(cls, commands: list[dict], group: GroupParams = DEFAULT_GROUP) -> "Board":
        """Rebuild the state from genesis; rejected commands re-reject identically."""
        board = cls(group)
        for cmd in commands:
            try:
                board.apply_command(cmd)
            except BoardError:
                pass
        return board
