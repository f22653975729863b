"""The trusted authority.

Generates the key material, publishes the signed token root (and refreshes it
after transfers), and produces the verifiable tally decryption.  Raw counts
stay inside the authority and the decryption-proof transcript; only basis-point
percentages are published.
"""

import random
from dataclasses import dataclass

from .elgamal import Ciphertext, EncKeyPair, decrypt, enc_keygen
from .group import DEFAULT_GROUP, GroupParams
from .merkle import MerkleTree
from .nizk import DecryptionProof, DecryptionStatement, prove_decryption
from .params import basis_points
from .signing import SigKeyPair, sig_keygen, sig_sign
from .wire import token_leaf


class TokenOutOfBound(ValueError):
    pass


class InconsistentEvents(ValueError):
    pass


@dataclass(frozen=True)
class SetupBundle:
    """Everything the board's setup operation needs, authority secrets excluded."""

    pk_enc: int
    vk_sig: bytes
    token_list: list[int]
    token_root: bytes
    root_sig: bytes


@dataclass(frozen=True)
class TallyResult:
    eid: str
    percentages: list[int]
    no_votes: bool


class Authority:
    def __init__(self, group: GroupParams = DEFAULT_GROUP, rng: random.Random | None = None):
        self.group = group
        self.rng = rng if rng is not None else random.SystemRandom()
        self.enc_keys: EncKeyPair | None = None
        self.sig_keys: SigKeyPair | None = None
        self.token_list: list[int] = []
        self.max_total = 1
        self.current_root: bytes | None = None

    def setup(self, token_list: list[int]) -> SetupBundle:
        if any(t < 0 for t in token_list):
            raise TokenOutOfBound(min(token_list))
        self.enc_keys = enc_keygen(self.group, self.rng)
        self.sig_keys = sig_keygen(self.rng)
        self.token_list = list(token_list)
        self.max_total = max(1, sum(token_list))
        self.current_root = self._root()
        return SetupBundle(
            pk_enc=self.enc_keys.pk,
            vk_sig=self.sig_keys.vk,
            token_list=list(token_list),
            token_root=self.current_root,
            root_sig=sig_sign(self.sig_keys.sk, self.current_root),
        )

    def _root(self) -> bytes:
        leaves = [token_leaf(i, t) for i, t in enumerate(self.token_list)]
        return MerkleTree(leaves).root

    def refresh_root(self, transfer_events: list[dict]) -> tuple[bytes, bytes]:
        """Fold transfer events into the token list, sign the new root."""
        for ev in transfer_events:
            frm, to, amount = ev["from"], ev["to"], ev["amount"]
            if not (0 <= frm < len(self.token_list) and 0 <= to < len(self.token_list)):
                raise InconsistentEvents(ev)
            if amount < 0 or self.token_list[frm] < amount:
                raise InconsistentEvents(ev)
            self.token_list[frm] -= amount
            self.token_list[to] += amount
        self.current_root = self._root()
        return self.current_root, sig_sign(self.sig_keys.sk, self.current_root)

    def tally_decrypt(self, eid: str, tallies: list[Ciphertext]) -> tuple[TallyResult, DecryptionProof]:
        sk = self.enc_keys.sk
        counts = [decrypt(self.group, sk, ct, self.max_total) for ct in tallies]
        percentages, no_votes = basis_points(counts)
        stmt = DecryptionStatement(
            pk=self.enc_keys.pk, tally_cts=tuple(tallies), plain_counts=tuple(counts)
        )
        proof = prove_decryption(self.group, stmt, sk, self.rng)
        return TallyResult(eid=eid, percentages=percentages, no_votes=no_votes), proof
