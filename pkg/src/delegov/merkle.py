"""Binary Merkle trees with inclusion proofs and incremental updates.

Leaves are raw byte strings, hashed under the "leaf" domain tag; inner nodes
under "node".  The leaf list is padded to a power of two (minimum two slots)
with a designated empty-leaf digest, so every tree has height >= 1.
"""

from dataclasses import dataclass

from .encoding import enc_u32
from .hashing import DIGEST_LEN, hash_tagged

EMPTY_LEAF = hash_tagged("leaf", b"")


class EmptyTree(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


def _height_for(count: int) -> int:
    h = 1
    while (1 << h) < count:
        h += 1
    return h


@dataclass(frozen=True)
class MerkleProof:
    index: int
    siblings: tuple[bytes, ...]

    def to_bytes(self) -> bytes:
        return enc_u32(self.index) + b"".join(self.siblings)

    @classmethod
    def from_bytes(cls, b: bytes) -> "MerkleProof":
        index = int.from_bytes(b[:4], "big")
        rest = b[4:]
        if len(rest) % DIGEST_LEN != 0:
            raise ValueError("malformed proof")
        sibs = tuple(rest[i : i + DIGEST_LEN] for i in range(0, len(rest), DIGEST_LEN))
        return cls(index=index, siblings=sibs)


class MerkleTree:
    """Fully materialized tree over hashed leaves; immutable value semantics."""

    def __init__(self, leaves: list[bytes]):
        if not leaves:
            raise EmptyTree("tree needs at least one leaf")
        self.leaf_count = len(leaves)
        self.height = _height_for(len(leaves))
        padded = 1 << self.height
        digests = [hash_tagged("leaf", l) for l in leaves]
        digests += [EMPTY_LEAF] * (padded - len(digests))
        # levels[0] = leaf digests, levels[height] = [root]
        self.levels = [digests]
        for _ in range(self.height):
            prev = self.levels[-1]
            self.levels.append(
                [hash_tagged("node", prev[i] + prev[i + 1]) for i in range(0, len(prev), 2)]
            )

    @property
    def root(self) -> bytes:
        return self.levels[-1][0]

    def prove(self, index: int) -> MerkleProof:
        if not 0 <= index < self.leaf_count:
            raise IndexOutOfRange(index)
        sibs = []
        i = index
        for level in range(self.height):
            sibs.append(self.levels[level][i ^ 1])
            i >>= 1
        return MerkleProof(index=index, siblings=tuple(sibs))

    def update(self, index: int, new_leaf: bytes) -> "MerkleTree":
        if not 0 <= index < self.leaf_count:
            raise IndexOutOfRange(index)
        clone = MerkleTree.__new__(MerkleTree)
        clone.leaf_count = self.leaf_count
        clone.height = self.height
        clone.levels = [list(level) for level in self.levels]
        clone.levels[0][index] = hash_tagged("leaf", new_leaf)
        i = index
        for level in range(self.height):
            parent = i >> 1
            left = clone.levels[level][parent * 2]
            right = clone.levels[level][parent * 2 + 1]
            clone.levels[level + 1][parent] = hash_tagged("node", left + right)
            i = parent
        return clone


def mt_root(leaves: list[bytes]) -> bytes:
    return MerkleTree(leaves).root


def mt_prove(tree: MerkleTree, index: int) -> MerkleProof:
    return tree.prove(index)


def mt_verify(leaf: bytes, index: int, proof: MerkleProof, root: bytes) -> bool:
    if index != proof.index or index < 0:
        return False
    if index >> len(proof.siblings):
        return False
    cur = hash_tagged("leaf", leaf)
    i = index
    for sib in proof.siblings:
        if i & 1:
            cur = hash_tagged("node", sib + cur)
        else:
            cur = hash_tagged("node", cur + sib)
        i >>= 1
    return cur == root


def mt_update(tree: MerkleTree, index: int, new_leaf: bytes) -> MerkleTree:
    return tree.update(index, new_leaf)
