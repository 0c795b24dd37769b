"""Level-order unary degree sequence (LOUDS) for ordinal trees.

Nodes are numbered ``1..n`` in level order.  The bit string is ``10``
followed by ``1^d 0`` for every node, ``2n + 1`` bits in total.  With
1-based rank/select on those bits:

    degree(v)       = select0(v + 1) - select0(v) - 1
    child(v, i)     = rank1(select0(v) + i)
    parent(v)       = rank0(select1(v))
    child_rank(v,c) = select1(c) - select0(v)
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ContainerError, OutOfRange, RootHasNoParent
from .bitvec import BitVec


class LoudsTree:
    __slots__ = ("bits", "n", "_core")

    def __init__(self, degrees: Sequence[int]):
        """Build from per-node child counts listed in level order."""
        deg = np.asarray(degrees, dtype=np.int64)
        n = int(deg.size)
        if n == 0:
            raise ValueError("a tree needs at least one node")
        if deg.min() < 0 or int(deg.sum()) != n - 1:
            raise ValueError("level-order degrees must be non-negative and sum to n - 1")
        bits = np.zeros(2 * n + 1, dtype=np.uint8)
        bits[0] = 1
        # node v's ones start right after the v-th zero
        zero_pos = 1 + np.arange(n + 1) + np.concatenate([[0], np.cumsum(deg)])
        ones = np.ones(2 * n + 1, dtype=bool)
        ones[zero_pos] = False
        bits[ones] = 1
        self._attach(BitVec(bits))

    @classmethod
    def from_children(cls, children: Sequence[Sequence[int]]) -> "LoudsTree":
        """``children[v]`` (index 0 unused) must list level-order consecutive ids."""
        n = len(children) - 1
        expect = 2
        for v in range(1, n + 1):
            for c in children[v]:
                if c != expect:
                    raise ValueError("children are not numbered in level order")
                expect += 1
        return cls([len(children[v]) for v in range(1, n + 1)])

    def _attach(self, bits: BitVec) -> None:
        self.bits = bits
        self.n = (bits.n - 1) // 2
        self._core = bits.core

    def __len__(self) -> int:
        return self.n

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise OutOfRange(f"node {v} outside 1..{self.n}")

    # 0-based core positions: select0(k) here is the 1-based position minus one
    def _sel0(self, k: int) -> int:
        return self._core.select0(k) + 1

    def degree(self, v: int) -> int:
        self._check(v)
        return self._sel0(v + 1) - self._sel0(v) - 1

    def child(self, v: int, i: int) -> int:
        d = self.degree(v)
        if not 1 <= i <= d:
            raise OutOfRange(f"node {v} has {d} children, asked for child {i}")
        return self._core.rank1(self._sel0(v) + i)

    def children_range(self, v: int) -> tuple[int, int]:
        """``(c1, ck)`` of the children; ``ck = c1 - 1`` for a leaf."""
        self._check(v)
        s = self._sel0(v)
        first = s + 1 - v
        return first, first + self._sel0(v + 1) - s - 2

    def parent(self, v: int) -> int:
        self._check(v)
        if v == 1:
            raise RootHasNoParent("the root has no parent")
        p = self._core.select1(v) + 1
        return p - self._core.rank1(p)

    def child_rank(self, v: int, c: int) -> int:
        if self.parent(c) != v:
            raise OutOfRange(f"{c} is not a child of {v}")
        return self._core.select1(c) + 1 - self._sel0(v)

    def is_leaf(self, v: int) -> bool:
        return self.degree(v) == 0

    @property
    def payload_bits(self) -> int:
        return self.bits.payload_bits

    @property
    def overhead_bits(self) -> int:
        return self.bits.overhead_bits

    def space(self) -> tuple[int, int]:
        return self.payload_bits, self.overhead_bits

    def dump(self, out: bytearray) -> None:
        self.bits.dump(out)

    @classmethod
    def load(cls, buf, pos: int) -> tuple["LoudsTree", int]:
        bits, pos = BitVec.load(buf, pos)
        arr = bits.to_array()
        if arr.size % 2 == 0 or arr.size < 3 or arr[0] != 1 or arr[1] != 0:
            raise ContainerError("malformed LOUDS bit string")
        n = (arr.size - 1) // 2
        if bits.ones != n or arr[-1] != 0:
            raise ContainerError("LOUDS bit string does not describe a tree")
        # node v must be referenced by an earlier list before its own list starts
        ones_at_zero = np.cumsum(arr)[arr == 0]
        if np.any(ones_at_zero[:n] < np.arange(1, n + 1)):
            raise ContainerError("LOUDS bit string is not a level-order tree")
        obj = cls.__new__(cls)
        obj._attach(bits)
        return obj, pos
