"""Pointerless wavelet tree over symbols ``1..sigma`` with leaves on two adjacent depths."""
from __future__ import annotations

import math

import numpy as np

from ..errors import ContainerError, NoSuchOccurrence, OutOfRange
from . import _layout as L
from ._backend import WaveletCore
from .bitvec import best_encoding, dump_any, get_u64, load_any, put_u64


class WaveletTree:
    """Sequence over ``1..sigma`` with access, rank and select in ``ceil(lg sigma)`` levels.

    Leaves sit at depth ``ceil(lg sigma)`` or one above it, so a uniform
    sequence costs within 0.09 bits per symbol of ``lg sigma``.  Each level
    is stored as whichever bitvector encoding is smaller, so skewed levels
    get the block-compressed layout.
    """

    __slots__ = ("sigma", "length", "levels", "core", "_counts")

    def __init__(self, symbols, sigma: int):
        seq = np.asarray(symbols, dtype=np.int64)
        if seq.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        if sigma < 1:
            raise ValueError("alphabet size must be at least 1")
        if seq.size and (seq.min() < 1 or seq.max() > sigma):
            raise OutOfRange(f"symbols must lie in 1..{sigma}")
        levels = [best_encoding(bits) for bits in L.wavelet_levels(seq - 1, sigma)]
        self._setup(sigma, int(seq.size), levels)
        self._counts = np.bincount(seq, minlength=sigma + 1)[1:].astype(np.int64)

    def _setup(self, sigma: int, length: int, levels) -> None:
        self.sigma = sigma
        self.length = length
        self.levels = levels
        self.core = WaveletCore([bv.core for bv in levels], length, sigma)

    def __len__(self) -> int:
        return self.length

    def _check_symbol(self, c: int) -> None:
        if not 1 <= c <= self.sigma:
            raise OutOfRange(f"symbol {c} outside 1..{self.sigma}")

    def access(self, i: int) -> int:
        if not 1 <= i <= self.length:
            raise OutOfRange(f"position {i} outside 1..{self.length}")
        return self.core.access(i - 1) + 1

    __getitem__ = access

    def rank(self, c: int, i: int) -> int:
        """Occurrences of ``c`` in positions ``1..i``."""
        self._check_symbol(c)
        if not 0 <= i <= self.length:
            raise OutOfRange(f"rank position {i} outside 0..{self.length}")
        return self.core.rank(c - 1, i)

    def range_count(self, c: int, i: int, j: int) -> int:
        """Occurrences of ``c`` in positions ``i+1..j``."""
        self._check_symbol(c)
        if not 0 <= i <= self.length or not 0 <= j <= self.length:
            raise OutOfRange(f"range {i}..{j} outside 0..{self.length}")
        return self.core.range_count(c - 1, i, j)

    def select(self, c: int, k: int) -> int:
        """Position of the ``k``-th occurrence of ``c``."""
        self._check_symbol(c)
        pos = self.core.select(c - 1, k) if k >= 1 else -1
        if pos < 0:
            raise NoSuchOccurrence(f"symbol {c} has no occurrence number {k}")
        return pos + 1

    def count(self, c: int) -> int:
        self._check_symbol(c)
        return int(self._counts[c - 1])

    def to_list(self) -> list[int]:
        return [self.core.access(i) + 1 for i in range(self.length)]

    def h0_bits(self) -> float:
        """Zeroth-order empirical entropy of the sequence, in total bits."""
        if self.length == 0:
            return 0.0
        lg = math.log2(self.length)
        return sum(int(c) * (lg - math.log2(int(c))) for c in self._counts if c)

    @property
    def payload_bits(self) -> int:
        return sum(bv.payload_bits for bv in self.levels)

    @property
    def overhead_bits(self) -> int:
        return sum(bv.overhead_bits for bv in self.levels)

    def space(self) -> tuple[int, int]:
        return self.payload_bits, self.overhead_bits

    def dump(self, out: bytearray) -> None:
        put_u64(out, self.sigma)
        put_u64(out, self.length)
        for bv in self.levels:
            dump_any(bv, out)

    @classmethod
    def load(cls, buf, pos: int) -> tuple["WaveletTree", int]:
        sigma, pos = get_u64(buf, pos)
        length, pos = get_u64(buf, pos)
        if sigma < 1 or sigma > 1 << 62:
            raise ContainerError(f"bad alphabet size {sigma}")
        nlevels = (sigma - 1).bit_length()
        levels = []
        for _ in range(nlevels):
            bv, pos = load_any(buf, pos)
            levels.append(bv)
        k, split = L.wavelet_shape(sigma)
        full = levels if split == sigma else levels[:-1]
        if any(bv.n != length for bv in full):
            raise ContainerError("wavelet level length mismatch")
        if split < sigma:
            # the last level must cover exactly the positions under prefixes below k
            upper = WaveletCore([bv.core for bv in levels[:-1]], length, 1 << (nlevels - 1))
            deep = sum(1 for i in range(length) if upper.access(i) < k)
            if deep != levels[-1].n:
                raise ContainerError("wavelet last level length mismatch")
        obj = cls.__new__(cls)
        obj._setup(sigma, length, levels)
        seq = np.fromiter((obj.core.access(i) for i in range(length)), dtype=np.int64, count=length)
        if seq.size and seq.max() >= sigma:
            raise ContainerError("wavelet symbol outside the alphabet")
        obj._counts = np.bincount(seq, minlength=sigma)[:sigma].astype(np.int64)
        return obj, pos
