"""Rank/select bitvectors with 1-based positions.

``rank1(i)`` counts ones in ``B[1..i]`` (``i = 0`` gives 0), ``select1(k)``
is the position of the ``k``-th one.  Two encodings share the interface:
:class:`BitVec` stores the raw words, :class:`CompressedBitVec` stores
63-bit blocks as (class, offset) pairs.
"""
from __future__ import annotations

import struct

import numpy as np

from ..errors import ContainerError, OutOfRange
from . import _layout as L
from ._backend import PlainBits, RRRBits

_U64 = struct.Struct("<Q")


def put_u64(out: bytearray, x: int) -> None:
    out += _U64.pack(x)


def get_u64(buf, pos: int) -> tuple[int, int]:
    if pos + 8 > len(buf):
        raise ContainerError("truncated integer field")
    return _U64.unpack_from(buf, pos)[0], pos + 8


def put_words(out: bytearray, words: np.ndarray) -> None:
    out += np.asarray(words, dtype="<u8").tobytes()


def get_words(buf, pos: int, count: int) -> tuple[np.ndarray, int]:
    end = pos + 8 * count
    if end > len(buf):
        raise ContainerError("truncated word array")
    return np.frombuffer(bytes(buf[pos:end]), dtype="<u8").astype(np.uint64), end


class _Rankable:
    """Shared 1-based wrapper around a 0-based query core."""

    __slots__ = ("core", "n", "ones")

    def __len__(self) -> int:
        return self.n

    @property
    def zeros(self) -> int:
        return self.n - self.ones

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise OutOfRange(f"position {i} outside 1..{self.n}")
        return self.core.access(i - 1)

    __getitem__ = access

    def rank1(self, i: int) -> int:
        if not 0 <= i <= self.n:
            raise OutOfRange(f"rank position {i} outside 0..{self.n}")
        return self.core.rank1(i)

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, bit: int, i: int) -> int:
        return self.rank1(i) if bit else self.rank0(i)

    def select1(self, k: int) -> int:
        if not 1 <= k <= self.ones:
            raise OutOfRange(f"select1({k}) with {self.ones} ones")
        return self.core.select1(k) + 1

    def select0(self, k: int) -> int:
        if not 1 <= k <= self.n - self.ones:
            raise OutOfRange(f"select0({k}) with {self.n - self.ones} zeros")
        return self.core.select0(k) + 1

    def select(self, bit: int, k: int) -> int:
        return self.select1(k) if bit else self.select0(k)

    def to_list(self) -> list[int]:
        return self.to_array().tolist()

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.to_array())

    def space(self) -> tuple[int, int]:
        return self.payload_bits, self.overhead_bits

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Rankable):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.to_array(), other.to_array()))

    def __repr__(self) -> str:
        shown = self.to_string() if self.n <= 64 else f"{self.n} bits"
        return f"{type(self).__name__}({shown})"


class BitVec(_Rankable):
    """Uncompressed bitvector with 1024-bit rank superblocks and sampled select."""

    __slots__ = ("words", "_sb_rank", "_sel1", "_sel0")
    KIND = 0

    def __init__(self, bits):
        arr = L.as_bits(bits)
        self._setup(L.pack_words(arr), arr.size)

    @classmethod
    def from_string(cls, s: str) -> "BitVec":
        return cls([int(ch) for ch in s])

    @classmethod
    def from_words(cls, words: np.ndarray, nbits: int) -> "BitVec":
        obj = cls.__new__(cls)
        obj._setup(np.asarray(words, dtype=np.uint64), nbits)
        return obj

    def _setup(self, words: np.ndarray, nbits: int) -> None:
        need = (nbits + 63) // 64
        words = words[:need].copy()
        if nbits % 64 and need:
            words[-1] &= np.uint64((1 << (nbits % 64)) - 1)
        self.words = words
        self.n = int(nbits)
        self._sb_rank, self._sel1, self._sel0, self.ones = L.plain_layout(words, self.n)
        self.core = PlainBits(words, self.n, self._sb_rank, self._sel1, self._sel0, self.ones)

    def to_array(self) -> np.ndarray:
        return L.unpack_words(self.words, self.n)

    @property
    def payload_bits(self) -> int:
        return self.n

    @property
    def overhead_bits(self) -> int:
        return 64 * (self._sb_rank.size + self._sel1.size + self._sel0.size)

    def dump(self, out: bytearray) -> None:
        put_u64(out, self.n)
        put_words(out, self.words)

    @classmethod
    def load(cls, buf, pos: int) -> tuple["BitVec", int]:
        nbits, pos = get_u64(buf, pos)
        words, pos = get_words(buf, pos, (nbits + 63) // 64)
        if nbits % 64 and int(words[-1]) >> (nbits % 64):
            raise ContainerError("nonzero padding bits in bitvector")
        return cls.from_words(words, nbits), pos


class CompressedBitVec(_Rankable):
    """Block-class/offset (RRR) bitvector; payload close to ``lg C(N, ones)``."""

    __slots__ = ("class_words", "off_words", "off_bits", "nblocks", "_sb_rank", "_sb_ptr")
    KIND = 1

    def __init__(self, bits):
        arr = L.as_bits(bits)
        cw, ow, ob, cls = L.rrr_encode(arr)
        self._setup(cw, ow, ob, arr.size, cls)

    @classmethod
    def from_string(cls, s: str) -> "CompressedBitVec":
        return cls([int(ch) for ch in s])

    def _setup(self, class_words, off_words, off_bits: int, nbits: int, cls: np.ndarray) -> None:
        self.n = int(nbits)
        self.nblocks = (self.n + L.RRR_B - 1) // L.RRR_B
        self.class_words = np.asarray(class_words, dtype=np.uint64)
        self.off_words = np.asarray(off_words, dtype=np.uint64)
        self.off_bits = int(off_bits)
        self.ones = int(cls.sum())
        self._sb_rank, self._sb_ptr = L.rrr_layout(cls)
        self.core = RRRBits(self.class_words, self.off_words, self.n, self.ones, self._sb_rank, self._sb_ptr)

    def to_array(self) -> np.ndarray:
        return L.rrr_decode_all(self.class_words, self.off_words, self.n)

    @property
    def payload_bits(self) -> int:
        return L.RRR_CLASS_BITS * self.nblocks + self.off_bits

    @property
    def overhead_bits(self) -> int:
        return 64 * (self._sb_rank.size + self._sb_ptr.size)

    def dump(self, out: bytearray) -> None:
        put_u64(out, self.n)
        put_u64(out, self.off_bits)
        put_words(out, self.class_words)
        put_words(out, self.off_words)

    @classmethod
    def load(cls, buf, pos: int) -> tuple["CompressedBitVec", int]:
        nbits, pos = get_u64(buf, pos)
        off_bits, pos = get_u64(buf, pos)
        nblocks = (nbits + L.RRR_B - 1) // L.RRR_B
        cw, pos = get_words(buf, pos, (nblocks * L.RRR_CLASS_BITS + 63) // 64)
        ow, pos = get_words(buf, pos, (off_bits + 63) // 64)
        classes = L.read_classes(cw, nblocks)
        if classes.size and classes.max() > L.RRR_B:
            raise ContainerError("invalid block class")
        if int(L.RRR_WIDTH[classes].sum()) != off_bits:
            raise ContainerError("offset length disagrees with block classes")
        widths = L.RRR_WIDTH[classes].astype(np.int64)
        starts = np.zeros(nblocks, dtype=np.int64)
        if nblocks:
            np.cumsum(widths[:-1], out=starts[1:])
        for b in range(nblocks):
            c = int(classes[b])
            if 0 < c < L.RRR_B and L.read_field(ow, int(starts[b]), int(widths[b])) >= int(L.BINOM[L.RRR_B - 1, c - 1]) + int(L.BINOM[L.RRR_B - 1, c]):
                raise ContainerError(f"block {b} offset out of range for its class")
        obj = cls.__new__(cls)
        obj._setup(cw, ow, off_bits, nbits, classes)
        used = nbits - (nblocks - 1) * L.RRR_B if nblocks else 0
        if nblocks and used < L.RRR_B and obj.core.rank1(nbits) != obj.ones:
            raise ContainerError("nonzero padding bits in compressed bitvector")
        return obj, pos


def best_encoding(bits) -> _Rankable:
    """Compressed layout when its payload is strictly smaller, else plain."""
    arr = L.as_bits(bits)
    plain = BitVec(arr)
    packed = CompressedBitVec(arr)
    return packed if packed.payload_bits < plain.payload_bits else plain


def load_any(buf, pos: int) -> tuple[_Rankable, int]:
    """Read a kind byte followed by a plain or compressed bitvector."""
    if pos >= len(buf):
        raise ContainerError("truncated bitvector kind")
    kind = buf[pos]
    if kind == BitVec.KIND:
        return BitVec.load(buf, pos + 1)
    if kind == CompressedBitVec.KIND:
        return CompressedBitVec.load(buf, pos + 1)
    raise ContainerError(f"unknown bitvector kind {kind}")


def dump_any(bv: _Rankable, out: bytearray) -> None:
    out.append(bv.KIND)
    bv.dump(out)
