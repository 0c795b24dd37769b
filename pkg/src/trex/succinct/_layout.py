"""Array layouts for the bitvector and wavelet-tree cores.

Both backends (compiled and pure Python) query the same arrays, built here
with numpy.  Bits are packed LSB-first into little-endian uint64 words.

Plain layout
    ``words``; ``sb_rank[s]`` = ones before superblock ``s`` (``SB_BITS``
    bits each, one extra trailing entry holding the total); ``sel1`` /
    ``sel0`` = superblock holding every ``SEL_SAMPLE``-th one / zero.

RRR layout (block size 63, ``RRR_SB_BLOCKS`` blocks per superblock)
    ``classes``: 6-bit popcount per block; ``offsets``: the block's rank
    among same-class blocks in ``ceil(lg C(63, c))`` bits; ``sb_rank`` and
    ``sb_ptr`` (bit position in ``offsets``) per superblock, plus a total.
"""
from __future__ import annotations

from math import comb

import numpy as np

SB_WORDS = 16
SB_BITS = 64 * SB_WORDS
SEL_SAMPLE = 4096

RRR_B = 63
RRR_CLASS_BITS = 6
RRR_SB_BLOCKS = 32

BINOM = np.zeros((64, 65), dtype=np.uint64)
for _r in range(64):
    for _k in range(_r + 1):
        BINOM[_r, _k] = comb(_r, _k)

# bits needed to store an offset of a class-c block
RRR_WIDTH = np.array([(comb(RRR_B, c) - 1).bit_length() for c in range(RRR_B + 1)], dtype=np.uint64)


def as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return arr


def pack_words(bits: np.ndarray) -> np.ndarray:
    nwords = (bits.size + 63) // 64
    packed = np.packbits(bits, bitorder="little")
    buf = np.zeros(nwords * 8, dtype=np.uint8)
    buf[: packed.size] = packed
    return buf.view("<u8").astype(np.uint64)


def unpack_words(words: np.ndarray, nbits: int) -> np.ndarray:
    raw = np.asarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:nbits].astype(np.uint8)


def _samples(cum_before: np.ndarray, total: int) -> np.ndarray:
    """Superblock index holding the (k*SEL_SAMPLE + 1)-th counted bit."""
    targets = np.arange(1, total + 1, SEL_SAMPLE, dtype=np.int64)
    return (np.searchsorted(cum_before, targets, side="left") - 1).astype(np.uint64)


def plain_layout(words: np.ndarray, nbits: int):
    """Return ``(sb_rank, sel1, sel0, ones)`` for packed ``words``."""
    nsb = max(1, (len(words) + SB_WORDS - 1) // SB_WORDS)
    pop = np.bitwise_count(words).astype(np.int64)
    pad = np.zeros(nsb * SB_WORDS, dtype=np.int64)
    pad[: pop.size] = pop
    per_sb = pad.reshape(nsb, SB_WORDS).sum(axis=1)
    sb_rank = np.zeros(nsb + 1, dtype=np.int64)
    np.cumsum(per_sb, out=sb_rank[1:])
    ones = int(sb_rank[-1])
    starts = np.minimum(np.arange(nsb + 1, dtype=np.int64) * SB_BITS, nbits)
    sb_zero = starts - sb_rank
    sel1 = _samples(sb_rank, ones)
    sel0 = _samples(sb_zero, nbits - ones)
    return sb_rank.astype(np.uint64), sel1, sel0, ones


def write_fields(values: np.ndarray, widths: np.ndarray) -> tuple[np.ndarray, int]:
    """Concatenate ``values[i]`` using ``widths[i]`` bits each (LSB-first)."""
    widths = widths.astype(np.int64)
    pos = np.zeros(widths.size, dtype=np.int64)
    if widths.size:
        np.cumsum(widths[:-1], out=pos[1:])
    total = int(widths.sum()) if widths.size else 0
    words = np.zeros((total + 63) // 64 + 1, dtype=np.uint64)
    keep = widths > 0
    vals = values.astype(np.uint64)[keep]
    pos = pos[keep]
    w = widths[keep]
    wi = pos >> 6
    sh = (pos & 63).astype(np.uint64)
    np.bitwise_or.at(words, wi, vals << sh)
    spill = (pos & 63) + w > 64
    if spill.any():
        np.bitwise_or.at(words, wi[spill] + 1, vals[spill] >> (np.uint64(64) - sh[spill]))
    return words[: (total + 63) // 64], total


def read_field(words: np.ndarray, pos: int, width: int) -> int:
    if width == 0:
        return 0
    wi, sh = pos >> 6, pos & 63
    val = int(words[wi]) >> sh
    if sh + width > 64:
        val |= int(words[wi + 1]) << (64 - sh)
    return val & ((1 << width) - 1)


def rrr_encode(bits: np.ndarray):
    """Return ``(classes_words, offsets_words, offset_bits, class_array)``."""
    nbits = bits.size
    nblocks = (nbits + RRR_B - 1) // RRR_B
    padded = np.zeros(nblocks * RRR_B, dtype=np.uint8)
    padded[:nbits] = bits
    blocks = padded.reshape(nblocks, RRR_B).astype(np.int64)
    cls = blocks.sum(axis=1)
    ones_before = np.cumsum(blocks, axis=1) - blocks
    k_rem = cls[:, None] - ones_before
    r = (RRR_B - 1) - np.arange(RRR_B)
    contrib = BINOM[np.broadcast_to(r, blocks.shape), np.clip(k_rem, 0, 64)]
    contrib = np.where(blocks == 1, contrib, np.uint64(0))
    offsets = contrib.sum(axis=1, dtype=np.uint64)
    class_words, _ = write_fields(cls, np.full(nblocks, RRR_CLASS_BITS))
    off_words, off_bits = write_fields(offsets, RRR_WIDTH[cls])
    return class_words, off_words, off_bits, cls


def read_classes(class_words: np.ndarray, nblocks: int) -> np.ndarray:
    if nblocks == 0:
        return np.zeros(0, dtype=np.int64)
    bits = unpack_words(class_words, nblocks * RRR_CLASS_BITS).reshape(nblocks, RRR_CLASS_BITS)
    return (bits.astype(np.int64) << np.arange(RRR_CLASS_BITS)).sum(axis=1)


def rrr_layout(cls: np.ndarray):
    """Return ``(sb_rank, sb_ptr)`` directories for the block class array."""
    nblocks = cls.size
    nsb = max(1, (nblocks + RRR_SB_BLOCKS - 1) // RRR_SB_BLOCKS)
    pad_c = np.zeros(nsb * RRR_SB_BLOCKS, dtype=np.int64)
    pad_c[:nblocks] = cls
    pad_w = np.zeros(nsb * RRR_SB_BLOCKS, dtype=np.int64)
    pad_w[:nblocks] = RRR_WIDTH[cls].astype(np.int64)
    sb_rank = np.zeros(nsb + 1, dtype=np.int64)
    sb_ptr = np.zeros(nsb + 1, dtype=np.int64)
    np.cumsum(pad_c.reshape(nsb, RRR_SB_BLOCKS).sum(axis=1), out=sb_rank[1:])
    np.cumsum(pad_w.reshape(nsb, RRR_SB_BLOCKS).sum(axis=1), out=sb_ptr[1:])
    return sb_rank.astype(np.uint64), sb_ptr.astype(np.uint64)


def rrr_decode_all(class_words, off_words, nbits: int) -> np.ndarray:
    """Reference decoder used on load and in tests."""
    nblocks = (nbits + RRR_B - 1) // RRR_B
    cls = read_classes(class_words, nblocks)
    out = np.zeros(nblocks * RRR_B, dtype=np.uint8)
    pos = 0
    for b in range(nblocks):
        c = int(cls[b])
        w = int(RRR_WIDTH[c])
        off = read_field(off_words, pos, w)
        pos += w
        k = c
        for i in range(RRR_B):
            if k == 0:
                break
            bc = comb(RRR_B - 1 - i, k)
            if off >= bc:
                out[b * RRR_B + i] = 1
                off -= bc
                k -= 1
    return out[:nbits]


def wavelet_shape(sigma: int) -> tuple[int, int]:
    """``(k, 2k)``: symbols below ``2k`` use all ``ceil(lg sigma)`` levels, the rest one fewer."""
    depth = (sigma - 1).bit_length()
    if depth == 0:
        return 0, 1
    k = sigma - (1 << (depth - 1))
    return k, 2 * k


def wavelet_levels(symbols: np.ndarray, sigma: int) -> list[np.ndarray]:
    """Per-level bit arrays of the pointerless wavelet tree over ``0..sigma-1``.

    Level ``l`` lists, for the sequence stably sorted by the top ``l`` code
    bits, the next code bit.  Symbols at or above ``2k`` are coded as
    ``(s - k) << 1`` and drop out of the last level.
    """
    symbols = np.asarray(symbols, dtype=np.int64)
    nlevels = (sigma - 1).bit_length()
    k, split = wavelet_shape(sigma)
    codes = np.where(symbols < split, symbols, (symbols - k) << 1)
    levels = []
    for lvl in range(nlevels):
        order = np.argsort(codes >> (nlevels - lvl), kind="stable")
        if lvl == nlevels - 1:
            order = order[symbols[order] < split]
        levels.append(((codes[order] >> (nlevels - 1 - lvl)) & 1).astype(np.uint8))
    return levels
