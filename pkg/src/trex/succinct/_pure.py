"""Pure-Python query cores; same interface as the compiled ``_kernels``.

All positions are 0-based.  ``rank1(p)`` counts ones in ``[0, p)``;
``select1(k)`` / ``select0(k)`` return the position of the ``k``-th
(1-based) one / zero.  Arguments are validated by the public wrappers.
"""
from __future__ import annotations

from math import comb

from . import _layout as L
from ._layout import RRR_B, RRR_CLASS_BITS, RRR_SB_BLOCKS, RRR_WIDTH, SB_BITS, SB_WORDS, SEL_SAMPLE

_SB_SHIFT = SB_WORDS.bit_length() - 1
_WIDTH = [int(w) for w in RRR_WIDTH]
_BINOM = [[comb(r, k) for k in range(65)] for r in range(64)]
_LOW63 = (1 << RRR_B) - 1


def _select_in_word(x: int, r: int) -> int:
    for _ in range(r - 1):
        x &= x - 1
    return (x & -x).bit_length() - 1


class PlainBits:
    __slots__ = ("words", "nbits", "ones", "sb_rank", "sel1", "sel0", "nsb")

    def __init__(self, words, nbits, sb_rank, sel1, sel0, ones):
        self.words = [int(w) for w in words]
        self.nbits = int(nbits)
        self.ones = int(ones)
        self.sb_rank = [int(x) for x in sb_rank]
        self.sel1 = [int(x) for x in sel1]
        self.sel0 = [int(x) for x in sel0]
        self.nsb = len(self.sb_rank) - 1

    def access(self, i: int) -> int:
        return (self.words[i >> 6] >> (i & 63)) & 1

    def rank1(self, p: int) -> int:
        w = p >> 6
        sb = w >> _SB_SHIFT
        words = self.words
        r = self.sb_rank[sb]
        for j in range(sb << _SB_SHIFT, w):
            r += words[j].bit_count()
        rem = p & 63
        if rem:
            r += (words[w] & ((1 << rem) - 1)).bit_count()
        return r

    def _find_sb(self, k: int, samples: list[int], zeros: bool) -> int:
        i = (k - 1) // SEL_SAMPLE
        lo = samples[i]
        hi = samples[i + 1] if i + 1 < len(samples) else self.nsb - 1
        sb_rank = self.sb_rank
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            before = mid * SB_BITS - sb_rank[mid] if zeros else sb_rank[mid]
            if before < k:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def select1(self, k: int) -> int:
        s = self._find_sb(k, self.sel1, False)
        rem = k - self.sb_rank[s]
        words = self.words
        j = s << _SB_SHIFT
        while True:
            c = words[j].bit_count()
            if c >= rem:
                return (j << 6) + _select_in_word(words[j], rem)
            rem -= c
            j += 1

    def select0(self, k: int) -> int:
        s = self._find_sb(k, self.sel0, True)
        rem = k - (s * SB_BITS - self.sb_rank[s])
        words = self.words
        j = s << _SB_SHIFT
        while True:
            inv = ~words[j] & 0xFFFFFFFFFFFFFFFF
            c = inv.bit_count()
            if c >= rem:
                return (j << 6) + _select_in_word(inv, rem)
            rem -= c
            j += 1


class RRRBits:
    __slots__ = ("classes", "offsets", "nbits", "ones", "sb_rank", "sb_ptr", "nblocks", "nsb")

    def __init__(self, class_words, off_words, nbits, ones, sb_rank, sb_ptr):
        self.nbits = int(nbits)
        self.ones = int(ones)
        self.nblocks = (self.nbits + RRR_B - 1) // RRR_B
        cw = [int(w) for w in class_words]
        self.classes = [_read(cw, b * RRR_CLASS_BITS, RRR_CLASS_BITS) for b in range(self.nblocks)]
        self.offsets = [int(w) for w in off_words]
        self.sb_rank = [int(x) for x in sb_rank]
        self.sb_ptr = [int(x) for x in sb_ptr]
        self.nsb = len(self.sb_rank) - 1

    def _block(self, b: int) -> int:
        """Decode block ``b`` into a 63-bit int."""
        sb = b // RRR_SB_BLOCKS
        classes = self.classes
        ptr = self.sb_ptr[sb]
        for j in range(sb * RRR_SB_BLOCKS, b):
            ptr += _WIDTH[classes[j]]
        k = classes[b]
        if k == 0:
            return 0
        if k == RRR_B:
            return _LOW63
        off = _read(self.offsets, ptr, _WIDTH[k])
        x = 0
        for i in range(RRR_B):
            row = _BINOM[RRR_B - 1 - i]
            bc = row[k]
            if off >= bc:
                x |= 1 << i
                off -= bc
                k -= 1
                if k == 0:
                    break
        return x

    def access(self, i: int) -> int:
        return (self._block(i // RRR_B) >> (i % RRR_B)) & 1

    def rank1(self, p: int) -> int:
        b, r = divmod(p, RRR_B)
        sb = b // RRR_SB_BLOCKS
        classes = self.classes
        res = self.sb_rank[sb]
        for j in range(sb * RRR_SB_BLOCKS, b):
            res += classes[j]
        if r:
            res += (self._block(b) & ((1 << r) - 1)).bit_count()
        return res

    def _find_sb(self, k: int, zeros: bool) -> int:
        lo, hi = 0, self.nsb - 1
        sb_rank = self.sb_rank
        span = RRR_SB_BLOCKS * RRR_B
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            before = mid * span - sb_rank[mid] if zeros else sb_rank[mid]
            if before < k:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def select1(self, k: int) -> int:
        s = self._find_sb(k, False)
        rem = k - self.sb_rank[s]
        b = s * RRR_SB_BLOCKS
        classes = self.classes
        while classes[b] < rem:
            rem -= classes[b]
            b += 1
        return b * RRR_B + _select_in_word(self._block(b), rem)

    def select0(self, k: int) -> int:
        s = self._find_sb(k, True)
        rem = k - (s * RRR_SB_BLOCKS * RRR_B - self.sb_rank[s])
        b = s * RRR_SB_BLOCKS
        classes = self.classes
        while RRR_B - classes[b] < rem:
            rem -= RRR_B - classes[b]
            b += 1
        return b * RRR_B + _select_in_word(~self._block(b) & _LOW63, rem)


def _read(words: list[int], pos: int, width: int) -> int:
    if width == 0:
        return 0
    wi, sh = pos >> 6, pos & 63
    val = words[wi] >> sh
    if sh + width > 64:
        val |= words[wi + 1] << (64 - sh)
    return val & ((1 << width) - 1)


class WaveletCore:
    """Pointerless wavelet tree over symbols ``0..sigma-1`` with leaves on two depths.

    With ``D = ceil(lg sigma)`` and ``k = sigma - 2^(D-1)``, symbols below
    ``2k`` take ``D`` levels and the rest stop after ``D - 1`` levels under
    prefix ``s - k``.  Internal prefixes are the smallest, so the last level
    only holds a leading run of positions and may be shorter than the rest.
    """

    __slots__ = ("levels", "length", "nlevels", "half", "split")

    def __init__(self, levels, length, sigma):
        self.levels = list(levels)
        self.length = int(length)
        self.nlevels = len(self.levels)
        self.half, self.split = L.wavelet_shape(sigma)

    def _path(self, c: int) -> tuple[int, int]:
        if c < self.split:
            return c, self.nlevels
        return c - self.half, self.nlevels - 1

    def access(self, i: int) -> int:
        b, e, c = 0, self.length, 0
        last = self.nlevels - 1
        for lvl, bv in enumerate(self.levels):
            if lvl == last and i >= bv.nbits:
                return c + self.half
            rb = bv.rank1(b)
            ri = bv.rank1(i)
            re = bv.rank1(e)
            if bv.access(i):
                z = (e - b) - (re - rb)
                i = b + z + (ri - rb)
                b += z
                c = (c << 1) | 1
            else:
                i = i - (ri - rb)
                e = e - (re - rb)
                c <<= 1
        return c

    def rank(self, c: int, p: int) -> int:
        code, depth = self._path(c)
        b, e = 0, self.length
        shift = depth - 1
        for bv in self.levels[:depth]:
            rb = bv.rank1(b)
            rp = bv.rank1(p)
            re = bv.rank1(e)
            if (code >> shift) & 1:
                z = (e - b) - (re - rb)
                p = b + z + (rp - rb)
                b += z
            else:
                p = p - (rp - rb)
                e = e - (re - rb)
            shift -= 1
        return p - b

    def range_count(self, c: int, lo: int, hi: int) -> int:
        """Occurrences of ``c`` in ``[lo, hi)``, stopping as soon as the range empties."""
        code, depth = self._path(c)
        b, e = 0, self.length
        shift = depth - 1
        for bv in self.levels[:depth]:
            if lo >= hi:
                return 0
            rb = bv.rank1(b)
            rl = bv.rank1(lo)
            rh = bv.rank1(hi)
            re = bv.rank1(e)
            if (code >> shift) & 1:
                z = (e - b) - (re - rb)
                lo = b + z + (rl - rb)
                hi = b + z + (rh - rb)
                b += z
            else:
                lo -= rl - rb
                hi -= rh - rb
                e -= re - rb
            shift -= 1
        return max(hi - lo, 0)

    def count(self, c: int) -> int:
        return self.rank(c, self.length)

    def select(self, c: int, k: int) -> int:
        """Position of the ``k``-th occurrence of ``c``; -1 if there is none."""
        code, depth = self._path(c)
        b, e = 0, self.length
        shift = depth - 1
        starts = []
        for bv in self.levels[:depth]:
            rb = bv.rank1(b)
            re = bv.rank1(e)
            if (code >> shift) & 1:
                z = (e - b) - (re - rb)
                starts.append((b, rb, b + z))
                b += z
            else:
                starts.append((b, rb, b))
                e = e - (re - rb)
            shift -= 1
        if k < 1 or k > e - b:
            return -1
        pos = b + k - 1
        shift = 0
        for lvl in range(depth - 1, -1, -1):
            bv = self.levels[lvl]
            nb, rb, child = starts[lvl]
            q = pos - child
            if (code >> shift) & 1:
                pos = bv.select1(rb + q + 1)
            else:
                pos = bv.select0(nb - rb + q + 1)
            shift += 1
        return pos
