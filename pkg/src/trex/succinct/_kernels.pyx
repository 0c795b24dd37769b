# cython: language_level=3
"""Compiled query cores; mirrors ``_pure`` exactly (0-based positions)."""
from libc.stdint cimport uint64_t, int64_t

import numpy as np

from ._layout import RRR_WIDTH, wavelet_shape


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef enum:
    SB_SHIFT = 4          # 16 words per plain superblock
    SB_BITS = 1024
    SEL_SAMPLE = 4096
    RRR_B = 63
    RRR_CB = 6
    RRR_SBB = 32
    MAX_LEVELS = 64

cdef uint64_t BINOM[64][65]
cdef int WIDTH[64]
cdef uint64_t LOW63 = (<uint64_t>1 << 63) - 1


cdef void _init_tables():
    cdef int r, k
    for r in range(64):
        for k in range(65):
            BINOM[r][k] = 0
        BINOM[r][0] = 1
        for k in range(1, r + 1):
            BINOM[r][k] = BINOM[r - 1][k - 1] + BINOM[r - 1][k]
    for k in range(64):
        WIDTH[k] = int(RRR_WIDTH[k])

_init_tables()


cdef inline int _select_in_word(uint64_t x, uint64_t r) noexcept nogil:
    cdef uint64_t i
    for i in range(r - 1):
        x &= x - 1
    return __builtin_ctzll(x)


cdef inline uint64_t _read(const uint64_t[::1] w, uint64_t pos, int width) noexcept nogil:
    if width == 0:
        return 0
    cdef uint64_t wi = pos >> 6
    cdef int sh = pos & 63
    cdef uint64_t v = w[wi] >> sh
    if sh + width > 64:
        v |= w[wi + 1] << (64 - sh)
    if width < 64:
        v &= (<uint64_t>1 << width) - 1
    return v


cdef class BitsBase:
    cdef readonly uint64_t nbits, ones

    cdef uint64_t _rank1(self, uint64_t p) noexcept:
        return 0

    cdef uint64_t _select1(self, uint64_t k) noexcept:
        return 0

    cdef uint64_t _select0(self, uint64_t k) noexcept:
        return 0

    cdef int _access(self, uint64_t i) noexcept:
        return 0

    def rank1(self, uint64_t p):
        return self._rank1(p)

    def select1(self, uint64_t k):
        return self._select1(k)

    def select0(self, uint64_t k):
        return self._select0(k)

    def access(self, uint64_t i):
        return self._access(i)


cdef class PlainBits(BitsBase):
    cdef const uint64_t[::1] words
    cdef const uint64_t[::1] sb_rank
    cdef const uint64_t[::1] sel1
    cdef const uint64_t[::1] sel0
    cdef uint64_t nsb
    cdef object _keep

    def __init__(self, words, nbits, sb_rank, sel1, sel0, ones):
        w = np.ascontiguousarray(words, dtype=np.uint64)
        r = np.ascontiguousarray(sb_rank, dtype=np.uint64)
        s1 = np.ascontiguousarray(sel1, dtype=np.uint64)
        s0 = np.ascontiguousarray(sel0, dtype=np.uint64)
        self._keep = (w, r, s1, s0)
        self.words = w
        self.sb_rank = r
        self.sel1 = s1
        self.sel0 = s0
        self.nbits = nbits
        self.ones = ones
        self.nsb = r.shape[0] - 1

    cdef int _access(self, uint64_t i) noexcept:
        return (self.words[i >> 6] >> (i & 63)) & 1

    cdef uint64_t _rank1(self, uint64_t p) noexcept:
        cdef uint64_t w = p >> 6
        cdef uint64_t sb = w >> SB_SHIFT
        cdef uint64_t r = self.sb_rank[sb]
        cdef uint64_t j
        for j in range(sb << SB_SHIFT, w):
            r += __builtin_popcountll(self.words[j])
        cdef int rem = p & 63
        if rem:
            r += __builtin_popcountll(self.words[w] & ((<uint64_t>1 << rem) - 1))
        return r

    cdef uint64_t _find_sb(self, uint64_t k, bint zeros) noexcept:
        cdef const uint64_t[::1] samples = self.sel0 if zeros else self.sel1
        cdef uint64_t i = (k - 1) // SEL_SAMPLE
        cdef uint64_t lo = samples[i]
        cdef uint64_t hi = samples[i + 1] if i + 1 < <uint64_t>samples.shape[0] else self.nsb - 1
        cdef uint64_t mid, before
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            before = mid * SB_BITS - self.sb_rank[mid] if zeros else self.sb_rank[mid]
            if before < k:
                lo = mid
            else:
                hi = mid - 1
        return lo

    cdef uint64_t _select1(self, uint64_t k) noexcept:
        cdef uint64_t s = self._find_sb(k, False)
        cdef uint64_t rem = k - self.sb_rank[s]
        cdef uint64_t j = s << SB_SHIFT
        cdef uint64_t c
        while True:
            c = __builtin_popcountll(self.words[j])
            if c >= rem:
                return (j << 6) + _select_in_word(self.words[j], rem)
            rem -= c
            j += 1

    cdef uint64_t _select0(self, uint64_t k) noexcept:
        cdef uint64_t s = self._find_sb(k, True)
        cdef uint64_t rem = k - (s * SB_BITS - self.sb_rank[s])
        cdef uint64_t j = s << SB_SHIFT
        cdef uint64_t c, inv
        while True:
            inv = ~self.words[j]
            c = __builtin_popcountll(inv)
            if c >= rem:
                return (j << 6) + _select_in_word(inv, rem)
            rem -= c
            j += 1


cdef class RRRBits(BitsBase):
    cdef const uint64_t[::1] classes
    cdef const uint64_t[::1] offsets
    cdef const uint64_t[::1] sb_rank
    cdef const uint64_t[::1] sb_ptr
    cdef uint64_t nsb, nblocks
    cdef object _keep

    def __init__(self, class_words, off_words, nbits, ones, sb_rank, sb_ptr):
        cw = np.ascontiguousarray(class_words, dtype=np.uint64)
        ow = np.ascontiguousarray(off_words, dtype=np.uint64)
        if ow.shape[0] == 0:
            ow = np.zeros(1, dtype=np.uint64)
        if cw.shape[0] == 0:
            cw = np.zeros(1, dtype=np.uint64)
        r = np.ascontiguousarray(sb_rank, dtype=np.uint64)
        p = np.ascontiguousarray(sb_ptr, dtype=np.uint64)
        self._keep = (cw, ow, r, p)
        self.classes = cw
        self.offsets = ow
        self.sb_rank = r
        self.sb_ptr = p
        self.nbits = nbits
        self.ones = ones
        self.nblocks = (nbits + RRR_B - 1) // RRR_B
        self.nsb = r.shape[0] - 1

    cdef inline int _class(self, uint64_t b) noexcept:
        return <int>_read(self.classes, b * RRR_CB, RRR_CB)

    cdef uint64_t _decode(self, uint64_t b, int k, uint64_t ptr) noexcept:
        if k == 0:
            return 0
        if k == RRR_B:
            return LOW63
        cdef uint64_t off = _read(self.offsets, ptr, WIDTH[k])
        cdef uint64_t x = 0
        cdef uint64_t bc
        cdef int i
        for i in range(RRR_B):
            bc = BINOM[RRR_B - 1 - i][k]
            if off >= bc:
                x |= (<uint64_t>1) << i
                off -= bc
                k -= 1
                if k == 0:
                    break
        return x

    cdef uint64_t _block(self, uint64_t b) noexcept:
        cdef uint64_t sb = b // RRR_SBB
        cdef uint64_t ptr = self.sb_ptr[sb]
        cdef uint64_t j
        for j in range(sb * RRR_SBB, b):
            ptr += WIDTH[self._class(j)]
        return self._decode(b, self._class(b), ptr)

    cdef int _access(self, uint64_t i) noexcept:
        return (self._block(i // RRR_B) >> (i % RRR_B)) & 1

    cdef uint64_t _rank1(self, uint64_t p) noexcept:
        cdef uint64_t b = p // RRR_B
        cdef int r = p % RRR_B
        cdef uint64_t sb = b // RRR_SBB
        cdef uint64_t res = self.sb_rank[sb]
        cdef uint64_t ptr = self.sb_ptr[sb]
        cdef uint64_t j
        cdef int c
        for j in range(sb * RRR_SBB, b):
            c = self._class(j)
            res += c
            ptr += WIDTH[c]
        if r:
            res += __builtin_popcountll(self._decode(b, self._class(b), ptr) & ((<uint64_t>1 << r) - 1))
        return res

    cdef uint64_t _find_sb(self, uint64_t k, bint zeros) noexcept:
        cdef uint64_t lo = 0
        cdef uint64_t hi = self.nsb - 1
        cdef uint64_t mid, before
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            before = mid * (RRR_SBB * RRR_B) - self.sb_rank[mid] if zeros else self.sb_rank[mid]
            if before < k:
                lo = mid
            else:
                hi = mid - 1
        return lo

    cdef uint64_t _select1(self, uint64_t k) noexcept:
        cdef uint64_t s = self._find_sb(k, False)
        cdef uint64_t rem = k - self.sb_rank[s]
        cdef uint64_t b = s * RRR_SBB
        cdef uint64_t ptr = self.sb_ptr[s]
        cdef int c = self._class(b)
        while <uint64_t>c < rem:
            rem -= c
            ptr += WIDTH[c]
            b += 1
            c = self._class(b)
        return b * RRR_B + _select_in_word(self._decode(b, c, ptr), rem)

    cdef uint64_t _select0(self, uint64_t k) noexcept:
        cdef uint64_t s = self._find_sb(k, True)
        cdef uint64_t rem = k - (s * RRR_SBB * RRR_B - self.sb_rank[s])
        cdef uint64_t b = s * RRR_SBB
        cdef uint64_t ptr = self.sb_ptr[s]
        cdef int c = self._class(b)
        while <uint64_t>(RRR_B - c) < rem:
            rem -= RRR_B - c
            ptr += WIDTH[c]
            b += 1
            c = self._class(b)
        return b * RRR_B + _select_in_word(~self._decode(b, c, ptr) & LOW63, rem)


cdef class WaveletCore:
    """Pointerless wavelet tree over ``0..sigma-1``; symbols from ``split`` on stop one level early."""
    cdef list _levels
    cdef readonly uint64_t length, half, split
    cdef readonly int nlevels

    def __init__(self, levels, length, sigma):
        self._levels = list(levels)
        if len(self._levels) > MAX_LEVELS:
            raise ValueError("too many wavelet levels")
        for bv in self._levels:
            if not isinstance(bv, BitsBase):
                raise TypeError("wavelet levels must be compiled bit cores")
        self.length = length
        self.nlevels = len(self._levels)
        self.half, self.split = wavelet_shape(sigma)

    @property
    def levels(self):
        return list(self._levels)

    cdef inline int _path(self, uint64_t c, uint64_t *code) noexcept:
        if c < self.split:
            code[0] = c
            return self.nlevels
        code[0] = c - self.half
        return self.nlevels - 1

    def access(self, uint64_t i):
        cdef uint64_t b = 0, e = self.length, c = 0, rb, ri, re, z
        cdef BitsBase bv
        cdef int lvl
        for lvl in range(self.nlevels):
            bv = <BitsBase>self._levels[lvl]
            if lvl == self.nlevels - 1 and i >= bv.nbits:
                return c + self.half
            rb = bv._rank1(b)
            ri = bv._rank1(i)
            re = bv._rank1(e)
            if bv._access(i):
                z = (e - b) - (re - rb)
                i = b + z + (ri - rb)
                b += z
                c = (c << 1) | 1
            else:
                i = i - (ri - rb)
                e = e - (re - rb)
                c <<= 1
        return c

    cpdef uint64_t rank(self, uint64_t c, uint64_t p):
        cdef uint64_t b = 0, e = self.length, rb, rp, re, z, code
        cdef int depth = self._path(c, &code)
        cdef int shift = depth - 1
        cdef BitsBase bv
        cdef int lvl
        for lvl in range(depth):
            bv = <BitsBase>self._levels[lvl]
            rb = bv._rank1(b)
            rp = bv._rank1(p)
            re = bv._rank1(e)
            if (code >> shift) & 1:
                z = (e - b) - (re - rb)
                p = b + z + (rp - rb)
                b += z
            else:
                p = p - (rp - rb)
                e = e - (re - rb)
            shift -= 1
        return p - b

    cpdef uint64_t range_count(self, uint64_t c, uint64_t lo, uint64_t hi):
        """Occurrences of ``c`` in ``[lo, hi)``, stopping as soon as the range empties."""
        cdef uint64_t b = 0, e = self.length, rb, rl, rh, re, z, code
        cdef int depth = self._path(c, &code)
        cdef int shift = depth - 1
        cdef BitsBase bv
        cdef int lvl
        for lvl in range(depth):
            if lo >= hi:
                return 0
            bv = <BitsBase>self._levels[lvl]
            rb = bv._rank1(b)
            rl = bv._rank1(lo)
            rh = bv._rank1(hi)
            re = bv._rank1(e)
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
        return hi - lo if hi > lo else 0

    def count(self, uint64_t c):
        return self.rank(c, self.length)

    def select(self, uint64_t c, uint64_t k):
        """Position of the ``k``-th occurrence of ``c``; -1 if there is none."""
        cdef uint64_t b = 0, e = self.length, rb, re, z, pos, q, code
        cdef uint64_t nbs[MAX_LEVELS]
        cdef uint64_t rbs[MAX_LEVELS]
        cdef uint64_t child[MAX_LEVELS]
        cdef int depth = self._path(c, &code)
        cdef int shift = depth - 1
        cdef BitsBase bv
        cdef int lvl
        for lvl in range(depth):
            bv = <BitsBase>self._levels[lvl]
            rb = bv._rank1(b)
            re = bv._rank1(e)
            nbs[lvl] = b
            rbs[lvl] = rb
            if (code >> shift) & 1:
                z = (e - b) - (re - rb)
                b += z
            else:
                e = e - (re - rb)
            child[lvl] = b
            shift -= 1
        if k < 1 or k > e - b:
            return -1
        pos = b + k - 1
        shift = 0
        for lvl in range(depth - 1, -1, -1):
            bv = <BitsBase>self._levels[lvl]
            q = pos - child[lvl]
            if (code >> shift) & 1:
                pos = bv._select1(rbs[lvl] + q + 1)
            else:
                pos = bv._select0(nbs[lvl] - rbs[lvl] + q + 1)
            shift += 1
        return pos
