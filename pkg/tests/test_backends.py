import os
import subprocess
import sys

import numpy as np
import pytest

from trex.succinct import BACKEND
from trex.succinct import _layout as L
from trex.succinct import _pure

kernels = pytest.importorskip("trex.succinct._kernels", reason="compiled kernels not built")


def plain_pair(bits):
    words = L.pack_words(bits)
    args = (words, bits.size, *L.plain_layout(words, bits.size))
    return _pure.PlainBits(*args), kernels.PlainBits(*args)


def rrr_pair(bits):
    cw, ow, off_bits, cls = L.rrr_encode(bits)
    sb_rank, sb_ptr = L.rrr_layout(cls)
    args = (cw, ow, bits.size, int(bits.sum()), sb_rank, sb_ptr)
    return _pure.RRRBits(*args), kernels.RRRBits(*args)


@pytest.mark.parametrize("make", [plain_pair, rrr_pair])
@pytest.mark.parametrize("n,p", [(1, 0.5), (4097, 0.5), (9000, 0.03), (20_000, 0.9)])
def test_bit_cores_agree(make, n, p):
    bits = (np.random.default_rng(n).random(n) < p).astype(np.uint8)
    py, c = make(bits)
    ones = int(bits.sum())
    for i in range(0, n + 1, max(1, n // 997)):
        assert py.rank1(i) == c.rank1(i)
        if i < n:
            assert py.access(i) == c.access(i)
    for k in range(1, ones + 1, max(1, ones // 500)):
        assert py.select1(k) == c.select1(k)
    for k in range(1, n - ones + 1, max(1, (n - ones) // 500)):
        assert py.select0(k) == c.select0(k)


@pytest.mark.parametrize("sigma", [1, 2, 5, 256, 300])
def test_wavelet_cores_agree(sigma):
    rng = np.random.default_rng(sigma)
    seq = rng.integers(0, sigma, 5000)
    levels = L.wavelet_levels(seq, sigma)
    py = _pure.WaveletCore([plain_pair(b)[0] for b in levels], seq.size, sigma)
    c = kernels.WaveletCore([rrr_pair(b)[1] if i % 2 else plain_pair(b)[1] for i, b in enumerate(levels)], seq.size, sigma)
    for i in range(0, seq.size, 7):
        assert py.access(i) == c.access(i) == seq[i]
    for sym in sorted({0, sigma // 3, sigma - 1}):
        where = np.flatnonzero(seq == sym)
        for p in range(0, seq.size + 1, 101):
            want = int(np.count_nonzero(seq[:p] == sym))
            assert py.rank(sym, p) == c.rank(sym, p) == want
            assert py.range_count(sym, p // 2, p) == c.range_count(sym, p // 2, p)
        for k in range(0, 25):
            want = int(where[k - 1]) if 1 <= k <= where.size else -1
            assert py.select(sym, k) == c.select(sym, k) == want


def test_compiled_backend_selected_by_default():
    if os.environ.get("TREX_PURE_PYTHON"):
        pytest.skip("pure backend forced by the environment")
    assert BACKEND == "compiled"


SCRIPT = r"""
import random
from trex.succinct import BACKEND
from trex.generators import random_connected_digraph
from trex.minetrex import greedy_tree
from trex.trexds import TrexGraph
from trex.oracle import NaiveTrex, sweep
assert BACKEND == "pure", BACKEND
for seed in range(4):
    g = random_connected_digraph(40, 120, seed)
    t = greedy_tree(g)
    bad = sweep(TrexGraph.build(g, t), NaiveTrex(g, t))
    assert not bad, bad[:3]
print("pure-ok")
"""


def test_pure_backend_in_subprocess():
    env = dict(os.environ, TREX_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, timeout=600)
    assert out.returncode == 0, out.stderr
    assert "pure-ok" in out.stdout
