"""Compiled kernels versus the pure-Python fallback.

Each backend runs in its own interpreter (the choice is fixed at import), on
identical seeded inputs.  Prints a CSV with one row per backend and operation.

    python3 benchmarks/bench_backends.py [--n 100000] [--graph-n 10000] [--ops 20000]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def run_worker(n: int, graph_n: int, ops: int) -> dict:
    import numpy as np

    from trex.generators import configuration_model, random_degree_sequence
    from trex.pipeline import compress
    from trex.succinct import BACKEND, BitVec, CompressedBitVec, WaveletTree

    rng = np.random.default_rng(1)
    bits = (rng.random(n) < 0.3).astype(np.uint8)
    plain, rrr = BitVec(bits), CompressedBitVec(bits)
    ones = int(bits.sum())
    seq = rng.integers(1, 257, size=n // 4).tolist()
    wt = WaveletTree(seq, 256)
    pos = rng.integers(1, n + 1, size=ops).tolist()
    ks = rng.integers(1, ones + 1, size=ops).tolist()
    wpos = rng.integers(1, len(seq) + 1, size=ops).tolist()
    syms = rng.integers(1, 257, size=ops).tolist()

    d_in = random_degree_sequence(graph_n, 5 * graph_n, 3, min_degree=1)
    d_out = random_degree_sequence(graph_n, 5 * graph_n, 4, min_degree=1)
    g = configuration_model(d_in, d_out, 5)
    t0 = time.perf_counter()
    core = compress(g).core
    build_s = time.perf_counter() - t0
    vs = rng.integers(1, graph_n + 1, size=ops).tolist()

    def timed(fn, args):
        t = time.perf_counter_ns()
        for a in args:
            fn(*a)
        return (time.perf_counter_ns() - t) / len(args)

    def first_out(v):
        if core.outdegree(v):
            core.n_out(v, 1)

    rows = {
        "plain.rank1": timed(plain.rank1, [(p,) for p in pos]),
        "plain.select1": timed(plain.select1, [(k,) for k in ks]),
        "rrr.rank1": timed(rrr.rank1, [(p,) for p in pos]),
        "rrr.select1": timed(rrr.select1, [(k,) for k in ks]),
        "rrr.access": timed(rrr.access, [(p,) for p in pos]),
        "wavelet.access": timed(wt.access, [(p,) for p in wpos]),
        "wavelet.rank": timed(wt.rank, list(zip(syms, wpos))),
        "graph.outdegree": timed(core.outdegree, [(v,) for v in vs]),
        "graph.n_out_first": timed(first_out, [(v,) for v in vs]),
        "graph.adjacent": timed(core.adjacent, list(zip(vs, vs[1:] + vs[:1]))),
        "graph.build_ms": build_s * 1e3,
    }
    return {"backend": BACKEND, "rows": rows}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000, help="bitvector length")
    ap.add_argument("--graph-n", type=int, default=10_000)
    ap.add_argument("--ops", type=int, default=20_000)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(run_worker(args.n, args.graph_n, args.ops)))
        return 0
    results = []
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("TREX_PURE_PYTHON", None)
        if pure:
            env["TREX_PURE_PYTHON"] = "1"
        cmd = [sys.executable, __file__, "--worker", "--n", str(args.n),
               "--graph-n", str(args.graph_n), "--ops", str(args.ops)]
        out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout
        results.append(json.loads(out))
    print("backend,operation,ns_per_call")
    for res in results:
        for op, val in res["rows"].items():
            print(f"{res['backend']},{op},{val:.1f}")
    if len({r["backend"] for r in results}) == 2:
        fast, slow = results[0]["rows"], results[1]["rows"]
        print("speedup," + ",".join(f"{op}={slow[op] / fast[op]:.1f}x" for op in fast))
    else:
        print("# compiled kernels unavailable; both runs used the pure backend", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
