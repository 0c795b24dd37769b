import subprocess
import sys

import pytest

from trex.cli import BENCH_COLUMNS, main
from trex.generators import copy_model, path_double_star, random_connected_digraph
from trex.graph import Digraph, format_edgelist

REPORT_KEYS = {
    "n", "m", "N", "h_before", "h_after", "linear_weight", "sandwich_low", "sandwich_high",
    "bound_error_budget", "payload_bits", "overhead_bits", "bits_total",
}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(out):
    rows = dict(line.split("\t") for line in out.strip().splitlines())
    return {k: float(v) for k, v in rows.items()}


@pytest.fixture
def edgelist(tmp_path):
    def make(g, name="g.txt"):
        path = tmp_path / name
        path.write_text(format_edgelist(g))
        return path

    return make


def test_build_report_keys(capsys, edgelist, tmp_path):
    code, out, _ = run(capsys, "build", edgelist(path_double_star(5)), tmp_path / "g.trex")
    assert code == 0
    rows = report(out)
    assert REPORT_KEYS <= rows.keys()
    assert rows["bits_total"] == rows["payload_bits"] + rows["overhead_bits"]
    assert rows["sandwich_low"] <= rows["h_after"] <= rows["sandwich_high"] + 1e-6


def test_build_tree_has_zero_residual(capsys, edgelist, tmp_path):
    _, out, _ = run(capsys, "build", edgelist(Digraph(4, [(1, 2), (3, 2), (2, 4)])), tmp_path / "t.trex")
    assert report(out)["h_after"] == 0


def test_build_pds_saves(capsys, edgelist, tmp_path):
    _, out, _ = run(capsys, "build", edgelist(path_double_star(100)), tmp_path / "p.trex")
    rows = report(out)
    assert rows["h_after"] < 0.1 * rows["h_before"]


def test_build_is_deterministic(capsys, edgelist, tmp_path):
    src = edgelist(random_connected_digraph(60, 200, 4))
    run(capsys, "build", src, tmp_path / "a.trex", "--twins")
    run(capsys, "build", src, tmp_path / "b.trex", "--twins")
    assert (tmp_path / "a.trex").read_bytes() == (tmp_path / "b.trex").read_bytes()


@pytest.mark.parametrize(
    "text,code",
    [
        ("3 2\n1 2\n", 1),  # edge count disagrees
        ("4 2\n1 2\n3 4\n", 2),  # disconnected
        ("x y\n", 1),
    ],
)
def test_build_error_codes(capsys, tmp_path, text, code):
    src = tmp_path / "bad.txt"
    src.write_text(text)
    got, _, err = run(capsys, "build", src, tmp_path / "o.trex")
    assert got == code and err.startswith("trex:")


def test_missing_input_and_usage(capsys, tmp_path):
    assert run(capsys, "build", tmp_path / "nope.txt", tmp_path / "o.trex")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "query", tmp_path / "o.trex", "--op", "bogus", "--v", 1)[0] == 1


def test_exact_limit(capsys, edgelist, tmp_path):
    src = edgelist(random_connected_digraph(12, 60, 1))
    assert run(capsys, "build", src, tmp_path / "e.trex", "--exact", "--exact-limit", 5)[0] == 3
    small = edgelist(Digraph(4, [(1, 2), (2, 3), (3, 4), (1, 3), (2, 4)]), "s.txt")
    code, out, _ = run(capsys, "build", small, tmp_path / "s.trex", "--exact")
    assert code == 0 and "h_after" in out


@pytest.fixture
def built(capsys, edgelist, tmp_path):
    g = path_double_star(1)  # 1->2, 1->3, 2->4, 3->4
    out = tmp_path / "q.trex"
    mapping = tmp_path / "q.map"
    assert run(capsys, "build", edgelist(g), out, "--emit-mapping", mapping)[0] == 0
    f = [0] * 5
    for line in mapping.read_text().splitlines():
        old, new = map(int, line.split())
        f[old] = new
    return out, mapping, f, g


def test_query_round_trip(capsys, built):
    out, _, f, g = built
    arcs = {(f[u], f[v]) for u, v in g.edges}
    for v in range(1, 5):
        outs = sorted(w for a, w in arcs if a == v)
        code, text, _ = run(capsys, "query", out, "--op", "outdeg", "--v", v)
        assert code == 0 and int(text) == len(outs)
        got = [int(run(capsys, "query", out, "--op", "nout", "--v", v, "--i", i)[1]) for i in range(1, len(outs) + 1)]
        assert sorted(got) == outs
        for i, w in enumerate(got, 1):
            assert int(run(capsys, "query", out, "--op", "noutrank", "--v", v, "--w", w)[1]) == i
        for w in range(1, 5):
            want = int((v, w) in arcs or (w, v) in arcs)
            assert int(run(capsys, "query", out, "--op", "adj", "--v", v, "--w", w)[1]) == want


def test_query_next_walk(capsys, built):
    out, _, f, _ = built
    sink = f[4]
    assert run(capsys, "query", out, "--op", "next-out", "--v", sink)[1].strip() == "none"
    src = f[1]
    first = int(run(capsys, "query", out, "--op", "next-out", "--v", src)[1])
    second = int(run(capsys, "query", out, "--op", "next-out", "--v", src, "--w", first)[1])
    assert {first, second} == {f[2], f[3]}
    assert run(capsys, "query", out, "--op", "next-out", "--v", src, "--w", second)[1].strip() == "none"


def test_query_errors(capsys, built, tmp_path):
    out, _, f, _ = built
    assert run(capsys, "query", out, "--op", "nout", "--v", f[1], "--i", 3)[0] == 5
    assert run(capsys, "query", out, "--op", "nout", "--v", 9, "--i", 1)[0] == 5
    assert run(capsys, "query", out, "--op", "noutrank", "--v", f[1], "--w", f[4])[0] == 5
    assert run(capsys, "query", out, "--op", "nout", "--v", 1)[0] == 1
    bad = tmp_path / "bad.trex"
    bad.write_bytes(b"TREX9" + out.read_bytes()[5:])
    assert run(capsys, "query", bad, "--op", "outdeg", "--v", 1)[0] == 4


def test_verify(capsys, built, edgelist, tmp_path):
    out, mapping, _, g = built
    src = edgelist(g, "src.txt")
    assert run(capsys, "verify", out, "--against", src, "--mapping", mapping)[:2] == (0, "ok\n")
    assert run(capsys, "verify", out, "--against", src)[0] == 0
    other = edgelist(Digraph(4, [(1, 2), (1, 3), (2, 4), (4, 3)]), "other.txt")
    assert run(capsys, "verify", out, "--against", other, "--mapping", mapping)[0] == 6
    data = bytearray(out.read_bytes())
    data[-1] ^= 0xFF
    broken = tmp_path / "broken.trex"
    broken.write_bytes(bytes(data))
    assert run(capsys, "verify", broken, "--against", src)[0] in (4, 6)


def test_verify_twins_and_undirected(capsys, edgelist, tmp_path):
    g = copy_model(random_connected_digraph(6, 12, 3), 40, 3)
    src = edgelist(g)
    out = tmp_path / "t.trex"
    run(capsys, "build", src, out, "--twins", "--emit-mapping", tmp_path / "t.map")
    assert run(capsys, "verify", out, "--against", src, "--mapping", tmp_path / "t.map")[0] == 0
    assert run(capsys, "verify", out, "--against", src)[0] == 0
    usrc = tmp_path / "u.txt"
    usrc.write_text("5 6\n1 2\n2 3\n3 4\n4 5\n5 1\n1 3\n")
    run(capsys, "build", usrc, tmp_path / "u.trex", "--undirected")
    assert run(capsys, "verify", tmp_path / "u.trex", "--against", usrc)[0] == 0


@pytest.mark.parametrize("family,extra", [
    ("pds", ["--k", 4]),
    ("cliquestar", ["--k", 3]),
    ("x3c", ["--n", 2]),
    ("config", ["--n", 50, "--min-degree", 1]),
    ("copy", ["--n0", 4, "--steps", 10]),
])
def test_gen_then_build(capsys, tmp_path, family, extra):
    path = tmp_path / f"{family}.txt"
    assert run(capsys, "gen", "--family", family, "--seed", 2, "-o", path, *extra)[0] == 0
    _, text, _ = run(capsys, "gen", "--family", family, "--seed", 2, *extra)
    assert text == path.read_text()
    assert run(capsys, "build", path, tmp_path / "o.trex")[0] == 0


def test_gen_bad_parameters(capsys):
    assert run(capsys, "gen", "--family", "cliquestar", "--k", 1)[0] == 1


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--family", "pds", "--sizes", "8,16", "--queries", 50)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == ",".join(BENCH_COLUMNS)
    assert len(lines) == 3 and lines[1].startswith("pds,18,32,")
    assert run(capsys, "bench", "--family", "pds", "--sizes", "a,b")[0] == 1


def test_console_script(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text(format_edgelist(path_double_star(2)))
    proc = subprocess.run([sys.executable, "-m", "trex.cli", "build", str(path), str(tmp_path / "g.trex")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "bits_total" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "trex.cli", "verify", str(tmp_path / "g.trex"),
                           "--against", str(tmp_path / "missing.txt")], capture_output=True, text=True)
    assert proc.returncode == 1
