"""CLI coverage for the pattern arrows, group subcommands, search and
verification paths not exercised in the basic CLI tests, plus a parser
fuzz loop."""

import json
import os
import random
import string
import subprocess
import sys

import pytest

from arrowbench.errors import ParseError
from arrowbench.structures import parse_structure, serialize_structure

from util import chain, cycle, graph, k_graph, path, pure_set

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(args):
    env = dict(os.environ)
    env.pop("ARROWBENCH_CACHE_DIR", None)
    return subprocess.run([sys.executable, "-m", "arrowbench", *args],
                          capture_output=True, text=True, env=env, cwd=PKG_ROOT)


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_ext")
    paths = {"root": root}

    def write(name, s):
        p = root / name
        p.write_text(serialize_structure(s))
        paths[name.split(".")[0]] = str(p)

    write("s1.st", pure_set(1))
    write("s2.st", pure_set(2))
    write("s3.st", pure_set(3))
    write("pt.st", chain(1))
    write("c2.st", chain(2))
    write("c3.st", chain(3))
    write("k1.st", k_graph(1))
    write("k2.st", k_graph(2))
    write("k4.st", k_graph(4))
    write("p2.st", path(2))
    write("p3.st", path(3))
    write("p4.st", path(4))
    write("c4cyc.st", cycle(4))
    return paths


def test_definable_arrow_cli_and_verify(files):
    cert = str(files["root"] / "def.cert")
    r = run_cli(["definable-arrow", "--age", "set", "--a", files["s1"],
                 "--b", files["s2"], "--c", files["s3"], "--z", files["s1"],
                 "--certificate", cert])
    assert r.returncode == 0, r.stderr
    v = run_cli(["verify", cert, "--age", "set", "--a", files["s1"],
                 "--b", files["s2"], "--c", files["s3"], "--z", files["s1"]])
    assert v.returncode == 0 and "verified: true" in v.stdout
    # failing instance with offending witness
    cert2 = str(files["root"] / "def2.cert")
    r2 = run_cli(["definable-arrow", "--age", "linear_order", "--a", files["pt"],
                  "--b", files["c2"], "--c", files["c2"], "--z", files["pt"],
                  "--certificate", cert2])
    assert r2.returncode == 1
    v2 = run_cli(["verify", cert2, "--age", "linear_order", "--a", files["pt"],
                  "--b", files["c2"], "--c", files["c2"], "--z", files["pt"]])
    assert v2.returncode == 0 and "verified: true" in v2.stdout


def test_stable_arrow_cli(files):
    cert = str(files["root"] / "stable.cert")
    r = run_cli(["stable-arrow", "--age", "set", "--a", files["s1"],
                 "--b", files["s2"], "--c", files["s3"], "--z", files["s1"],
                 "--depth", "4", "--certificate", cert])
    assert r.returncode == 0, r.stderr
    v = run_cli(["verify", cert, "--age", "set", "--a", files["s1"],
                 "--b", files["s2"], "--c", files["s3"], "--z", files["s1"]])
    assert v.returncode == 0 and "verified: true" in v.stdout
    # unstable pair refused distinctly (usage-style exit)
    r2 = run_cli(["stable-arrow", "--age", "linear_order", "--a", files["pt"],
                  "--b", files["c2"], "--c", files["c3"], "--z", files["pt"],
                  "--depth", "4"])
    assert r2.returncode == 2
    assert "unstable" in r2.stderr


def test_arrow_search_cli_and_verify(files):
    cert = str(files["root"] / "search.cert")
    r = run_cli(["arrow-search", "--age", "set", "--a", files["s1"],
                 "--b", files["s2"], "--colors", "2", "--max-n", "4",
                 "--certificate", cert])
    assert r.returncode == 0, r.stderr
    doc = json.loads(open(cert).read())
    assert doc["payload"]["n"] == 3
    v = run_cli(["verify", cert, "--age", "set", "--a", files["s1"],
                 "--b", files["s2"]])
    assert v.returncode == 0 and "verified: true" in v.stdout


def test_amalgamation_cli_verify(files):
    cert = str(files["root"] / "amalg.cert")
    r = run_cli(["amalgamation", "--age", "linear_order", "--property",
                 "free-amalgamation", "--bound", "2", "--certificate", cert])
    assert r.returncode == 1
    v = run_cli(["verify", cert, "--age", "linear_order"])
    assert v.returncode == 0 and "verified: true" in v.stdout


def test_orbit_subcommands(files):
    r = run_cli(["orbits", "--host", files["c4cyc"], "--a", files["k1"], "--json"])
    doc = json.loads(r.stdout)
    assert doc["payload"]["aut_order"] == 8
    assert len(doc["payload"]["blocks"]) == 1
    r2 = run_cli(["invariant-partitions", "--host", files["p3"], "--a", files["k1"],
                  "--max-blocks", "3", "--json"])
    doc2 = json.loads(r2.stdout)
    assert doc2["payload"]["count"] == 2


def test_coherent_partitions_cli(files):
    chain_arg = ",".join([files["k2"], files["p3"]])
    # K2 is induced in P3 on {0,1}
    r = run_cli(["coherent-partitions", "--chain", chain_arg, "--a", files["k1"],
                 "--max-blocks", "2", "--json"])
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["payload"]["family_count"] >= 1
    # non-nested chain is an input error
    bad = ",".join([files["c4cyc"], files["k4"]])
    r2 = run_cli(["coherent-partitions", "--chain", bad, "--a", files["k1"],
                  "--max-blocks", "2"])
    assert r2.returncode == 2


def test_embeddings_cli(files):
    r = run_cli(["embeddings", "--a", files["k1"], "--b", files["p3"], "--json"])
    doc = json.loads(r.stdout)
    assert doc["payload"]["count"] == 3


def test_epsilon_flag_validation(files):
    r = run_cli(["convex-arrow", "--a", files["s1"], "--b", files["s2"],
                 "--c", files["s3"], "--epsilon", "1.5"])
    assert r.returncode == 2
    r2 = run_cli(["convex-arrow", "--a", files["s1"], "--b", files["s2"],
                  "--c", files["s3"], "--epsilon", "-0.1"])
    assert r2.returncode == 2


def test_age_file_flag(files, tmp_path):
    age = tmp_path / "tf.age"
    k3 = tmp_path / "k3.st"
    k3.write_text(serialize_structure(k_graph(3)))
    age.write_text("signature: edge/2\naxioms: edge irreflexive symmetric\n"
                   f"forbidden: {k3.name}\n")
    r = run_cli(["enumerate", "--age", str(age), "--n", "3", "--json"])
    doc = json.loads(r.stdout)
    assert doc["payload"]["count"] == 3  # triangle-free types on 3 vertices


def test_parser_fuzz_never_crashes(seed=2025):
    rng = random.Random(seed)
    alphabet = string.ascii_letters + string.digits + "(),:/ #\n-"
    for _ in range(300):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 120)))
        try:
            s = parse_structure(text)
        except ParseError:
            continue
        # anything that parses must round-trip to a fixed normal form
        normalized = serialize_structure(s)
        assert serialize_structure(parse_structure(normalized)) == normalized


def test_parse_rejects_junk_variants():
    bad_inputs = [
        "",
        "signature: edge/2",                      # no size
        "signature: edge/2\nsize: 2\nedge: (0 1)",
        "signature: edge/2\nsize: 2\nedge: 0,1",
        "signature: edge/зero\nsize: 1",
        "signature: edge/2\nsize: two",
        "signature: edge/2\nsize: 2\nother: (0,1)",
        "signature: edge/2\nsize: 2\nedge: (0,1)\nedge: (1,0)",
        "signature: edge/2 edge/2\nsize: 1",
    ]
    for text in bad_inputs:
        with pytest.raises(ParseError):
            parse_structure(text)
