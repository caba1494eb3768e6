from pathlib import Path

import pytest

from camelot import bench, io
from camelot.cli import main
from camelot.corpus import GENERATORS, instances, read_manifest, write_corpus
from camelot.problems import REGISTRY, lookup, parse_tag

K4 = "c K4\np edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n"
K3 = "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n"
K7 = "p edge 7 21\n" + "".join(f"e {u} {v}\n" for u in range(1, 8) for v in range(u + 1, 8))


@pytest.fixture
def inst(tmp_path):
    def make(text, name="g.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return make


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- parsing -------------------------------------------------------------------

def test_parse_graph():
    G = io.parse_graph(K4)
    assert G.n == 4 and G.m == 6
    with pytest.raises(io.ParseError):
        io.parse_graph("p edge 2 1\ne 1 3\n")
    with pytest.raises(io.ParseError):
        io.parse_graph("e 1 2\n")
    M = io.parse_graph("p edge 2 3\ne 1 1\ne 1 2\ne 1 2\n", multigraph=True)
    assert M.m == 3


def test_parse_other_formats():
    F = io.parse_cnf("c x\np cnf 3 2\n1 -2 0\n3 0\n")
    assert F.v == 3 and F.clauses == [[1, -2], [3]]
    A, B = io.parse_bool_pair("1 0\n0 1\n\n1 1\n")
    assert A == [[1, 0], [0, 1]] and B == [[1, 1]]
    assert io.parse_array("bits 3\n1 2 3 4\n") == ([1, 2, 3, 4], 3)
    fam, n = io.parse_setfamily("universe 3\n1 2\n3\n")
    assert n == 3 and fam == [0b011, 0b100]
    csp = io.parse_csp("6 2 1\n1 2 0,0 1,1 w=2\n")
    assert csp.constraints[0].allowed == {(0, 0), (1, 1)} and csp.constraints[0].weight == 2
    for bad, parser in (("1 2\n\n3\n", io.parse_bool_pair), ("p cnf 1 1\n2 0\n", io.parse_cnf),
                        ("1 x\n", io.parse_array), ("6 2 1\n1 1 0,0\n", io.parse_csp)):
        with pytest.raises(io.ParseError):
            parser(bad)


def test_digest_ignores_layout():
    assert io.digest(K4) == io.digest("\n" + K4.replace(" ", "   ").replace("\n", "  \n") + "\n\n")
    assert io.digest(K4) != io.digest(K3)
    assert io.fnv1a64(b"") == 0xCBF29CE484222325


def test_proof_file_roundtrip():
    pf = io.ProofFile("triangles#0", "abc", 101, 2, 4, [1, 2, 3])
    assert io.ProofFile.loads(pf.dumps()) == pf
    with pytest.raises(io.ParseError):
        io.ProofFile.loads(pf.dumps().replace("d 2", "d 3"))
    with pytest.raises(io.ParseError):
        io.ProofFile.loads("cpf 2\n")


def test_problem_tags():
    assert parse_tag("cliques:k=12") == ("cliques", {"k": 12})
    assert lookup("setpartition:t=3")[1] == {"t": 3, "ordered": 0}
    with pytest.raises(KeyError):
        lookup("nosuch")
    with pytest.raises(ValueError):
        lookup("cliques:j=3")


# -- command line ------------------------------------------------------------------

def test_prove_verify_roundtrip(inst, tmp_path, capsys):
    path = inst(K4)
    out = tmp_path / "proofs"
    code, text, _ = run(capsys, "prove", "--problem", "triangles", "--input", path, "--out", str(out))
    assert code == 0 and "answer 4" in text
    assert (out / "report.txt").exists() and list(out.glob("*.cpf"))
    code, text, _ = run(capsys, "verify", "--problem", "triangles", "--input", path,
                        "--proof", str(out))
    assert code == 0 and "verdict accept" in text and "answer 4" in text


def test_prove_chromatic_k3(inst, capsys):
    code, text, _ = run(capsys, "prove", "--problem", "chromatic", "--input", inst(K3))
    assert code == 0 and "answer t^3 - 3*t^2 + 2*t" in text


def test_prove_with_byzantine_node(inst, capsys):
    code, text, _ = run(capsys, "prove", "--problem", "cliques", "--input", inst(K7),
                        "--nodes", "8", "--points", "1400", "--byzantine", "5:random-corrupt")
    assert code == 0 and "answer 7" in text and "culprits [5]" in text


def test_prove_decode_failure(inst, capsys):
    code, text, _ = run(capsys, "prove", "--problem", "cliques", "--input", inst(K7),
                        "--nodes", "4", "--byzantine", "0,1:random-corrupt")
    assert code == 3 and "answer unavailable" in text


def test_tampered_proof_rejected(inst, tmp_path, capsys):
    path = inst(K7)
    out = tmp_path / "p"
    assert run(capsys, "prove", "--problem", "cliques", "--input", path, "--out", str(out))[0] == 0
    pf = sorted(out.glob("*.cpf"))[0]
    lines = pf.read_text().splitlines()
    q = int(lines[3].split()[1])
    lines[6] = str((int(lines[6]) + 1) % q)
    pf.write_text("\n".join(lines) + "\n")
    code, text, _ = run(capsys, "verify", "--problem", "cliques", "--input", path, "--proof", str(pf))
    assert code == 4 and "MISMATCH" in text and "verdict reject" in text


def test_wrong_instance_digest(inst, tmp_path, capsys):
    out = tmp_path / "p"
    run(capsys, "prove", "--problem", "triangles", "--input", inst(K4), "--out", str(out))
    code, text, _ = run(capsys, "verify", "--problem", "triangles", "--input", inst(K3, "k3.txt"),
                        "--proof", str(out))
    assert code == 5 and "digest" in text


def test_malformed_input(inst, capsys):
    code, _, err = run(capsys, "prove", "--problem", "triangles", "--input", inst("p edge x\n"))
    assert code == 2 and "error" in err
    assert run(capsys, "prove", "--problem", "nosuch", "--input", inst(K3))[0] == 2
    assert run(capsys, "prove")[0] == 2
    assert run(capsys, "prove", "--problem", "triangles", "--input", "/no/such/file")[0] == 2


def test_oracle_command(inst, capsys):
    assert run(capsys, "oracle", "--problem", "cliques", "--input", inst(K7)) == (0, "7\n", "")
    ones = inst("1 1 1 1\n1 1 1 1\n1 1 1 1\n1 1 1 1\n", "m.txt")
    assert run(capsys, "oracle", "--problem", "permanent", "--input", ones)[:2] == (0, "24\n")
    assert run(capsys, "oracle", "--problem", "tutte", "--input", inst(K3))[:2] == (0, "x^2 + x + y\n")


def test_oracle_guard(inst, capsys):
    big = "p cnf 40 1\n1 0\n"
    code, _, err = run(capsys, "oracle", "--problem", "cnfsat", "--input", inst(big))
    assert code == 6 and "guard" in err
    code, text, _ = run(capsys, "oracle", "--problem", "cnfsat", "--input", inst("p cnf 3 1\n1 0\n"),
                        "--oracle-guard-override", "10")
    assert code == 0 and text == "4\n"


def test_size_guard_on_prove(inst, capsys):
    n = 60
    text = f"p edge {n} 0\n"
    code, _, err = run(capsys, "prove", "--problem", "cliques:k=12", "--input", inst(text))
    assert code == 6


def test_selftest_command(capsys):
    code, text, _ = run(capsys, "selftest")
    assert code == 0 and "selftest passed" in text and "FAIL" not in text


def test_bench_command(capsys):
    code, text, _ = run(capsys, "bench", "--repeats", "1")
    assert code == 0 and "yates" in text and "(7/8)^t" in text


# -- corpus and bench helpers ------------------------------------------------------

def test_corpus_is_deterministic(tmp_path):
    assert instances("ov", 3, 1) == instances("ov", 3, 1)
    entries = write_corpus(tmp_path, per_problem=2)
    assert len(entries) == 2 * len(GENERATORS)
    back = read_manifest(tmp_path)
    assert [(t, p.relative_to(tmp_path)) for t, p in back] == entries


def test_bundled_corpus_parses():
    root = Path(__file__).resolve().parent.parent / "corpus"
    entries = read_manifest(root)
    assert {lookup(t)[0].name for t, _ in entries} == set(REGISTRY)
    for tag, path in entries:
        prob, _ = lookup(tag)
        prob.parse(path.read_text())


def test_kernel_table_agrees():
    rows = bench.kernel_table(repeats=1)
    assert rows and all(r["agree"] for r in rows)


def test_corpus_roundtrip_every_problem(tmp_path, capsys):
    root = Path(__file__).resolve().parent.parent / "corpus"
    seen = set()
    for tag, path in read_manifest(root):
        name = lookup(tag)[0].name
        if name in seen:
            continue
        seen.add(name)
        out = tmp_path / name
        code, text, err = run(capsys, "prove", "--problem", tag, "--input", str(path),
                              "--out", str(out))
        assert code == 0, (tag, err)
        answer = [ln for ln in text.splitlines() if ln.startswith("answer")][-1]
        code, text, err = run(capsys, "verify", "--problem", tag, "--input", str(path),
                              "--proof", str(out))
        assert code == 0 and "verdict accept" in text, (tag, err)
        assert text.rstrip().splitlines()[-1] == answer
    assert seen == set(REGISTRY)
