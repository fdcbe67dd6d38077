import json

import pytest

from markov_cluster import cli
from markov_cluster import poset as po
from markov_cluster import skein as sk
from markov_cluster.farey import Frac


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_var(capsys):
    code, out, _ = run(capsys, "var", "--frac", "1/2", "--k", "0,0,0")
    assert code == 0
    assert out.startswith("x_{1,1/2} = ")
    code, out, _ = run(capsys, "var", "--frac", "1/2", "--json")
    obj = json.loads(out)
    assert obj["frac"] == "1/2" and obj["branch"] == 1
    from markov_cluster.laurent import LaurentPoly
    assert LaurentPoly.from_json_obj(obj["value"]).at_one() == 5


def test_var_principal(capsys):
    code, out, _ = run(capsys, "var", "--frac", "2/3", "--k", "0,2,3", "--principal")
    assert code == 0 and "y" in out


@pytest.mark.parametrize("family", cli.FAMILIES)
def test_matrix_families(capsys, family):
    code, out, _ = run(capsys, "matrix", "--family", family, "--frac", "2/3", "--k", "0,2,3", "--json")
    assert code == 0
    assert json.loads(out)["family"] == family


def test_matrix_dual_flag(capsys):
    _, a, _ = run(capsys, "matrix", "--family", "cohn", "--dual", "--frac", "2/3", "--json")
    _, b, _ = run(capsys, "matrix", "--family", "dual-cohn", "--frac", "2/3", "--json")
    assert a == b
    code, _, err = run(capsys, "matrix", "--family", "mwm", "--dual", "--frac", "2/3")
    assert code == 2 and "dual" in err


@pytest.mark.parametrize("family", ["cohn", "mm", "dual-cohn", "dual-mm"])
def test_triple_validates(capsys, family):
    code, out, _ = run(capsys, "triple", "--farey", "3/5", "--family", family, "--k", "1,2,2", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["fracs"] == ["1/2", "3/5", "2/3"]
    assert obj["validation"]["valid"]


def test_triple_needs_interior(capsys):
    code, _, err = run(capsys, "triple", "--farey", "1/0")
    assert code == 2


def test_markov(capsys):
    code, out, _ = run(capsys, "markov", "--depth", "2", "--json")
    assert code == 0
    obj = json.loads(out)
    entries = {v for n in obj["nodes"] for v in n["triple"]}
    assert {1, 2, 5, 13, 29} <= entries
    assert obj["nodes"][0]["triple"] == [1, 1, 1]
    assert obj["failures"] == 0
    code, out, _ = run(capsys, "markov", "--k", "1,1,1", "--depth", "1")
    assert code == 0 and "GM FAILS" not in out


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "cohn-identities", "--depth", "2", "--k", "0,0,0")
    assert code == 0 and "0 failures" in out
    code, out, _ = run(capsys, "verify", "poset-vs-mutation", "--depth", "0", "--json")
    assert code == 0 and json.loads(out)["ok"]


def test_verify_reports_failure(capsys, monkeypatch):
    from markov_cluster import verify as vf
    monkeypatch.setitem(vf.SUITES, "broken", lambda d, ks, o: [("i", lambda: [("eq", 1, 2)])])
    code, out, _ = run(capsys, "verify", "broken", "--depth", "0", "--json")
    assert code == 1
    assert json.loads(out)["failures"][0]["identity"] == "eq"


def test_usage_errors(capsys, monkeypatch):
    assert run(capsys, "verify", "nope")[0] == 2
    assert run(capsys, "var", "--frac", "2/4")[0] == 2
    assert run(capsys, "var", "--frac", "1/2", "--k", "1,2")[0] == 2
    assert run(capsys, "var", "--frac", "x")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys)[0] == 2
    monkeypatch.setenv("MCL_MAX_DEPTH", "3")
    code, _, err = run(capsys, "verify", "gm-equation", "--depth", "4")
    assert code == 2 and "MCL_MAX_DEPTH" in err
    assert run(capsys, "markov", "--depth", "4")[0] == 2


def test_export_poset_dot(capsys, tmp_path):
    out = tmp_path / "p.dot"
    code, _, _ = run(capsys, "export", "poset", "--frac", "2/3", "--k", "0,2,3", "--format", "dot", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert text.startswith("digraph")
    assert text.count("[label=") == 10


def test_export_matrix_and_var(capsys):
    code, out, _ = run(capsys, "export", "matrix", "--family", "cohn", "--frac", "1/0")
    assert code == 0
    assert len(json.loads(out)["matrix"]) == 2
    code, out, _ = run(capsys, "export", "var", "--frac", "1/2", "--k", "0,0,0")
    assert code == 0 and json.loads(out)["frac"] == "1/2"
    assert run(capsys, "export", "var", "--frac", "1/2", "--format", "dot")[0] == 2


def test_output_is_deterministic(capsys):
    for argv in (["export", "poset", "--frac", "3/5", "--k", "1,2,2", "--principal"],
                 ["markov", "--depth", "3", "--k", "0,1,2", "--json"],
                 ["verify", "asymmetry", "--depth", "2", "--json"]):
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second


def _write(tmp_path, name, p):
    path = tmp_path / name
    path.write_text(p.to_json())
    return str(path)


def test_skein_crossing(capsys, tmp_path):
    p1, p2 = sk.example_crossing()
    a, b = _write(tmp_path, "a.json", p1), _write(tmp_path, "b.json", p2)
    code, out, _ = run(capsys, "skein", "--kind", "crossing", "--input", a, b)
    assert code == 0 and "overlap" in out
    code, out, _ = run(capsys, "skein", "--kind", "crossing", "--input", a, b, "--resolve")
    obj = json.loads(out)
    assert code == 0 and obj["verdict"] == "identity holds"


def test_skein_graft_and_kiss(capsys, tmp_path):
    k = po.KParams(0, 2, 3)
    a = _write(tmp_path, "p.json", po.build_P(Frac(2, 3), k, po.PRINCIPAL))
    h = _write(tmp_path, "h.json", po.build_H(k, po.PRINCIPAL))
    code, out, _ = run(capsys, "skein", "--kind", "graft", "--input", a, h, "--resolve")
    assert code == 0 and json.loads(out)["verdict"] == "identity holds"
    kp = _write(tmp_path, "k.json", sk.example_kiss())
    code, out, _ = run(capsys, "skein", "--kind", "reverse-kissing", "--input", kp, "--resolve", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "identity holds"


def test_skein_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run(capsys, "skein", "--kind", "reverse-kissing", "--input", str(bad))[0] == 2
    assert run(capsys, "skein", "--kind", "reverse-kissing", "--input", str(tmp_path / "missing.json"))[0] == 2
    p1, _ = sk.example_crossing()
    a = _write(tmp_path, "a.json", p1)
    assert run(capsys, "skein", "--kind", "crossing", "--input", a)[0] == 2


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "markov_cluster", "var", "--frac", "1/1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("x_{1,1/1}")
