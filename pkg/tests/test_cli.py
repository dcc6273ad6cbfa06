import io
import json

import pytest

from gorhom.cli import main
from gorhom.homology import HomologyTable


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_algebra_info():
    code, out = run("algebra", "--file", "A.json", "info")
    assert code == 0
    assert out.splitlines()[0] == "dim=12 hilbert=1,5,5,1 gorenstein=true"
    code, out = run("algebra", "--file", "B.json", "info")
    assert out.splitlines()[0] == "dim=8 hilbert=1,4,3 gorenstein=false"


def test_ext_csv():
    code, out = run("ext", "--file", "A.json", "--M", "M", "--N", "T3", "--steps", "15")
    assert code == 0
    t = HomologyTable.from_csv(out)
    assert t.nonzero() == [0, 2, 3]
    code, again = run("ext", "--file", "A.json", "--M", "M", "--N", "T3", "--steps", "15")
    assert again == out  # byte-identical


def test_tor_bigraded_roundtrip():
    code, out = run("tor", "--M", "C", "--N", "T2", "--steps", "6", "--bigraded")
    t = HomologyTable.from_csv(out)
    assert t.nonzero(1, 6) == [1, 2]
    assert out.splitlines()[0] == "i,j,dim"


def test_resolve_with_series():
    code, out = run("resolve", "--module", "T3", "--steps", "3", "--series", "1,1-4*t+t^2")
    assert code == 0 and "series=match" in out and "linear=true p=0" in out
    code, out = run("resolve", "--module", "T3", "--steps", "3", "--series", "1,1-5*t")
    assert code == 1


def test_tate_and_scan():
    code, out = run("tate", "--N", "V", "--window", "2")
    lines = out.splitlines()
    assert lines[0] == "i,tor,ext" and len(lines) == 6
    assert all(l.split(",")[1] == "0" for l in lines[1:])
    code, out = run("scan", "--family", "Tq", "--q-range", "3..3")
    assert out.strip() == "q=3: nonzero={0,2,3} residues=n/a"
    code, out = run("scan", "--field", "F5", "--family", "T", "--q-range", "0..0", "--steps", "8")
    assert out.strip() == "q=0: nonzero={0,3,4,7,8} residues={0,3} mod 4"


def test_input_errors(tmp_path, capsys):
    assert run("ext", "--M", "M", "--N", "nope")[0] == 2
    assert "unknown module" in capsys.readouterr().err
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"field": {"kind": "Q"}, "variables": ["x"], "relations": ["x^2 + x"]}))
    assert run("algebra", "--file", str(p))[0] == 2
    assert "/relations/0" in capsys.readouterr().err
    assert run("algebra", "--file", str(tmp_path / "none.json"))[0] == 2
    assert run("scan", "--q-range", "x")[0] == 2
    assert run("bogus")[0] == 2
    assert run("algebra", "--field", "R")[0] == 2


def test_reproduce_small(tmp_path):
    out = tmp_path / "r.json"
    code, text = run("reproduce", "--field", "F5", "--alpha", "2", "--steps", "8", "--window", "4",
                     "--out", str(out))
    assert code == 0, text
    rep = json.loads(out.read_text())
    assert rep["passed"] and rep["failed"] == 0
    assert all(c["provenance"] in ("PAPER", "DERIVED", "TRIVIAL") for c in rep["checks"])
    code2, text2 = run("reproduce", "--field", "F5", "--alpha", "2", "--steps", "8", "--window", "4",
                       "--out", str(tmp_path / "r2.json"))
    assert (tmp_path / "r2.json").read_text() == out.read_text()
