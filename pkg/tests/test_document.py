import json

import pytest

from gorhom.document import DocumentError, build_document, bundled, load_document, validate


def test_bundled_documents():
    a = bundled("A.json")
    assert len(a.variables) == 5 and len(a.relations) == 10
    b = bundled("B.json")
    assert len(b.variables) == 4 and len(b.relations) == 7
    assert list(b.algebra.hilbert) == [1, 4, 3]


def test_roundtrip():
    a = bundled("A.json")
    again = build_document(json.loads(a.to_json()))
    assert again.to_json() == a.to_json()
    assert list(again.algebra.hilbert) == [1, 5, 5, 1]


def test_modules_and_families():
    a = bundled("A.json")
    assert a.module("T3").hilbert() == {0: 1, 1: 1}
    assert a.module("T-1").hilbert() == {0: 1, 1: 1}
    assert a.module("V").hilbert() == {0: 2, 1: 2}
    assert a.module("Vdual").hilbert() == {-1: 2, 0: 2}
    assert a.family("C").d(3).source.degrees == [4, 4]
    with pytest.raises(DocumentError) as e:
        a.module("nope")
    assert e.value.pointer == "/modules"
    with pytest.raises(DocumentError):
        a.family("T")


def test_schema_pointers(tmp_path):
    with pytest.raises(DocumentError) as e:
        validate({"field": {"kind": "Q"}, "variables": ["x"], "relations": [3]})
    assert e.value.pointer == "/relations/0"
    with pytest.raises(DocumentError) as e:
        validate({"field": {"kind": "R"}, "variables": ["x"], "relations": []})
    assert e.value.pointer == "/field/kind"
    with pytest.raises(DocumentError) as e:
        validate([])
    p = tmp_path / "empty.json"
    p.write_text("")
    with pytest.raises(DocumentError):
        load_document(p)
    p.write_text("{ not json")
    with pytest.raises(DocumentError):
        load_document(p)
    with pytest.raises(DocumentError):
        load_document(tmp_path / "missing.json")


def test_semantic_errors():
    base = {"field": {"kind": "Q"}, "variables": ["x", "y"], "relations": ["x^2", "y^2", "x*y"]}
    with pytest.raises(DocumentError) as e:
        build_document(dict(base, relations=["x^2 + y"]))
    assert e.value.pointer == "/relations/0"
    with pytest.raises(DocumentError) as e:
        build_document(dict(base, relations=["x*y"], cap=5))
    assert e.value.pointer == "/cap"
    with pytest.raises(DocumentError) as e:
        build_document(dict(base, alpha="0"))
    assert e.value.pointer == "/alpha"
    doc = build_document(dict(base, modules={"W": {"cokernel": [["x", "z"]]}}))
    with pytest.raises(DocumentError) as e:
        doc.module("W")
    assert e.value.pointer == "/modules/W"


def test_field_override():
    a = bundled("A.json", field={"kind": "Fp", "p": 5}, alpha=3)
    assert a.algebra.field.p == 5
    assert a.raw["alpha"] == "3"
