"""Workspace documents: one JSON file describes an algebra and named objects.

Schema (informal)::

    {
      "name": "A",
      "field": {"kind": "Q"} | {"kind": "Fp", "p": 5},
      "alpha": "2",
      "variables": ["x1", ...],
      "relations": ["a*x1*x3 + x2*x3", ...],
      "cap": 10,
      "modules":  {"M": {"image": [["x1","x3"],["x4","x2"]]}, ...},
      "families": {"T": {"cyclic": ["x1-a^q*x3", ...], "param": "q"},
                   "C": {"complex": [["x1","a^i*x3"],["x4","x2"]], "shift": 1}},
      "defaults": {"steps": 15, "window": 8}
    }

Module declarations are one of ``cokernel``/``image``/``kernel`` (a matrix
of polynomial strings, optional ``target_degrees``/``source_degrees``),
``cyclic`` (ideal generators), ``sum`` (names), ``dual`` (a name, with
``kind`` star or matlis) and ``quotient`` (a name, ``ideal`` generators and
an optional power ``mpower`` of the maximal ideal).
A module family with parameter ``q`` is referenced as ``T3``, ``T-1``.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path

import jsonschema

from .gradedalg import AlgebraPresentation, GradedAlgebra
from .gradedmod import (AlgebraMatrix, ExplicitModule, cyclic_quotient, direct_sum, matlis_dual,
                        quotient_by_ideal, realize_cokernel, realize_image, realize_kernel, star_dual)
from .homology import CompleteResolutionFamily
from .polyparse import ParseError
from .scalar import FieldError, InvalidUnitError, field_from_spec


class DocumentError(ValueError):
    """Input error with a JSON-pointer path."""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer or "/"
        super().__init__(f"{self.pointer}: {message}")


_matrix = {"type": "array", "minItems": 1,
           "items": {"type": "array", "minItems": 1, "items": {"type": ["string", "integer"]}}}
_ints = {"type": "array", "items": {"type": "integer"}}
_strings = {"type": "array", "items": {"type": "string"}}

_module_decl = {
    "type": "object",
    "oneOf": [
        {"required": ["cokernel"]}, {"required": ["image"]}, {"required": ["kernel"]},
        {"required": ["cyclic"]}, {"required": ["sum"]}, {"required": ["dual"]},
        {"required": ["quotient"]},
    ],
    "properties": {
        "cokernel": _matrix, "image": _matrix, "kernel": _matrix,
        "target_degrees": _ints, "source_degrees": _ints,
        "cyclic": _strings, "degree": {"type": "integer"},
        "sum": {"type": "array", "items": {"type": "string"}},
        "dual": {"type": "string"}, "kind": {"enum": ["star", "matlis"]},
        "quotient": {"type": "string"}, "ideal": _strings, "mpower": {"type": "integer", "minimum": 1},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}

_family_decl = {
    "type": "object",
    "oneOf": [{"required": ["complex"]}, {"required": ["cyclic"]}],
    "properties": {
        "complex": _matrix, "shift": {"type": "integer"},
        "cyclic": _strings, "param": {"type": "string", "pattern": "^[a-z]$"},
        "degree": {"type": "integer"},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "required": ["field", "variables", "relations"],
    "properties": {
        "name": {"type": "string"},
        "field": {
            "type": "object",
            "required": ["kind"],
            "properties": {"kind": {"enum": ["Q", "Fp"]}, "p": {"type": "integer", "minimum": 2}},
            "additionalProperties": False,
        },
        "alpha": {"type": ["string", "integer"]},
        "variables": {"type": "array", "minItems": 1, "uniqueItems": True,
                      "items": {"type": "string", "pattern": "^[A-Za-z_][A-Za-z0-9_]*$"}},
        "relations": _strings,
        "cap": {"type": "integer", "minimum": 1},
        "modules": {"type": "object", "additionalProperties": _module_decl},
        "families": {"type": "object", "additionalProperties": _family_decl},
        "defaults": {"type": "object", "properties": {"steps": {"type": "integer", "minimum": 0},
                                                       "window": {"type": "integer", "minimum": 0}},
                     "additionalProperties": False},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}


def _pointer(path) -> str:
    return "/" + "/".join(str(p).replace("~", "~0").replace("/", "~1") for p in path) if path else "/"


@dataclass
class WorkspaceDocument:
    raw: dict
    path: str | None = None
    algebra: GradedAlgebra | None = None
    _modules: dict = dc_field(default_factory=dict)
    _families: dict = dc_field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.raw.get("name", "R")

    @property
    def variables(self) -> list[str]:
        return list(self.raw["variables"])

    @property
    def relations(self) -> list[str]:
        return list(self.raw["relations"])

    def module_names(self) -> list[str]:
        return sorted(self.raw.get("modules", {}))

    def family_names(self) -> list[str]:
        return sorted(self.raw.get("families", {}))

    def to_json(self) -> str:
        return json.dumps(self.raw, indent=2) + "\n"

    # -- objects ---------------------------------------------------------------
    def module(self, name: str) -> ExplicitModule:
        if name in self._modules:
            return self._modules[name]
        decls = self.raw.get("modules", {})
        if name in decls:
            mod = self._build_module(name, decls[name], f"/modules/{_esc(name)}")
        else:
            mod = self._family_member(name)
        self._modules[name] = mod
        return mod

    def family(self, name: str) -> CompleteResolutionFamily:
        if name in self._families:
            return self._families[name]
        decl = self.raw.get("families", {}).get(name)
        if decl is None or "complex" not in decl:
            raise DocumentError("/families", f"no complex family named {name!r}")
        ptr = f"/families/{_esc(name)}"
        try:
            fam = CompleteResolutionFamily(self.algebra, decl["complex"], decl.get("shift", 1), name=name)
            fam.d(0)
            fam.d(1)
        except (ParseError, ValueError) as exc:
            raise DocumentError(ptr + "/complex", str(exc)) from exc
        self._families[name] = fam
        return fam

    def _family_member(self, name: str) -> ExplicitModule:
        m = re.fullmatch(r"([A-Za-z_]+?)(-?\d+)", name)
        fams = self.raw.get("families", {})
        if not m or m.group(1) not in fams or "cyclic" not in fams[m.group(1)]:
            known = ", ".join(self.module_names() + [f + "<q>" for f in self.family_names()
                                                     if "cyclic" in fams[f]])
            raise DocumentError("/modules", f"unknown module {name!r} (known: {known})")
        decl = fams[m.group(1)]
        q = int(m.group(2))
        ptr = f"/families/{_esc(m.group(1))}"
        try:
            return cyclic_quotient(self.algebra, decl["cyclic"], name=name, degree=decl.get("degree", 0),
                                   params={decl.get("param", "q"): q})
        except (ParseError, ValueError) as exc:
            raise DocumentError(ptr + "/cyclic", str(exc)) from exc

    def _build_module(self, name: str, decl: dict, ptr: str) -> ExplicitModule:
        alg = self.algebra
        try:
            for kind, fn in (("cokernel", realize_cokernel), ("image", realize_image), ("kernel", realize_kernel)):
                if kind in decl:
                    mat = AlgebraMatrix.from_polynomials(alg, decl[kind], decl.get("target_degrees"),
                                                         decl.get("source_degrees"))
                    return fn(alg, mat, name=name)
            if "cyclic" in decl:
                return cyclic_quotient(alg, decl["cyclic"], name=name, degree=decl.get("degree", 0))
            if "sum" in decl:
                return direct_sum([self.module(n) for n in decl["sum"]], name=name)
            if "dual" in decl:
                base = self.module(decl["dual"])
                if decl.get("kind", "star") == "matlis":
                    return matlis_dual(base, name=name)
                return star_dual(base, name=name)
            if "quotient" in decl:
                base = self.module(decl["quotient"])
                return quotient_by_ideal(base, decl.get("ideal", []), decl.get("mpower"), name=name)
        except DocumentError:
            raise
        except (ParseError, ValueError) as exc:
            raise DocumentError(ptr, str(exc)) from exc
        raise DocumentError(ptr, "empty module declaration")  # pragma: no cover


def _esc(s: str) -> str:
    return s.replace("~", "~0").replace("/", "~1")


def validate(raw) -> None:
    if not isinstance(raw, dict):
        raise DocumentError("/", "document must be a JSON object")
    v = jsonschema.Draft7Validator(SCHEMA)
    errs = sorted(v.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errs:
        e = errs[0]
        raise DocumentError(_pointer(e.absolute_path), e.message)


def build_document(raw: dict, path=None, field=None, alpha=None) -> WorkspaceDocument:
    """Validate ``raw`` and construct its algebra (field/alpha may be overridden)."""
    validate(raw)
    raw = copy.deepcopy(raw)
    if field is not None:
        raw["field"] = field if isinstance(field, dict) else field.to_spec()
    if alpha is not None:
        raw["alpha"] = str(alpha)
    try:
        fld = field_from_spec(raw["field"])
    except (FieldError, ValueError) as exc:
        raise DocumentError("/field", str(exc)) from exc
    al = raw.get("alpha")
    try:
        a = None if al is None else fld(str(al))
    except (FieldError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError("/alpha", str(exc)) from exc
    if a is not None and fld.is_zero(a):
        raise DocumentError("/alpha", "a must be a nonzero element")
    polys = []
    from .polyparse import parse
    for k, r in enumerate(raw["relations"]):
        try:
            polys.append(parse(r, raw["variables"], fld, alpha=a, homogeneous=True))
        except ParseError as exc:
            raise DocumentError(f"/relations/{k}", str(exc)) from exc
    try:
        pres = AlgebraPresentation(fld, tuple(raw["variables"]), polys, a, raw.get("cap", 10), raw.get("name", "R"))
        alg = GradedAlgebra(pres)
    except (ValueError, RuntimeError) as exc:
        ptr = "/cap" if "cap" in type(exc).__name__.lower() or "cap" in str(exc) else "/relations"
        raise DocumentError(ptr, str(exc)) from exc
    return WorkspaceDocument(raw, str(path) if path else None, alg)


def load_document(path, field=None, alpha=None) -> WorkspaceDocument:
    p = Path(path)
    if not p.exists():
        bundled = bundled_path(p.name)
        if bundled is None:
            raise DocumentError("/", f"file not found: {path}")
        p = bundled
    text = p.read_text()
    if not text.strip():
        raise DocumentError("/", "empty document")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("/", f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return build_document(raw, p, field, alpha)


def bundled_path(name: str) -> Path | None:
    p = Path(str(resources.files("gorhom") / "data" / name))
    return p if p.exists() else None


def bundled(name: str, field=None, alpha=None) -> WorkspaceDocument:
    p = bundled_path(name)
    if p is None:
        raise DocumentError("/", f"no bundled document {name}")
    return load_document(p, field, alpha)
