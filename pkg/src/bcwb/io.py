"""JSON formats: result documents, dimension tables, Hodge diamonds, surfaces.

Every document carries ``"schema": "bcwb/1"``; unknown fields are rejected.
Degree-indexed arrays are written as ``{"k_min": k0, "values": [...]}``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import jsonschema

from .cohomology import CohomologySpace, MapSummary
from .diamond import DimTables, HodgeDiamond, Series, SurfaceData
from .exterior import format_form

SCHEMA_VERSION = "bcwb/1"


class SchemaError(ValueError):
    pass


_INT = {"type": "integer"}
_NAT = {"type": "integer", "minimum": 0}
_GRID = {"type": "array", "items": {"type": "array", "items": _NAT}}
_SERIES = {
    "type": "object",
    "properties": {"k_min": _INT, "values": {"type": "array", "items": _INT}},
    "required": ["k_min", "values"],
    "additionalProperties": False,
}
_NAT_SERIES = {**_SERIES, "properties": {"k_min": _INT, "values": {"type": "array", "items": _NAT}}}
_HEADER = {"schema": {"const": SCHEMA_VERSION}}

SCHEMAS = {
    "hodge_diamond": {
        "type": "object",
        "properties": {**_HEADER, "kind": {"const": "hodge_diamond"}, "name": {"type": "string"}, "h": _GRID},
        "required": ["schema", "kind", "h"],
        "additionalProperties": False,
    },
    "surface": {
        "type": "object",
        "properties": {
            **_HEADER,
            "kind": {"const": "surface"},
            "name": {"type": "string"},
            **{k: _NAT for k in ("h10", "h01", "h20", "h11_dol", "h11_bc", "b1")},
            "chi_top": _INT,
            "chi_O": _INT,
        },
        "required": ["schema", "kind", "h10", "h01", "h20", "h11_dol", "h11_bc", "b1", "chi_top", "chi_O"],
        "additionalProperties": False,
    },
    "dim_tables": {
        "type": "object",
        "properties": {
            **_HEADER,
            "kind": {"const": "dim_tables"},
            "name": {"type": "string"},
            "n": _NAT,
            "closed": {"type": "boolean"},
            "betti": _NAT_SERIES,
            "hyper_bc": {
                "type": "object",
                "patternProperties": {r"^-?\d+,-?\d+$": _NAT_SERIES},
                "additionalProperties": False,
            },
            "hyper_c": {
                "type": "object",
                "patternProperties": {r"^-?\d+$": _NAT_SERIES},
                "additionalProperties": False,
            },
            "hodge": _GRID,
            "bc": _GRID,
            "aeppli": _GRID,
            "provenance": {
                "type": "object",
                "additionalProperties": {"enum": ["engine", "kahler", "user", "predicted"]},
            },
        },
        "required": ["schema", "kind", "n", "betti"],
        "additionalProperties": False,
    },
}

_GROUP = {
    "type": "object",
    "properties": {
        "kind": {"type": "string"},
        "indices": {"type": "array", "items": _INT},
        "dim": _NAT,
        "generators": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["kind", "indices", "dim", "generators"],
    "additionalProperties": False,
}
_MAP = {
    "type": "object",
    "properties": {
        "src": {"type": "array", "prefixItems": [{"type": "string"}], "items": _INT},
        "dst": {"type": "array", "prefixItems": [{"type": "string"}], "items": _INT},
        "rank": _NAT,
        "ker_dim": _NAT,
        "coker_dim": _NAT,
        "ker_generators": {"type": "array", "items": {"type": "string"}},
        "coker_generators": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["src", "dst", "rank", "ker_dim", "coker_dim", "ker_generators", "coker_generators"],
    "additionalProperties": False,
}
SCHEMAS["result"] = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "model": {
            "type": "object",
            "properties": {"name": {"type": "string"}, "n": _NAT, "source_sha256": {"type": "string"}},
            "required": ["name", "n", "source_sha256"],
            "additionalProperties": False,
        },
        "tables": {
            "type": "object",
            "properties": {
                "betti": _NAT_SERIES,
                "hodge": _GRID,
                "bc": _GRID,
                "aeppli": _GRID,
                "hyper_c1": _NAT_SERIES,
                "hyper_bc11": _NAT_SERIES,
                "spade": _SERIES,
                "club": _SERIES,
                "delta_bc_dol": {"type": "array", "items": {"type": "array", "items": _INT}},
                "nk_degree": _NAT_SERIES,
                "ddbar_lemma": {"type": "boolean"},
                "frolicher_e1": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "groups": {"type": "object", "additionalProperties": _GROUP},
        "maps": {
            "type": "object",
            "properties": {
                "C": {"type": "object", "additionalProperties": _MAP},
                "I": {"type": "object", "additionalProperties": _MAP},
            },
            "additionalProperties": False,
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "structural": {"type": "boolean"},
                    "detail": {"type": "string"},
                },
                "required": ["name", "passed", "structural", "detail"],
                "additionalProperties": False,
            },
        },
        "diamond": {
            "type": "object",
            "properties": {
                "mode": {"enum": ["kahler", "surface"]},
                "tables": SCHEMAS["dim_tables"],
                "spade": _SERIES,
                "club": _SERIES,
            },
            "required": ["mode", "spade"],
            "additionalProperties": False,
        },
        "blowup": {
            "type": "object",
            "properties": {
                "codim": _NAT,
                "predicted": SCHEMAS["dim_tables"],
                "spade": {"type": "object"},
                "club": {"type": "object"},
                "betti_gain": _SERIES,
                "checks": {"type": "array"},
                "verdict": {"type": "boolean"},
            },
            "required": ["codim", "predicted", "verdict"],
            "additionalProperties": False,
        },
    },
    "required": ["schema_version"],
    "additionalProperties": False,
}


_VALIDATORS = {k: jsonschema.Draft202012Validator(s) for k, s in SCHEMAS.items()}


def validate(doc, kind: str) -> None:
    try:
        _VALIDATORS[kind].validate(doc)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{kind} document invalid at {where}: {e.message}") from None


def dumps(doc) -> str:
    """Canonical text: 2-space indent, insertion order, trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, kind: str | None = None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: line {e.lineno}, column {e.colno}: {e.msg}") from None
    if kind is not None:
        validate(doc, kind)
    return doc


def detect_kind(doc) -> str:
    if isinstance(doc, dict):
        if "schema_version" in doc:
            return "result"
        if doc.get("kind") in SCHEMAS:
            return doc["kind"]
    raise SchemaError("cannot tell document kind (missing or unknown 'kind')")


# ---------------------------------------------------------------------------
# encoders / decoders


def series_json(s: Series) -> dict:
    return {"k_min": s.k_min, "values": list(s.values)}


def series_from_json(d) -> Series:
    return Series(d["k_min"], tuple(d["values"]))


def vector_json(values, k_min: int) -> dict:
    return {"k_min": k_min, "values": list(values)}


def tables_to_json(T: DimTables, name: str | None = None) -> dict:
    out = {"schema": SCHEMA_VERSION, "kind": "dim_tables"}
    if name is not None:
        out["name"] = name
    out.update({"n": T.n, "closed": T.closed, "betti": series_json(T.betti)})
    out["hyper_bc"] = {f"{p},{q}": series_json(s) for (p, q), s in sorted(T.hyper_bc.items())}
    out["hyper_c"] = {str(p): series_json(s) for p, s in sorted(T.hyper_c.items())}
    for key in ("hodge", "bc", "aeppli"):
        grid = getattr(T, key)
        if grid is not None:
            out[key] = [list(r) for r in grid]
    if T.provenance:
        out["provenance"] = dict(sorted(T.provenance.items()))
    return out


def tables_from_json(doc) -> DimTables:
    validate(doc, "dim_tables")
    prov = {"betti": "user", "hyper_bc": "user", "hyper_c": "user"}
    prov.update(doc.get("provenance", {}))
    try:
        return DimTables(
            n=doc["n"],
            betti=series_from_json(doc["betti"]),
            hyper_bc={tuple(int(x) for x in k.split(",")): series_from_json(v) for k, v in doc.get("hyper_bc", {}).items()},
            hyper_c={int(k): series_from_json(v) for k, v in doc.get("hyper_c", {}).items()},
            hodge=doc.get("hodge"),
            bc=doc.get("bc"),
            aeppli=doc.get("aeppli"),
            closed=doc.get("closed", True),
            provenance=prov,
        )
    except ValueError as e:
        raise SchemaError(str(e)) from None


def diamond_from_json(doc) -> HodgeDiamond:
    validate(doc, "hodge_diamond")
    try:
        return HodgeDiamond.from_rows(doc["h"])
    except ValueError as e:
        raise SchemaError(str(e)) from None


def surface_from_json(doc) -> SurfaceData:
    validate(doc, "surface")
    return SurfaceData(**{k: doc[k] for k in ("h10", "h01", "h20", "h11_dol", "h11_bc", "b1", "chi_top", "chi_O")})


def group_json(G: CohomologySpace) -> dict:
    return {
        "kind": G.kind,
        "indices": list(G.indices),
        "dim": G.dim,
        "generators": [format_form(f) for f in G.generators],
    }


def map_json(S: MapSummary) -> dict:
    return {
        "src": [S.src.kind, *S.src.indices],
        "dst": [S.dst.kind, *S.dst.indices],
        "rank": S.rank,
        "ker_dim": S.ker_dim,
        "coker_dim": S.coker_dim,
        "ker_generators": [format_form(f) for f in S.ker_generators],
        "coker_generators": [format_form(f) for f in S.coker_generators],
    }


def source_hash(text: str | None) -> str:
    return hashlib.sha256((text or "").encode("utf-8")).hexdigest()


@dataclass
class ResultDocument:
    """In-memory form of a result file; ``parse(doc.to_json()) == doc``."""

    model: dict | None = None
    tables: dict | None = None
    groups: dict | None = None
    maps: dict | None = None
    checks: list | None = None
    diamond: dict | None = None
    blowup: dict | None = None
    schema_version: str = field(default=SCHEMA_VERSION)

    _ORDER = ("schema_version", "model", "tables", "groups", "maps", "checks", "diamond", "blowup")

    def to_dict(self) -> dict:
        out = {}
        for key in self._ORDER:
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        return out

    def to_json(self) -> str:
        d = self.to_dict()
        validate(d, "result")
        return dumps(d)

    @classmethod
    def parse(cls, text: str) -> "ResultDocument":
        d = loads(text, "result")
        return cls(**{k: d.get(k) for k in cls._ORDER if k != "schema_version"}, schema_version=d["schema_version"])
