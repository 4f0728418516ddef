"""
Reading and writing spec documents.

A spec document is JSON with ``schema_version`` ``"1"``. Polynomial
coefficients are listed from the constant term upward and written as
strings (``"3/2"``, ``"-4"``) so that they stay exact; floats are refused.
"""

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .bundle import (
    BaseCurve,
    BaseKind,
    CircleData,
    ConicBundleSpec,
    Transformation,
    TransformationKind,
)
from .config import DEFAULT_REFINE_BITS, SCHEMA_VERSION
from .decide import (
    ClosedSurface,
    CRationalKind,
    MapDescriptor,
    RationalTargetDescriptor,
)
from .errors import InvalidInput, SchemaError
from .exactpoly import Polynomial, RationalFunction, to_rational

logger = logging.getLogger(__name__)

_INTEGER = re.compile(r"[+-]?\d+")

TOP_LEVEL_KEYS = {
    "schema_version",
    "base",
    "g",
    "transformations",
    "maps",
    "rational_targets",
    "c_rational_kind",
}


@dataclass(frozen=True)
class SpecDocument:
    """A parsed and validated spec document."""

    spec: ConicBundleSpec
    maps: tuple[MapDescriptor, ...] = ()
    rational_targets: tuple[RationalTargetDescriptor, ...] = ()
    c_rational_kind: Optional[CRationalKind] = None
    schema_version: str = SCHEMA_VERSION

    def map_named(self, name: str) -> MapDescriptor:
        for f in self.maps:
            if f.name == name:
                return f
        known = [f.name for f in self.maps]
        raise InvalidInput(f"no map named {name!r} in the document (maps: {known})", "io")


class _Reader:
    """Walks a decoded document, collecting ``(location, message)`` issues."""

    def __init__(self):
        self.issues: list[tuple[str, str]] = []

    def fail(self, loc: str, msg: str) -> None:
        self.issues.append((loc, msg))

    def mapping(self, value, loc: str, required=(), optional=()) -> Optional[dict]:
        if not isinstance(value, dict):
            self.fail(loc, f"expected an object, got {type(value).__name__}")
            return None
        for key in required:
            if key not in value:
                self.fail(f"{loc}.{key}", "required field is missing")
        for key in sorted(set(value) - set(required) - set(optional)):
            self.fail(f"{loc}.{key}", "unknown field")
        return value

    def sequence(self, value, loc: str) -> list:
        if not isinstance(value, list):
            self.fail(loc, f"expected a list, got {type(value).__name__}")
            return []
        return value

    def integer(self, value, loc: str) -> Optional[int]:
        if isinstance(value, float):
            self.fail(loc, f"floats are not exact, got {value!r}")
            return None
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, str) and _INTEGER.fullmatch(value.strip()):
            return int(value)
        self.fail(loc, f"expected an integer, got {value!r}")
        return None

    def rational(self, value, loc: str) -> Optional[Fraction]:
        if isinstance(value, float):
            self.fail(loc, f"floats are not exact; write {value!r} as a rational string like \"3/2\"")
            return None
        try:
            return to_rational(value.strip() if isinstance(value, str) else value)
        except InvalidInput as e:
            self.fail(loc, e.detail)
            return None

    def string(self, value, loc: str) -> Optional[str]:
        if not isinstance(value, str):
            self.fail(loc, f"expected a string, got {value!r}")
            return None
        return value

    def coefficients(self, value, loc: str) -> Optional[Polynomial]:
        items = self.sequence(value, loc)
        values = [self.rational(v, f"{loc}[{i}]") for i, v in enumerate(items)]
        if not items or any(v is None for v in values):
            if not items and isinstance(value, list):
                self.fail(loc, "empty coefficient list")
            return None
        return Polynomial(tuple(values))


def _read_base(r: _Reader, raw) -> Optional[BaseCurve]:
    body = r.mapping(raw, "$.base", required=("kind",), optional=("genus", "real_circle_count"))
    if body is None or "kind" not in body:
        return None
    kind = r.string(body["kind"], "$.base.kind")
    if kind not in {k.value for k in BaseKind}:
        if kind is not None:
            r.fail("$.base.kind", f"expected one of {[k.value for k in BaseKind]}, got {kind!r}")
        return None
    if kind == BaseKind.EXPLICIT_P1.value:
        genus = r.integer(body.get("genus", 0), "$.base.genus")
        circles = r.integer(body.get("real_circle_count", 1), "$.base.real_circle_count")
    else:
        for key in ("genus", "real_circle_count"):
            if key not in body:
                r.fail(f"$.base.{key}", "required for an abstract base")
        genus = r.integer(body.get("genus", 0), "$.base.genus")
        circles = r.integer(body.get("real_circle_count", 0), "$.base.real_circle_count")
    if genus is None or circles is None:
        return None
    return BaseCurve(BaseKind(kind), genus, circles)


def _read_g(r: _Reader, raw):
    body = r.mapping(raw, "$.g", optional=("explicit", "abstract"))
    if body is None:
        return None
    if ("explicit" in body) == ("abstract" in body):
        r.fail("$.g", "give exactly one of 'explicit' or 'abstract'")
        return None
    if "explicit" in body:
        loc = "$.g.explicit"
        explicit = r.mapping(body["explicit"], loc, required=("numerator",), optional=("denominator",))
        if explicit is None or "numerator" not in explicit:
            return None
        num = r.coefficients(explicit["numerator"], f"{loc}.numerator")
        den = r.coefficients(explicit.get("denominator", ["1"]), f"{loc}.denominator")
        if num is None or den is None:
            return None
        try:
            return RationalFunction(num, den)
        except InvalidInput as e:
            r.fail(f"{loc}.denominator", e.detail)
            return None
    circles = []
    for i, item in enumerate(r.sequence(body["abstract"], "$.g.abstract")):
        loc = f"$.g.abstract[{i}]"
        entry = r.mapping(item, loc, required=("zeros",), optional=("sign",))
        if entry is None or "zeros" not in entry:
            continue
        zeros = r.integer(entry["zeros"], f"{loc}.zeros")
        sign = entry.get("sign")
        if sign is not None:
            sign = r.string(sign, f"{loc}.sign")
        if zeros is not None:
            circles.append(CircleData(zeros, sign))
    return tuple(circles)


def _read_transformations(r: _Reader, raw) -> tuple[Transformation, ...]:
    out = []
    kinds = [k.value for k in TransformationKind]
    for i, item in enumerate(r.sequence(raw, "$.transformations")):
        loc = f"$.transformations[{i}]"
        entry = r.mapping(item, loc, required=("kind",), optional=("target",))
        if entry is None or "kind" not in entry:
            continue
        if entry["kind"] not in kinds:
            r.fail(f"{loc}.kind", f"expected one of {kinds}, got {entry['kind']!r}")
            continue
        target = None
        if entry.get("target") is not None:
            target = r.integer(entry["target"], f"{loc}.target")
            if target is None:
                continue
        out.append(Transformation(TransformationKind(entry["kind"]), target))
    return tuple(out)


def _read_maps(r: _Reader, raw) -> tuple[MapDescriptor, ...]:
    out, names = [], set()
    for i, item in enumerate(r.sequence(raw, "$.maps")):
        loc = f"$.maps[{i}]"
        entry = r.mapping(item, loc, required=("name", "degrees"))
        if entry is None or "name" not in entry or "degrees" not in entry:
            continue
        name = r.string(entry["name"], f"{loc}.name")
        if name in names:
            r.fail(f"{loc}.name", f"duplicate map name {name!r}")
        names.add(name)
        raw_degrees = r.mapping(entry["degrees"], f"{loc}.degrees", optional=entry["degrees"])
        if raw_degrees is None:
            continue
        degrees = {}
        for key, value in raw_degrees.items():
            component = r.integer(key, f"{loc}.degrees.{key}")
            degree = r.integer(value, f"{loc}.degrees.{key}")
            if component is not None and degree is not None:
                degrees[component] = degree
        if name is not None:
            out.append(MapDescriptor(degrees, name))
    return tuple(out)


def _read_targets(r: _Reader, raw) -> tuple[RationalTargetDescriptor, ...]:
    out = []
    for i, item in enumerate(r.sequence(raw, "$.rational_targets")):
        loc = f"$.rational_targets[{i}]"
        entry = r.mapping(item, loc, required=("surface",), optional=("name",))
        if entry is None or "surface" not in entry:
            continue
        text = r.string(entry["surface"], f"{loc}.surface")
        name = entry.get("name")
        if name is not None:
            name = r.string(name, f"{loc}.name")
        if text is None:
            continue
        try:
            out.append(RationalTargetDescriptor(ClosedSurface.parse(text), name))
        except InvalidInput as e:
            r.fail(f"{loc}.surface", e.detail)
    return tuple(out)


def parse_spec(text: Union[str, bytes], refine_bits: int = DEFAULT_REFINE_BITS) -> SpecDocument:
    """
    Parse and validate a spec document.

    Every problem found is reported at once.

    Parameters
    ----------
    text : str | bytes
        The JSON document.
    refine_bits : int
        Width bound ``2^-refine_bits`` used when checking an explicit ``g``.

    Returns
    -------
    SpecDocument

    Raises
    ------
    SchemaError
        With one ``(location, message)`` issue per broken rule.

    Examples
    --------

    .. code-block:: python

        doc = parse_spec('''
        {
          "schema_version": "1",
          "base": {"kind": "abstract", "genus": 1, "real_circle_count": 2},
          "g": {"abstract": [{"zeros": 4}, {"zeros": 0, "sign": "+"}]}
        }
        ''')
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError([("$", f"not valid JSON: {e}")]) from None

    r = _Reader()
    root = r.mapping(raw, "$", required=("schema_version", "base", "g"), optional=TOP_LEVEL_KEYS)
    if root is None:
        raise SchemaError(r.issues)
    version = root.get("schema_version")
    if "schema_version" in root and version != SCHEMA_VERSION:
        r.fail("$.schema_version", f"unknown schema version {version!r}, expected {SCHEMA_VERSION!r}")

    base = _read_base(r, root["base"]) if "base" in root else None
    g_data = _read_g(r, root["g"]) if "g" in root else None
    transformations = _read_transformations(r, root.get("transformations", []))
    maps = _read_maps(r, root.get("maps", []))
    targets = _read_targets(r, root.get("rational_targets", []))
    kind = None
    if root.get("c_rational_kind") is not None:
        value = root["c_rational_kind"]
        try:
            kind = CRationalKind(value)
        except ValueError:
            r.fail("$.c_rational_kind", f"expected one of {[k.value for k in CRationalKind]}, got {value!r}")

    if r.issues or base is None or g_data is None:
        raise SchemaError(r.issues)
    spec = ConicBundleSpec(base, g_data, transformations)
    issues = [(f"$.{loc}", msg) for loc, msg in spec.problems(refine_bits)]
    if issues:
        raise SchemaError(issues)
    logger.debug("parsed spec with %d transformation(s) and %d map(s)", len(transformations), len(maps))
    return SpecDocument(spec, maps, targets, kind, version)


def _coefficient_strings(p: Polynomial) -> list[str]:
    return [str(c) for c in p.coefficients] or ["0"]


def spec_to_dict(doc: SpecDocument) -> dict[str, Any]:
    spec = doc.spec
    out: dict[str, Any] = {
        "schema_version": doc.schema_version,
        "base": {
            "kind": spec.base.kind.value,
            "genus": spec.base.genus,
            "real_circle_count": spec.base.real_circle_count,
        },
        "transformations": [
            {"kind": t.kind.value, **({"target": t.target} if t.target is not None else {})}
            for t in spec.transformations
        ],
    }
    if spec.explicit:
        out["g"] = {
            "explicit": {
                "numerator": _coefficient_strings(spec.g_data.numerator),
                "denominator": _coefficient_strings(spec.g_data.denominator),
            }
        }
    else:
        out["g"] = {
            "abstract": [
                {"zeros": c.zeros, **({"sign": c.sign} if c.sign is not None else {})}
                for c in spec.g_data
            ]
        }
    if doc.maps:
        out["maps"] = [
            {"name": f.name, "degrees": {str(k): v for k, v in f.degrees.items()}}
            for f in doc.maps
        ]
    if doc.rational_targets:
        out["rational_targets"] = [
            {"surface": w.surface.key(), **({"name": w.name} if w.name else {})}
            for w in doc.rational_targets
        ]
    if doc.c_rational_kind is not None:
        out["c_rational_kind"] = doc.c_rational_kind.value
    return out


def serialize_spec(doc: SpecDocument) -> str:
    """Deterministic JSON text for ``doc``; :func:`parse_spec` reads it back to an equal document."""
    return json.dumps(spec_to_dict(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_spec(file: Union[str, Path], refine_bits: int = DEFAULT_REFINE_BITS) -> SpecDocument:
    """
    Load a spec document from a JSON file.

    Parameters
    ----------
    file : str | Path
        Input JSON file.

    Returns
    -------
    SpecDocument
    """
    with open(file, "r", encoding="utf-8") as f:
        return parse_spec(f.read(), refine_bits)


def write_spec(doc: SpecDocument, file: Union[str, Path]) -> None:
    """
    Save a spec document to a JSON file.

    Parameters
    ----------
    doc : SpecDocument
        The document to write.
    file : str | Path
        Output JSON file.
    """
    with open(file, "w", encoding="utf-8") as f:
        f.write(serialize_spec(doc))
