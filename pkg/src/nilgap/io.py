"""Spec files: one self-describing JSON document per analysis.

Rationals are written as ``"p/q"`` strings (plain integers are accepted too);
floats are rejected so that exact inputs stay exact. Every rejection names the
offending field, e.g. ``generators[1].matrix``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact.matrix import Matrix, fraction_str, to_fraction
from .torus.affine import AffineGroupSpec, AffineMap
from .walk import Measure

SPEC_VERSION = "1"
KINDS = ("torus", "heisenberg", "n32")

TORUS_BUDGETS = {"depth": 3, "ball": 6, "effort": 16, "radius": [64, 128], "iterations": 500, "herz_radius": 8, "seed": 0}
HEISENBERG_BUDGETS = {"truncation": [64, 128, 256], "nevo_truncation": 32, "n_max": 20, "iterations": 2000, "seed": 0}
N32_BUDGETS = {"ball": 3, "scan_bound": 10}


class SpecError(ValueError):
    """Input error, reported with the JSON path of the bad field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class SpecFile:
    kind: str
    version: str = SPEC_VERSION
    name: str = ""
    torus: AffineGroupSpec | None = None
    measure: Measure | None = None
    word: tuple[int, ...] | None = None
    n32_generators: list[Matrix] = field(default_factory=list)
    orbits: list[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]] = field(default_factory=list)
    budgets: dict = field(default_factory=dict)


def _rat(x, where: str) -> Fraction:
    if isinstance(x, float):
        raise SpecError(where, f"float {x!r} is not exact; write rationals as \"p/q\" strings")
    try:
        return to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(where, f"{x!r} is not a rational ({exc})") from None


def _rat_list(xs, where: str, length: int | None = None) -> tuple[Fraction, ...]:
    if not isinstance(xs, list):
        raise SpecError(where, "expected a list")
    if length is not None and len(xs) != length:
        raise SpecError(where, f"expected {length} entries, got {len(xs)}")
    return tuple(_rat(x, f"{where}[{i}]") for i, x in enumerate(xs))


def _matrix(rows, where: str, n: int | None = None) -> Matrix:
    if not isinstance(rows, list) or not rows:
        raise SpecError(where, "expected a non-empty list of rows")
    out = [_rat_list(r, f"{where}[{i}]", n if n is not None else len(rows)) for i, r in enumerate(rows)]
    if n is not None and len(out) != n:
        raise SpecError(where, f"expected {n} rows, got {len(out)}")
    return Matrix(out)


def _int(x, where: str, low: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SpecError(where, f"expected an integer, got {x!r}")
    if low is not None and x < low:
        raise SpecError(where, f"must be at least {low}")
    return x


def _budgets(raw: dict, defaults: dict, where: str = "budgets") -> dict:
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise SpecError(where, "expected an object")
    unknown = sorted(set(raw) - set(defaults))
    if unknown:
        raise SpecError(f"{where}.{unknown[0]}", f"unknown budget (known: {', '.join(sorted(defaults))})")
    out = {}
    for key, default in defaults.items():
        v = raw.get(key, default)
        if isinstance(default, list):
            vs = v if isinstance(v, list) else [v]
            if not vs:
                raise SpecError(f"{where}.{key}", "expected at least one value")
            out[key] = [_int(x, f"{where}.{key}[{i}]", 1) for i, x in enumerate(vs)]
        else:
            out[key] = _int(v, f"{where}.{key}", 0 if key == "seed" else 1)
    return out


def _measure(raw, where: str) -> Measure:
    if not isinstance(raw, dict) or not isinstance(raw.get("atoms"), list):
        raise SpecError(where, "expected {\"atoms\": [{\"word\": [...], \"weight\": \"p/q\"}, ...]}")
    atoms = []
    for i, a in enumerate(raw["atoms"]):
        w = f"{where}.atoms[{i}]"
        if not isinstance(a, dict) or "word" not in a or "weight" not in a:
            raise SpecError(w, "expected an object with 'word' and 'weight'")
        if not isinstance(a["word"], list):
            raise SpecError(f"{w}.word", "expected a list of signed generator indices")
        word = tuple(_int(s, f"{w}.word[{j}]") for j, s in enumerate(a["word"]))
        atoms.append((word, _rat(a["weight"], f"{w}.weight")))
    try:
        return Measure(tuple(atoms))
    except ValueError as exc:
        raise SpecError(where, str(exc)) from None


def parse_spec(doc: Any) -> SpecFile:
    """Validate a decoded JSON document."""
    if not isinstance(doc, dict):
        raise SpecError("$", "top level must be an object")
    version = doc.get("version", SPEC_VERSION)
    if version != SPEC_VERSION:
        raise SpecError("version", f"unsupported version {version!r} (expected {SPEC_VERSION!r})")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecError("kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SpecError("name", "expected a string")
    if kind == "torus":
        return _parse_torus(doc, name)
    if kind == "heisenberg":
        out = SpecFile(kind, version, name, budgets=_budgets(doc.get("budgets"), HEISENBERG_BUDGETS))
        if "measure" in doc:
            out.measure = _measure(doc["measure"], "measure")
            if out.measure.max_letter() > 2:
                raise SpecError("measure", "heisenberg words use letters ±1 (S) and ±2 (T)")
        if "word" in doc:
            if not isinstance(doc["word"], list) or not doc["word"]:
                raise SpecError("word", "expected a non-empty list of letters ±1, ±2")
            out.word = tuple(_int(s, f"word[{i}]") for i, s in enumerate(doc["word"]))
            if any(abs(s) not in (1, 2) for s in out.word):
                raise SpecError("word", "letters are ±1 (S) and ±2 (T)")
        return out
    out = SpecFile(kind, version, name, budgets=_budgets(doc.get("budgets"), N32_BUDGETS))
    for i, g in enumerate(doc.get("generators", [])):
        m = _matrix(g, f"generators[{i}]", 3)
        if m.det() != 1:
            raise SpecError(f"generators[{i}]", f"det = {fraction_str(m.det())}, expected 1")
        if not m.is_integer():
            raise SpecError(f"generators[{i}]", "entries must be integers")
        out.n32_generators.append(m)
    for i, o in enumerate(doc.get("orbits", [])):
        if not isinstance(o, dict):
            raise SpecError(f"orbits[{i}]", "expected {\"x0\": [...], \"y0\": [...]}")
        out.orbits.append(
            (_rat_list(o.get("x0"), f"orbits[{i}].x0", 3), _rat_list(o.get("y0"), f"orbits[{i}].y0", 3))
        )
    return out


def _parse_torus(doc: dict, name: str) -> SpecFile:
    dim = _int(doc.get("dim"), "dim", 1)
    gens_raw = doc.get("generators")
    if not isinstance(gens_raw, list) or not gens_raw:
        raise SpecError("generators", "expected a non-empty list")
    gens = []
    for i, g in enumerate(gens_raw):
        where = f"generators[{i}]"
        if not isinstance(g, dict) or "matrix" not in g:
            raise SpecError(where, "expected {\"matrix\": [[...]], \"translation\": [...]}")
        m = _matrix(g["matrix"], f"{where}.matrix", dim)
        t = _rat_list(g.get("translation", ["0"] * dim), f"{where}.translation", dim)
        try:
            gens.append(AffineMap(m, t))
        except ValueError as exc:
            raise SpecError(f"{where}.matrix", f"generator {i}: {exc}") from None
    weights = None
    if doc.get("weights") is not None:
        weights = _rat_list(doc["weights"], "weights", 2 * len(gens))
    try:
        spec = AffineGroupSpec(dim, tuple(gens), weights, name)
    except ValueError as exc:
        raise SpecError("weights", str(exc)) from None
    measure = _measure(doc["measure"], "measure") if doc.get("measure") is not None else None
    if measure is not None and measure.max_letter() > len(gens):
        raise SpecError("measure", f"uses generator {measure.max_letter()} but only {len(gens)} are given")
    return SpecFile("torus", SPEC_VERSION, name, spec, measure, budgets=_budgets(doc.get("budgets"), TORUS_BUDGETS))


def loads(text: str) -> SpecFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_spec(doc)


def load(path: str) -> SpecFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(path, exc.strerror or str(exc)) from None
    return loads(text)


# -- serialization --------------------------------------------------------------


def _strs(xs) -> list[str]:
    return [fraction_str(Fraction(x)) for x in xs]


def torus_to_json(spec: AffineGroupSpec, budgets: dict | None = None, measure: Measure | None = None) -> dict:
    out: dict = {"version": SPEC_VERSION, "kind": "torus", "name": spec.name, "dim": spec.dim}
    out["generators"] = [
        {"matrix": [_strs(r) for r in g.matrix.rows], "translation": _strs(g.translation)} for g in spec.generators
    ]
    out["weights"] = None if spec.weights is None else _strs(spec.weights)
    if measure is not None:
        out["measure"] = {"atoms": measure.to_json()["atoms"]}
    out["budgets"] = dict(budgets) if budgets is not None else dict(TORUS_BUDGETS)
    return out


def spec_to_json(sf: SpecFile) -> dict:
    if sf.kind == "torus":
        return torus_to_json(sf.torus, sf.budgets, sf.measure)
    out: dict = {"version": sf.version, "kind": sf.kind, "name": sf.name}
    if sf.kind == "heisenberg":
        if sf.measure is not None:
            out["measure"] = {"atoms": sf.measure.to_json()["atoms"]}
        if sf.word is not None:
            out["word"] = list(sf.word)
    else:
        out["generators"] = [m.to_strings() for m in sf.n32_generators]
        out["orbits"] = [{"x0": _strs(x), "y0": _strs(y)} for x, y in sf.orbits]
    out["budgets"] = dict(sf.budgets)
    return out


def _format(x: Any, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_format(v, indent + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(x, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in x):
            return json.dumps(list(x), ensure_ascii=False)
        items = [pad + _format(v, indent + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(x, ensure_ascii=False)


def dumps(doc: Any) -> str:
    """Canonical text: key order as built, two-space indent, scalar lists on one line, trailing newline."""
    return _format(doc, 0) + "\n"
