"""Scene files: strict, versioned, byte-stable serialization of models.

A scene describes a base lattice with tracked curves, a sequence of
blow-ups to replay, a boundary, and declared nef classes.  All rationals
serialize as normalized strings ("p/q" with coprime parts and positive
denominator, or a bare integer string); parsing rejects unknown fields,
missing fields, and non-normalized rationals, and every error carries the
JSON path of the offending value.  Serialization is canonical, so
parse -> dump is the identity on well-formed files.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Mapping, Sequence

from .birational import SurfaceModel, TrackedCurve
from .errors import SceneFormatError
from .lattice import DivisorClass, IntersectionLattice
from .pairs import PairModel

FORMAT = "surflat-scene/1"

BUILTIN_SCENES = (
    "example-4.1",
    "example-4.2",
    "example-4.3",
    "example-trivial",
)


@dataclass(frozen=True)
class Scene:
    """Validated scene data, still purely combinatorial."""

    meta: str
    rank: int
    gram: tuple[tuple[Fraction, ...], ...]
    canonical: tuple[Fraction, ...]
    curves: tuple[tuple[str, tuple[Fraction, ...]], ...]
    blowups: tuple[tuple[str, tuple[tuple[str, int], ...]], ...]
    boundary: tuple[tuple[str, Fraction], ...]
    nef_axioms: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class SceneBundle:
    """A scene together with the models it builds."""

    scene: Scene
    base: SurfaceModel
    surface: SurfaceModel
    pair: PairModel


def _fail(path: str, message: str) -> SceneFormatError:
    return SceneFormatError(path, message)


def _expect_keys(obj: object, path: str, keys: Sequence[str]) -> dict:
    if not isinstance(obj, dict):
        raise _fail(path, f"expected an object, got {type(obj).__name__}")
    missing = [k for k in keys if k not in obj]
    unknown = [k for k in obj if k not in keys]
    if missing:
        raise _fail(path, f"missing required field(s): {', '.join(missing)}")
    if unknown:
        raise _fail(path, f"unknown field(s): {', '.join(sorted(unknown))}")
    return obj


def _expect_list(obj: object, path: str) -> list:
    if not isinstance(obj, list):
        raise _fail(path, f"expected an array, got {type(obj).__name__}")
    return obj


def _expect_str(obj: object, path: str) -> str:
    if not isinstance(obj, str):
        raise _fail(path, f"expected a string, got {type(obj).__name__}")
    return obj


def _expect_int(obj: object, path: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise _fail(path, f"expected an integer, got {type(obj).__name__}")
    return obj


def _rational(obj: object, path: str) -> Fraction:
    text = _expect_str(obj, path)
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _fail(path, f"invalid rational {text!r}") from None
    if str(value) != text:
        raise _fail(path, f"rational {text!r} is not normalized (expected {value!r})")
    return value


def _vector(obj: object, path: str, rank: int) -> tuple[Fraction, ...]:
    items = _expect_list(obj, path)
    if len(items) != rank:
        raise _fail(path, f"expected {rank} entries, got {len(items)}")
    return tuple(_rational(v, f"{path}[{i}]") for i, v in enumerate(items))


def parse_scene_data(data: object) -> Scene:
    """Validate a decoded JSON value into a Scene; errors carry JSON paths."""
    top = _expect_keys(
        data, "$", ["format", "meta", "base", "blowups", "boundary", "nef_axioms"]
    )
    fmt = _expect_str(top["format"], "$.format")
    if fmt != FORMAT:
        raise _fail("$.format", f"unsupported format {fmt!r} (expected {FORMAT!r})")
    meta = _expect_str(top["meta"], "$.meta")

    base = _expect_keys(top["base"], "$.base", ["rank", "gram", "canonical", "curves"])
    rank = _expect_int(base["rank"], "$.base.rank")
    if rank < 1:
        raise _fail("$.base.rank", f"rank must be positive, got {rank}")
    gram_rows = _expect_list(base["gram"], "$.base.gram")
    if len(gram_rows) != rank:
        raise _fail("$.base.gram", f"expected {rank} rows, got {len(gram_rows)}")
    gram = tuple(
        _vector(row, f"$.base.gram[{i}]", rank) for i, row in enumerate(gram_rows)
    )
    canonical = _vector(base["canonical"], "$.base.canonical", rank)

    curves = []
    curve_names = set()
    for i, entry in enumerate(_expect_list(base["curves"], "$.base.curves")):
        path = f"$.base.curves[{i}]"
        record = _expect_keys(entry, path, ["name", "class"])
        name = _expect_str(record["name"], f"{path}.name")
        if name in curve_names:
            raise _fail(f"{path}.name", f"duplicate curve name {name!r}")
        curve_names.add(name)
        curves.append((name, _vector(record["class"], f"{path}.class", rank)))

    blowups = []
    for i, entry in enumerate(_expect_list(top["blowups"], "$.blowups")):
        path = f"$.blowups[{i}]"
        record = _expect_keys(entry, path, ["name", "point"])
        name = _expect_str(record["name"], f"{path}.name")
        incidences = []
        for j, inc in enumerate(_expect_list(record["point"], f"{path}.point")):
            inc_path = f"{path}.point[{j}]"
            inc_record = _expect_keys(inc, inc_path, ["curve", "mult"])
            curve = _expect_str(inc_record["curve"], f"{inc_path}.curve")
            mult = _expect_int(inc_record["mult"], f"{inc_path}.mult")
            if mult < 1:
                raise _fail(f"{inc_path}.mult", f"multiplicity must be >= 1, got {mult}")
            incidences.append((curve, mult))
        blowups.append((name, tuple(incidences)))

    boundary = []
    boundary_names = set()
    for i, entry in enumerate(_expect_list(top["boundary"], "$.boundary")):
        path = f"$.boundary[{i}]"
        record = _expect_keys(entry, path, ["curve", "coeff"])
        name = _expect_str(record["curve"], f"{path}.curve")
        if name in boundary_names:
            raise _fail(f"{path}.curve", f"duplicate boundary curve {name!r}")
        boundary_names.add(name)
        boundary.append((name, _rational(record["coeff"], f"{path}.coeff")))

    axioms = tuple(
        _vector(entry, f"$.nef_axioms[{i}]", rank)
        for i, entry in enumerate(_expect_list(top["nef_axioms"], "$.nef_axioms"))
    )

    return Scene(
        meta=meta,
        rank=rank,
        gram=gram,
        canonical=canonical,
        curves=tuple(curves),
        blowups=tuple(blowups),
        boundary=tuple(boundary),
        nef_axioms=axioms,
    )


def parse_scene_text(text: str) -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise _fail(f"line {err.lineno}, column {err.colno}", err.msg) from None
    return parse_scene_data(data)


def scene_to_json(scene: Scene) -> str:
    """Canonical serialization; the inverse of parsing on well-formed input."""
    data = {
        "format": FORMAT,
        "meta": scene.meta,
        "base": {
            "rank": scene.rank,
            "gram": [[str(v) for v in row] for row in scene.gram],
            "canonical": [str(v) for v in scene.canonical],
            "curves": [
                {"name": name, "class": [str(v) for v in cls]}
                for name, cls in scene.curves
            ],
        },
        "blowups": [
            {
                "name": name,
                "point": [{"curve": c, "mult": m} for c, m in incidences],
            }
            for name, incidences in scene.blowups
        ],
        "boundary": [
            {"curve": name, "coeff": str(coeff)} for name, coeff in scene.boundary
        ],
        "nef_axioms": [[str(v) for v in axiom] for axiom in scene.nef_axioms],
    }
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def build_bundle(scene: Scene) -> SceneBundle:
    """Replay a scene into models; model invariants are validated en route."""
    lattice = IntersectionLattice([list(row) for row in scene.gram])
    base = SurfaceModel(
        lattice,
        DivisorClass(scene.canonical),
        [TrackedCurve(name, DivisorClass(cls)) for name, cls in scene.curves],
        nef_axioms=[DivisorClass(axiom) for axiom in scene.nef_axioms],
    )
    surface = base
    for name, incidences in scene.blowups:
        surface = surface.blow_up(dict(incidences), name)
    pair = PairModel(surface, dict(scene.boundary))
    return SceneBundle(scene=scene, base=base, surface=surface, pair=pair)


def builtin_scene_text(name: str) -> str:
    if name not in BUILTIN_SCENES:
        raise _fail(name, f"unknown built-in scene (available: {', '.join(BUILTIN_SCENES)})")
    record = resources.files("surflat").joinpath("scenes").joinpath(f"{name}.json")
    return record.read_text("utf-8")


def resolve_scene_text(path_or_name: str) -> str:
    """Built-in name, or a path to a scene file."""
    if path_or_name in BUILTIN_SCENES:
        return builtin_scene_text(path_or_name)
    if os.path.exists(path_or_name):
        with open(path_or_name, "r", encoding="utf-8") as handle:
            return handle.read()
    raise _fail(
        path_or_name,
        "no such scene file or built-in scene"
        f" (built-ins: {', '.join(BUILTIN_SCENES)})",
    )


def load_bundle(path_or_name: str) -> SceneBundle:
    return build_bundle(parse_scene_text(resolve_scene_text(path_or_name)))


def load_scene(path_or_name: str) -> PairModel:
    """Parse, replay, and validate a scene; returns the resulting pair."""
    return load_bundle(path_or_name).pair


def make_scene(
    meta: str,
    gram: Sequence[Sequence[object]],
    canonical: Sequence[object],
    curves: Mapping[str, Sequence[object]],
    blowups: Sequence[tuple[str, Mapping[str, int]]] = (),
    boundary: Mapping[str, object] = (),
    nef_axioms: Sequence[Sequence[object]] = (),
) -> Scene:
    """Convenience constructor from plain Python data (exact rationals)."""
    rank = len(gram)
    boundary_items = boundary.items() if isinstance(boundary, Mapping) else boundary
    return Scene(
        meta=meta,
        rank=rank,
        gram=tuple(tuple(Fraction(v) for v in row) for row in gram),
        canonical=tuple(Fraction(v) for v in canonical),
        curves=tuple(
            (name, tuple(Fraction(v) for v in cls)) for name, cls in curves.items()
        ),
        blowups=tuple(
            (name, tuple(sorted(point.items()))) for name, point in blowups
        ),
        boundary=tuple((name, Fraction(v)) for name, v in boundary_items),
        nef_axioms=tuple(tuple(Fraction(v) for v in axiom) for axiom in nef_axioms),
    )
