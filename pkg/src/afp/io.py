"""JSON encodings for lattices, morphisms and points."""
from __future__ import annotations

import json
from functools import lru_cache

from .errors import ShapeMismatch
from .lattice import FiniteLattice, PowersetLattice, ProductShape, as_shape, build_lattice
from .morphism import POINT_CAP, make_morphism, split


def lattice_to_json(lat: FiniteLattice) -> dict:
    pairs = [[int(i), int(j)] for i in range(lat.size) for j in range(lat.size) if lat.leq(i, j)]
    return {"elements": list(lat.names), "leq": pairs}


def lattice_from_json(obj: dict) -> FiniteLattice:
    if set(obj) - {"elements", "leq"} or "elements" not in obj or "leq" not in obj:
        raise ValueError('lattice JSON needs exactly "elements" and "leq"')
    return FiniteLattice.from_relation(obj["elements"], [tuple(p) for p in obj["leq"]])


@lru_cache(maxsize=None)
def _spec_lattice(spec):
    return build_lattice(spec)


def resolve_lattice(spec):
    """A lattice from a spec string (``"2"``, ``"chain:3"``, ...) or lattice JSON."""
    if isinstance(spec, str):
        return _spec_lattice(spec)
    if isinstance(spec, dict):
        return lattice_from_json(spec)
    raise ValueError(f"bad lattice spec {spec!r}")


def lattice_spec(lat):
    if isinstance(lat, PowersetLattice):
        return lat.label
    if lat.label:
        try:
            if _spec_lattice(lat.label) == lat:
                return lat.label
        except ValueError:
            pass
    return lattice_to_json(lat)


def shape_to_json(shape) -> list:
    return [lattice_spec(f) for f in as_shape(shape).factors]


def shape_from_json(specs) -> ProductShape:
    return ProductShape([resolve_lattice(s) for s in specs])


def point_to_json(p) -> list:
    x, xp = split(p)
    return [list(x), list(xp)]


def point_from_json(obj) -> tuple:
    if len(obj) != 2 or len(obj[0]) != len(obj[1]):
        raise ShapeMismatch(f"bad point {obj!r}")
    return tuple(obj[0]) + tuple(obj[1])


def morphism_to_json(f, cap=POINT_CAP) -> dict:
    table = f.tabulate(cap)
    return {
        "domain": shape_to_json(f.domain),
        "codomain": shape_to_json(f.codomain),
        "table": [[point_to_json(p), point_to_json(v)] for p, v in table.items()],
    }


def morphism_from_json(obj: dict):
    """Decode and certify a morphism (raises ``NotPMonotone`` on a bad table)."""
    domain = shape_from_json(obj["domain"])
    codomain = shape_from_json(obj["codomain"])
    table = {}
    for entry in obj["table"]:
        inp, out = entry
        table[point_from_json(inp)] = point_from_json(out)
    return make_morphism(domain, codomain, table)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_schema(name: str) -> dict:
    """One of the JSON schemas shipped with the package, by file stem."""
    from importlib.resources import files

    return json.loads(files("afp").joinpath("schemas", f"{name}.json").read_text("utf-8"))
