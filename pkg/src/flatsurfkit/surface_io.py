"""Versioned textual surface files.

JSON with a format header; scalars are strings ("p/q" rationals,
"[c0,c1,c2]" cubic field elements, shortest round-trip decimals for
floats) so that exact surfaces round-trip bit-exactly.
"""

from __future__ import annotations

import json
from typing import IO

from .numeric import scalar_from_str, scalar_to_str
from .surface import Gluing, Polygon, Surface, SurfaceError

FORMAT = "flatsurface/1"


def surface_to_dict(s: Surface) -> dict:
    return {
        "format": FORMAT,
        "kind": s.kind,
        "scalars": "exact" if s.is_exact() else "float",
        "polygons": [
            [[scalar_to_str(x), scalar_to_str(y)] for x, y in p.vertices] for p in s.polygons
        ],
        "gluings": [
            [[g.edge_a[0], g.edge_a[1]], [g.edge_b[0], g.edge_b[1]], g.kind] for g in s.gluings
        ],
    }


def surface_from_dict(data: dict) -> Surface:
    if data.get("format") != FORMAT:
        raise SurfaceError(f"unsupported surface format: {data.get('format')!r}")
    polygons = [
        Polygon([(scalar_from_str(x), scalar_from_str(y)) for x, y in poly])
        for poly in data["polygons"]
    ]
    gluings = [
        Gluing((int(a[0]), int(a[1])), (int(b[0]), int(b[1])), kind)
        for a, b, kind in data["gluings"]
    ]
    return Surface(polygons, gluings, data["kind"])


def dump(s: Surface, fp: IO[str]) -> None:
    json.dump(surface_to_dict(s), fp, indent=1)
    fp.write("\n")


def dumps(s: Surface) -> str:
    return json.dumps(surface_to_dict(s), indent=1) + "\n"


def load(fp: IO[str]) -> Surface:
    return surface_from_dict(json.load(fp))


def loads(text: str) -> Surface:
    return surface_from_dict(json.loads(text))
