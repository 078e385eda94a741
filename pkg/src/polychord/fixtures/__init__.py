"""Reference polygons shipped with the package.

Each builder returns the raw {"outer": ..., "holes": ...} dictionary; the JSON
files next to this module are generated from the builders.
"""

from __future__ import annotations

import json
import math
from importlib import resources

from ..geometry import Polygon, intersect_lines, validate_polygon


def equilateral() -> dict:
    return {"outer": [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]], "holes": []}


def triangle_345() -> dict:
    return {"outer": [[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]], "holes": []}


def square() -> dict:
    return {"outer": [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], "holes": []}


def rhombus() -> dict:
    h = math.sqrt(3) / 2
    return {"outer": [[0.0, 0.0], [1.0, 0.0], [1.5, h], [0.5, h]], "holes": []}


def _octagon() -> dict:
    r = 1 / math.sqrt(2)
    names = "ABCDEFGH"
    pts = [(1.0, 0.0), (r, r), (0.0, 1.0), (-r, r), (-1.0, 0.0), (-r, -r), (0.0, -1.0), (r, -r)]
    return dict(zip(names, pts))


def _dodecagon(extra: tuple[str, ...]) -> dict:
    octo = _octagon()
    names = "ABCDEFGH"
    out = []
    for k, n in enumerate(names):
        out.append(list(octo[n]))
        nxt = names[(k + 1) % 8]
        if n + nxt in extra:
            p, q = octo[n], octo[nxt]
            out.append([1.1 * (p[0] + q[0]) / 2, 1.1 * (p[1] + q[1]) / 2])
    return {"outer": out, "holes": []}


def dodecagon_a() -> dict:
    return _dodecagon(("AB", "BC", "DE", "EF"))


def dodecagon_b() -> dict:
    return _dodecagon(("AB", "DE", "EF", "FG"))


def quadrilateral() -> dict:
    """Concave quadrilateral O A V D with the reflex angle at V."""
    return {"outer": [[0.0, 0.0], [4.0, 0.0], [1.2, 1.0], [0.0, 3.0]], "holes": []}


def pentagon_symmetric() -> dict:
    """Unit square B C D E with the concave vertex A at its centre."""
    return {"outer": [[0.5, 0.5], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], "holes": []}


def pentagon_asymmetric() -> dict:
    """Concave pentagon A B C D E, right angle at C, notch at A."""
    return {"outer": [[0.8, 0.7], [0.0, 1.6], [0.0, 0.0], [2.0, 0.0], [1.8, 1.6]], "holes": []}


def star_radius() -> float:
    return math.sin(math.pi / 10) / math.sin(7 * math.pi / 10)


def star() -> dict:
    """Five-pointed star A..J: outer vertices at radius 1, inner at star_radius()."""
    r = star_radius()
    pts = []
    for k in range(5):
        a = math.pi / 10 + 2 * math.pi * k / 5
        pts.append([math.cos(a), math.sin(a)])
        b = a + math.pi / 5
        pts.append([r * math.cos(b), r * math.sin(b)])
    return {"outer": pts, "holes": []}


def square_hole() -> dict:
    return {
        "outer": [[0.0, 0.0], [3.0, 0.0], [3.0, 3.0], [0.0, 3.0]],
        "holes": [[[1.0, 1.0], [1.0, 2.0], [2.0, 2.0], [2.0, 1.0]]],
    }


BUILDERS = {
    "equilateral": equilateral,
    "triangle_345": triangle_345,
    "square": square,
    "rhombus": rhombus,
    "dodecagon_a": dodecagon_a,
    "dodecagon_b": dodecagon_b,
    "quadrilateral": quadrilateral,
    "pentagon_symmetric": pentagon_symmetric,
    "pentagon_asymmetric": pentagon_asymmetric,
    "star": star,
    "square_hole": square_hole,
}

CONCAVE = ("quadrilateral", "pentagon_symmetric", "pentagon_asymmetric", "star", "square_hole")


def fixture_path(name: str):
    return resources.files(__name__).joinpath(f"{name}.json")


def load_fixture(name: str) -> Polygon:
    """Validated polygon for a shipped fixture (by name, with or without .json)."""
    name = name[:-5] if name.endswith(".json") else name
    if name not in BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(BUILDERS)}")
    return validate_polygon(json.loads(fixture_path(name).read_text()))


def write_all(directory) -> None:
    from pathlib import Path

    d = Path(directory)
    for name, fn in BUILDERS.items():
        (d / f"{name}.json").write_text(json.dumps(fn(), indent=1) + "\n")
