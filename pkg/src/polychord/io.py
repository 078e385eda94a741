"""Reading polygons and writing/reading density curves and histograms.

Floats are written with ``repr`` so a curve read back and written again is
byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .convex import DensityCurve
from .geometry import Polygon, validate_polygon
from .montecarlo import EmpiricalDensity

PathLike = Union[str, Path]


class InputParseError(ValueError):
    """The input file is not a well-formed polygon document."""


def parse_polygon(text: str) -> dict:
    """Decode a polygon document without validating its geometry."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"invalid JSON: {exc}") from exc
    if isinstance(raw, list):
        raw = {"outer": raw, "holes": []}
    if not isinstance(raw, dict) or "outer" not in raw:
        raise InputParseError("expected an object with an 'outer' ring or a list of vertices")
    holes = raw.get("holes") or []

    def ring(r, what):
        if not isinstance(r, list):
            raise InputParseError(f"{what} must be a list of [x, y] pairs")
        out = []
        for p in r:
            if not (isinstance(p, (list, tuple)) and len(p) == 2):
                raise InputParseError(f"{what} has a malformed vertex {p!r}")
            if not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p):
                raise InputParseError(f"{what} has a non-numeric coordinate {p!r}")
            out.append([float(p[0]), float(p[1])])
        return out

    if not isinstance(holes, list):
        raise InputParseError("'holes' must be a list of rings")
    return {"outer": ring(raw["outer"], "outer"), "holes": [ring(h, f"hole {k}") for k, h in enumerate(holes)]}


def load_polygon(path: PathLike) -> Polygon:
    """Read and validate a polygon JSON file.

    Raises OSError on IO failure, InputParseError on malformed content and a
    PolygonError subclass on invalid geometry.
    """
    text = Path(path).read_text()
    return validate_polygon(parse_polygon(text))


def _fmt(x: float) -> str:
    return repr(float(x))


def curve_csv(curve: DensityCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    bounded = curve.lower is not None
    w.writerow(["ell", "density", "lower", "upper"] if bounded else ["ell", "density"])
    for k, x in enumerate(curve.grid):
        row = [_fmt(x), _fmt(curve.values[k])]
        if bounded:
            row += [_fmt(curve.lower[k]), _fmt(curve.upper[k])]
        w.writerow(row)
    return buf.getvalue()


def curve_sidecar(curve: DensityCurve, **extra) -> dict:
    out = {
        "engine": curve.engine,
        "breakpoints": [float(b) for b in curve.breakpoints],
        "singular": [float(s) for s in curve.singular],
        "flags": list(curve.flags),
    }
    out.update(extra)
    return out


def read_curve_csv(text: str, sidecar: Optional[dict] = None) -> DensityCurve:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:2] != ["ell", "density"]:
        raise InputParseError("curve CSV must start with header 'ell,density'")
    data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float).reshape(-1, len(rows[0]))
    side = sidecar or {}
    lower = upper = None
    if len(rows[0]) == 4:
        lower, upper = data[:, 2], data[:, 3]
    return DensityCurve(
        data[:, 0],
        data[:, 1],
        tuple(side.get("breakpoints", ())),
        tuple(side.get("singular", ())),
        lower,
        upper,
        side.get("engine", "analytic"),
        tuple(side.get("flags", ())),
    )


def histogram_csv(hist: EmpiricalDensity) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ell_lo", "ell_hi", "mass", "stderr"])
    e = hist.bin_edges
    for k in range(e.size - 1):
        w.writerow([_fmt(e[k]), _fmt(e[k + 1]), _fmt(hist.mass[k]), _fmt(hist.stderr[k])])
    return buf.getvalue()


def histogram_sidecar(hist: EmpiricalDensity, **extra) -> dict:
    out = {"engine": "montecarlo", "seed": hist.seed, "n_lines": hist.total_lines, "empty_bins": list(hist.empty_bins)}
    out.update(extra)
    return out


def read_histogram_csv(text: str, sidecar: Optional[dict] = None) -> EmpiricalDensity:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["ell_lo", "ell_hi", "mass", "stderr"]:
        raise InputParseError("histogram CSV must start with header 'ell_lo,ell_hi,mass,stderr'")
    data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float).reshape(-1, 4)
    side = sidecar or {}
    edges = np.append(data[:, 0], data[-1, 1]) if data.size else np.empty(0)
    return EmpiricalDensity(
        edges, data[:, 2], data[:, 3], int(side.get("n_lines", 0)), int(side.get("seed", 0)),
        tuple(side.get("empty_bins", ())),
    )


def sidecar_path(output: PathLike) -> Path:
    return Path(output).with_suffix(".json")


@dataclass(frozen=True)
class Emitted:
    csv_path: Path
    sidecar_path: Path


def write_outputs(output: PathLike, csv_text: str, sidecar: dict) -> Emitted:
    out = Path(output)
    side = sidecar_path(out)
    if side == out:
        side = out.with_name(out.name + ".meta.json")
    out.write_text(csv_text)
    side.write_text(json.dumps(sidecar, indent=2) + "\n")
    return Emitted(out, side)
