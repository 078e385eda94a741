"""Command-line front end.

    polychord --fixture star --engine bounds --output star.csv
    polychord --input poly.json --grid 0.5:1.5:200 --normalize --output out.csv

Writes a CSV (to --output or stdout) and, with --output, a JSON sidecar next to
it. Failures print one JSON error record on stderr and exit with
1 (parse), 2 (validation), 3 (engine) or 4 (IO).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import fixtures
from .convex import GridSpec
from .decomp import density_moments, mcd, polygon_plan
from .errors import PolychordError, PolygonError
from .geometry import Polygon
from .io import (
    InputParseError,
    curve_csv,
    curve_sidecar,
    histogram_csv,
    histogram_sidecar,
    load_polygon,
    write_outputs,
)
from .montecarlo import empirical_density, sample_chords

EXIT_OK, EXIT_PARSE, EXIT_VALIDATE, EXIT_ENGINE, EXIT_IO = 0, 1, 2, 3, 4
CLI_ENGINES = ("analytic", "bounds", "riemann", "semianalytic", "montecarlo")
MC_DEFAULT_BINS = 64

log = logging.getLogger("polychord")


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind = code, kind


@dataclass(frozen=True)
class RunConfig:
    input: Optional[str]
    fixture: Optional[str]
    engine: Optional[str]
    grid: GridSpec
    grid_given: bool
    bounds_n: int
    mc_lines: int
    seed: int
    normalize: bool
    output: Optional[str]
    emit_plan: Optional[str]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_PARSE, "usage", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polychord", description="Multi-chord length density of polygons.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="polygon JSON file")
    src.add_argument("--fixture", help=f"shipped polygon: {', '.join(fixtures.BUILDERS)}")
    p.add_argument("--engine", choices=CLI_ENGINES, help="default: analytic for convex, bounds for other polygons")
    p.add_argument("--grid", default=None, help="MIN:MAX:N, auto or auto:N (default auto: 512 points on (0, diameter])")
    p.add_argument("--bounds-n", type=int, default=1000, help="subdivisions for the bounds engine")
    p.add_argument("--mc-lines", type=int, default=1_000_000, help="lines drawn by the montecarlo engine")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", action="store_true", help="divide by the total measure")
    p.add_argument("--output", help="CSV path (stdout if omitted); sidecar written alongside")
    p.add_argument("--emit-plan", metavar="PATH", help="write the side-pair decomposition as JSON")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    try:
        grid = GridSpec.parse(ns.grid)
    except ValueError as exc:
        raise CliError(EXIT_VALIDATE, "validation", f"bad --grid: {exc}") from exc
    if ns.bounds_n < 1:
        raise CliError(EXIT_VALIDATE, "validation", "--bounds-n must be positive")
    if ns.mc_lines < 1:
        raise CliError(EXIT_VALIDATE, "validation", "--mc-lines must be positive")
    if ns.verbose:
        logging.basicConfig(level=logging.INFO)
    return RunConfig(
        ns.input, ns.fixture, ns.engine, grid, ns.grid is not None, ns.bounds_n, ns.mc_lines,
        ns.seed, ns.normalize, ns.output, ns.emit_plan,
    )


def _load(cfg: RunConfig) -> Polygon:
    try:
        if cfg.fixture is not None:
            if cfg.fixture.removesuffix(".json") not in fixtures.BUILDERS:
                raise CliError(EXIT_PARSE, "parse", f"unknown fixture {cfg.fixture!r}")
            return fixtures.load_fixture(cfg.fixture.removesuffix(".json"))
        return load_polygon(cfg.input)
    except InputParseError as exc:
        raise CliError(EXIT_PARSE, "parse", str(exc)) from exc
    except PolychordError as exc:
        raise CliError(EXIT_VALIDATE, "validation", f"{type(exc).__name__}: {exc}") from exc
    except OSError as exc:
        raise CliError(EXIT_IO, "io", str(exc)) from exc


def _bin_edges(cfg: RunConfig, diameter: float) -> np.ndarray:
    g = cfg.grid
    if g.values is not None:
        return np.asarray(g.values, dtype=float)
    if g.lo is None:
        n = g.points if cfg.grid_given else MC_DEFAULT_BINS
        return np.linspace(0.0, diameter, n + 1)
    return np.linspace(g.lo, g.hi, g.points + 1)


def _emit(cfg: RunConfig, text: str, sidecar: dict) -> None:
    try:
        if cfg.output is None:
            sys.stdout.write(text)
        else:
            write_outputs(cfg.output, text, sidecar)
    except OSError as exc:
        raise CliError(EXIT_IO, "io", str(exc)) from exc


def run(cfg: RunConfig) -> int:
    poly = _load(cfg)
    engine = cfg.engine or ("analytic" if poly.is_convex() else "bounds")
    t0 = time.perf_counter()
    try:
        if cfg.emit_plan:
            plan = polygon_plan(poly)
            try:
                Path(cfg.emit_plan).write_text(json.dumps(plan.to_dict(), indent=2) + "\n")
            except OSError as exc:
                raise CliError(EXIT_IO, "io", str(exc)) from exc
        if engine == "montecarlo":
            batch = sample_chords(poly, cfg.mc_lines, cfg.seed)
            hist = empirical_density(batch, _bin_edges(cfg, poly.diameter))
            extra = {}
            if cfg.normalize:
                total = hist.total
                if total <= 0:
                    raise CliError(EXIT_ENGINE, "engine", "empty histogram cannot be normalized")
                hist = type(hist)(hist.bin_edges, hist.mass / total, hist.stderr / total, hist.total_lines, hist.seed, hist.empty_bins)
                extra["normalized_by"] = total
            text = histogram_csv(hist)
            sidecar = histogram_sidecar(hist, seconds=time.perf_counter() - t0, **extra)
        else:
            curve = mcd(poly, cfg.grid, engine, bounds_n=cfg.bounds_n)
            extra = {"bounds_n": cfg.bounds_n} if engine == "bounds" else {}
            if cfg.normalize:
                total, _ = density_moments(poly)
                curve = curve.scaled(1.0 / total)
                extra["normalized_by"] = total
            text = curve_csv(curve)
            sidecar = curve_sidecar(curve, seconds=time.perf_counter() - t0, **extra)
    except CliError:
        raise
    except PolygonError as exc:
        raise CliError(EXIT_VALIDATE, "validation", f"{type(exc).__name__}: {exc}") from exc
    except (PolychordError, ArithmeticError, ValueError) as exc:
        raise CliError(EXIT_ENGINE, "engine", f"{type(exc).__name__}: {exc}") from exc
    _emit(cfg, text, sidecar)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(parse_config(argv))
    except CliError as exc:
        sys.stderr.write(json.dumps({"error": exc.kind, "code": exc.code, "message": str(exc)}) + "\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
