"""Multi-chord density of convex polygons as a sum over side pairs, plus the
sampled-curve container and grid handling shared by all engines."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import NotConvex
from .geometry import Polygon, validate_polygon
from .pairs import PairDensityTerm
from .quadrature import integrate

TAU_SING = 1e-9
ENGINES = ("analytic", "bounds", "riemann", "semianalytic")


@dataclass(frozen=True)
class DensityCurve:
    grid: np.ndarray
    values: np.ndarray
    breakpoints: tuple[float, ...] = ()
    singular: tuple[float, ...] = ()
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    engine: str = "analytic"
    flags: tuple[str, ...] = ()

    def scaled(self, factor: float) -> "DensityCurve":
        """Density channels multiplied by factor (grid unchanged)."""
        return replace(
            self,
            values=self.values * factor,
            lower=None if self.lower is None else self.lower * factor,
            upper=None if self.upper is None else self.upper * factor,
        )


@dataclass(frozen=True)
class GridSpec:
    """Either an explicit range (lo, hi, points), explicit abscissae, or "auto"
    (points abscissae spanning (0, diameter])."""

    lo: Optional[float] = None
    hi: Optional[float] = None
    points: int = 512
    values: Optional[tuple[float, ...]] = None

    @classmethod
    def parse(cls, text: Optional[str]) -> "GridSpec":
        if text is None or text == "auto":
            return cls()
        m = re.fullmatch(r"auto:(\d+)", text)
        if m:
            return cls(points=int(m.group(1)))
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be MIN:MAX:N or auto, got {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        spec = cls(lo, hi, n)
        spec.check()
        return spec

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "GridSpec":
        return cls(values=tuple(float(v) for v in values))

    def check(self) -> None:
        if self.values is not None:
            return
        if self.points < 2:
            raise ValueError("grid needs at least 2 points")
        if self.lo is not None and not (self.hi > self.lo > 0):
            raise ValueError("grid requires MAX > MIN > 0")

    def abscissae(self, diameter: float) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        self.check()
        if self.lo is None:
            return diameter * np.arange(1, self.points + 1) / self.points
        return np.linspace(self.lo, self.hi, self.points)


def nudge(grid: np.ndarray, avoid: Sequence[float], scale: float) -> np.ndarray:
    """Move abscissae lying within TAU_SING*scale of an avoided value just below it."""
    g = np.array(grid, dtype=float)
    tol = TAU_SING * scale
    for s in avoid:
        hit = np.abs(g - s) < tol
        g[hit] = s - tol
    return g


def as_polygon(poly) -> Polygon:
    return poly if isinstance(poly, Polygon) else validate_polygon(poly)


@dataclass(frozen=True)
class ConvexPlan:
    terms: tuple[PairDensityTerm, ...]
    breakpoints: tuple[float, ...]
    singular: tuple[float, ...]

    def evaluate(self, ell) -> np.ndarray:
        ell = np.asarray(ell, dtype=float)
        total = np.zeros(ell.shape)
        for t in self.terms:
            total = total + t.evaluate(ell)
        return total


def _merge(values, scale) -> tuple[float, ...]:
    out: list[float] = []
    for v in sorted(values):
        if v > 0 and (not out or v - out[-1] > 1e-12 * scale):
            out.append(float(v))
    return tuple(out)


def convex_plan(poly) -> ConvexPlan:
    poly = as_polygon(poly)
    if not poly.is_convex():
        raise NotConvex("polygon is not convex")
    edges = poly.edges
    terms = []
    bps: list[float] = []
    sing: list[float] = []
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            e, f = edges[i], edges[j]
            t = PairDensityTerm.build(e.p, e.q, f.p, f.q)
            if t.kind == "null":
                continue
            terms.append(t)
            b, s = t.breakpoints()
            bps.extend(b)
            sing.extend(s)
    scale = poly.diameter
    return ConvexPlan(tuple(terms), _merge(bps, scale), _merge(sing, scale))


def convex_mcd(poly, ell):
    """Multi-chord density of a convex polygon at ell."""
    return convex_plan(poly).evaluate(ell)


def crofton_moments(evaluate, breakpoints, diameter: float, order: int = 48) -> tuple[float, float]:
    """(integral of rho, integral of ell*rho) over (0, diameter]."""
    from .quadrature import moments

    return moments(evaluate, 0.0, diameter, breakpoints, order)


def total_measure(evaluate, breakpoints, diameter: float) -> float:
    return integrate(evaluate, 0.0, diameter, breakpoints)


def sample_curve(poly, grid_spec=None, engine: str = "analytic", **opts) -> DensityCurve:
    """Sample the multi-chord density of poly on a grid with the chosen engine.

    Convex inputs are evaluated in closed form whatever the engine (bounds
    coincide); other inputs go through the side-pair decomposition.
    """
    poly = as_polygon(poly)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    spec = grid_spec if isinstance(grid_spec, GridSpec) else GridSpec.parse(grid_spec)
    if not poly.is_convex() or opts.get("force_general"):
        from .decomp import mcd

        return mcd(poly, spec, engine, **opts)
    plan = convex_plan(poly)
    scale = poly.diameter
    grid = nudge(spec.abscissae(scale), plan.singular + plan.breakpoints, scale)
    values = np.maximum(plan.evaluate(grid), 0.0)
    lower = upper = None
    if engine == "bounds":
        lower, upper = values.copy(), values.copy()
    return DensityCurve(grid, values, plan.breakpoints, plan.singular, lower, upper, engine)
