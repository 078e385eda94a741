"""Closed-form chord-length measure densities of triangles.

A chord of a triangle is "dominated" by the vertex through which the longest
chord of its direction passes. Summing the per-vertex densities gives the
triangle density; the per-vertex pieces are reused by the segment-pair code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput
from .geometry import TAU_ANG, TriangleSides, solve_triangle, triangle_from_points


def heaviside(x):
    """H(x) = 1 for x > 0, else 0 (H(0) = 0)."""
    return (np.asarray(x) > 0).astype(float)


def _check(a, b, c, area):
    if not (a > 0 and b > 0 and c > 0 and area > 0):
        raise DegenerateInput("degenerate triangle")


def _arcsin_terms(h, ell):
    # q = h / ell clipped to [0, 1]; returns (arcsin q, q*sqrt(1-q^2))
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.clip(np.where(ell > 0, h / ell, 1.0), 0.0, 1.0)
    return np.arcsin(q), q * np.sqrt(1.0 - q * q)


def rho_vertex_ac(ell, alpha, beta, gamma, a, b, c):
    """Density of the chords dominated by vertex C when A and B are both acute."""
    ell = np.asarray(ell, dtype=float)
    area = 0.5 * a * b * math.sin(gamma)
    _check(a, b, c, area)
    h = 2 * area / c
    s, r = _arcsin_terms(h, ell)
    above = heaviside(ell - h)
    val = (
        heaviside(h - ell) * (gamma + 0.5 * math.sin(2 * alpha) + 0.5 * math.sin(2 * beta))
        + above * heaviside(b - ell) * (s - alpha + 0.5 * math.sin(2 * alpha) - r)
        + above * heaviside(a - ell) * (s - beta + 0.5 * math.sin(2 * beta) - r)
    )
    return c * c / (4 * area) * val


def rho_vertex_obt(ell, alpha, beta, gamma, a, b, c):
    """Density of the chords dominated by vertex A when the whole triangle lies
    on one side of the height from A (gamma obtuse, c the longest side)."""
    ell = np.asarray(ell, dtype=float)
    area = 0.5 * a * b * math.sin(gamma)
    _check(a, b, c, area)
    s, r = _arcsin_terms(2 * area / a, ell)
    val = heaviside(b - ell) * (alpha + 0.5 * math.sin(2 * beta) + 0.5 * math.sin(2 * gamma)) + heaviside(
        ell - b
    ) * heaviside(c - ell) * (s - beta + 0.5 * math.sin(2 * beta) - r)
    return a * a / (4 * area) * val


@dataclass(frozen=True)
class TriangleDensity:
    sides: TriangleSides
    kind: str  # "acute" (acute or right) or "obtuse"

    @classmethod
    def from_sides(cls, t: TriangleSides) -> "TriangleDensity":
        # cyclic relabel so that gamma is the largest angle and c the longest side
        labels = [
            (t.a, t.b, t.c, t.alpha, t.beta, t.gamma),
            (t.b, t.c, t.a, t.beta, t.gamma, t.alpha),
            (t.c, t.a, t.b, t.gamma, t.alpha, t.beta),
        ]
        a, b, c, al, be, ga = max(labels, key=lambda l: l[5])
        tt = TriangleSides(a, b, c, al, be, ga, t.area)
        kind = "obtuse" if ga > math.pi / 2 + TAU_ANG else "acute"
        return cls(tt, kind)

    @classmethod
    def from_points(cls, P, Q, R) -> "TriangleDensity":
        return cls.from_sides(triangle_from_points(P, Q, R))

    @classmethod
    def from_sas(cls, a: float, b: float, gamma: float) -> "TriangleDensity":
        return cls.from_sides(solve_triangle(a, b, gamma))

    @property
    def breakpoints(self) -> list[float]:
        t = self.sides
        return sorted({*t.heights, t.a, t.b, t.c})


def triangle_cld(tri: TriangleDensity, ell):
    """Chord-length measure density of the triangle at ell."""
    t = tri.sides
    a, b, c, al, be, ga = t.a, t.b, t.c, t.alpha, t.beta, t.gamma
    if tri.kind == "obtuse":
        return (
            rho_vertex_obt(ell, al, be, ga, a, b, c)
            + rho_vertex_obt(ell, be, al, ga, b, a, c)
            + rho_vertex_ac(ell, al, be, ga, a, b, c)
        )
    return (
        rho_vertex_ac(ell, be, ga, al, b, c, a)
        + rho_vertex_ac(ell, ga, al, be, c, a, b)
        + rho_vertex_ac(ell, al, be, ga, a, b, c)
    )


def dominated_measures(t: TriangleSides) -> tuple[float, float, float]:
    """Measure of the chords dominated by A, B and C when no angle is obtuse.

    A vertex dominates the directions swept between its two neighbours, so the
    measure at C is c(cos alpha + cos beta). The three values always add up to
    the perimeter.
    """
    ca, cb, cg = math.cos(t.alpha), math.cos(t.beta), math.cos(t.gamma)
    return t.a * (cb + cg), t.b * (cg + ca), t.c * (ca + cb)


def perimeter_identity_residual(t: TriangleSides) -> float:
    """|sum of dominated measures - perimeter|; zero up to rounding."""
    return abs(sum(dominated_measures(t)) - (t.a + t.b + t.c))
