"""Chord-length densities for chords joining two segments.

Three building blocks:

* two segments meeting at a common endpoint (``rho_concurrent``);
* two segments on non-parallel lines, by inclusion-exclusion over the
  concurrent pairs formed with the crossing point O (``rho_segments``);
* two segments on parallel lines (``rho_parallel``).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CoincidentLines, DegenerateInput, DegenerateSegment, ParallelLines
from .geometry import (
    TAU_DEG,
    TAU_PAR,
    Point,
    as_point,
    cross,
    dot,
    intersect_lines,
    length_scale,
    norm,
    unit,
)

log = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi


def _H(x):
    return x > 0


def _rho_aB(ell, a, b, gamma):
    """Density of chords crossing side a that are dominated by vertex B, for the
    triangle with sides a (CB) and b (CA) enclosing gamma at C. Vectorised."""
    cg, sg = np.cos(gamma), np.sin(gamma)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.sqrt(np.maximum(a * a + b * b - 2 * a * b * cg, 0.0))
        alpha = np.arccos(np.clip((b - a * cg) / c, -1.0, 1.0))
        beta = np.arccos(np.clip((a - b * cg) / c, -1.0, 1.0))
        h = a * sg  # height from B onto side b
        q = np.clip(np.where(ell > 0, h / ell, 1.0), 0.0, 1.0)
    s = np.arcsin(q)
    r = q * np.sqrt(1.0 - q * q)
    sa, ca = np.sin(alpha), np.cos(alpha)
    sb, cb = np.sin(beta), np.cos(beta)

    full = beta * cg + ca * sb
    # chords on the C side of the height (length up to a)
    near_c = (s - r - gamma) * cg + (1.0 - q * q) * sg
    # chords on the A side of the height (length up to c)
    near_a = (s - r - alpha) * cg + q * q * sg - sa * cb
    # gamma obtuse: chord lengths run from a up to c
    obtuse = (s - r + sa * ca - alpha) * cg + (q * q - sa * sa) * sg

    foot_inside = (alpha <= HALF_PI) & (gamma <= HALF_PI)
    alpha_obtuse = alpha > HALF_PI

    v_inside = _H(h - ell) * full + (_H(c - ell) & _H(ell - h)) * near_a + (_H(a - ell) & _H(ell - h)) * near_c
    v_alpha = _H(c - ell) * full + (_H(ell - c) & _H(a - ell)) * near_c
    v_gamma = _H(a - ell) * full + (_H(ell - a) & _H(c - ell)) * obtuse
    val = np.where(foot_inside, v_inside, np.where(alpha_obtuse, v_alpha, v_gamma))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = val / (2.0 * sg)
    ok = (a > 0) & (b > 0) & (gamma > 0) & (gamma < math.pi) & (ell > 0)
    return np.where(ok, out, 0.0)


def concurrent_density(a, b, gamma, ell):
    """Vectorised concurrent-pair density; zero-length legs give 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ell = np.asarray(ell, dtype=float)
    return _rho_aB(ell, a, b, gamma) + _rho_aB(ell, b, a, gamma)


def rho_concurrent(a, b, gamma, ell):
    """Density of chords joining two segments of lengths a and b that meet at a
    common endpoint with angle gamma."""
    if np.any(np.asarray(a) <= 0) or np.any(np.asarray(b) <= 0):
        raise DegenerateInput("segment lengths must be positive")
    if np.any(np.asarray(gamma) <= 0) or np.any(np.asarray(gamma) >= math.pi):
        raise DegenerateInput("angle must lie in (0, pi)")
    return concurrent_density(a, b, gamma, ell)


def ray_pair_density(a_lo, a_hi, b_lo, b_hi, gamma, ell):
    """Chords joining [a_lo, a_hi] on one ray and [b_lo, b_hi] on another ray from
    the same origin, by inclusion-exclusion. All arguments broadcast."""
    return (
        concurrent_density(a_hi, b_hi, gamma, ell)
        - concurrent_density(a_lo, b_hi, gamma, ell)
        - concurrent_density(a_hi, b_lo, gamma, ell)
        + concurrent_density(a_lo, b_lo, gamma, ell)
    )


def parallel_density(xa1, xa2, xb1, xb2, d, ell):
    """Chords joining [xa1, xa2] and [xb1, xb2] on parallel lines a distance d
    apart (coordinates along the common direction). Vectorised; 0 for ell <= d."""
    ell = np.asarray(ell, dtype=float)
    s = np.sqrt(np.maximum(ell * ell - d * d, 0.0))
    ok = (ell > d) & (s > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        pref = np.where(ok, d * d / (ell * ell * np.where(ok, s, 1.0)), 0.0)
    overlap = np.maximum(np.minimum(xb2 - s, xa2) - np.maximum(xb1 - s, xa1), 0.0) + np.maximum(
        np.minimum(xb2 + s, xa2) - np.maximum(xb1 + s, xa1), 0.0
    )
    return np.where(ok, pref * overlap, 0.0)


@dataclass(frozen=True)
class SegmentPairConfig:
    A: Point
    A2: Point
    B: Point
    B2: Point
    classification: str  # "general" | "parallel" | "concurrent-at-endpoint"
    O: Optional[Point]
    gamma: float
    d: Optional[float]

    @property
    def lengths(self) -> tuple[float, float, float, float]:
        """OA, OA2, OB, OB2 (general case only)."""
        O = self.O
        return (norm(self.A - O), norm(self.A2 - O), norm(self.B - O), norm(self.B2 - O))


def classify_pair(A, A2, B, B2) -> SegmentPairConfig:
    A, A2, B, B2 = map(as_point, (A, A2, B, B2))
    scale = length_scale(A, A2, B, B2)
    da, db = A2 - A, B2 - B
    if norm(da) <= TAU_DEG * scale or norm(db) <= TAU_DEG * scale:
        raise DegenerateSegment("segment endpoints coincide")
    if abs(cross(da, db)) <= TAU_PAR * scale * scale:
        u = unit(da)
        d = abs(cross(B - A, u))
        return SegmentPairConfig(A, A2, B, B2, "parallel", None, 0.0, d)
    O = intersect_lines(A, A2, B, B2)
    gamma = math.acos(max(-1.0, min(1.0, dot(da, db) / (norm(da) * norm(db)))))
    shared = {A, A2} & {B, B2}
    kind = "concurrent-at-endpoint" if shared else "general"
    return SegmentPairConfig(A, A2, B, B2, kind, O, gamma, None)


def _split_at(P, Q, O, tol):
    """Pieces of PQ on each side of O, as (near, far) distance pairs with ray direction."""
    d = Q - P
    L2 = dot(d, d)
    t = dot(O - P, d) / L2
    L = math.sqrt(L2)
    if t * L > tol and (1 - t) * L > tol:
        pieces = [(P, O), (O, Q)]
    else:
        pieces = [(P, Q)]
    out = []
    for X, Y in pieces:
        dx, dy = norm(X - O), norm(Y - O)
        dx = 0.0 if dx <= tol else dx
        dy = 0.0 if dy <= tol else dy
        far = X if dx > dy else Y
        out.append((min(dx, dy), max(dx, dy), unit(far - O)))
    return out


def _ray_pieces(A, A2, B, B2, O, scale):
    tol = TAU_DEG * scale * 1e3
    for a_lo, a_hi, va in _split_at(A, A2, O, tol):
        for b_lo, b_hi, vb in _split_at(B, B2, O, tol):
            g = math.acos(max(-1.0, min(1.0, dot(va, vb))))
            yield a_lo, a_hi, b_lo, b_hi, g


def rho_segments(A, A2, B, B2, ell):
    """Density of chords joining segments AA2 and BB2 on non-parallel lines."""
    A, A2, B, B2 = map(as_point, (A, A2, B, B2))
    ell = np.asarray(ell, dtype=float)
    scale = length_scale(A, A2, B, B2)
    O = intersect_lines(A, A2, B, B2)  # raises ParallelLines / DegenerateSegment
    total = np.zeros(np.broadcast(ell).shape)
    for a_lo, a_hi, b_lo, b_hi, g in _ray_pieces(A, A2, B, B2, O, scale):
        if g <= 0.0 or g >= math.pi:
            continue
        total = total + ray_pair_density(a_lo, a_hi, b_lo, b_hi, g, ell)
    low = total.min() if total.size else 0.0
    if low < -1e-9 * max(1.0, float(np.abs(total).max())):
        log.warning("inclusion-exclusion round-off below tolerance: %g", low)
    return np.maximum(total, 0.0)


def rho_parallel(A, A2, B, B2, ell):
    """Density of chords joining segments AA2 and BB2 on parallel lines."""
    A, A2, B, B2 = map(as_point, (A, A2, B, B2))
    scale = length_scale(A, A2, B, B2)
    da, db = A2 - A, B2 - B
    if norm(da) <= TAU_DEG * scale or norm(db) <= TAU_DEG * scale:
        raise DegenerateSegment("segment endpoints coincide")
    if abs(cross(da, db)) > TAU_PAR * scale * scale:
        raise ParallelLines("segments are not parallel")
    u = unit(da)
    d = abs(cross(B - A, u))
    if d <= TAU_DEG * scale:
        raise CoincidentLines("segments lie on the same line")
    xa = sorted((0.0, norm(da)))
    xb = sorted((dot(B - A, u), dot(B2 - A, u)))
    return parallel_density(xa[0], xa[1], xb[0], xb[1], d, ell)


def segment_pair_density(A, A2, B, B2, ell):
    """Route to the parallel or non-parallel formula."""
    cfg = classify_pair(A, A2, B, B2)
    if cfg.classification == "parallel":
        if cfg.d <= TAU_DEG * length_scale(A, A2, B, B2):
            return np.zeros(np.broadcast(np.asarray(ell, dtype=float)).shape)
        return rho_parallel(A, A2, B, B2, ell)
    return rho_segments(A, A2, B, B2, ell)


def _triangle_breaks(a, b, g):
    if a <= 0 or b <= 0 or not (0 < g < math.pi):
        return []
    c = math.sqrt(max(a * a + b * b - 2 * a * b * math.cos(g), 0.0))
    area = 0.5 * a * b * math.sin(g)
    out = [a, b, c]
    for side in (a, b, c):
        if side > 0:
            out.append(2 * area / side)
    return out


def pair_breakpoints(A, A2, B, B2) -> tuple[list[float], list[float]]:
    """Chord lengths where the pair density may have kinks, and where it diverges."""
    cfg = classify_pair(A, A2, B, B2)
    ends = [norm(X - Y) for X in (cfg.A, cfg.A2) for Y in (cfg.B, cfg.B2)]
    if cfg.classification == "parallel":
        u = unit(cfg.A2 - cfg.A)
        xa = sorted((0.0, norm(cfg.A2 - cfg.A)))
        xb = sorted((dot(cfg.B - cfg.A, u), dot(cfg.B2 - cfg.A, u)))
        scale = length_scale(A, A2, B, B2)
        singular = []
        if cfg.d > TAU_DEG * scale and min(xa[1], xb[1]) - max(xa[0], xb[0]) > TAU_DEG * scale:
            singular.append(cfg.d)
        return sorted(set(ends + [cfg.d])), singular
    scale = length_scale(A, A2, B, B2)
    out = list(ends)
    for a_lo, a_hi, b_lo, b_hi, g in _ray_pieces(cfg.A, cfg.A2, cfg.B, cfg.B2, cfg.O, scale):
        for a in (a_lo, a_hi):
            for b in (b_lo, b_hi):
                out.extend(_triangle_breaks(a, b, g))
    return sorted(set(x for x in out if x > 0)), []


@dataclass(frozen=True)
class PairDensityTerm:
    """One closed-form contribution: chords joining segment AA2 to segment BB2.

    ``kind`` is "concurrent" (shared endpoint), "general", "parallel" or
    "null" (collinear segments, no chords).
    """

    kind: str
    A: Point
    A2: Point
    B: Point
    B2: Point
    coefficient: float = 1.0

    @classmethod
    def build(cls, A, A2, B, B2, coefficient: float = 1.0) -> "PairDensityTerm":
        A, A2, B, B2 = map(as_point, (A, A2, B, B2))
        cfg = classify_pair(A, A2, B, B2)
        scale = length_scale(A, A2, B, B2)
        if cfg.classification == "parallel":
            kind = "null" if cfg.d <= TAU_DEG * scale else "parallel"
        elif cfg.classification == "concurrent-at-endpoint":
            kind = "concurrent"
        else:
            kind = "general"
        if kind == "concurrent":
            C, a_end, b_end = _concurrent_legs(A, A2, B, B2)
            g = math.acos(max(-1.0, min(1.0, dot(unit(a_end - C), unit(b_end - C)))))
            if g >= math.pi - TAU_DEG or g <= TAU_DEG:
                kind = "null"
        return cls(kind, A, A2, B, B2, coefficient)

    @property
    def concurrent_params(self) -> tuple[float, float, float]:
        C, a_end, b_end = _concurrent_legs(self.A, self.A2, self.B, self.B2)
        g = math.acos(max(-1.0, min(1.0, dot(unit(a_end - C), unit(b_end - C)))))
        return norm(a_end - C), norm(b_end - C), g

    def evaluate(self, ell):
        ell = np.asarray(ell, dtype=float)
        if self.kind == "null":
            val = np.zeros(ell.shape)
        elif self.kind == "concurrent":
            a, b, g = self.concurrent_params
            val = concurrent_density(a, b, g, ell)
        elif self.kind == "parallel":
            val = rho_parallel(self.A, self.A2, self.B, self.B2, ell)
        else:
            val = rho_segments(self.A, self.A2, self.B, self.B2, ell)
        return self.coefficient * val

    def breakpoints(self) -> tuple[list[float], list[float]]:
        if self.kind == "null":
            return [], []
        if self.kind == "concurrent":
            a, b, g = self.concurrent_params
            return sorted(set(_triangle_breaks(a, b, g))), []
        return pair_breakpoints(self.A, self.A2, self.B, self.B2)


def _concurrent_legs(A, A2, B, B2):
    for C, a_end in ((A, A2), (A2, A)):
        for Cb, b_end in ((B, B2), (B2, B)):
            if C == Cb:
                return C, a_end, b_end
    raise DegenerateInput("segments do not share an endpoint")
