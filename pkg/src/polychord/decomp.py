"""Multi-chord density of arbitrary (concave, holed) polygons.

For every unordered side pair (AB, CD) the chords joining AB to CD are split
into finitely many closed-form terms. Along AB, the set of target points on CD
visible from P is a union of windows whose ends are either fixed points of CD
or the projections, from P, of a polygon vertex W. Between consecutive event
points (where P lines up with two vertices) every window keeps the same labels
and each window [f(P), g(P)] decomposes as

    [f, g] = [F*, G*] + [f, F*) + (G*, g]              when F* <= G*
    [f, g] = [f, F*) + (G*, g] - (G*, F*)              when F* >  G*

with F* = max f and G* = min g over the sub-segment. The rectangle pieces are
chords between two segments (closed form); a piece bounded by a moving end is
a diagonal-pentagon term with concave vertex W.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .concave import (
    DPentConfig,
    rho_conc_bounds,
    rho_conc_riemann,
    semianalytic_with_flag,
)
from .convex import (
    ENGINES,
    DensityCurve,
    GridSpec,
    _merge,
    as_polygon,
    convex_plan,
    nudge,
    sample_curve,
)
from .geometry import Point, Polygon, cross, dot, length_scale, norm, project_through
from .pairs import PairDensityTerm, pair_breakpoints

TOL = 1e-10

Label = Union[str, int]  # "lo", "hi" or a vertex index


@dataclass(frozen=True)
class PlanTerm:
    kind: str  # "Qu" | "DPent"
    coefficient: float
    geometry: Union[PairDensityTerm, DPentConfig]
    case_id: int

    def to_dict(self) -> dict:
        if self.kind == "Qu":
            g = self.geometry
            geo = {"A": list(g.A), "A2": list(g.A2), "B": list(g.B), "B2": list(g.B2), "pair": g.kind}
        else:
            geo = self.geometry.to_dict()
        return {"kind": self.kind, "coefficient": self.coefficient, "case_id": self.case_id, "geometry": geo}


@dataclass(frozen=True)
class SubSegment:
    t0: float
    t1: float
    P0: Point
    P1: Point
    terms: tuple[PlanTerm, ...]

    @property
    def case_ids(self) -> tuple[int, ...]:
        return tuple(sorted({t.case_id for t in self.terms}))


@dataclass(frozen=True)
class DecompositionPlan:
    source: int
    target: int
    sub_segments: tuple[SubSegment, ...]
    flags: tuple[str, ...] = ()

    @property
    def terms(self) -> list[PlanTerm]:
        return [t for s in self.sub_segments for t in s.terms]

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "flags": list(self.flags),
            "sub_segments": [
                {
                    "t0": s.t0,
                    "t1": s.t1,
                    "P0": list(s.P0),
                    "P1": list(s.P1),
                    "cases": list(s.case_ids),
                    "terms": [t.to_dict() for t in s.terms],
                }
                for s in self.sub_segments
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


# ---------------------------------------------------------------------------
# visibility


def _clip_to_triangle(p, q, tri):
    """Part of segment pq inside the closed CCW triangle, as (t_in, t_out) or None."""
    t_in, t_out = 0.0, 1.0
    d = q - p
    for k in range(3):
        a, b = tri[k], tri[(k + 1) % 3]
        e = b - a
        # inside: cross(e, x - a) >= 0
        f0 = cross(e, p - a)
        fd = cross(e, d)
        if abs(fd) < 1e-300:
            if f0 < 0:
                return None
            continue
        t = -f0 / fd
        if fd > 0:
            t_in = max(t_in, t)
        else:
            t_out = min(t_out, t)
        if t_in > t_out:
            return None
    return t_in, t_out


@dataclass
class _PairGeometry:
    poly: Polygon
    i: int
    j: int
    A: Point
    B: Point
    C: Point
    D: Point
    u_lo: float
    u_hi: float
    scale: float
    vertex_of_edge: list  # edge index -> (start vertex id, end vertex id)
    vertices: list

    @property
    def eAB(self):
        return self.B - self.A

    @property
    def eCD(self):
        return self.D - self.C

    def P(self, t: float) -> Point:
        if t == 0.0:
            return self.A
        if t == 1.0:
            return self.B
        return self.A + self.eAB * t

    def T(self, u: float) -> Point:
        if u == 0.0:
            return self.C
        if u == 1.0:
            return self.D
        return self.C + self.eCD * u

    def label_u(self, label: Label, t: float) -> float:
        if label == "lo":
            return self.u_lo
        if label == "hi":
            return self.u_hi
        return project_through(self.P(t), self.vertices[label], self.C, self.eCD)

    def windows(self, t: float):
        """Visible windows on CD from P(t) as [(u0, lab0, u1, lab1), ...]."""
        P = self.P(t)
        tol = TOL * self.scale
        if cross(self.eCD, P - self.C) <= tol * norm(self.eCD):
            return []
        T0, T1 = self.T(self.u_lo), self.T(self.u_hi)
        tri = (P, T0, T1) if cross(T0 - P, T1 - P) > 0 else (P, T1, T0)
        shadows = []
        for k, (vs, ve) in enumerate(self.vertex_of_edge):
            if k in (self.i, self.j):
                continue
            p, q = self.vertices[vs], self.vertices[ve]
            hit = _clip_to_triangle(p, q, tri)
            if hit is None:
                continue
            ta, tb = hit
            if (tb - ta) * norm(q - p) <= tol:
                continue
            ends = []
            for tt in (ta, tb):
                X = p + (q - p) * tt
                u = project_through(P, X, self.C, self.eCD)
                if tt == 0.0:
                    is_vertex = vs
                elif tt == 1.0:
                    is_vertex = ve
                else:
                    is_vertex = None
                if is_vertex is not None and abs(cross(self.eCD, X - self.C)) <= tol * norm(self.eCD):
                    is_vertex = None  # vertex on the target line: fixed
                if is_vertex is None:
                    if abs(u - self.u_lo) <= 1e-9:
                        lab: Label = "lo"
                    elif abs(u - self.u_hi) <= 1e-9:
                        lab = "hi"
                    else:
                        lab = ("u", u)
                else:
                    lab = is_vertex
                ends.append((u, lab))
            ends.sort(key=lambda e: e[0])
            shadows.append((ends[0][0], ends[0][1], ends[1][0], ends[1][1]))
        shadows.sort(key=lambda s: s[0])
        out = []
        cur_u, cur_lab = self.u_lo, "lo"
        for s0, l0, s1, l1 in shadows:
            if s0 > cur_u + 1e-12:
                out.append((cur_u, cur_lab, min(s0, self.u_hi), l0 if s0 < self.u_hi else "hi"))
            if s1 > cur_u:
                cur_u, cur_lab = s1, l1
        if self.u_hi > cur_u + 1e-12:
            out.append((cur_u, cur_lab, self.u_hi, "hi"))
        return [w for w in out if w[2] - w[0] > 1e-12]


def _vertex_table(poly: Polygon):
    vertices, edge_v = [], []
    for ring in poly.rings:
        base = len(vertices)
        vertices.extend(ring)
        n = len(ring)
        edge_v.extend((base + k, base + (k + 1) % n) for k in range(n))
    return vertices, edge_v


def _pair_geometry(poly: Polygon, i: int, j: int) -> Optional[_PairGeometry]:
    vertices, edge_v = _vertex_table(poly)
    A, B = vertices[edge_v[i][0]], vertices[edge_v[i][1]]
    C, D = vertices[edge_v[j][0]], vertices[edge_v[j][1]]
    scale = poly.diameter
    eAB = B - A
    fC, fD = cross(eAB, C - A), cross(eAB, D - A)
    tol = TOL * scale * norm(eAB)
    if fC <= tol and fD <= tol:
        return None
    if fC > tol and fD > tol:
        u_lo, u_hi = 0.0, 1.0
    else:
        uk = fC / (fC - fD)
        u_lo, u_hi = (uk, 1.0) if fC <= tol else (0.0, uk)
    if u_hi - u_lo <= 1e-12:
        return None
    return _PairGeometry(poly, i, j, A, B, C, D, u_lo, u_hi, scale, edge_v, vertices)


def _event_ts(g: _PairGeometry) -> list[float]:
    pts = list(g.vertices) + [g.T(g.u_lo), g.T(g.u_hi)]
    A, e = g.A, g.eAB
    ee = dot(e, e)
    ts = {0.0, 1.0}
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            X, Y = pts[a], pts[b]
            r = Y - X
            den = cross(e, r)
            if abs(den) <= 1e-14 * norm(r) * math.sqrt(ee):
                continue
            t = cross(X - A, r) / den
            if 1e-12 < t < 1 - 1e-12:
                ts.add(t)
    den = cross(e, g.eCD)
    if abs(den) > 1e-14 * math.sqrt(ee) * norm(g.eCD):
        t = cross(g.C - A, g.eCD) / den
        if 1e-12 < t < 1 - 1e-12:
            ts.add(t)
    out = []
    for t in sorted(ts):
        if not out or t - out[-1] > 1e-12:
            out.append(t)
    if out[-1] != 1.0:
        out[-1] = 1.0
    return out


def _key(windows):
    return tuple((w[1], w[3]) for w in windows)


def decompose_pair(poly, sideAB: int, sideCD: int) -> DecompositionPlan:
    """Signed closed-form terms whose sum is the density of chords joining
    side sideAB to side sideCD (edge indices over all rings)."""
    poly = as_polygon(poly)
    if sideAB == sideCD:
        raise ValueError("a side cannot be paired with itself")
    g = _pair_geometry(poly, sideAB, sideCD)
    if g is None:
        return DecompositionPlan(sideAB, sideCD, ())
    ts = _event_ts(g)
    pieces = []  # (ta, tb, key)
    for ta, tb in zip(ts[:-1], ts[1:]):
        w = g.windows(0.5 * (ta + tb))
        k = _key(w)
        if pieces and pieces[-1][2] == k:
            pieces[-1] = (pieces[-1][0], tb, k)
        else:
            pieces.append((ta, tb, k))
    subs = []
    flags: list[str] = []
    for ta, tb, key in pieces:
        if not key:
            continue
        terms = []
        for lab_f, lab_g in key:
            terms.extend(_window_terms(g, ta, tb, lab_f, lab_g, flags))
        if terms:
            subs.append(SubSegment(ta, tb, g.P(ta), g.P(tb), tuple(terms)))
    return DecompositionPlan(sideAB, sideCD, tuple(subs), tuple(sorted(set(flags))))


def _end_value(g, lab, t):
    if isinstance(lab, tuple):
        return lab[1]
    return g.label_u(lab, t)


def _window_terms(g: _PairGeometry, ta, tb, lab_f, lab_g, flags):
    Pa, Pb = g.P(ta), g.P(tb)
    fa, fb = _end_value(g, lab_f, ta), _end_value(g, lab_f, tb)
    ga, gb = _end_value(g, lab_g, ta), _end_value(g, lab_g, tb)
    eps = 1e-12
    mov_f = isinstance(lab_f, int) and abs(fa - fb) > eps
    mov_g = isinstance(lab_g, int) and abs(ga - gb) > eps
    F = max(fa, fb) if mov_f else 0.5 * (fa + fb)
    G = min(ga, gb) if mov_g else 0.5 * (ga + gb)
    out = []
    if mov_f:
        cfg = _dpent(g, Pa, Pb, fa, fb, lab_f, high_is_near=True, flags=flags)
        if cfg is not None:
            out.append(cfg)
    if mov_g:
        cfg = _dpent(g, Pa, Pb, ga, gb, lab_g, high_is_near=False, flags=flags)
        if cfg is not None:
            out.append(cfg)
    if mov_f and mov_g:
        case = 1 if G - F > eps else (2 if F - G > eps else 3)
    elif mov_f:
        case = 6 if abs(G - F) > eps else 4
    elif mov_g:
        case = 7 if abs(G - F) > eps else 5
    else:
        case = 8
    out = [PlanTerm("DPent", 1.0, c, case) for c in out]
    if G - F > eps:
        out.append(PlanTerm("Qu", 1.0, PairDensityTerm.build(Pa, Pb, g.T(F), g.T(G)), case))
    elif F - G > eps:
        out.append(PlanTerm("Qu", -1.0, PairDensityTerm.build(Pa, Pb, g.T(G), g.T(F)), case))
    return out


def _dpent(g, Pa, Pb, va, vb, vid, high_is_near, flags):
    # the end where the window is empty: f = F* = max f, or g = G* = min g
    a_is_near = (va >= vb) if high_is_near else (va <= vb)
    P_A, P_B = (Pa, Pb) if a_is_near else (Pb, Pa)
    near, far = (va, vb) if a_is_near else (vb, va)
    try:
        return DPentConfig(P_A, P_B, g.vertices[vid], g.T(near), g.T(far))
    except Exception as exc:  # degenerate alignment; measure-zero configuration
        flags.append(f"dropped degenerate term at vertex {vid}: {exc}")
        return None


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class PolygonPlan:
    plans: tuple[DecompositionPlan, ...]
    breakpoints: tuple[float, ...]
    singular: tuple[float, ...]
    flags: tuple[str, ...]

    @property
    def terms(self) -> list[PlanTerm]:
        return [t for p in self.plans for t in p.terms]

    def to_dict(self) -> dict:
        return {
            "breakpoints": list(self.breakpoints),
            "singular": list(self.singular),
            "flags": list(self.flags),
            "pairs": [p.to_dict() for p in self.plans if p.sub_segments],
        }


def _collinear_triples(poly: Polygon) -> bool:
    vs = poly.vertices
    s = poly.diameter
    n = len(vs)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if abs(cross(vs[b] - vs[a], vs[c] - vs[a])) <= 1e-12 * s * s:
                    return True
    return False


def polygon_plan(poly) -> PolygonPlan:
    poly = as_polygon(poly)
    n = len(poly.edges)
    plans = []
    bps: list[float] = []
    sing: list[float] = []
    flags: list[str] = []
    for i in range(n):
        for j in range(i + 1, n):
            p = decompose_pair(poly, i, j)
            plans.append(p)
            flags.extend(p.flags)
            for t in p.terms:
                b, s = _term_breaks(t)
                bps.extend(b)
                sing.extend(s)
    if _collinear_triples(poly):
        flags.append("aligned vertices: three or more vertices are collinear")
    scale = poly.diameter
    return PolygonPlan(tuple(plans), _merge(bps, scale), _merge(sing, scale), tuple(sorted(set(flags))))


def _term_breaks(t: PlanTerm):
    if t.kind == "Qu":
        return t.geometry.breakpoints()
    b, _ = pair_breakpoints(t.geometry.P_A, t.geometry.P_B, t.geometry.Q_near, t.geometry.Q_far)
    b2, s = t.geometry.breakpoints()
    return list(b) + b2, s


def evaluate_plan(plan: PolygonPlan, ell, engine: str = "analytic", bounds_n: int = 1000, riemann_n: Optional[int] = None):
    """(values, lower, upper, flags) of the summed plan at ell."""
    ell = np.atleast_1d(np.asarray(ell, dtype=float))
    exact = np.zeros(ell.shape)
    conc = np.zeros(ell.shape)
    lo = np.zeros(ell.shape)
    hi = np.zeros(ell.shape)
    flags: list[str] = []
    for t in plan.terms:
        if t.kind == "Qu":
            exact += t.geometry.evaluate(ell) * t.coefficient
            continue
        cfg = t.geometry
        if engine == "bounds":
            r = rho_conc_bounds(cfg, ell, bounds_n)
            lo += t.coefficient * r.lower
            hi += t.coefficient * r.upper
            conc += t.coefficient * r.mid
        elif engine == "riemann":
            conc += t.coefficient * np.asarray(rho_conc_riemann(cfg, ell, riemann_n))
        else:
            v, fl = semianalytic_with_flag(cfg, ell)
            if fl:
                flags.append("semianalytic root finding failed; riemann fallback used")
            conc += t.coefficient * np.asarray(v)
    values = exact + conc
    if engine == "bounds":
        return values, exact + lo, exact + hi, flags
    return values, None, None, flags


def mcd(poly, grid_spec=None, engine: str = "analytic", bounds_n: int = 1000, riemann_n: Optional[int] = None, force_general: bool = False) -> DensityCurve:
    """Multi-chord density of any valid polygon sampled on a grid."""
    poly = as_polygon(poly)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    spec = grid_spec if isinstance(grid_spec, GridSpec) else GridSpec.parse(grid_spec)
    if poly.is_convex() and not force_general:
        return sample_curve(poly, spec, engine)
    plan = polygon_plan(poly)
    scale = poly.diameter
    grid = nudge(spec.abscissae(scale), plan.singular + plan.breakpoints, scale)
    values, lower, upper, flags = evaluate_plan(plan, grid, engine, bounds_n, riemann_n)
    values = np.maximum(values, 0.0)
    if lower is not None:
        lower, upper = np.maximum(lower, 0.0), np.maximum(upper, 0.0)
    return DensityCurve(grid, values, plan.breakpoints, plan.singular, lower, upper, engine, tuple(plan.flags) + tuple(sorted(set(flags))))


def density_moments(poly, order: int = 16, pieces: int = 0) -> tuple[float, float]:
    """(integral of rho, integral of ell*rho) over (0, diameter] for any polygon.

    Uses the closed form for convex input and the semi-analytic route otherwise;
    the quadrature is split at every breakpoint of the plan.
    """
    from .quadrature import split_nodes

    poly = as_polygon(poly)
    if poly.is_convex():
        plan = convex_plan(poly)
        fn, bps = plan.evaluate, list(plan.breakpoints) + list(plan.singular)
    else:
        pp = polygon_plan(poly)
        fn = lambda x: evaluate_plan(pp, x, "analytic")[0]  # noqa: E731
        bps = list(pp.breakpoints) + list(pp.singular)
    D = poly.diameter
    if pieces:
        bps += list(np.linspace(0.0, D, pieces + 1))
    x, w = split_nodes(0.0, D, bps, order)
    v = fn(x)
    return float(w @ v), float(w @ (x * v))
