"""Density of the chords of a diagonal pentagon that join its source side to its
target side while passing the concave vertex on the correct side.

Geometry (``DPentConfig``): source side P_A P_B, target side Q_near Q_far,
concave vertex V where the diagonals P_A Q_near and P_B Q_far of the convex
quadrilateral P_A P_B Q_near Q_far cross. For a source point P the admissible
target points run from Q_near to op(P), the point of the target line collinear
with P and V.

Three engines evaluate the term:

* ``rho_conc_bounds``: step approximations from below and above built from
  closed-form segment-pair densities on n source sub-segments;
* ``rho_conc_riemann``: midpoint quadrature of the per-unit-length kernel along
  the source side, with jump location and quadratic grading towards the
  inverse-square-root end;
* ``rho_conc_semianalytic``: exact integration limits from polynomial roots and
  a closed-form primitive of the kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateInput, DomainError, RootFindingFailure
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
from .pairs import parallel_density, ray_pair_density


# ---------------------------------------------------------------------------
# kernel and primitive


def _kernel(x, y, gamma, ell, disc=None):
    # x y sin^2(gamma) / (ell^2 sqrt(ell^2 - x^2 sin^2 gamma))
    sg = math.sin(gamma)
    if disc is None:
        disc = ell * ell - (x * sg) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.sqrt(disc)
        return x * y * sg * sg / (ell * ell * root)


def _images(x, gamma, ell, disc=None):
    """y_-, y_+ and the reach mask (x sin gamma < ell).

    disc, when given, replaces ell^2 - (x sin gamma)^2 (callers near the reach
    point compute it without cancellation).
    """
    sg, cg = math.sin(gamma), math.cos(gamma)
    if disc is None:
        disc = ell * ell - (x * sg) ** 2
    ok = disc > 0
    root = np.sqrt(np.where(ok, disc, 0.0))
    return x * cg - root, x * cg + root, ok


def _inside(y, y1, y2):
    return (y >= y1) & (y <= y2)


def rho2_prime(x, y1, y2, gamma, ell):
    """Density, per unit source length at distance x from O, of chords of length
    ell reaching the target window [y1, y2] (distances from O along the target
    ray, the two rays enclosing gamma)."""
    if not (0 < gamma < math.pi):
        raise DegenerateInput("angle must lie in (0, pi)")
    x = np.asarray(x, dtype=float)
    ell = np.asarray(ell, dtype=float)
    if np.any(x <= 0) or np.any(ell <= 0):
        raise DegenerateInput("x and ell must be positive")
    y_lo, y_hi, ok = _images(x, gamma, ell)
    out = np.zeros(np.broadcast(x, ell, y1, y2).shape)
    for y in (y_lo, y_hi):
        hit = ok & _inside(y, y1, y2) & (y > 0)
        out = out + np.where(hit, _kernel(x, y, gamma, ell), 0.0)
    return out


def _parallel_kernel(d, ell):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ell > d, d * d / (ell * ell * np.sqrt(np.maximum(ell * ell - d * d, 0.0))), 0.0)


def rho2_prime_parallel(x, y1, y2, d, ell):
    """Parallel-lines kernel: both images x -/+ sqrt(ell^2 - d^2) tested against
    the window [y1, y2]."""
    if d <= 0:
        raise DegenerateInput("line distance must be positive")
    x = np.asarray(x, dtype=float)
    ell = np.asarray(ell, dtype=float)
    s = np.sqrt(np.maximum(ell * ell - d * d, 0.0))
    count = _inside(x - s, y1, y2).astype(float) + _inside(x + s, y1, y2).astype(float)
    return np.where(ell > d, count * _parallel_kernel(d, ell), 0.0)


def _primitive(x, gamma, ell, sign, disc=None):
    # primitive in x of the kernel at y = y_sign; x sin(gamma) <= ell assumed
    sg, cg = math.sin(gamma), math.cos(gamma)
    xs = x * sg
    if disc is None:
        disc = ell * ell - xs * xs
    root = np.sqrt(np.maximum(disc, 0.0))
    with np.errstate(divide="ignore"):
        ang = np.arctan2(root, xs)
    inner = (x / (2 * ell)) * (-sign * xs + (cg / sg) * root) + (ell * cg / (2 * sg * sg)) * ang
    return -(sg / ell) * inner


def rho2_antiderivative(x, gamma, ell, sign):
    """Closed-form primitive, in x, of the kernel on the y_+ (sign=+1 or "+")
    or y_- (sign=-1 or "-") branch."""
    s = {"+": 1, "-": -1, 1: 1, -1: -1}[sign]
    if not (0 < gamma < math.pi):
        raise DegenerateInput("angle must lie in (0, pi)")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x * math.sin(gamma) >= ell):
        raise DomainError("primitive needs 0 < x sin(gamma) < ell")
    return _primitive(x, gamma, ell, s)


def kernel_branch(x, gamma, ell, sign):
    """Kernel value on one branch, without the window indicator."""
    s = {"+": 1, "-": -1, 1: 1, -1: -1}[sign]
    y_lo, y_hi, _ = _images(np.asarray(x, dtype=float), gamma, ell)
    return _kernel(x, y_hi if s > 0 else y_lo, gamma, ell)


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class BoundsResult:
    lower: np.ndarray
    upper: np.ndarray
    n: int

    @property
    def width(self):
        return self.upper - self.lower

    @property
    def mid(self):
        return 0.5 * (self.upper + self.lower)


@dataclass(frozen=True)
class DPentConfig:
    P_A: Point
    P_B: Point
    V: Point
    Q_near: Point
    Q_far: Point
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for name in ("P_A", "P_B", "V", "Q_near", "Q_far"):
            object.__setattr__(self, name, as_point(getattr(self, name)))
        if self.check:
            self.validate()

    @property
    def scale(self) -> float:
        return length_scale(self.P_A, self.P_B, self.Q_near, self.Q_far)

    def validate(self) -> None:
        s = self.scale
        if norm(self.P_B - self.P_A) <= TAU_DEG * s or norm(self.Q_far - self.Q_near) <= TAU_DEG * s:
            raise DegenerateInput("source or target side has zero length")
        d1, d2 = self.Q_near - self.P_A, self.Q_far - self.P_B
        den = cross(d1, d2)
        if abs(den) <= TAU_PAR * s * s:
            raise DegenerateInput("diagonals are parallel")
        t1 = cross(self.P_B - self.P_A, d2) / den
        t2 = cross(self.P_B - self.P_A, d1) / den
        X = self.P_A + d1 * t1
        tol = 1e-7 * s
        if norm(X - self.V) > tol or norm(self.P_B + d2 * t2 - self.V) > tol:
            raise DegenerateInput("V is not the crossing of the diagonals")
        if not (0 < t1 < 1 and 0 < t2 < 1):
            raise DegenerateInput("diagonals do not cross inside the quadrilateral")

    @cached_property
    def e_s(self) -> Point:
        return self.P_B - self.P_A

    @cached_property
    def e_t(self) -> Point:
        return self.Q_far - self.Q_near

    @cached_property
    def source_length(self) -> float:
        return norm(self.e_s)

    @cached_property
    def parallel(self) -> bool:
        s = self.scale
        return abs(cross(unit(self.e_s), unit(self.e_t))) <= 1e3 * TAU_PAR

    @cached_property
    def O(self) -> Optional[Point]:
        if self.parallel:
            return None
        return intersect_lines(self.P_A, self.P_B, self.Q_near, self.Q_far)

    @cached_property
    def frame(self) -> tuple:
        """(x0, x1, yN, yF, v, w): source/target coordinates.

        Non-parallel: distances from O along rays v (through the source) and w
        (through the target). Parallel: coordinates along the source direction
        measured from P_A.
        """
        if self.parallel:
            v = unit(self.e_s)
            base = self.P_A
            w = v
        else:
            base = self.O
            mid_s = self.P_A + self.e_s * 0.5
            mid_t = self.Q_near + self.e_t * 0.5
            v, w = unit(mid_s - base), unit(mid_t - base)
            base = self.O
        x0, x1 = dot(self.P_A - base, v), dot(self.P_B - base, v)
        yN, yF = dot(self.Q_near - base, w), dot(self.Q_far - base, w)
        return x0, x1, yN, yF, v, w

    @cached_property
    def gamma(self) -> float:
        if self.parallel:
            return 0.0
        _, _, _, _, v, w = self.frame
        return math.acos(max(-1.0, min(1.0, dot(v, w))))

    @cached_property
    def d(self) -> Optional[float]:
        if not self.parallel:
            return None
        return abs(cross(self.Q_near - self.P_A, unit(self.e_s)))

    @property
    def diameter(self) -> float:
        pts = (self.P_A, self.P_B, self.Q_near, self.Q_far)
        return max(norm(p - q) for p in pts for q in pts)

    # source parameter t in [0, 1] -> coordinates

    def x_of(self, t):
        x0, x1, *_ = self.frame
        return x0 + (x1 - x0) * np.asarray(t, dtype=float)

    def op_u(self, t):
        """Target parameter u (Q_near at 0, Q_far at 1) of op(P(t))."""
        t = np.asarray(t, dtype=float)
        px = self.P_A.x + self.e_s.x * t
        py = self.P_A.y + self.e_s.y * t
        rx, ry = self.V.x - px, self.V.y - py
        num = (px - self.Q_near.x) * ry - (py - self.Q_near.y) * rx
        den = self.e_t.x * ry - self.e_t.y * rx
        return num / den

    def window(self, t):
        """(y_lo, y_hi) of the admissible window for the source point P(t)."""
        _, _, yN, yF, _, _ = self.frame
        Y = yN + (yF - yN) * self.op_u(t)
        return np.minimum(yN, Y), np.maximum(yN, Y)

    def through_vertex_length2(self) -> tuple[np.ndarray, np.ndarray]:
        """Squared length of the chord P(t) op(P(t)) as a ratio of polynomials in t."""
        PA, es, et = self.P_A, self.e_s, self.e_t
        r = self.V - PA
        num = [cross(self.Q_near - PA, et), -cross(es, et)]
        den = [cross(r, et), -cross(es, et)]
        dist2 = [dot(r, r), -2 * dot(r, es), dot(es, es)]
        return npoly.polymul(npoly.polymul(num, num), dist2), npoly.polymul(den, den)

    def breakpoints(self) -> tuple[list[float], list[float]]:
        """Chord lengths where this term may have kinks, and where it diverges."""
        pts_s, pts_t = (self.P_A, self.P_B), (self.Q_near, self.Q_far)
        out = [norm(p - q) for p in pts_s for q in pts_t]

        def dist_to_seg(X, a, b):
            e = b - a
            t = min(1.0, max(0.0, dot(X - a, e) / dot(e, e)))
            return norm(X - (a + e * t)), abs(cross(e, X - a)) / norm(e)

        for X in pts_s:
            out.extend(dist_to_seg(X, self.Q_near, self.Q_far))
        for X in pts_t:
            out.extend(dist_to_seg(X, self.P_A, self.P_B))
        N, D = self.through_vertex_length2()
        stat = npoly.polysub(npoly.polymul(npoly.polyder(N), D), npoly.polymul(N, npoly.polyder(D)))
        try:
            ts = _real_roots(stat)
        except RootFindingFailure:
            ts = []
        for t in ts:
            out.append(math.sqrt(max(npoly.polyval(t, N) / npoly.polyval(t, D), 0.0)))
        sing = [self.d] if self.parallel else []
        return sorted(set(x for x in out if x > 0)), sing

    def to_dict(self) -> dict:
        return {
            "P_A": list(self.P_A),
            "P_B": list(self.P_B),
            "V": list(self.V),
            "Q_near": list(self.Q_near),
            "Q_far": list(self.Q_far),
            "parallel": self.parallel,
            "gamma": self.gamma,
        }


# ---------------------------------------------------------------------------
# bounds engine


def rho_conc_bounds(cfg: DPentConfig, ell, n: int = 1000, chunk: int = 64) -> BoundsResult:
    """Lower and upper step approximations with n source sub-segments."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ell = np.atleast_1d(np.asarray(ell, dtype=float))
    t = np.linspace(0.0, 1.0, n + 1)
    x = cfg.x_of(t)
    _, _, yN, yF, _, _ = cfg.frame
    Y = yN + (yF - yN) * cfg.op_u(t)
    Y[0], Y[-1] = yN, yF
    a_lo = np.minimum(x[:-1], x[1:])[:, None]
    a_hi = np.maximum(x[:-1], x[1:])[:, None]

    def target(Yi):
        return np.minimum(yN, Yi)[:, None], np.maximum(yN, Yi)[:, None]

    up_lo, up_hi = target(Y[1:])
    lo_lo, lo_hi = target(Y[:-1])
    lower = np.empty(ell.shape)
    upper = np.empty(ell.shape)
    for k in range(0, ell.size, chunk):
        L = ell[k : k + chunk][None, :]
        if cfg.parallel:
            up = parallel_density(a_lo, a_hi, up_lo, up_hi, cfg.d, L)
            lo = parallel_density(a_lo, a_hi, lo_lo, lo_hi, cfg.d, L)
        else:
            up = ray_pair_density(a_lo, a_hi, up_lo, up_hi, cfg.gamma, L)
            lo = ray_pair_density(a_lo, a_hi, lo_lo, lo_hi, cfg.gamma, L)
        upper[k : k + chunk] = np.maximum(up, 0.0).sum(axis=0)
        lower[k : k + chunk] = np.maximum(lo, 0.0).sum(axis=0)
    return BoundsResult(lower, np.maximum(upper, lower), n)


# ---------------------------------------------------------------------------
# Riemann engine


def _reach_point(cfg: DPentConfig, ell: float) -> Optional[float]:
    """Parameter t (any real) where x(t) sin(gamma) = ell."""
    if cfg.parallel:
        return None
    x0, x1, *_ = cfg.frame
    if x1 == x0:
        return None
    return (ell / math.sin(cfg.gamma) - x0) / (x1 - x0)


def _disc(cfg: DPentConfig, t, ell: float, delta=None):
    """ell^2 - (x sin gamma)^2 at x = x(t), written as (ell - x s)(ell + x s)
    with ell - x s = -s (x1 - x0)(t - t_reach), so it vanishes exactly at the
    reach point. delta = t - t_reach may be supplied when known more
    accurately than t itself."""
    x0, x1, *_ = cfg.frame
    sg = math.sin(cfg.gamma)
    x = cfg.x_of(t)
    if delta is None:
        tr = _reach_point(cfg, ell)
        if tr is None:
            return ell * ell - (x * sg) ** 2
        delta = np.asarray(t, dtype=float) - tr
    return -sg * (x1 - x0) * delta * (ell + x * sg)


def _integrand(cfg: DPentConfig, t, ell: float, delta=None):
    """Kernel summed over both images, times the source length (per unit t)."""
    x = cfg.x_of(t)
    y1, y2 = cfg.window(t)
    if cfg.parallel:
        val = rho2_prime_parallel(x, y1, y2, cfg.d, ell)
    else:
        disc = _disc(cfg, t, ell, delta)
        y_lo, y_hi, ok = _images(x, cfg.gamma, ell, disc)
        val = np.zeros(np.shape(x))
        for y in (y_lo, y_hi):
            hit = ok & _inside(y, y1, y2) & (y > 0)
            val = val + np.where(hit, _kernel(x, y, cfg.gamma, ell, disc), 0.0)
    return cfg.source_length * val


def _state(cfg: DPentConfig, t, ell: float, delta=None):
    """Which images are inside the window (2 bits per t)."""
    x = cfg.x_of(t)
    y1, y2 = cfg.window(t)
    if cfg.parallel:
        s = math.sqrt(max(ell * ell - cfg.d * cfg.d, 0.0))
        ok = ell > cfg.d
        a = ok & _inside(x - s, y1, y2)
        b = ok & _inside(x + s, y1, y2)
    else:
        y_lo, y_hi, ok = _images(x, cfg.gamma, ell, _disc(cfg, t, ell, delta))
        a = ok & _inside(y_lo, y1, y2) & (y_lo > 0)
        b = ok & _inside(y_hi, y1, y2) & (y_hi > 0)
    return a.astype(np.int8) + 2 * b.astype(np.int8)


def _reach_t(cfg: DPentConfig, ell: float) -> Optional[float]:
    t = _reach_point(cfg, ell)
    return t if t is not None and 0.0 < t < 1.0 else None


def _bisect_state(state, lo, hi, iters: int = 60):
    """Bisect each [lo, hi] for the point where state leaves its left value."""
    s_lo = state(lo)
    a, b = lo.copy(), hi.copy()
    for _ in range(iters):
        m = 0.5 * (a + b)
        same = state(m) == s_lo
        a = np.where(same, m, a)
        b = np.where(same, b, m)
    return 0.5 * (a + b)


def _primitive_sum(cfg, ta, tb, ell, state):
    """Exact integral over [ta, tb] of the branches flagged in state."""
    x0, x1, *_ = cfg.frame
    sigma = 1.0 if x1 > x0 else -1.0
    xa, xb = cfg.x_of(ta), cfg.x_of(tb)
    lim = ell / math.sin(cfg.gamma)
    xa, xb = np.minimum(xa, lim), np.minimum(xb, lim)
    da, db = _disc(cfg, ta, ell), _disc(cfg, tb, ell)
    out = np.zeros(np.shape(ta))
    for bit, sign in ((1, -1), (2, 1)):
        on = (state & bit) > 0
        val = _primitive(xb, cfg.gamma, ell, sign, db) - _primitive(xa, cfg.gamma, ell, sign, da)
        out = out + np.where(on, sigma * val, 0.0)
    return out


def _segments(tr: Optional[float]):
    """(A, B, end) pieces of [0, 1]; end marks the side touching the reach
    point, where the kernel has an integrable inverse-square-root blow-up."""
    if tr is None:
        return [(0.0, 1.0, None)]
    return [(0.0, tr, "hi"), (tr, 1.0, "lo")]


def _phi(A, B, end, s):
    """t(s), dt/ds and t minus the singular end (None without one); quadratic
    grading towards a singular end makes the integrand smooth in s."""
    L = B - A
    if end == "lo":
        return A + L * s * s, 2.0 * L * s, L * s * s
    if end == "hi":
        r = 1.0 - s
        return B - L * r * r, 2.0 * L * r, -L * r * r
    return A + L * s, np.full(np.shape(s), L), None


def _riemann_pass(cfg: DPentConfig, ell: float, n: int) -> float:
    total = 0.0
    for A, B, end in _segments(_reach_t(cfg, ell)):
        m = max(1, int(round(n * (B - A))))
        def state(s):
            t, _, delta = _phi(A, B, end, s)
            return _state(cfg, t, ell, delta)

        edges = np.linspace(0.0, 1.0, m + 1)
        lo, hi = edges[:-1], edges[1:]
        eps = 1e-13
        jump = state(lo + eps * (hi - lo)) != state(hi - eps * (hi - lo))
        pa_parts, pb_parts = [lo[~jump]], [hi[~jump]]
        # split panels at located jumps; a panel can hold several (both images
        # crossing the window ends close together), so keep splitting the rest
        cur_lo, cur_hi = lo[jump], hi[jump]
        for _ in range(8):
            if cur_lo.size == 0:
                break
            sj = _bisect_state(state, cur_lo + eps * (cur_hi - cur_lo), cur_hi - eps * (cur_hi - cur_lo))
            pa_parts.append(cur_lo)
            pb_parts.append(sj)
            w = cur_hi - sj
            more = (w > 0) & (state(sj + np.maximum(eps * w, 4e-16)) != state(cur_hi - eps * w))
            pa_parts.append(sj[~more])
            pb_parts.append(cur_hi[~more])
            cur_lo, cur_hi = sj[more], cur_hi[more]
        if cur_lo.size:
            pa_parts.append(cur_lo)
            pb_parts.append(cur_hi)
        pa, pb = np.concatenate(pa_parts), np.concatenate(pb_parts)
        t, dt, delta = _phi(A, B, end, 0.5 * (pa + pb))
        total += float(np.sum(_integrand(cfg, t, ell, delta) * dt * (pb - pa)))
    return total


def _scalar_loop(fn, ell):
    ell = np.asarray(ell, dtype=float)
    out = np.array([fn(float(e)) for e in ell.ravel()]).reshape(ell.shape)
    return out if out.ndim else float(out)


def rho_conc_riemann(cfg: DPentConfig, ell, n: Optional[int] = None, rtol: float = 1e-10, atol: float = 1e-13, start_n: int = 1024, max_n: int = 1 << 18):
    """Midpoint-rule integral of the kernel along the source side.

    With n given, a single pass with n panels; otherwise panels double from
    start_n until two successive doublings agree to rtol*|value| + atol. The
    window can be open on source intervals shorter than one panel, which a
    coarse pass misses identically at two levels; the large start and the
    double agreement guard against stopping on such a plateau.
    """

    def one(e: float) -> float:
        if e <= 0 or e >= cfg.diameter:
            return 0.0
        if n is not None:
            return _riemann_pass(cfg, e, n)
        k = start_n
        prev = _riemann_pass(cfg, e, k)
        agreed = 0
        while k < max_n:
            k *= 2
            cur = _riemann_pass(cfg, e, k)
            agreed = agreed + 1 if abs(cur - prev) <= rtol * abs(cur) + atol else 0
            prev = cur
            if agreed == 2:
                break
        return prev

    return _scalar_loop(one, ell)


# ---------------------------------------------------------------------------
# semianalytic engine


def _real_roots(coefs, lo=0.0, hi=1.0) -> list[float]:
    c = np.asarray(coefs, dtype=float)
    mag = np.max(np.abs(c)) if c.size else 0.0
    if mag == 0.0:
        raise RootFindingFailure("identically zero window condition")
    c = np.where(np.abs(c) < 1e-14 * mag, 0.0, c)
    c = np.trim_zeros(c, "b")
    if c.size <= 1:
        return []
    r = npoly.polyroots(c)
    out = []
    dc = npoly.polyder(c)
    for z in r:
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        t = z.real
        for _ in range(3):
            d = npoly.polyval(t, dc)
            if d == 0:
                break
            t -= npoly.polyval(t, c) / d
        if lo < t < hi:
            out.append(float(t))
    return out


def _critical_ts(cfg: DPentConfig, ell: float) -> list[float]:
    PA, es, et = cfg.P_A, cfg.e_s, cfg.e_t
    ts = [0.0, 1.0]
    # chord from P(t) to Q_near has length ell
    g = PA - cfg.Q_near
    ts += _real_roots([dot(g, g) - ell * ell, 2 * dot(g, es), dot(es, es)])
    # chord from P(t) to op(P(t)) has length ell
    # chord from P(t) through V to op(P(t)) has length ell
    N, D = cfg.through_vertex_length2()
    ts += _real_roots(npoly.polysub(N, ell * ell * D))
    tr = _reach_t(cfg, ell)
    if tr is not None:
        ts.append(tr)
    return sorted(set(ts))


def rho_conc_semianalytic(cfg: DPentConfig, ell, fallback: bool = True):
    """Exact evaluation: integration limits from the window conditions, then the
    closed-form primitive (constant kernel for parallel sides).

    Returns values; when fallback is used the attribute ``flagged`` of the
    returned array-like is not available, so callers needing the flag use
    ``semianalytic_with_flag``.
    """
    vals, _ = semianalytic_with_flag(cfg, ell, fallback)
    return vals


def semianalytic_with_flag(cfg: DPentConfig, ell, fallback: bool = True):
    flagged = [False]

    def one(e: float) -> float:
        if e <= 0 or e >= cfg.diameter:
            return 0.0
        try:
            ts = np.asarray(_critical_ts(cfg, e))
        except RootFindingFailure:
            if not fallback:
                raise
            flagged[0] = True
            return float(rho_conc_riemann(cfg, e))
        a, b = ts[:-1], ts[1:]
        keep = b - a > 1e-15
        a, b = a[keep], b[keep]
        st = _state(cfg, 0.5 * (a + b), e)
        if cfg.parallel:
            k = float(_parallel_kernel(cfg.d, e))
            cnt = (st & 1 > 0).astype(float) + (st & 2 > 0).astype(float)
            return float(cfg.source_length * k * np.sum(cnt * (b - a)))
        return float(np.sum(_primitive_sum(cfg, a, b, e, st)))

    return _scalar_loop(one, ell), flagged[0]
