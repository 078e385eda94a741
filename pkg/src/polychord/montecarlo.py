"""Monte Carlo oracle: random lines from the invariant measure, cut into chord
components, binned into an unnormalised density estimate."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .convex import as_polygon
from .geometry import Polygon

log = logging.getLogger(__name__)

CHUNK = 1 << 16
TAU_VERTEX = 1e-12


@dataclass(frozen=True)
class ChordSample:
    theta: float
    offset: float
    components: tuple[float, ...]
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ChordBatch:
    """All components of n_lines random lines, flattened.

    ``weight`` is the measure carried by each line (pi times the projection
    width at its direction); ``line`` maps each component to its line.
    """

    theta: np.ndarray
    offset: np.ndarray
    weight: np.ndarray
    lengths: np.ndarray
    line: np.ndarray
    edge_a: np.ndarray
    edge_b: np.ndarray
    seed: int
    resampled: int = 0

    @property
    def total_lines(self) -> int:
        return int(self.theta.size)

    def __iter__(self) -> Iterator[ChordSample]:
        order = np.argsort(self.line, kind="stable")
        starts = np.searchsorted(self.line[order], np.arange(self.total_lines + 1))
        for i in range(self.total_lines):
            sel = order[starts[i] : starts[i + 1]]
            yield ChordSample(
                float(self.theta[i]),
                float(self.offset[i]),
                tuple(float(x) for x in self.lengths[sel]),
                tuple((int(a), int(b)) for a, b in zip(self.edge_a[sel], self.edge_b[sel])),
            )

    def restrict(self, mask: np.ndarray) -> "ChordBatch":
        """Same lines, keeping only the components selected by mask."""
        return ChordBatch(
            self.theta, self.offset, self.weight, self.lengths[mask], self.line[mask],
            self.edge_a[mask], self.edge_b[mask], self.seed, self.resampled,
        )

    def between_edges(self, i: int, j: int) -> "ChordBatch":
        a, b = self.edge_a, self.edge_b
        return self.restrict(((a == i) & (b == j)) | ((a == j) & (b == i)))


@dataclass(frozen=True)
class EmpiricalDensity:
    bin_edges: np.ndarray
    mass: np.ndarray
    stderr: np.ndarray
    total_lines: int
    seed: int
    empty_bins: tuple[int, ...] = ()

    @property
    def density(self) -> np.ndarray:
        return self.mass / np.diff(self.bin_edges)

    @property
    def total(self) -> float:
        return float(self.mass.sum())


def _edge_arrays(poly: Polygon):
    e = poly.edges
    P = np.array([s.p for s in e], dtype=float)
    Q = np.array([s.q for s in e], dtype=float)
    return P, Q


def _cut(P, Q, verts, theta, p, scale):
    """Crossing parameters along each line, plus a mask of lines passing too
    close to a vertex."""
    c, s = np.cos(theta)[:, None], np.sin(theta)[:, None]
    # line: points X with X . n = p, n = (-sin, cos); direction d = (cos, sin)
    near = np.abs(-verts[None, :, 0] * s + verts[None, :, 1] * c - p[:, None]).min(axis=1) <= TAU_VERTEX * scale
    sp = -P[None, :, 0] * s + P[None, :, 1] * c - p[:, None]
    sq = -Q[None, :, 0] * s + Q[None, :, 1] * c - p[:, None]
    hit = (sp * sq) < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = sp / (sp - sq)
    X = P[None, :, 0] + (Q[None, :, 0] - P[None, :, 0]) * lam
    Y = P[None, :, 1] + (Q[None, :, 1] - P[None, :, 1]) * lam
    along = np.where(hit, X * c + Y * s, np.inf)
    return along, near


def _support(verts, theta):
    proj = -verts[None, :, 0] * np.sin(theta)[:, None] + verts[None, :, 1] * np.cos(theta)[:, None]
    return proj.min(axis=1), proj.max(axis=1)


def sample_chords(poly, n_lines: int, seed: int = 0, chunk: int = CHUNK) -> ChordBatch:
    """Sample n_lines lines uniformly under the invariant measure among those
    meeting the polygon and cut them into chord components.

    Lines are drawn in fixed-size chunks, chunk k from the generator seeded with
    (seed, k), so results depend only on (seed, n_lines, chunk).
    """
    if n_lines < 1:
        raise ValueError("n_lines must be at least 1")
    poly = as_polygon(poly)
    P, Q = _edge_arrays(poly)
    verts = np.array(poly.vertices, dtype=float)
    scale = poly.diameter
    th_all, p_all, w_all, L_all, line_all, ea_all, eb_all = [], [], [], [], [], [], []
    resampled = 0
    for k, start in enumerate(range(0, n_lines, chunk)):
        m = min(chunk, n_lines - start)
        rng = np.random.default_rng([seed, k])
        theta = rng.uniform(0.0, math.pi, m)
        lo, hi = _support(verts, theta)
        p = lo + (hi - lo) * rng.uniform(0.0, 1.0, m)
        along, near = _cut(P, Q, verts, theta, p, scale)
        while near.any():
            idx = np.flatnonzero(near)
            resampled += idx.size
            theta[idx] = rng.uniform(0.0, math.pi, idx.size)
            lo_i, hi_i = _support(verts, theta[idx])
            p[idx] = lo_i + (hi_i - lo_i) * rng.uniform(0.0, 1.0, idx.size)
            a2, n2 = _cut(P, Q, verts, theta[idx], p[idx], scale)
            along[idx] = a2
            near[:] = False
            near[idx] = n2
        lo, hi = _support(verts, theta)
        order = np.argsort(along, axis=1)
        srt = np.take_along_axis(along, order, axis=1)
        count = np.isfinite(srt).sum(axis=1)
        ncomp = srt.shape[1] // 2
        enter, leave = srt[:, 0 : 2 * ncomp : 2], srt[:, 1 : 2 * ncomp : 2]
        ok = np.arange(ncomp)[None, :] < (count // 2)[:, None]
        rows = np.broadcast_to(np.arange(m)[:, None], ok.shape)
        L_all.append(np.where(ok, leave - np.where(ok, enter, 0.0), 0.0)[ok])
        line_all.append(rows[ok] + start)
        ea_all.append(order[:, 0 : 2 * ncomp : 2][ok])
        eb_all.append(order[:, 1 : 2 * ncomp : 2][ok])
        th_all.append(theta)
        p_all.append(p)
        w_all.append(math.pi * (hi - lo))
    if resampled:
        log.info("resampled %d lines passing within tolerance of a vertex", resampled)
    cat = np.concatenate
    return ChordBatch(cat(th_all), cat(p_all), cat(w_all), cat(L_all), cat(line_all), cat(ea_all), cat(eb_all), seed, resampled)


def empirical_density(samples: ChordBatch, bin_edges: Sequence[float]) -> EmpiricalDensity:
    """Per-bin measure of chord components with sample standard errors.

    Line i carries measure w_i / N, so the bin estimate is the mean over lines
    of z_i = w_i * (components of line i in the bin).
    """
    edges = np.asarray(bin_edges, dtype=float)
    N = samples.total_lines
    if N == 0:
        raise ValueError("empty sample")
    nb = edges.size - 1
    b = np.searchsorted(edges, samples.lengths, side="right") - 1
    ok = (b >= 0) & (b < nb)
    w = samples.weight[samples.line[ok]]
    s1 = np.bincount(b[ok], weights=w, minlength=nb)
    # per-line counts per bin are needed for the variance: sum over lines of z_i^2
    key = samples.line[ok].astype(np.int64) * nb + b[ok]
    uniq, cnt = np.unique(key, return_counts=True)
    zline = samples.weight[uniq // nb] * cnt
    s2 = np.bincount(uniq % nb, weights=zline * zline, minlength=nb)
    mass = s1 / N
    var = np.maximum(s2 / N - mass * mass, 0.0) / N
    empty = tuple(int(i) for i in np.flatnonzero(s1 == 0))
    if empty:
        log.debug("empty bins: %s", empty)
    return EmpiricalDensity(edges, mass, np.sqrt(var), N, samples.seed, empty)
