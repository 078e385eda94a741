"""Piecewise Gauss-Legendre quadrature for densities with kinks and 1/sqrt
endpoint divergences."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

_NODES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _rule(order: int):
    if order not in _NODES:
        x, w = np.polynomial.legendre.leggauss(order)
        _NODES[order] = (0.5 * (x + 1.0), 0.5 * w)
    return _NODES[order]


def piece_nodes(a: float, b: float, order: int = 48):
    """Nodes and weights on [a, b] under the map a + (b-a)(3u^2 - 2u^3).

    The map has zero derivative at both ends, which absorbs integrable
    1/sqrt singularities located exactly at a or b.
    """
    u, w = _rule(order)
    x = a + (b - a) * u * u * (3.0 - 2.0 * u)
    jac = (b - a) * 6.0 * u * (1.0 - u)
    return x, w * jac


def split_nodes(lo: float, hi: float, breakpoints: Iterable[float] = (), order: int = 48):
    """Concatenated nodes/weights for [lo, hi] split at the given breakpoints."""
    cuts = sorted({lo, hi, *(b for b in breakpoints if lo < b < hi)})
    xs, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 1e-14 * max(1.0, abs(b)):
            continue
        x, w = piece_nodes(a, b, order)
        xs.append(x)
        ws.append(w)
    if not xs:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs), np.concatenate(ws)


def integrate(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, breakpoints: Iterable[float] = (), order: int = 48) -> float:
    """Integral of a vectorised fn over [lo, hi], split at breakpoints."""
    x, w = split_nodes(lo, hi, breakpoints, order)
    if x.size == 0:
        return 0.0
    return float(np.dot(w, fn(x)))


def moments(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, breakpoints: Iterable[float] = (), order: int = 48) -> tuple[float, float]:
    """Zeroth and first moments of fn over [lo, hi] from a single evaluation."""
    x, w = split_nodes(lo, hi, breakpoints, order)
    if x.size == 0:
        return 0.0, 0.0
    v = fn(x)
    return float(np.dot(w, v)), float(np.dot(w, x * v))
