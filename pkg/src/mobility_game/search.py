"""One-dimensional maximizers used for payment choices."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-6) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    Endpoints are compared against the interior estimate so boundary optima
    are returned exactly.
    """
    if hi < lo:
        raise ValueError("empty interval")
    f_lo, f_hi = f(lo), f(hi)
    if hi - lo <= tol:
        return (lo, f_lo) if f_lo >= f_hi else (hi, f_hi)

    a, b = lo, hi
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = INV_PHI * h
            d = a + INV_PHI * h
            fd = f(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    # lowest payment wins ties
    best = (lo, f_lo)
    for cand in ((x, fx), (hi, f_hi)):
        if cand[1] > best[1]:
            best = cand
    return best


def bracketed_golden_max(f: Callable[[float], float], lo: float, hi: float,
                         tol: float = 1e-6, scan: int = 33) -> tuple[float, float]:
    """Coarse scan followed by golden refinement around the best scan point.

    For objectives that are not known to be unimodal on the whole interval.
    """
    if hi - lo <= tol:
        return golden_section_max(f, lo, hi, tol)
    xs = [lo + (hi - lo) * k / (scan - 1) for k in range(scan)]
    ys = [f(x) for x in xs]
    k = max(range(scan), key=lambda j: (ys[j], -j))
    a = xs[max(k - 1, 0)]
    b = xs[min(k + 1, scan - 1)]
    x, fx = golden_section_max(f, a, b, tol)
    if ys[k] > fx:
        return xs[k], ys[k]
    return x, fx


def zoom_grid_max(f_vec: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                  tol: float = 1e-6, points: int = 33) -> tuple[float, float]:
    """Repeatedly grid-search and shrink to the neighbours of the best point.

    ``f_vec`` is evaluated on whole arrays, which makes this cheaper than a
    scalar golden search for objectives with many terms.
    """
    unit = np.linspace(0.0, 1.0, points)
    a, b = lo, hi
    best_x, best_f = lo, -math.inf
    while True:
        xs = a + (b - a) * unit if b > a else np.array([a])
        ys = np.asarray(f_vec(xs), dtype=float)
        k = int(np.argmax(ys))
        if ys[k] > best_f:
            best_x, best_f = float(xs[k]), float(ys[k])
        if b - a <= tol or len(xs) == 1:
            return best_x, best_f
        a, b = float(xs[max(k - 1, 0)]), float(xs[min(k + 1, len(xs) - 1)])


def grid_max(f_vec: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
             points: int) -> tuple[float, float]:
    """Exhaustive maximization over ``points`` evenly spaced payments; first maximum wins."""
    xs = payment_grid(lo, hi, points)
    ys = np.asarray(f_vec(xs), dtype=float)
    k = int(np.argmax(ys))
    return float(xs[k]), float(ys[k])


def payment_grid(lo: float, hi: float, points: int) -> np.ndarray:
    if points < 2 or hi <= lo:
        return np.array([lo], dtype=float)
    return np.linspace(lo, hi, points)
