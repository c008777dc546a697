"""Adaptive Gauss-Legendre panels for complex integrands.

Integrands return (value, pointwise_error_bound); the returned estimate sums
the panel Gauss(10)-vs-Gauss(20) discrepancies with the integrated pointwise
bounds, so callers can propagate honest error budgets.
"""

from __future__ import annotations

import heapq
from typing import Callable

import numpy as np

from .errors import BudgetExceeded

_NODES10, _WEIGHTS10 = np.polynomial.legendre.leggauss(10)
_NODES20, _WEIGHTS20 = np.polynomial.legendre.leggauss(20)

Integrand = Callable[[float], tuple[complex, float]]


def gauss_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    if n == 10:
        return _NODES10, _WEIGHTS10
    if n == 20:
        return _NODES20, _WEIGHTS20
    return np.polynomial.legendre.leggauss(n)


def _panel(f: Integrand, a: float, b: float) -> tuple[complex, float, float]:
    """Returns (gauss20 value, |gauss20-gauss10|, integrated node error)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    v10 = 0.0 + 0.0j
    for x, w in zip(_NODES10, _WEIGHTS10):
        val, _ = f(mid + half * x)
        v10 += w * val
    v20 = 0.0 + 0.0j
    node_err = 0.0
    for x, w in zip(_NODES20, _WEIGHTS20):
        val, err = f(mid + half * x)
        v20 += w * val
        node_err += w * err
    return v20 * half, abs(v20 - v10) * half, node_err * half


def integrate_adaptive(f: Integrand, a: float, b: float, tol: float,
                       splits: list[float] | None = None,
                       max_panels: int = 4000) -> tuple[complex, float]:
    """Integral of f over [a, b] with panel bisection down to tol.

    splits lists interior points that must be panel boundaries (integrand
    kinks or one-sided limits); they are clamped to (a, b) and deduplicated.
    """
    if b == a:
        return 0.0 + 0.0j, 0.0
    if b < a:
        val, est = integrate_adaptive(f, b, a, tol, splits, max_panels)
        return -val, est
    edges = [a, b]
    if splits:
        edges.extend(x for x in splits if a < x < b)
    edges = sorted(set(edges))

    # Max-heap of (-(discrepancy), a, b, value, discrepancy, node_err).
    heap: list[tuple[float, float, float, complex, float, float]] = []
    total = 0.0 + 0.0j
    n_panels = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, disc, nerr = _panel(f, lo, hi)
        heapq.heappush(heap, (-disc, lo, hi, val, disc, nerr))
        n_panels += 1

    while True:
        disc_sum = sum(item[4] for item in heap)
        if disc_sum <= tol or -heap[0][0] <= 0.0:
            break
        if n_panels >= max_panels:
            raise BudgetExceeded(
                f"adaptive quadrature hit {max_panels} panels on [{a}, {b}] "
                f"(residual {disc_sum:.3e} > tol {tol:.3e})")
        _, lo, hi, _, _, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        for seg in ((lo, mid), (mid, hi)):
            val, disc, nerr = _panel(f, seg[0], seg[1])
            heapq.heappush(heap, (-disc, seg[0], seg[1], val, disc, nerr))
        n_panels += 1

    est = 0.0
    for _, _, _, val, disc, nerr in heap:
        total += val
        est += disc + nerr
    return total, est


def integrate_fixed(f: Callable[[np.ndarray], np.ndarray],
                    a: float, b: float, n: int = 20) -> complex:
    """Single Gauss-Legendre panel for a vectorized integrand (no estimate)."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * nodes
    return half * complex(np.sum(weights * f(x)))
