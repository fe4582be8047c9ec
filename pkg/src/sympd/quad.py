"""Disk quadrature and deterministic reductions."""

from __future__ import annotations

import math

import numpy as np


def pairwise_sum(values) -> float:
    """Deterministic pairwise-tree sum (bit-stable reduction order)."""
    a = np.asarray(values, dtype=float).ravel()
    if a.size == 0:
        return 0.0
    while a.size > 1:
        m = a.size // 2
        head = a[:m] + a[m : 2 * m]
        a = np.concatenate([head, a[2 * m :]]) if a.size % 2 else head
    return float(a[0])


def disk_rule(nr: int, ntheta: int):
    """Product quadrature on the unit disk w.r.t. omega = dx^dy.

    Gauss-Legendre in s = r^2 on [0, 1] times a uniform (trapezoidal)
    angular rule; exact for smooth integrands to spectral accuracy and the
    weights sum to pi exactly up to roundoff.

    Returns (points (N, 2), weights (N,)).
    """
    if nr < 4 or ntheta < 4:
        raise ValueError("quadrature needs nr >= 4 and ntheta >= 4")
    nodes, w = np.polynomial.legendre.leggauss(nr)
    s = 0.5 * (nodes + 1.0)  # s = r^2 on [0, 1]
    ws = 0.5 * w
    r = np.sqrt(s)
    th = 2.0 * math.pi * np.arange(ntheta) / ntheta
    wt = 2.0 * math.pi / ntheta
    pts = np.empty((nr * ntheta, 2))
    pts[:, 0] = np.outer(r, np.cos(th)).ravel()
    pts[:, 1] = np.outer(r, np.sin(th)).ravel()
    weights = 0.5 * np.outer(ws, np.full(ntheta, wt)).ravel()
    return pts, weights
