"""Continuous angle unwinding along flow trajectories.

Windings are measured in turns.  A per-step increment is recovered from
principal values, which is unambiguous only when the true increment is
below half a turn; grids are refined (doubled) until every increment is
below a quarter turn, leaving a factor-two safety margin.
"""

from __future__ import annotations

import math

import numpy as np

from . import flows
from ._backend import kernels
from .errors import RefinementLimitExceeded

MAX_STEP_TURNS = 0.25
MAX_REFINE = 12


def _vectors(spec, xs, tgrid, source):
    if source == "jacobian_column":
        _, jac = flows.evaluate_batch(spec, xs, tgrid, want_jac=True)
        return jac[:, :, :, 0]
    if source == "point":
        pts, _ = flows.evaluate_batch(spec, xs, tgrid, want_jac=False)
        return pts
    raise ValueError(f"unknown winding source {source!r}")


def _segment_sums(inc, cuts):
    """Sum increments per concatenation segment with fsum, then add.

    Keeps winding additivity along concatenations an exact bookkeeping
    identity: the winding of a k-fold power equals the sum of the per-copy
    windings computed the same way.
    """
    out = np.zeros(inc.shape[0])
    for a, b in zip(cuts[:-1], cuts[1:]):
        seg = inc[:, a:b]
        out += np.array([math.fsum(row) for row in seg])
    return out


def unwind_batch(spec, xs, source, chunk: int = 256):
    """Windings (turns) for a batch of points, refined grid, shape (B,)."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    out = np.empty(xs.shape[0])
    for lo in range(0, xs.shape[0], chunk):
        out[lo : lo + chunk] = _unwind_chunk(spec, xs[lo : lo + chunk], source)
    return out


def _unwind_chunk(spec, xs, source):
    for refine in range(MAX_REFINE + 1):
        tgrid, cuts = flows.build_grid(spec, refine)
        vecs = _vectors(spec, xs, tgrid, source)
        inc = kernels.unwrap_turns(vecs)
        if np.abs(inc).max(initial=0.0) < MAX_STEP_TURNS:
            return _segment_sums(inc, cuts)
    raise RefinementLimitExceeded(
        f"could not bring angle steps under {MAX_STEP_TURNS} turns after {MAX_REFINE} doublings"
    )


def unwind_single(spec, x, source):
    """Times, per-step increments, winding and cuts for one point."""
    x = np.asarray(x, dtype=float)
    for refine in range(MAX_REFINE + 1):
        tgrid, cuts = flows.build_grid(spec, refine)
        vecs = _vectors(spec, x[None], tgrid, source)
        inc = kernels.unwrap_turns(vecs)[0]
        if np.abs(inc).max(initial=0.0) < MAX_STEP_TURNS:
            winding = float(_segment_sums(inc[None], cuts)[0])
            return tgrid, inc, winding, cuts
    raise RefinementLimitExceeded(
        f"could not bring angle steps under {MAX_STEP_TURNS} turns after {MAX_REFINE} doublings"
    )


def polyline_winding(vecs):
    """Total winding (turns) of an explicit vector path of shape (T, 2).

    Assumes the sampling is fine enough that per-step increments stay under
    half a turn; used for connector segments and oracles, not for flow
    trajectories (those go through the refining entry points above).
    """
    inc = kernels.unwrap_turns(np.asarray(vecs, dtype=float)[None])[0]
    return float(math.fsum(inc))
