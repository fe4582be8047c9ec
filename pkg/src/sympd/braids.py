"""Braid extraction from flow trajectories and braid-word algebra.

A configuration of n distinct disk points is carried around the closed loop
base -> x -> g_t(x) -> g_1(x) -> base (linear connectors on the outer
thirds, the flow on the middle third).  The braid word is read from the
x-axis projection: every swap of projection order emits an Artin generator,
signed so that a full counterclockwise rigid rotation of two points gives
sigma_1^2 (positive full twist).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import flows
from .errors import CollisionDetected, NotPure, ProjectionDegenerate, StrandMismatch

DELTA_SEP = 1e-4
CONNECTOR_NODES = 96
AXIS_RETRY_STEP = 1e-3  # turns
AXIS_RETRIES = 8


# ---------------------------------------------------------------------------
# braid words


@dataclass(frozen=True)
class BraidWord:
    """Word in Artin generators sigma_i^{+-1} on ``strands`` strands.

    ``letters`` are (index, sign) pairs with 1 <= index <= strands - 1 and
    sign in {+1, -1}.
    """

    strands: int
    letters: tuple

    def __post_init__(self):
        if self.strands < 2:
            raise ValueError("braids need at least 2 strands")
        for i, s in self.letters:
            if not 1 <= i <= self.strands - 1:
                raise ValueError(f"generator index {i} out of range for {self.strands} strands")
            if s not in (-1, 1):
                raise ValueError(f"generator sign must be +-1, got {s}")

    def __len__(self):
        return len(self.letters)

    def permutation(self) -> tuple:
        """Image tuple of the underlying permutation (position -> strand)."""
        perm = list(range(self.strands))
        for i, _ in self.letters:
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
        return tuple(perm)

    def is_pure(self) -> bool:
        return self.permutation() == tuple(range(self.strands))

    def to_ints(self) -> list:
        """Signed generator list, e.g. [1, 1] for sigma_1^2."""
        return [i * s for i, s in self.letters]


def word_from_ints(strands: int, ints) -> BraidWord:
    letters = tuple((abs(v), 1 if v > 0 else -1) for v in ints)
    if any(v == 0 for v in ints):
        raise ValueError("generator 0 is not defined")
    return BraidWord(strands, letters)


def braid_op(op: str, *args) -> BraidWord:
    """Braid group operations: concat, inverse, power.

    ``power`` accepts negative exponents via the inverse word.
    """
    if op == "concat":
        a, b = args
        if a.strands != b.strands:
            raise StrandMismatch(f"strand counts differ: {a.strands} vs {b.strands}")
        return BraidWord(a.strands, a.letters + b.letters)
    if op == "inverse":
        (a,) = args
        return BraidWord(a.strands, tuple((i, -s) for i, s in reversed(a.letters)))
    if op == "power":
        a, k = args
        k = int(k)
        if k < 0:
            return braid_op("power", braid_op("inverse", a), -k)
        return BraidWord(a.strands, a.letters * k)
    raise ValueError(f"unknown braid op {op!r}")


# ---------------------------------------------------------------------------
# configurations


def base_configuration(n: int) -> np.ndarray:
    """Evenly spaced base points on the horizontal diameter, shape (n, 2)."""
    if not 2 <= n <= 8:
        raise ValueError("configuration size must be between 2 and 8")
    xs = np.array([(2.0 * i - n - 1.0) / (n + 1.0) for i in range(1, n + 1)])
    return np.column_stack([xs, np.zeros(n)])


def check_configuration(x: np.ndarray, delta: float = DELTA_SEP) -> np.ndarray:
    """Validate pairwise separation and disk membership."""
    x = flows.check_in_disk(x)
    d = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    if d.min() <= delta:
        raise CollisionDetected(f"configuration separation {d.min():.2e} <= {delta}")
    return x


# ---------------------------------------------------------------------------
# loop sampling


def loop_trajectory(spec: flows.IsotopySpec, x: np.ndarray):
    """Sampled three-segment loop through the configuration, shape (n, T, 2).

    Segments: linear base->x on [0,1/3], the flow on [1/3,2/3] and linear
    g_1(x)->base on [2/3,1].  Returns (times, points).
    """
    n = x.shape[0]
    z = base_configuration(n)
    tgrid, _ = flows.build_grid(spec)
    mid = flows.evaluate_points(spec, x, tgrid)

    s = np.linspace(0.0, 1.0, CONNECTOR_NODES + 1)
    head = z[:, None, :] + s[None, :, None] * (x - z)[:, None, :]
    end = mid[:, -1]
    tail = end[:, None, :] + s[None, :, None] * (z - end)[:, None, :]

    pts = np.concatenate([head[:, :-1], mid, tail[:, 1:]], axis=1)
    times = np.concatenate(
        [s[:-1] / 3.0, (1.0 + 2.0 * tgrid) / 3.0, (2.0 + s[1:]) / 3.0]
    )
    return times, pts


def _min_separation(pts) -> float:
    n = pts.shape[0]
    best = np.inf
    for a in range(n):
        for b in range(a + 1, n):
            d = pts[a] - pts[b]
            best = min(best, float(np.min(np.hypot(d[:, 0], d[:, 1]))))
    return best


# ---------------------------------------------------------------------------
# crossing detection


def _read_word(times, pts, axis_turns):
    """Read the braid word of sampled strand trajectories.

    Projects onto the axis at angle ``axis_turns``; each swap of projection
    order emits a generator.  Raises ProjectionDegenerate when events cannot
    be ordered unambiguously.
    """
    n = pts.shape[0]
    phi = 2.0 * math.pi * axis_turns
    c, s = math.cos(phi), math.sin(phi)
    p = pts[:, :, 0] * c + pts[:, :, 1] * s  # projection coordinate
    q = pts[:, :, 1] * c - pts[:, :, 0] * s  # transverse coordinate

    events = []
    for a in range(n):
        for b in range(a + 1, n):
            d = p[a] - p[b]
            if np.any(d == 0.0):
                raise ProjectionDegenerate("projection tie at a sample node")
            flips = np.nonzero(np.signbit(d[:-1]) != np.signbit(d[1:]))[0]
            for k in flips:
                denom = d[k + 1] - d[k]
                if abs(denom) < 1e-12:
                    raise ProjectionDegenerate("crossing with vanishing relative velocity")
                frac = -d[k] / denom
                tstar = times[k] + frac * (times[k + 1] - times[k])
                qa = q[a, k] + frac * (q[a, k + 1] - q[a, k])
                qb = q[b, k] + frac * (q[b, k + 1] - q[b, k])
                left = a if d[k] < 0.0 else b  # strand arriving from the left
                q_left, q_other = (qa, qb) if left == a else (qb, qa)
                if q_left == q_other:
                    raise ProjectionDegenerate("transverse tie at a crossing")
                sign = 1 if q_left < q_other else -1
                events.append((tstar, a, b, sign))

    events.sort(key=lambda e: e[0])
    order = list(np.argsort(p[:, 0], kind="stable"))
    letters = []
    for _, a, b, sign in events:
        ia, ib = order.index(a), order.index(b)
        if abs(ia - ib) != 1:
            raise ProjectionDegenerate("simultaneous crossings; strands not adjacent")
        lo = min(ia, ib)
        letters.append((lo + 1, sign))
        order[ia], order[ib] = order[ib], order[ia]
    if order != list(np.argsort(p[:, -1], kind="stable")):
        raise ProjectionDegenerate("crossing bookkeeping lost track of the ordering")
    return BraidWord(n, tuple(letters))


def braid_from_loop(spec: flows.IsotopySpec, x) -> BraidWord:
    """Pure braid traced by the configuration ``x`` under the isotopy.

    Raises ``CollisionDetected`` when strands come within the separation
    floor anywhere along the loop (the caller should resample x), and
    ``ProjectionDegenerate`` when no retried projection axis resolves the
    crossings.
    """
    x = check_configuration(np.asarray(x, dtype=float))
    times, pts = loop_trajectory(spec, x)
    if _min_separation(pts) <= DELTA_SEP:
        raise CollisionDetected("strands pass within the separation floor along the loop")

    last = None
    for retry in range(AXIS_RETRIES):
        try:
            word = _read_word(times, pts, retry * AXIS_RETRY_STEP)
        except ProjectionDegenerate as exc:
            last = exc
            continue
        if not word.is_pure():
            raise NotPure("extracted braid is not pure; loop failed to close")
        return word
    raise ProjectionDegenerate(f"all {AXIS_RETRIES} projection axes degenerate: {last}")


def pairwise_winding(spec: flows.IsotopySpec, x, i: int, j: int) -> float:
    """Winding number of x_j(t) - x_i(t) along the full loop (oracle for
    linking numbers; exact integer for valid loops)."""
    from . import unwind

    x = check_configuration(np.asarray(x, dtype=float))
    _, pts = loop_trajectory(spec, x)
    return unwind.polyline_winding(pts[j - 1] - pts[i - 1])
