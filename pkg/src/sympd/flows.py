"""Isotopies of the unit disk and their evaluation.

An isotopy spec describes a path {g_t}, t in [0, 1], of area-preserving
diffeomorphisms of the closed unit disk with g_0 = id, i.e. a representative
of an element of the universal cover of the symplectomorphism group.  Specs
are small immutable trees:

* ``RigidRotation(turns)`` -- g_t = rotation by ``2*pi*turns*t``;
* ``RadialTwist(profile)`` -- each circle of radius rho rotates by
  ``profile.f(rho)`` turns at time 1 (closed form, exactly area-preserving);
* ``HamiltonianFlow(h, duration)`` -- flow of a built-in Hamiltonian family,
  integrated by fixed-step RK4 together with the variational equation;
* ``Composite(parts, mode)`` -- pointwise products ``t -> g_t o h_t`` or
  concatenations (time reparametrized into consecutive windows);
* ``Inverse(of)`` and ``Power(of, k)``.

Powers use concatenation so that winding-type quantities add exactly segment
by segment; pointwise products realize the group law of the cover.  The two
choices are homotopic representatives of the same cover element and all
invariants computed downstream are homotopy invariants.

Evaluation cost note: pointwise products and inverses need the time-t map of
every non-innermost factor at moving points.  That is O(1) per point for the
closed-form families but requires an integration from time 0 for Hamiltonian
factors, so products with Hamiltonian outer factors cost O(T) integrations
per trajectory.  Keep such compositions small or put the Hamiltonian factor
innermost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._backend import kernels
from .errors import IntegratorDiverged, PointOutsideDisk

TOL_BOUNDARY = 1e-9
TOL_AREA = 1e-6
DEFAULT_STEPS = 512
COLLAR_RADIUS = 0.95  # compact support means H == 0 on rho > COLLAR_RADIUS


# ---------------------------------------------------------------------------
# profiles and Hamiltonian families


@dataclass(frozen=True)
class TwistProfile:
    """Rotation profile of a radial twist: circle of radius rho turns by
    f(rho) full turns at time 1.

    ``compact`` profiles are supported in rho < support < 1 and represent
    boundary-fixing symplectomorphisms:  f = amp * (1 - (rho/support)^2)^power.
    ``boundary`` profiles rotate the boundary: f = amp * rho^(2*exponent).
    """

    kind: str  # "compact" | "boundary"
    amp: float
    support: float = 0.8
    power: int = 3
    exponent: int = 1

    def __post_init__(self):
        if self.kind not in ("compact", "boundary"):
            raise ValueError(f"unknown twist profile kind {self.kind!r}")
        if self.kind == "compact":
            if not 0.0 < self.support < 1.0:
                raise ValueError("compact twist needs 0 < support < 1")
            if self.power < 2:
                raise ValueError("compact twist needs power >= 2")
        elif self.exponent < 1:
            raise ValueError("boundary twist needs exponent >= 1")

    @property
    def _kind_id(self) -> int:
        return 1 if self.kind == "compact" else 2

    def f(self, rho):
        """Turns of rotation of the circle of radius rho after time 1."""
        rho = np.asarray(rho, dtype=float)
        val, _ = kernels._twist_profile(
            self._kind_id, self.amp, self.support, self.power, self.exponent, rho * rho
        )
        return val

    def df_over_rho(self, rho):
        """f'(rho)/rho, analytic (finite at rho = 0)."""
        rho = np.asarray(rho, dtype=float)
        _, val = kernels._twist_profile(
            self._kind_id, self.amp, self.support, self.power, self.exponent, rho * rho
        )
        return val

    def hamiltonian(self, rho):
        """Generating autonomous Hamiltonian H(rho) with H(1) = 0.

        H(rho) = 2*pi * integral_rho^1 s f(s) ds, so that the induced angular
        velocity is 2*pi*f (counterclockwise for positive f).
        """
        rho = np.asarray(rho, dtype=float)
        if self.kind == "compact":
            r2, p = self.support**2, self.power
            w = 1.0 - rho * rho / r2
            w = np.where(w > 0.0, w, 0.0)
            return math.pi * self.amp * r2 / (p + 1) * w ** (p + 1)
        q = self.exponent
        return 2.0 * math.pi * self.amp * (1.0 - (rho * rho) ** (q + 1)) / (2 * q + 2)

    def negated(self) -> "TwistProfile":
        return TwistProfile(self.kind, -self.amp, self.support, self.power, self.exponent)


_FAMILY_IDS = {"bump": kernels.FAMILY_BUMP, "stir": kernels.FAMILY_STIR, "rim": kernels.FAMILY_RIM}


@dataclass(frozen=True)
class HamiltonianSpec:
    """A member of a built-in parametric Hamiltonian family.

    ``params`` is a flat float vector whose layout depends on the family:
    bump (amp, support, power), stir (amp, support, power, freq, phase),
    rim (a, b, m, phase).  ``boundary_constant`` records that H is spatially
    constant near the boundary, hence the flow fixes it pointwise.
    """

    family: str
    params: tuple
    boundary_constant: bool

    def __post_init__(self):
        if self.family not in _FAMILY_IDS:
            raise ValueError(f"unknown Hamiltonian family {self.family!r}")

    @property
    def _family_id(self) -> int:
        return _FAMILY_IDS[self.family]

    def value(self, t, pts):
        return kernels.ham_value(self._family_id, self.params, t, pts)

    def negated(self) -> "HamiltonianSpec":
        p = list(self.params)
        if self.family in ("bump", "stir"):
            p[0] = -p[0]
        else:
            p[0], p[1] = -p[0], -p[1]
        return HamiltonianSpec(self.family, tuple(p), self.boundary_constant)


def bump_hamiltonian(amp: float, support: float = 0.8, power: int = 5) -> HamiltonianSpec:
    """Radial compactly supported bump; generates a twist flow."""
    if not 0.0 < support <= COLLAR_RADIUS:
        raise ValueError(f"bump support must lie in (0, {COLLAR_RADIUS}]")
    return HamiltonianSpec("bump", (float(amp), float(support), int(power)), True)


def stir_hamiltonian(
    amp: float, support: float = 0.8, power: int = 4, freq: float = 1.0, phase: float = 0.0
) -> HamiltonianSpec:
    """Compactly supported rotating-dipole stirrer (time dependent)."""
    if not 0.0 < support <= COLLAR_RADIUS:
        raise ValueError(f"stir support must lie in (0, {COLLAR_RADIUS}]")
    return HamiltonianSpec(
        "stir", (float(amp), float(support), int(power), float(freq), float(phase)), True
    )


def rim_hamiltonian(a: float, b: float = 0.0, m: int = 2, phase: float = 0.0) -> HamiltonianSpec:
    """Boundary-moving flow: H = (a + b*Re(z^m e^{i phase})) * (1 - |z|^2).

    The boundary circle is invariant (H is constant on it) and rotates with
    angular velocity 2a + 2b*cos(m*theta + phase) radians per unit time, a
    genuinely non-rigid circle diffeomorphism when b != 0.
    """
    if m < 1:
        raise ValueError("rim needs m >= 1")
    return HamiltonianSpec("rim", (float(a), float(b), int(m), float(phase)), False)


# ---------------------------------------------------------------------------
# isotopy specs


@dataclass(frozen=True)
class RigidRotation:
    turns: float


@dataclass(frozen=True)
class RadialTwist:
    profile: TwistProfile


@dataclass(frozen=True)
class HamiltonianFlow:
    h: HamiltonianSpec
    duration: float = 1.0
    steps: int = DEFAULT_STEPS


@dataclass(frozen=True)
class Composite:
    parts: tuple
    mode: str  # "product" | "concat"

    def __post_init__(self):
        if not self.parts:
            raise ValueError("Composite needs at least one part")
        if self.mode not in ("product", "concat"):
            raise ValueError(f"unknown composite mode {self.mode!r}")


@dataclass(frozen=True)
class Inverse:
    of: "IsotopySpec"


@dataclass(frozen=True)
class Power:
    of: "IsotopySpec"
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("Power exponent must be >= 0; use Inverse for negatives")


IsotopySpec = Union[RigidRotation, RadialTwist, HamiltonianFlow, Composite, Inverse, Power]


def identity_spec() -> IsotopySpec:
    return RigidRotation(0.0)


def compact_twist(amp: float, support: float = 0.8, power: int = 3) -> IsotopySpec:
    return RadialTwist(TwistProfile("compact", amp, support, power))


def boundary_twist(amp: float, exponent: int = 1) -> IsotopySpec:
    return RadialTwist(TwistProfile("boundary", amp, exponent=exponent))


def group_op(op: str, *args) -> IsotopySpec:
    """Group operations on the universal cover: compose, inverse, power.

    ``compose(a, b)`` is the pointwise-product path t -> g_t o h_t (``a``
    applied after ``b``); ``power`` is the k-fold concatenation (so winding
    quantities add exactly segment by segment); ``inverse`` is the pointwise
    inverse path.
    """
    if op == "compose":
        if len(args) < 2:
            raise ValueError("compose needs at least two specs")
        return Composite(tuple(args), "product")
    if op == "inverse":
        (spec,) = args
        return Inverse(spec)
    if op == "power":
        spec, k = args
        k = int(k)
        if k == 0:
            return identity_spec()
        if k == 1:
            return spec
        return Power(spec, k)
    raise ValueError(f"unknown group op {op!r}")


def invert_spec(spec: IsotopySpec) -> IsotopySpec:
    """Rewrite Inverse nodes structurally.

    Closed-form leaves invert in closed form.  Products invert exactly
    pointwise ((g_t h_t)^-1 = h_t^-1 g_t^-1).  For concatenations (and
    powers) the literal pointwise inverse is not expressible as a spec, so
    the homotopic representative concat(inv(last), ..., inv(first)) is used;
    every quantity computed by this package is invariant under that change
    of representative.  Hamiltonian leaves stay wrapped (evaluated by
    backward integration).
    """
    if isinstance(spec, RigidRotation):
        return RigidRotation(-spec.turns)
    if isinstance(spec, RadialTwist):
        return RadialTwist(spec.profile.negated())
    if isinstance(spec, Inverse):
        return spec.of
    if isinstance(spec, Power):
        return Power(invert_spec(spec.of), spec.k)
    if isinstance(spec, Composite):
        parts = tuple(invert_spec(p) for p in reversed(spec.parts))
        return Composite(parts, spec.mode)
    return Inverse(spec)


# ---------------------------------------------------------------------------
# time grids

_MERGE_TOL = 1e-12


def _leaf_steps(spec: IsotopySpec) -> int:
    if isinstance(spec, HamiltonianFlow):
        return spec.steps
    return DEFAULT_STEPS


def build_grid(spec: IsotopySpec, refine: int = 0):
    """Default time grid and segment cut indices for a spec.

    Returns ``(times, cuts)`` where ``times`` is an increasing array with
    times[0] = 0 and times[-1] = 1, and ``cuts`` are node indices at
    concatenation junctions (including both ends).  ``refine`` doubles the
    node density ``refine`` times.
    """
    times, cut_times = _grid_times(spec, refine)
    idx = np.searchsorted(times, cut_times)
    cuts = sorted(set(int(i) for i in idx) | {0, len(times) - 1})
    return times, cuts


def _grid_times(spec: IsotopySpec, refine: int):
    if isinstance(spec, (RigidRotation, RadialTwist, HamiltonianFlow)):
        n = _leaf_steps(spec) * (1 << refine)
        return np.linspace(0.0, 1.0, n + 1), np.array([0.0, 1.0])
    if isinstance(spec, Inverse):
        return _grid_times(spec.of, refine)
    if isinstance(spec, Power):
        return _concat_grid([spec.of] * spec.k, refine)
    if isinstance(spec, Composite):
        if spec.mode == "concat":
            return _concat_grid(list(spec.parts), refine)
        merged = None
        cut_all = []
        for part in spec.parts:
            t, c = _grid_times(part, refine)
            merged = t if merged is None else np.union1d(merged, t)
            cut_all.append(c)
        # collapse float-noise duplicates from the union
        keep = np.concatenate([[True], np.diff(merged) > _MERGE_TOL])
        merged = merged[keep]
        cuts = np.unique(np.concatenate(cut_all))
        return merged, cuts
    raise TypeError(f"not an IsotopySpec: {spec!r}")


def _concat_grid(parts, refine):
    m = len(parts)
    out = [np.array([0.0])]
    cuts = [0.0]
    for j, part in enumerate(parts):
        t, c = _grid_times(part, refine)
        out.append((j + t[1:]) / m)
        cuts.extend(((j + c[1:]) / m).tolist())
    return np.concatenate(out), np.asarray(cuts)


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class FrameTrajectory:
    """Sampled trajectory of one point with its 2x2 Jacobian path."""

    times: np.ndarray  # (T,)
    points: np.ndarray  # (T, 2)
    jacobians: np.ndarray  # (T, 2, 2) or None

    def validate(self):
        r = np.hypot(self.points[:, 0], self.points[:, 1])
        if np.any(r > 1.0 + 1e-7):
            raise PointOutsideDisk(f"trajectory left the disk (max |x| = {r.max():.9f})")
        if self.jacobians is not None:
            det = np.linalg.det(self.jacobians)
            defect = np.abs(det - 1.0).max()
            if defect > 10.0 * TOL_AREA:
                raise IntegratorDiverged(
                    f"area defect {defect:.3e} exceeds {10 * TOL_AREA:.0e}; reduce step size"
                )
        return self

    @property
    def endpoint(self):
        return self.points[-1]


def check_in_disk(pts):
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    if np.any(r2 > 1.0 + 2.0 * TOL_BOUNDARY):
        raise PointOutsideDisk(f"point outside unit disk (|x|^2 = {r2.max():.12f})")
    return pts


def _substeps_for(steps_per_unit, dt):
    return max(1, int(math.ceil(steps_per_unit * dt - 1e-9)))


def evaluate_batch(spec: IsotopySpec, xs, tgrid, want_jac: bool = True):
    """Evaluate g_t(x) (and dg_t(x)) for a batch of points on a grid.

    Returns ``(points, jacobians)`` of shapes (B, T, 2) and (B, T, 2, 2);
    ``jacobians`` is None when ``want_jac`` is false.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    tgrid = np.asarray(tgrid, dtype=float)

    if isinstance(spec, RigidRotation):
        return kernels.rigid_traj(spec.turns, xs, tgrid, want_jac)

    if isinstance(spec, RadialTwist):
        p = spec.profile
        return kernels.twist_traj(
            p._kind_id, p.amp, p.support, p.power, p.exponent, xs, tgrid, want_jac
        )

    if isinstance(spec, HamiltonianFlow):
        # per-interval substeps keep the effective step count at spec.steps
        # per unit time even on nonuniform grids
        dts = np.diff(tgrid)
        if dts.size and (dts.max() - dts.min()) < 1e-12:
            sub = _substeps_for(spec.steps, float(dts[0]))
            return kernels.ham_traj(
                spec.h._family_id, spec.h.params, spec.duration, xs, tgrid, sub, want_jac
            )
        pts = np.empty((xs.shape[0], tgrid.size, 2))
        jac = np.empty((xs.shape[0], tgrid.size, 2, 2)) if want_jac else None
        cur = xs
        cur_jac = np.broadcast_to(np.eye(2), (xs.shape[0], 2, 2)).copy() if want_jac else None
        pts[:, 0] = cur
        if want_jac:
            jac[:, 0] = cur_jac
        for k, dt in enumerate(dts):
            sub = _substeps_for(spec.steps, float(dt))
            seg, seg_jac = kernels.ham_traj(
                spec.h._family_id,
                spec.h.params,
                spec.duration,
                cur,
                np.array([tgrid[k], tgrid[k + 1]]),
                sub,
                want_jac,
            )
            cur = seg[:, -1]
            pts[:, k + 1] = cur
            if want_jac:
                cur_jac = seg_jac[:, -1] @ cur_jac
                jac[:, k + 1] = cur_jac
        return pts, jac

    if isinstance(spec, Inverse):
        inner = invert_spec(spec.of)
        if isinstance(inner, Inverse):  # Hamiltonian leaf: backward integration
            flow = inner.of
            pts = np.empty((xs.shape[0], tgrid.size, 2))
            jac = np.empty((xs.shape[0], tgrid.size, 2, 2)) if want_jac else None
            for j, t in enumerate(tgrid):
                nsteps = _substeps_for(flow.steps, float(t)) if t > 0 else 0
                p, jm = kernels.ham_apply_inverse(
                    flow.h._family_id, flow.h.params, flow.duration, float(t), xs, nsteps, want_jac
                )
                pts[:, j] = p
                if want_jac:
                    jac[:, j] = jm
            return pts, jac
        return evaluate_batch(inner, xs, tgrid, want_jac)

    if isinstance(spec, Power):
        return _concat_batch([spec.of] * spec.k, xs, tgrid, want_jac)

    if isinstance(spec, Composite):
        if spec.mode == "concat":
            return _concat_batch(list(spec.parts), xs, tgrid, want_jac)
        pts, jac = evaluate_batch(spec.parts[-1], xs, tgrid, want_jac)
        for part in reversed(spec.parts[:-1]):
            for j, t in enumerate(tgrid):
                p, jm = apply_map(part, float(t), pts[:, j], want_jac)
                pts[:, j] = p
                if want_jac:
                    jac[:, j] = jm @ jac[:, j]
        return pts, jac

    raise TypeError(f"not an IsotopySpec: {spec!r}")


def _concat_batch(parts, xs, tgrid, want_jac):
    m = len(parts)
    n_b, n_t = xs.shape[0], tgrid.size
    pts = np.empty((n_b, n_t, 2))
    jac = np.empty((n_b, n_t, 2, 2)) if want_jac else None
    cur = xs
    cur_jac = np.broadcast_to(np.eye(2), (n_b, 2, 2)).copy() if want_jac else None
    lo = 0
    for j, part in enumerate(parts):
        t0, t1 = j / m, (j + 1) / m
        hi = int(np.searchsorted(tgrid, t1, side="right" if j == m - 1 else "left"))
        # local nodes for this window, always anchored at tau = 0 and tau = 1
        local = (tgrid[lo:hi] - t0) * m
        local = np.clip(local, 0.0, 1.0)
        sub_t = np.concatenate([[0.0], local, [1.0]])
        p, jm = evaluate_batch(part, cur, sub_t, want_jac)
        pts[:, lo:hi] = p[:, 1:-1]
        if want_jac:
            jac[:, lo:hi] = jm[:, 1:-1] @ cur_jac[:, None]
        cur = p[:, -1]
        if want_jac:
            cur_jac = jm[:, -1] @ cur_jac
        lo = hi
    return pts, jac


def apply_map(spec: IsotopySpec, t: float, pts, want_jac: bool = False):
    """Apply the time-t map g_t (and optionally dg_t) to a batch of points."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))

    if isinstance(spec, RigidRotation):
        phi = 2.0 * math.pi * spec.turns * t
        rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        out = pts @ rot.T
        if want_jac:
            return out, np.broadcast_to(rot, (pts.shape[0], 2, 2)).copy()
        return out, None

    if isinstance(spec, RadialTwist):
        p = spec.profile
        return kernels.twist_apply(
            p._kind_id, p.amp, p.support, p.power, p.exponent, t, pts, want_jac
        )

    if isinstance(spec, HamiltonianFlow):
        nsteps = _substeps_for(spec.steps, t) if t > 0 else 0
        return kernels.ham_apply(
            spec.h._family_id, spec.h.params, spec.duration, t, pts, nsteps, want_jac
        )

    if isinstance(spec, Inverse):
        inner = invert_spec(spec.of)
        if isinstance(inner, Inverse):
            flow = inner.of
            nsteps = _substeps_for(flow.steps, t) if t > 0 else 0
            return kernels.ham_apply_inverse(
                flow.h._family_id, flow.h.params, flow.duration, t, pts, nsteps, want_jac
            )
        return apply_map(inner, t, pts, want_jac)

    if isinstance(spec, Power):
        return apply_map(Composite((spec.of,) * spec.k, "concat"), t, pts, want_jac)

    if isinstance(spec, Composite):
        if spec.mode == "product":
            out = pts
            jac = np.broadcast_to(np.eye(2), (pts.shape[0], 2, 2)).copy() if want_jac else None
            for part in reversed(spec.parts):
                out, jm = apply_map(part, t, out, want_jac)
                if want_jac:
                    jac = jm @ jac
            return out, jac
        m = len(spec.parts)
        s = min(t * m, float(m))
        out = pts
        jac = np.broadcast_to(np.eye(2), (pts.shape[0], 2, 2)).copy() if want_jac else None
        for j, part in enumerate(spec.parts):
            tau = min(max(s - j, 0.0), 1.0)
            if tau <= 0.0:
                break
            out, jm = apply_map(part, tau, out, want_jac)
            if want_jac:
                jac = jm @ jac
        return out, jac

    raise TypeError(f"not an IsotopySpec: {spec!r}")


def endpoint_map(spec: IsotopySpec, pts, want_jac: bool = False):
    """The time-1 map g_1 applied to a batch of points."""
    return apply_map(spec, 1.0, pts, want_jac)


def evaluate_path(spec: IsotopySpec, x, grid=None, want_jac: bool = True) -> FrameTrajectory:
    """Trajectory of one point with Jacobians, validated.

    ``grid`` defaults to the spec's structure-aware grid (512 steps per unit
    time).  Raises ``PointOutsideDisk`` for bad input or a trajectory that
    leaves the disk, ``IntegratorDiverged`` when the area defect exceeds
    ten times the tolerance.
    """
    x = check_in_disk(x)[0]
    if grid is None:
        grid, _ = build_grid(spec)
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2:
        raise ValueError("time grid needs at least 2 nodes")
    pts, jac = evaluate_batch(spec, x[None, :], grid, want_jac)
    return FrameTrajectory(grid, pts[0], jac[0] if want_jac else None).validate()


def evaluate_points(spec: IsotopySpec, xs, grid=None):
    """Point trajectories only (no Jacobians), shape (B, T, 2)."""
    xs = check_in_disk(xs)
    if grid is None:
        grid, _ = build_grid(spec)
    pts, _ = evaluate_batch(spec, xs, np.asarray(grid, dtype=float), want_jac=False)
    return pts


# ---------------------------------------------------------------------------
# sampling


def sample_disk(seed: int, count: int):
    """Deterministic i.i.d. area-uniform points in the disk, shape (count, 2).

    Area uniformity: radius = sqrt(U), angle = 2*pi*V.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.random(count))
    th = 2.0 * math.pi * rng.random(count)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


def random_spec(rng, families=("rigid", "twist", "btwist")) -> IsotopySpec:
    """A random spec from the closed-form families, for defect sampling."""
    kind = families[rng.integers(len(families))]
    if kind == "rigid":
        return RigidRotation(float(rng.uniform(-1.5, 1.5)))
    if kind == "twist":
        return compact_twist(
            float(rng.uniform(-0.6, 0.6)), float(rng.uniform(0.5, 0.9)), int(rng.integers(2, 5))
        )
    if kind == "btwist":
        return boundary_twist(float(rng.uniform(-0.8, 0.8)), int(rng.integers(1, 3)))
    raise ValueError(f"unknown family {kind!r}")


def twist_rotation_pairs(seed: int):
    """Deterministic generator of (alpha, beta) pairs from twists/rotations."""
    rng = np.random.default_rng(seed)
    while True:
        yield random_spec(rng), random_spec(rng)


def boundary_pairs(seed: int):
    """Pairs of boundary-rotating flows (for rotation-number defects)."""
    rng = np.random.default_rng(seed)
    fams = ("rigid", "btwist")
    while True:
        yield random_spec(rng, fams), random_spec(rng, fams)


# ---------------------------------------------------------------------------
# compact support and serialization


def is_compactly_supported(spec: IsotopySpec) -> bool:
    """True when the spec is generated by Hamiltonians vanishing near the
    boundary (an element of the boundary-fixing subgroup)."""
    if isinstance(spec, RigidRotation):
        return spec.turns == 0.0
    if isinstance(spec, RadialTwist):
        return spec.profile.kind == "compact"
    if isinstance(spec, HamiltonianFlow):
        return spec.h.boundary_constant
    if isinstance(spec, (Inverse, Power)):
        return is_compactly_supported(spec.of)
    if isinstance(spec, Composite):
        return all(is_compactly_supported(p) for p in spec.parts)
    raise TypeError(f"not an IsotopySpec: {spec!r}")


def spec_label(spec: IsotopySpec) -> str:
    """Short human-readable scenario label."""
    if isinstance(spec, RigidRotation):
        return f"rigid:{spec.turns:g}"
    if isinstance(spec, RadialTwist):
        p = spec.profile
        if p.kind == "compact":
            return f"twist:amp={p.amp:g},support={p.support:g},power={p.power}"
        return f"btwist:amp={p.amp:g},exponent={p.exponent}"
    if isinstance(spec, HamiltonianFlow):
        h = spec.h
        if h.family == "bump":
            return f"bump:amp={h.params[0]:g},support={h.params[1]:g}"
        if h.family == "stir":
            return f"stir:amp={h.params[0]:g},support={h.params[1]:g},freq={h.params[3]:g}"
        return f"rim:a={h.params[0]:g},b={h.params[1]:g},m={int(h.params[2])}"
    if isinstance(spec, Inverse):
        return f"inv({spec_label(spec.of)})"
    if isinstance(spec, Power):
        return f"pow({spec_label(spec.of)},{spec.k})"
    if isinstance(spec, Composite):
        sep = "|"
        inner = sep.join(spec_label(p) for p in spec.parts)
        return f"comp({inner})" if spec.mode == "product" else f"chain({inner})"
    return repr(spec)


def to_config(spec: IsotopySpec) -> dict:
    """Flat key-value form of a leaf spec.

    Keys: flow.kind, flow.turns, flow.profile, flow.amplitude,
    flow.support_radius, flow.steps.  Composite specs are not expressible in
    the flat form; use the CLI mini-language for those.
    """
    if isinstance(spec, RigidRotation):
        return {"flow.kind": "rigid", "flow.turns": spec.turns}
    if isinstance(spec, RadialTwist):
        p = spec.profile
        cfg = {"flow.kind": "twist", "flow.profile": p.kind, "flow.amplitude": p.amp}
        if p.kind == "compact":
            cfg["flow.support_radius"] = p.support
        return cfg
    if isinstance(spec, HamiltonianFlow):
        h = spec.h
        if h.family == "rim":
            raise ValueError("rim flows are not expressible in the flat config; use the mini-language")
        return {
            "flow.kind": h.family,
            "flow.amplitude": h.params[0],
            "flow.support_radius": h.params[1],
            "flow.steps": spec.steps,
        }
    raise ValueError(f"only leaf specs serialize to flat config, got {spec_label(spec)}")


def from_config(cfg: dict) -> IsotopySpec:
    """Inverse of :func:`to_config`."""
    kind = cfg["flow.kind"]
    if kind == "rigid":
        return RigidRotation(float(cfg["flow.turns"]))
    if kind == "twist":
        profile = cfg.get("flow.profile", "compact")
        amp = float(cfg["flow.amplitude"])
        if profile == "compact":
            return compact_twist(amp, float(cfg.get("flow.support_radius", 0.8)))
        return boundary_twist(amp)
    if kind in ("bump", "stir"):
        amp = float(cfg["flow.amplitude"])
        support = float(cfg.get("flow.support_radius", 0.8))
        steps = int(cfg.get("flow.steps", DEFAULT_STEPS))
        h = bump_hamiltonian(amp, support) if kind == "bump" else stir_hamiltonian(amp, support)
        return HamiltonianFlow(h, steps=steps)
    raise ValueError(f"unknown flow.kind {kind!r}")
