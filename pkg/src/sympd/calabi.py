"""Calabi invariant of compactly supported isotopies.

Cal(alpha) is the time integral over the path of the disk integral of the
generating Hamiltonian.  Twist profiles are converted to their radial
Hamiltonians; pointwise products integrate the composed Hamiltonian
K = sum_j H_j(t, prefix_j^-1(x)) (prefix = the factors applied after the
j-th); concatenations and inverses reduce exactly by time reparametrization
and the area-preserving change of variables.
"""

from __future__ import annotations

import time

import numpy as np

from . import flows, quad
from .errors import NotCompactlySupported
from .qmcore import QMFunctional, QMValue

TIME_NODES = 129  # Simpson subgrid of the flow grid
COLLAR_TOL = 1e-9


def hamiltonian_value(spec: flows.IsotopySpec, t: float, pts) -> np.ndarray:
    """Generating Hamiltonian of the isotopy at path time t, evaluated at
    points.  Only defined for specs built from twist profiles and built-in
    Hamiltonian families (plus products, powers and inverses thereof)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if isinstance(spec, flows.RigidRotation):
        if spec.turns == 0.0:
            return np.zeros(pts.shape[0])
        raise NotCompactlySupported("rigid rotations are not compactly supported")
    if isinstance(spec, flows.RadialTwist):
        if spec.profile.kind != "compact":
            raise NotCompactlySupported("boundary-rotating twist")
        rho = np.hypot(pts[:, 0], pts[:, 1])
        return spec.profile.hamiltonian(rho)
    if isinstance(spec, flows.HamiltonianFlow):
        return spec.duration * np.asarray(
            spec.h.value(spec.duration * t, pts), dtype=float
        )
    if isinstance(spec, flows.Inverse):
        moved, _ = flows.apply_map(spec.of, t, pts)
        return -hamiltonian_value(spec.of, t, moved)
    if isinstance(spec, flows.Power) or (
        isinstance(spec, flows.Composite) and spec.mode == "concat"
    ):
        parts = [spec.of] * spec.k if isinstance(spec, flows.Power) else list(spec.parts)
        m = len(parts)
        seg = min(int(t * m), m - 1)
        tau = t * m - seg
        return m * hamiltonian_value(parts[seg], tau, pts)
    if isinstance(spec, flows.Composite) and spec.mode == "product":
        total = np.zeros(pts.shape[0])
        for j, part in enumerate(spec.parts):
            if j == 0:
                moved = pts
            else:
                prefix = spec.parts[0] if j == 1 else flows.Composite(spec.parts[:j], "product")
                moved, _ = flows.apply_map(flows.Inverse(prefix), t, pts)
            total += hamiltonian_value(part, t, moved)
        return total
    raise TypeError(f"no Hamiltonian for {flows.spec_label(spec)}")


def _check_collar(spec):
    angles = 2.0 * np.pi * np.arange(64) / 64
    ring = []
    for r in (0.955, 0.97, 0.985, 0.999):
        ring.append(np.column_stack([r * np.cos(angles), r * np.sin(angles)]))
    ring = np.concatenate(ring)
    for t in (0.0, 0.33, 0.77, 1.0):
        h = hamiltonian_value(spec, t, ring)
        worst = float(np.abs(h).max())
        if worst > COLLAR_TOL:
            raise NotCompactlySupported(
                f"Hamiltonian reaches {worst:.2e} on the boundary collar"
            )


def calabi(
    spec: flows.IsotopySpec,
    nr: int = 64,
    ntheta: int = 64,
    _check: bool = True,
) -> QMValue:
    """Calabi invariant: integral of the generating Hamiltonian over time
    and the disk.  Raises ``NotCompactlySupported`` for flows that move a
    neighborhood of the boundary."""
    t0 = time.perf_counter()
    if _check:
        if not flows.is_compactly_supported(spec):
            raise NotCompactlySupported(flows.spec_label(spec))
        _check_collar(spec)
    value = _calabi_value(spec, nr, ntheta)
    ms = 1000.0 * (time.perf_counter() - t0)
    meta = dict(
        invariant="calabi",
        scenario=flows.spec_label(spec),
        nr=nr,
        ntheta=ntheta,
        runtime_ms=ms,
    )
    return QMValue(value, 0.0, 0.0, meta)


def _calabi_value(spec, nr, ntheta) -> float:
    # exact structural reductions: time reparametrization for
    # concatenations, area-preserving change of variables for inverses
    if isinstance(spec, flows.Power):
        return spec.k * _calabi_value(spec.of, nr, ntheta)
    if isinstance(spec, flows.Composite) and spec.mode == "concat":
        return float(sum(_calabi_value(p, nr, ntheta) for p in spec.parts))
    if isinstance(spec, flows.Inverse):
        return -_calabi_value(spec.of, nr, ntheta)

    pts, w = quad.disk_rule(nr, ntheta)
    tgrid = np.linspace(0.0, 1.0, TIME_NODES)
    space = np.empty(tgrid.size)
    for i, t in enumerate(tgrid):
        space[i] = quad.pairwise_sum(w * hamiltonian_value(spec, float(t), pts))
    from scipy.integrate import simpson

    return float(simpson(space, x=tgrid))


def calabi_functional(nr: int = 64, ntheta: int = 64) -> QMFunctional:
    return QMFunctional("calabi", lambda s: calabi(s, nr, ntheta))
