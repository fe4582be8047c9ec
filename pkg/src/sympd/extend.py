"""Extension operator: correct a quasi-morphism on the universal cover by
its value on the full rotation times the boundary rotation number.

With a = phi(full rotation), the corrected functional
psi = phi - a * rot vanishes on the deck subgroup and is therefore constant
on fibers of the covering projection, i.e. it descends to the
symplectomorphism group itself; on boundary-fixing flows it restricts to
phi unchanged.  Group elements are always presented through a lift (an
isotopy from the identity); descent is verified by the fiber-constancy
residual rather than by choosing a section.
"""

from __future__ import annotations

import math

from . import circle, flows
from .qmcore import QMFunctional, QMValue, homogenize


def a_phi(phi: QMFunctional, k_max: int = 4) -> QMValue:
    """Homogenized value of the functional on the full disk rotation."""
    return homogenize(phi, flows.RigidRotation(1.0), k_max)


def extend_qm(
    phi: QMFunctional,
    lift: flows.IsotopySpec,
    k_max: int = 4,
    rot_iters: int = circle.DEFAULT_ITERS,
    a: QMValue | None = None,
) -> QMValue:
    """psi(lift) = homogenize(phi, lift) - a_phi * rot(lift).

    Deterministic and statistical errors of the three ingredients are
    combined (stderr in quadrature, biases as a weighted sum).  Pass a
    precomputed ``a`` to reuse the full-rotation value across calls.
    """
    hom = homogenize(phi, lift, k_max)
    if a is None:
        a = a_phi(phi, k_max)
    rot = circle.rotation_number(lift, iters=rot_iters)
    value = hom.value - a.value * rot.value
    stderr = math.sqrt(
        hom.stderr**2 + (a.stderr * rot.value) ** 2 + (a.value * rot.stderr) ** 2
    )
    bias = hom.bias_estimate + a.bias_estimate * abs(rot.value) + abs(a.value) * rot.bias_estimate
    meta = dict(
        invariant=f"extend[{phi.id}]",
        scenario=flows.spec_label(lift),
        kmax=k_max,
        a_phi=a.value,
        rot=rot.value,
        seed=hom.meta.get("seed"),
    )
    return QMValue(value, stderr, bias, meta)


def lift_independence_residual(
    phi: QMFunctional,
    lift: flows.IsotopySpec,
    k: int,
    k_max: int = 4,
    rot_iters: int = circle.DEFAULT_ITERS,
) -> float:
    """|psi(lift) - psi(lift composed with k full rotations)|.

    The deck transformation shifts both the homogenized functional and
    a_phi * rot by the same amount, so the residual vanishes up to
    numerical error; this realizes the descent statement testably.
    """
    if int(k) != k:
        raise ValueError("k must be an integer (deck transformations only)")
    a = a_phi(phi, k_max)
    base = extend_qm(phi, lift, k_max, rot_iters, a=a)
    shifted_lift = flows.group_op("compose", lift, flows.RigidRotation(float(k)))
    shifted = extend_qm(phi, shifted_lift, k_max, rot_iters, a=a)
    return abs(base.value - shifted.value)
