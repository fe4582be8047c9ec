"""Pure-numpy kernels: flow evaluation, variational integration, unwinding.

This module is the fallback backend.  The compiled extension
``sympd._kernels`` exports the same functions with identical semantics;
``sympd._backend`` selects between them at import time.

Conventions shared by both backends:

* points are float64 arrays of shape (B, 2);
* time grids are increasing float64 arrays in [0, 1] with >= 2 nodes;
* Jacobian stacks have shape (B, T, 2, 2) (or (B, 2, 2) for a single time);
* angles are measured in turns (full revolutions), not radians.

Hamiltonian families are dispatched on small integer ids so the compiled
backend can avoid Python callbacks:

* 1 "bump":  H = amp * (1 - u/R^2)^p  for u = x^2+y^2 < R^2, else 0
* 2 "stir":  H = amp * (1 - u/R^2)^p * (x cos psi + y sin psi),
             psi = 2*pi*freq*t + phase
* 3 "rim":   H = (a + b * Re((x+iy)^m e^{i*phase})) * (1 - u)

The Hamiltonian vector field is X = (dH/dy, -dH/dx) with omega = dx^dy.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi

FAMILY_BUMP = 1
FAMILY_STIR = 2
FAMILY_RIM = 3

TWIST_COMPACT = 1
TWIST_BOUNDARY = 2


def is_compiled() -> bool:
    return False


# ---------------------------------------------------------------------------
# closed-form flows


def _rot(phi):
    """Rotation matrices for a stack of angles (radians), shape (..., 2, 2)."""
    c, s = np.cos(phi), np.sin(phi)
    out = np.empty(np.shape(phi) + (2, 2))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


def rigid_traj(turns, xs, tgrid, want_jac):
    """Trajectory of the rigid rotation by ``turns`` full turns at time 1."""
    xs = np.asarray(xs, dtype=float)
    phi = TWO_PI * turns * np.asarray(tgrid)  # (T,)
    rot = _rot(phi)  # (T, 2, 2)
    pts = np.einsum("tij,bj->bti", rot, xs)
    jac = None
    if want_jac:
        jac = np.broadcast_to(rot[None], (xs.shape[0],) + rot.shape).copy()
    return pts, jac


def _twist_profile(kind, amp, support, power, exponent, rho2):
    """Return (f, f'/rho) of the twist profile at squared radii ``rho2``.

    f is in turns-at-time-1; f'/rho is the analytic quotient, finite at 0.
    """
    if kind == TWIST_COMPACT:
        w = 1.0 - rho2 / (support * support)
        inside = w > 0.0
        wp = np.where(inside, w, 0.0)
        f = amp * wp**power * inside
        dfr = -(2.0 * amp * power / (support * support)) * wp ** (power - 1) * inside
    elif kind == TWIST_BOUNDARY:
        q = exponent
        f = amp * rho2**q
        dfr = 2.0 * q * amp * rho2 ** (q - 1)
    else:
        raise ValueError(f"unknown twist kind {kind}")
    return f, dfr


def twist_apply(kind, amp, support, power, exponent, t, pts, want_jac):
    """Apply the time-t twist map (and optionally its Jacobian) to points."""
    pts = np.asarray(pts, dtype=float)
    x, y = pts[..., 0], pts[..., 1]
    rho2 = x * x + y * y
    f, dfr = _twist_profile(kind, amp, support, power, exponent, rho2)
    phi = TWO_PI * t * f
    c, s = np.cos(phi), np.sin(phi)
    out = np.stack([c * x - s * y, s * x + c * y], axis=-1)
    if not want_jac:
        return out, None
    # dg = R(phi) @ (I + c2 * (J u) u^T), c2 = 2*pi*t*f'(rho)/rho, u = (x, y)
    c2 = TWO_PI * t * dfr
    m00 = 1.0 - c2 * x * y
    m01 = -c2 * y * y
    m10 = c2 * x * x
    m11 = 1.0 + c2 * x * y
    jac = np.empty(pts.shape[:-1] + (2, 2))
    jac[..., 0, 0] = c * m00 - s * m10
    jac[..., 0, 1] = c * m01 - s * m11
    jac[..., 1, 0] = s * m00 + c * m10
    jac[..., 1, 1] = s * m01 + c * m11
    return out, jac


def twist_traj(kind, amp, support, power, exponent, xs, tgrid, want_jac):
    """Closed-form twist trajectory over a time grid."""
    xs = np.asarray(xs, dtype=float)
    tgrid = np.asarray(tgrid, dtype=float)
    x, y = xs[:, 0:1], xs[:, 1:2]  # (B, 1)
    rho2 = x * x + y * y
    f, dfr = _twist_profile(kind, amp, support, power, exponent, rho2)
    phi = TWO_PI * f * tgrid[None, :]  # (B, T)
    c, s = np.cos(phi), np.sin(phi)
    pts = np.empty((xs.shape[0], tgrid.size, 2))
    pts[:, :, 0] = c * x - s * y
    pts[:, :, 1] = s * x + c * y
    jac = None
    if want_jac:
        c2 = TWO_PI * dfr * tgrid[None, :]
        m00 = 1.0 - c2 * x * y
        m01 = -c2 * y * y
        m10 = c2 * x * x
        m11 = 1.0 + c2 * x * y
        jac = np.empty((xs.shape[0], tgrid.size, 2, 2))
        jac[:, :, 0, 0] = c * m00 - s * m10
        jac[:, :, 0, 1] = c * m01 - s * m11
        jac[:, :, 1, 0] = s * m00 + c * m10
        jac[:, :, 1, 1] = s * m01 + c * m11
    return pts, jac


# ---------------------------------------------------------------------------
# Hamiltonian families


def ham_field(family, params, t, pts, want_grad):
    """Vector field X(t, .) and optionally its space Jacobian dX at points.

    Returns (X, A) with X shape (B, 2) and A shape (B, 2, 2) or None.
    A = [[H_yx, H_yy], [-H_xx, -H_xy]].
    """
    pts = np.asarray(pts, dtype=float)
    x, y = pts[..., 0], pts[..., 1]
    u = x * x + y * y

    if family == FAMILY_BUMP:
        amp, big_r, p = params[0], params[1], int(params[2])
        r2 = big_r * big_r
        w = 1.0 - u / r2
        inside = w > 0.0
        w = np.where(inside, w, 0.0)
        c2 = 2.0 * amp * p / r2
        wp1 = w ** (p - 1) * inside
        hx = -c2 * wp1 * x
        hy = -c2 * wp1 * y
        if not want_grad:
            return np.stack([hy, -hx], axis=-1), None
        wp2 = w ** (p - 2) * inside
        hxx = -c2 * wp2 * (w - 2.0 * (p - 1) * x * x / r2)
        hyy = -c2 * wp2 * (w - 2.0 * (p - 1) * y * y / r2)
        hxy = (2.0 * c2 * (p - 1) / r2) * wp2 * x * y
    elif family == FAMILY_STIR:
        amp, big_r, p = params[0], params[1], int(params[2])
        freq, phase = params[3], params[4]
        r2 = big_r * big_r
        psi = TWO_PI * freq * t + phase
        cp, sp = np.cos(psi), np.sin(psi)
        w = 1.0 - u / r2
        inside = w > 0.0
        w = np.where(inside, w, 0.0)
        sdir = x * cp + y * sp
        b2 = 2.0 * p / r2
        wp1 = w ** (p - 1) * inside
        wp2 = w ** (p - 2) * inside
        hx = amp * wp1 * (-b2 * x * sdir + w * cp)
        hy = amp * wp1 * (-b2 * y * sdir + w * sp)
        if not want_grad:
            return np.stack([hy, -hx], axis=-1), None
        hxx = amp * wp2 * (
            -b2 * sdir * w
            - 2.0 * b2 * x * cp * w
            + b2 * (p - 1) * (2.0 * x * x / r2) * sdir
        )
        hyy = amp * wp2 * (
            -b2 * sdir * w
            - 2.0 * b2 * y * sp * w
            + b2 * (p - 1) * (2.0 * y * y / r2) * sdir
        )
        hxy = amp * wp2 * (
            -b2 * (x * sp + y * cp) * w + b2 * (p - 1) * (2.0 * x * y / r2) * sdir
        )
    elif family == FAMILY_RIM:
        a, b, m, phase = params[0], params[1], int(params[2]), params[3]
        z = x + 1j * y
        rot = np.exp(1j * phase)
        pm = z**m * rot
        pm1 = m * z ** (m - 1) * rot
        pm2 = m * (m - 1) * z ** (m - 2) * rot if m >= 2 else np.zeros_like(z)
        big_p = pm.real
        px, py = pm1.real, -pm1.imag
        one_u = 1.0 - u
        ab = a + b * big_p
        hx = b * px * one_u - 2.0 * x * ab
        hy = b * py * one_u - 2.0 * y * ab
        if not want_grad:
            return np.stack([hy, -hx], axis=-1), None
        pxx, pxy, pyy = pm2.real, -pm2.imag, -pm2.real
        hxx = b * pxx * one_u - 4.0 * x * b * px - 2.0 * ab
        hyy = b * pyy * one_u - 4.0 * y * b * py - 2.0 * ab
        hxy = b * pxy * one_u - 2.0 * y * b * px - 2.0 * x * b * py
    else:
        raise ValueError(f"unknown Hamiltonian family {family}")

    field = np.stack([hy, -hx], axis=-1)
    grad = np.empty(pts.shape[:-1] + (2, 2))
    grad[..., 0, 0] = hxy
    grad[..., 0, 1] = hyy
    grad[..., 1, 0] = -hxx
    grad[..., 1, 1] = -hxy
    return field, grad


def ham_value(family, params, t, pts):
    """Hamiltonian value H(t, .) at points, shape (B,)."""
    pts = np.asarray(pts, dtype=float)
    x, y = pts[..., 0], pts[..., 1]
    u = x * x + y * y
    if family == FAMILY_BUMP:
        amp, big_r, p = params[0], params[1], int(params[2])
        w = 1.0 - u / (big_r * big_r)
        w = np.where(w > 0.0, w, 0.0)
        return amp * w**p
    if family == FAMILY_STIR:
        amp, big_r, p = params[0], params[1], int(params[2])
        freq, phase = params[3], params[4]
        psi = TWO_PI * freq * t + phase
        w = 1.0 - u / (big_r * big_r)
        w = np.where(w > 0.0, w, 0.0)
        return amp * w**p * (x * np.cos(psi) + y * np.sin(psi))
    if family == FAMILY_RIM:
        a, b, m, phase = params[0], params[1], int(params[2]), params[3]
        big_p = ((x + 1j * y) ** m * np.exp(1j * phase)).real
        return (a + b * big_p) * (1.0 - u)
    raise ValueError(f"unknown Hamiltonian family {family}")


def _rk4_step(family, params, duration, t, h, pts, jac):
    """One RK4 step of the flow (and variational equation when jac given).

    ``t`` and ``h`` are in path time; physical time is duration * t.
    """
    want = jac is not None

    def f(tau, p):
        field, grad = ham_field(family, params, duration * tau, p, want)
        if want:
            return duration * field, duration * grad
        return duration * field, None

    k1, a1 = f(t, pts)
    k2, a2 = f(t + 0.5 * h, pts + 0.5 * h * k1)
    k3, a3 = f(t + 0.5 * h, pts + 0.5 * h * k2)
    k4, a4 = f(t + h, pts + h * k3)
    new_pts = pts + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    new_jac = None
    if want:
        m1 = a1 @ jac
        m2 = a2 @ (jac + 0.5 * h * m1)
        m3 = a3 @ (jac + 0.5 * h * m2)
        m4 = a4 @ (jac + h * m3)
        new_jac = jac + (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4)
    return new_pts, new_jac


def ham_traj(family, params, duration, xs, tgrid, substeps, want_jac):
    """RK4 trajectory (points and Jacobians) over ``tgrid``.

    Each grid interval is integrated with ``substeps`` internal RK4 steps.
    """
    xs = np.asarray(xs, dtype=float)
    tgrid = np.asarray(tgrid, dtype=float)
    n_b, n_t = xs.shape[0], tgrid.size
    pts = np.empty((n_b, n_t, 2))
    pts[:, 0] = xs
    jac = None
    cur_jac = None
    if want_jac:
        jac = np.empty((n_b, n_t, 2, 2))
        cur_jac = np.broadcast_to(np.eye(2), (n_b, 2, 2)).copy()
        jac[:, 0] = cur_jac
    cur = xs.copy()
    for k in range(n_t - 1):
        t0, t1 = tgrid[k], tgrid[k + 1]
        h = (t1 - t0) / substeps
        t = t0
        for _ in range(substeps):
            cur, cur_jac = _rk4_step(family, params, duration, t, h, cur, cur_jac)
            t += h
        pts[:, k + 1] = cur
        if want_jac:
            jac[:, k + 1] = cur_jac
    return pts, jac


def ham_apply(family, params, duration, t, pts, nsteps, want_jac):
    """Time-t map of the flow applied to points (integrate 0 -> t)."""
    pts = np.asarray(pts, dtype=float).copy()
    jac = None
    if want_jac:
        jac = np.broadcast_to(np.eye(2), (pts.shape[0], 2, 2)).copy()
    if t == 0.0 or nsteps == 0:
        return pts, jac
    h = t / nsteps
    tau = 0.0
    for _ in range(nsteps):
        pts, jac = _rk4_step(family, params, duration, tau, h, pts, jac)
        tau += h
    return pts, jac


def ham_apply_inverse(family, params, duration, t, pts, nsteps, want_jac):
    """Inverse time-t map: integrate backward from path time t to 0."""
    pts = np.asarray(pts, dtype=float).copy()
    jac = None
    if want_jac:
        jac = np.broadcast_to(np.eye(2), (pts.shape[0], 2, 2)).copy()
    if t == 0.0 or nsteps == 0:
        return pts, jac
    h = -t / nsteps
    tau = t
    for _ in range(nsteps):
        pts, jac = _rk4_step(family, params, duration, tau, h, pts, jac)
        tau += h
    return pts, jac


# ---------------------------------------------------------------------------
# angle unwinding


def unwrap_turns(vecs):
    """Per-step angle increments (turns) of planar vector paths.

    ``vecs`` has shape (B, T, 2); the result has shape (B, T-1) with every
    increment wrapped to [-1/2, 1/2].  The caller is responsible for
    refining the grid until increments are unambiguous.
    """
    ang = np.arctan2(vecs[..., 1], vecs[..., 0]) / TWO_PI
    inc = np.diff(ang, axis=-1)
    inc -= np.round(inc)
    return inc
