"""Independent geometric oracles.

These computations deliberately avoid the production code paths they are
used to check:

* exact piecewise-linear Gauss linking numbers of explicit space curves;
* Seifert matrix entries of braid closures recomputed as linking numbers of
  pushed-off basis curves on an embedded spanning surface (stacked disks at
  consecutive heights joined by half-twisted boundary bands, one per braid
  letter);
* closed-form radial reductions for twist flows.

The ``selftest`` CLI subcommand and the test suite both consume this module.
"""

from __future__ import annotations

import math

import numpy as np

BAND_SAMPLES = 12
BAND_WIDTH_OFFSET = 0.10
PUSH_EPS = 0.02
# geometric band handedness per letter sign, anchored by signature(s1^2) = -1
TWIST_HANDEDNESS = 1.0


# ---------------------------------------------------------------------------
# exact PL linking


def pl_linking(curve_a: np.ndarray, curve_b: np.ndarray) -> float:
    """Gauss linking number of two disjoint closed PL curves.

    Uses the segment-pair solid-angle formula (exact per pair), so the
    result is an integer up to roundoff for any valid input.
    """
    a1 = np.asarray(curve_a, dtype=float)
    b1 = np.asarray(curve_b, dtype=float)
    a2 = np.roll(a1, -1, axis=0)
    b2 = np.roll(b1, -1, axis=0)

    p1 = a1[:, None, :]
    p2 = a2[:, None, :]
    p3 = b1[None, :, :]
    p4 = b2[None, :, :]

    r13 = p3 - p1
    r14 = p4 - p1
    r23 = p3 - p2
    r24 = p4 - p2

    n1 = np.cross(r13, r14)
    n2 = np.cross(r14, r24)
    n3 = np.cross(r24, r23)
    n4 = np.cross(r23, r13)

    def _unit(v):
        norm = np.linalg.norm(v, axis=-1, keepdims=True)
        return np.divide(v, norm, out=np.zeros_like(v), where=norm > 1e-14)

    n1, n2, n3, n4 = _unit(n1), _unit(n2), _unit(n3), _unit(n4)

    def _asin_dot(u, v):
        return np.arcsin(np.clip(np.sum(u * v, axis=-1), -1.0, 1.0))

    omega = _asin_dot(n1, n2) + _asin_dot(n2, n3) + _asin_dot(n3, n4) + _asin_dot(n4, n1)
    sign = np.sign(np.sum(np.cross(p4 - p3, p2 - p1) * r13, axis=-1))
    return float(np.sum(omega * sign) / (4.0 * math.pi))


# ---------------------------------------------------------------------------
# embedded Bennequin-style surface for a braid word


def _occurrences(letters):
    occ = {}
    for pos, (idx, sign) in enumerate(letters):
        occ.setdefault(idx, []).append((pos, sign))
    return occ


def basis_loops(letters):
    """Homology basis: one loop per consecutive same-index letter pair.

    Returns a list of dicts with index i and the two word positions/signs.
    Ordered by generator index, then position.
    """
    loops = []
    for idx in sorted(_occurrences(letters)):
        occ = _occurrences(letters)[idx]
        for k in range(len(occ) - 1):
            (p, sp), (q, sq) = occ[k], occ[k + 1]
            loops.append(dict(index=idx, p=p, q=q, sp=sp, sq=sq))
    return loops


def _band_offsets(letters, loops):
    """Width offset of each loop inside each band it traverses.

    A band shared by two basis loops carries them at opposite offsets; a
    band used once carries its loop on the core.
    """
    users = {}
    for li, lp in enumerate(loops):
        users.setdefault(lp["p"], []).append((li, "start"))
        users.setdefault(lp["q"], []).append((li, "end"))
    off = {}
    for pos, lst in users.items():
        if len(lst) == 1:
            off[(lst[0][0], pos)] = 0.0
        else:
            for li, role in lst:
                off[(li, pos)] = BAND_WIDTH_OFFSET if role == "start" else -BAND_WIDTH_OFFSET
    return off


def _band_points(pos, n_letters, sign, offset, level, ascending):
    """Vertices, normals and outward radial of a passage through the band at
    word position ``pos`` between disk ``level`` and ``level + 1``."""
    phi = 0.3 + (2.0 * math.pi - 0.6) * (pos + 0.5) / n_letters
    e_r = np.array([math.cos(phi), math.sin(phi), 0.0])
    e_t = np.array([-math.sin(phi), math.cos(phi), 0.0])
    ez = np.array([0.0, 0.0, 1.0])
    s = np.linspace(0.0, 1.0, BAND_SAMPLES + 1)
    if not ascending:
        s = s[::-1]
    handed = TWIST_HANDEDNESS * sign
    width = np.outer(np.cos(math.pi * s), e_t) + np.outer(np.sin(math.pi * s), handed * e_r)
    pts = e_r[None, :] + offset * width + np.outer(level + s, ez)
    normals = np.outer(np.cos(math.pi * s), e_r) - np.outer(np.sin(math.pi * s), handed * e_t)
    return pts, normals, e_r


def loop_curves(loop, n_letters, offsets, loop_index):
    """Base curve and pushed-off curve of one basis loop.

    The pushed curve shifts every piece along its own surface normal (+z on
    the disks, the rotating band normal through the half-twisted bands),
    with corner hops at the junctions, so it is disjoint from the surface.
    """
    i = loop["index"]
    off_p = offsets[(loop_index, loop["p"])]
    off_q = offsets[(loop_index, loop["q"])]
    up, n_up, rad_p = _band_points(loop["p"], n_letters, loop["sp"], off_p, i, ascending=True)
    down, n_down, rad_q = _band_points(loop["q"], n_letters, loop["sq"], off_q, i, ascending=False)
    ez = np.array([0.0, 0.0, 1.0])
    # bottom junctions sit at band feet where the band continues upward, so
    # the bottom chord is pushed diagonally (up and radially out) to clear it
    diag_p = (rad_p + ez) / math.sqrt(2.0)
    diag_q = (rad_q + ez) / math.sqrt(2.0)

    # base: up band p, chord on upper disk, down band q, chord back (chords
    # are the straight segments between consecutive band endpoints)
    base = np.concatenate([up, down])
    pushed = np.concatenate(
        [
            up + PUSH_EPS * n_up,
            [up[-1] + PUSH_EPS * ez, down[0] + PUSH_EPS * ez],
            down + PUSH_EPS * n_down,
            [down[-1] + PUSH_EPS * diag_q, up[0] + PUSH_EPS * diag_p],
        ]
    )
    return base, pushed


def seifert_matrix_oracle(letters, strands=None) -> np.ndarray:
    """Seifert matrix of the braid closure via PL Gauss linking integrals.

    ``letters`` is a sequence of (index, sign) pairs.  Entry (a, b) is the
    linking number of basis loop a with the pushed-off copy of loop b.
    """
    letters = list(letters)
    loops = basis_loops(letters)
    offsets = _band_offsets(letters, loops)
    n = len(loops)
    bases = []
    pushes = []
    for li, lp in enumerate(loops):
        b, p = loop_curves(lp, len(letters), offsets, li)
        bases.append(b)
        pushes.append(p)
    v = np.zeros((n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            val = pl_linking(bases[a], pushes[b])
            r = round(val)
            if abs(val - r) > 1e-6:
                raise AssertionError(f"PL linking {val} not an integer at entry ({a}, {b})")
            v[a, b] = r
    return v


# ---------------------------------------------------------------------------
# closed-form twist reductions


def twist_ruelle_raw_oracle(profile, n_quad: int = 4000) -> float:
    """Raw column-winding integral of a time-1 radial twist, reduced to one
    radial integral (angular average in closed form)."""
    r = (np.arange(n_quad) + 0.5) / n_quad
    f = profile.f(r)
    fp = profile.df_over_rho(r) * r
    integrand = 2.0 * math.pi * f * r + np.arctan(math.pi * r * fp) * r
    return float(integrand.sum() / n_quad)


def twist_ruelle_homog_oracle(profile, n_quad: int = 4000) -> float:
    """Homogenized Ruelle value of a radial twist: 2*pi*integral f(r) r dr."""
    r = (np.arange(n_quad) + 0.5) / n_quad
    return float(2.0 * math.pi * np.sum(profile.f(r) * r) / n_quad)


def twist_calabi_oracle(profile, n_quad: int = 4000) -> float:
    """Calabi invariant of a compact twist: 2*pi*integral H(r) r dr."""
    r = (np.arange(n_quad) + 0.5) / n_quad
    return float(2.0 * math.pi * np.sum(profile.hamiltonian(r) * r) / n_quad)


def twist_pair_linking_rate_oracle(profile, n_quad: int = 2000) -> float:
    """Expected homogenized pairwise winding of two area-uniform points
    under a radial twist, times pi^2 (the configuration-space volume).

    Two points on circles of radii r1 < r2 about a common center wind, per
    unit time, at the rate of the outer point, so the expectation reduces to
    a double radial integral of f(max(r1, r2)).
    """
    r = (np.arange(n_quad) + 0.5) / n_quad
    f = profile.f(r)
    # E[f(max)] over the area-uniform radius density 2r dr, times pi^2
    cdf = np.cumsum(2.0 * r) / n_quad  # P(radius <= r)
    integrand = f * 2.0 * r * 2.0 * cdf
    return float(math.pi**2 * np.sum(integrand) / n_quad)
