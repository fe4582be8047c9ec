"""Quasi-morphisms on braid groups: exponent sum, linking numbers, and the
link-signature quasi-morphism via Seifert matrices of braid closures.

The Seifert matrix is taken on the Bennequin surface of the closure (one
disk per strand, one half-twisted band per letter) with one basis loop per
consecutive pair of same-index letters.  Entries follow the combinatorial
rules below; every entry is independently checked against explicit
piecewise-linear Gauss linking integrals in the test suite
(see :mod:`sympd.oracles`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .braids import BraidWord, braid_op
from .errors import NotPure


def writhe(b: BraidWord) -> int:
    """Exponent sum; the abelianization homomorphism to the integers."""
    return sum(s for _, s in b.letters)


def linking(b: BraidWord, i: int, j: int) -> int:
    """Linking number of strands i < j of a pure braid: half the signed
    count of crossings between them, tracking strand identity letter by
    letter."""
    if not b.is_pure():
        raise NotPure("linking numbers need a pure braid")
    if not 1 <= i < j <= b.strands:
        raise ValueError(f"need 1 <= i < j <= {b.strands}")
    pos2strand = list(range(1, b.strands + 1))
    total = 0
    for idx, s in b.letters:
        a, c = pos2strand[idx - 1], pos2strand[idx]
        if {a, c} == {i, j}:
            total += s
        pos2strand[idx - 1], pos2strand[idx] = c, a
    if total % 2:
        raise AssertionError("odd signed crossing count on a pure braid")
    return total // 2


def linking_matrix(b: BraidWord) -> np.ndarray:
    n = b.strands
    out = np.zeros((n, n), dtype=int)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out[i - 1, j - 1] = out[j - 1, i - 1] = linking(b, i, j)
    return out


# ---------------------------------------------------------------------------
# Seifert matrix of the Bennequin surface


@dataclass(frozen=True)
class SeifertData:
    """Seifert matrix of the braid closure with its basis size."""

    matrix: np.ndarray  # integer, (basis_size, basis_size)
    basis_size: int


def seifert_matrix(b: BraidWord) -> SeifertData:
    """Seifert matrix on the standard basis (one loop per consecutive pair
    of same-index letters, ordered by index then position).

    Rules (verified entry-wise against the PL Gauss-linking oracle):

    * self-linking of a loop with band signs (e, e') is -(e + e')/2;
    * consecutive same-index loops sharing a band of sign e contribute
      V[next, prev] = 1 when e = +1 and V[prev, next] = -1 when e = -1;
    * loops of adjacent index with interleaved position intervals
      [a1, a2] (index i) and [b1, b2] (index i+1) contribute
      V[B, A] = -1 when a1 < b1 < a2 < b2 and V[B, A] = +1 when
      b1 < a1 < b2 < a2, independently of the letter signs;
    * all other pairs are unlinked.
    """
    occ: dict = {}
    for pos, (idx, sign) in enumerate(b.letters):
        occ.setdefault(idx, []).append((pos, sign))

    loops = []  # (index, p, q, sp, sq)
    for idx in sorted(occ):
        entries = occ[idx]
        for k in range(len(entries) - 1):
            (p, sp), (q, sq) = entries[k], entries[k + 1]
            loops.append((idx, p, q, sp, sq))

    n = len(loops)
    v = np.zeros((n, n), dtype=int)
    for a, (ia, pa, qa, spa, sqa) in enumerate(loops):
        v[a, a] = -(spa + sqa) // 2
        for bb in range(a + 1, n):
            ib, pb, qb, spb, _ = loops[bb]
            if ib == ia:
                if pb == qa:  # consecutive, shared band sign = spb
                    if spb == 1:
                        v[bb, a] = 1
                    else:
                        v[a, bb] = -1
            elif ib == ia + 1:
                if pa < pb < qa < qb:
                    v[bb, a] = -1
                elif pb < pa < qb < qa:
                    v[bb, a] = 1
    return SeifertData(v, n)


def signature_of_symmetric(mat) -> int:
    """Exact signature of a symmetric rational matrix.

    Symmetric elimination over the rationals: nonzero diagonal entries are
    used as pivots; a zero diagonal with a nonzero off-diagonal entry is a
    hyperbolic pair (contributing +1 -1) eliminated by its 2x2 block.  No
    floating point, so zero eigenvalues cannot be misclassified.
    """
    m = [[Fraction(x) for x in row] for row in np.asarray(mat).tolist()]
    active = list(range(len(m)))
    sig = 0
    while active:
        piv = max(active, key=lambda i: abs(m[i][i]))
        if m[piv][piv] != 0:
            d = m[piv][piv]
            sig += 1 if d > 0 else -1
            rest = [i for i in active if i != piv]
            col = {i: m[i][piv] for i in rest}
            for a in rest:
                if col[a] == 0:
                    continue
                f = col[a] / d
                for bb in rest:
                    m[a][bb] -= f * col[bb]
            active = rest
            continue
        pair = None
        for i in active:
            for j in active:
                if i < j and m[i][j] != 0:
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            break  # remaining block is zero
        i, j = pair
        c = m[i][j]
        rest = [k for k in active if k not in (i, j)]
        rowi = {k: m[i][k] for k in rest}
        rowj = {k: m[j][k] for k in rest}
        for a in rest:
            for bb in rest:
                m[a][bb] -= (rowi[a] * rowj[bb] + rowj[a] * rowi[bb]) / c
        active = rest
    return sig


def signature_qm(b: BraidWord) -> int:
    """Signature of the symmetrized Seifert matrix of the braid closure."""
    sd = seifert_matrix(b)
    if sd.basis_size == 0:
        return 0
    return signature_of_symmetric(sd.matrix + sd.matrix.T)


# ---------------------------------------------------------------------------
# registry and homogenization

BRAID_QMS = {
    "writhe": writhe,
    "signature": signature_qm,
    "linking": lambda b: linking(b, 1, 2),
}


def braid_qm(qm_id: str):
    try:
        return BRAID_QMS[qm_id]
    except KeyError:
        raise ValueError(f"unknown braid quasi-morphism {qm_id!r}") from None


def homogenize_braid_qm(qm_id: str, b: BraidWord, k_max: int, with_bias: bool = False):
    """qm(b^k_max)/k_max, optionally with the Cauchy bias estimate."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    qm = braid_qm(qm_id)
    value = qm(braid_op("power", b, k_max)) / k_max
    if not with_bias:
        return value
    bias = 0.0
    if k_max >= 2:
        half = k_max // 2
        bias = abs(value - qm(braid_op("power", b, half)) / half)
    return value, bias
