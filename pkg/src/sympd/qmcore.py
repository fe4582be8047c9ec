"""Quasi-morphism utilities: value records, homogenization, defect estimates."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

from . import flows


@dataclass
class QMValue:
    """A real invariant value with error estimates and provenance.

    ``stderr`` is statistical (0 for deterministic quadrature);
    ``bias_estimate`` is a truncation estimate (homogenization Cauchy gap or
    quadrature convergence gap).
    """

    value: float
    stderr: float = 0.0
    bias_estimate: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.stderr) and self.stderr >= 0.0):
            raise ValueError("stderr must be finite and nonnegative")
        if not (math.isfinite(self.bias_estimate) and self.bias_estimate >= 0.0):
            raise ValueError("bias_estimate must be finite and nonnegative")

    def record(self) -> dict:
        """Flat result record for the CLI's JSON output."""
        return {
            "invariant": self.meta.get("invariant"),
            "scenario": self.meta.get("scenario"),
            "value": self.value,
            "stderr": self.stderr,
            "bias": self.bias_estimate,
            "seed": self.meta.get("seed"),
            "runtime_ms": self.meta.get("runtime_ms"),
        }


@dataclass(frozen=True)
class QMFunctional:
    """A raw (non-homogenized) quasi-morphism on isotopy specs.

    ``fn`` maps an IsotopySpec to a QMValue and must be deterministic given
    its seed; ``id`` names the functional in records.
    """

    id: str
    fn: Callable[[flows.IsotopySpec], QMValue]

    def __call__(self, spec: flows.IsotopySpec) -> QMValue:
        return self.fn(spec)


def homogenize(phi: QMFunctional, alpha: flows.IsotopySpec, k_max: int) -> QMValue:
    """Truncated homogenization phi(alpha^k_max)/k_max.

    ``k_max`` must be a power of two; the bias estimate is the Cauchy
    difference against the half schedule, zero when k_max == 1.  Statistical
    error is propagated from the underlying functional.
    """
    if k_max < 1 or (k_max & (k_max - 1)) != 0:
        raise ValueError("k_max must be a power of two >= 1")
    top = phi(flows.group_op("power", alpha, k_max))
    value = top.value / k_max
    bias = 0.0
    if k_max > 1:
        half = phi(flows.group_op("power", alpha, k_max // 2))
        bias = abs(value - half.value / (k_max // 2))
    meta = dict(top.meta)
    meta.update(
        invariant=phi.id,
        scenario=flows.spec_label(alpha),
        kmax=k_max,
    )
    return QMValue(value, top.stderr / k_max, bias, meta)


def defect_estimate(phi: QMFunctional, pair_count: int, seed: int, family) -> float:
    """Max of |phi(ab) - phi(a) - phi(b)| over sampled spec pairs.

    ``family`` is a callable mapping a seed to an iterable of (a, b) pairs;
    the product a*b is formed with the group compose operation.  The result
    is deterministic given the seed.
    """
    if pair_count < 1:
        raise ValueError("pair_count must be >= 1")
    worst = 0.0
    for a, b in itertools.islice(family(seed), pair_count):
        ab = flows.group_op("compose", a, b)
        d = abs(phi(ab).value - phi(a).value - phi(b).value)
        worst = max(worst, d)
    return worst
