"""Configuration-space averages of braid quasi-morphisms (Monte Carlo).

``gamma_hat`` integrates a braid quasi-morphism of the extracted braid over
the ordered n-point configuration space of the disk (volume pi^n under the
product area form); ``gamma_tilde`` is its homogenization.  Sampling is
deterministic given the seed, with per-sample child seeds, so values are
bit-identical across runs and the homogenization schedule reuses the same
configurations at every power.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import flows
from .braidqm import braid_qm
from .braids import braid_from_loop, check_configuration
from .errors import CollisionDetected, ExcessiveRejection
from .qmcore import QMFunctional, QMValue, homogenize

MAX_REJECT_FRACTION = 0.10


def _draw_configuration(seed: int, counter: int, n: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, counter)))
    r = np.sqrt(rng.random(n))
    th = 2.0 * math.pi * rng.random(n)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


def gamma_hat(
    qm_id: str, n: int, spec: flows.IsotopySpec, samples: int, seed: int
) -> QMValue:
    """Monte Carlo integral of the braid quasi-morphism over configurations.

    Configurations violating the separation floor (or colliding along the
    loop) are rejected and redrawn; more than 10% rejections raises
    ``ExcessiveRejection``.  Value = sample mean x pi^n; stderr is the
    standard error of the mean scaled by the same volume (exactly zero when
    the integrand is constant over the sample).
    """
    if not 2 <= n <= 8:
        raise ValueError("strand count must be between 2 and 8")
    if samples < 16:
        raise ValueError("need at least 16 samples")
    qm = braid_qm(qm_id)
    t0 = time.perf_counter()
    vals = np.empty(samples)
    accepted = 0
    counter = 0
    rejected = 0
    while accepted < samples:
        cfg = _draw_configuration(seed, counter, n)
        counter += 1
        try:
            word = braid_from_loop(spec, check_configuration(cfg))
        except CollisionDetected:
            rejected += 1
            if rejected > MAX_REJECT_FRACTION * counter and counter >= 32:
                raise ExcessiveRejection(
                    f"{rejected}/{counter} draws rejected; separation floor too large for n={n}"
                ) from None
            continue
        vals[accepted] = qm(word)
        accepted += 1

    vol = math.pi**n
    value = vol * float(np.mean(vals))
    sd = float(np.std(vals, ddof=1)) if samples > 1 else 0.0
    stderr = vol * sd / math.sqrt(samples)
    ms = 1000.0 * (time.perf_counter() - t0)
    meta = dict(
        invariant=f"gg({qm_id},{n})",
        scenario=flows.spec_label(spec),
        seed=seed,
        samples=samples,
        rejected=rejected,
        runtime_ms=ms,
    )
    return QMValue(value, stderr, 0.0, meta)


def gg_functional(qm_id: str, n: int, samples: int, seed: int) -> QMFunctional:
    return QMFunctional(
        f"gg({qm_id},{n})", lambda s: gamma_hat(qm_id, n, s, samples, seed)
    )


def gamma_tilde(
    qm_id: str,
    n: int,
    spec: flows.IsotopySpec,
    samples: int,
    seed: int,
    k_max: int = 4,
) -> QMValue:
    """Homogenized configuration-space average (same seed at every power)."""
    return homogenize(gg_functional(qm_id, n, samples, seed), spec, k_max)
