"""Empirical bootstrap of period-mean prices and percentile intervals.

The resampling scheme is fixed so that results are reproducible bit-for-bit
and other implementations can match them:

* RNG is numpy's PCG64 (``np.random.default_rng(seed)``); the seed is a
  required argument of every entry point, never ambient state.
* Indices are drawn as one block of ``B * n`` uniform integers in ``[0, n)``;
  replicate ``i`` consumes draws ``[i*n, (i+1)*n)`` of that stream, so
  extending B keeps all earlier replicates identical.
* Replicate means depend only on the drawn indices, which makes the
  distribution equivariant under affine maps of the input: exactly so for
  maps that are exact in float arithmetic (integer shifts of integer-valued
  data, power-of-two scales), to ~1e-12 relative otherwise.
* Interval limits are empirical quantiles with linear interpolation between
  order statistics at fractional index ``q * (B - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientYearsError
from .market_data import SeasonalPanel

DEFAULT_B = 10_000
DEFAULT_LEVEL = 0.95

Seed = int | list[int] | tuple[int, ...]


@dataclass(frozen=True, eq=False)
class ReplicateDistribution:
    """Sorted means of B with-replacement resamples of size n."""

    replicate_means: np.ndarray
    b: int
    n: int
    seed: Seed

    def __post_init__(self) -> None:
        if self.b < 1:
            raise ValueError("B must be >= 1")
        if len(self.replicate_means) != self.b:
            raise ValueError("replicate count does not match B")


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.level <= 1.0:
            raise ValueError("level must be in [0, 1]")
        if self.lower > self.upper:
            raise ValueError("lower exceeds upper")

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class FlapSummary:
    """Per-period summary: mean, sample sd, bootstrap CI, and FLAP index.

    FLAP (fluctuation adjusted price) is mean over sample sd, the inverse
    coefficient of variation; ``math.inf`` when the sd is zero.  Construction
    rejects summaries whose mean falls outside the interval, which is what
    makes mean-over-upper dominance transitive during ranking.
    """

    period_label: str
    n_years: int
    mean: float
    sd: float
    ci: ConfidenceInterval
    flap: float = field(default=math.nan)

    def __post_init__(self) -> None:
        if self.n_years < 2:
            raise ValueError("n_years must be >= 2")
        if not self.ci.lower <= self.mean <= self.ci.upper:
            raise ValueError(
                f"{self.period_label}: mean {self.mean} outside CI "
                f"[{self.ci.lower}, {self.ci.upper}]"
            )
        if math.isnan(self.flap):
            object.__setattr__(self, "flap", math.inf if self.sd == 0 else self.mean / self.sd)


def bootstrap_mean_distribution(values, b: int = DEFAULT_B, seed: Seed = 0) -> ReplicateDistribution:
    """Distribution of means of B index-resampled copies of ``values``.

    Each replicate is the mean of ``n = len(values)`` uniform-with-replacement
    draws; the result depends only on ``(seed, b, n)`` plus the values
    themselves and is returned sorted ascending.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("values must be a nonempty 1-d sequence")
    if b < 1:
        raise ValueError("B must be >= 1")
    n = arr.size

    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=b * n).reshape(b, n)
    means = arr[idx].mean(axis=1)
    means.sort()
    return ReplicateDistribution(replicate_means=means, b=b, n=n, seed=seed)


def _interpolated_quantile(sorted_values: np.ndarray, q: float) -> float:
    """Linear interpolation between order statistics at index q*(len-1)."""
    last = len(sorted_values) - 1
    pos = q * last
    lo = int(math.floor(pos))
    if lo >= last:
        return float(sorted_values[last])
    frac = pos - lo
    return float(sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]))


def percentile_ci(dist: ReplicateDistribution, level: float = DEFAULT_LEVEL) -> ConfidenceInterval:
    """Equal-tailed percentile interval of the replicate means."""
    if not 0.0 <= level <= 1.0:
        raise ValueError("level must be in [0, 1]")
    tail = (1.0 - level) / 2.0
    lower = _interpolated_quantile(dist.replicate_means, tail)
    upper = _interpolated_quantile(dist.replicate_means, 1.0 - tail)
    return ConfidenceInterval(lower=lower, upper=upper, level=level)


def summarize_period(
    label: str,
    values,
    b: int = DEFAULT_B,
    seed: Seed = 0,
    level: float = DEFAULT_LEVEL,
) -> FlapSummary:
    """Mean, sample sd, bootstrap CI, and FLAP for one period's yearly means."""
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise InsufficientYearsError(
            f"insufficient years for period {label!r}: need >= 2, got {arr.size}"
        )
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1))
    ci = percentile_ci(bootstrap_mean_distribution(arr, b=b, seed=seed), level=level)
    return FlapSummary(period_label=label, n_years=int(arr.size), mean=mean, sd=sd, ci=ci)


def summarize_panel(
    panel: SeasonalPanel,
    b: int = DEFAULT_B,
    seed: int = 0,
    level: float = DEFAULT_LEVEL,
) -> list[FlapSummary]:
    """Summaries for every panel period with at least two years of data.

    Each period gets its own RNG substream seeded by ``[seed, calendar
    position]``, so adding or removing other periods never shifts a period's
    interval.  Returned in calendar order; sparse periods (fewer than two
    yearly cells) are skipped.
    """
    summaries = []
    for position, label in enumerate(panel.period_labels(), start=1):
        values = panel.values_for(label)
        if len(values) < 2:
            continue
        summaries.append(summarize_period(label, values, b=b, seed=[seed, position], level=level))
    return summaries
