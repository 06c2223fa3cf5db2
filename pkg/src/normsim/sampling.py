"""Action populations and fixed-bin histograms.

Two action distributions: a truncated-at-zero normal (redrawn, not
clamped, so the stated moments survive) and a power-law with density
C * a**(-k) whose lower cutoff is fixed by the requested median.  For the
reference setting k = 2, median 0.5, the cutoff is 0.25 and the density
constant is 1/4.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AgentPopulation",
    "Histogram",
    "sample_normal_actions",
    "sample_powerlaw_actions",
    "powerlaw_quantile",
    "powerlaw_min",
    "histogram",
]

# resolves values sitting on a decimal bin boundary (e.g. 0.5 / 0.025) into
# the upper bin despite float rounding of the quotient
_BIN_EPS = 1e-9


@dataclass
class AgentPopulation:
    """Per-agent positive action values plus how they were drawn."""

    actions: np.ndarray
    distribution: str
    seed: int

    def __post_init__(self):
        self.actions = np.asarray(self.actions, dtype=float)
        if self.actions.ndim != 1 or self.actions.size == 0:
            raise ValueError("actions must be a non-empty 1-D array")
        if np.any(self.actions <= 0):
            raise ValueError("all actions must be > 0")

    @property
    def n(self) -> int:
        return self.actions.size


def sample_normal_actions(n: int, mu: float, sigma: float, seed: int) -> AgentPopulation:
    """n draws from Normal(mu, sigma), redrawing any draw <= 0."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    if mu <= 0:
        raise ValueError(f"mu must be > 0, got {mu}")
    rng = np.random.default_rng(seed)
    a = rng.normal(mu, sigma, size=n)
    bad = a <= 0
    while np.any(bad):
        a[bad] = rng.normal(mu, sigma, size=int(bad.sum()))
        bad = a <= 0
    return AgentPopulation(a, "normal", seed)


def powerlaw_min(k: float, median: float) -> float:
    """Lower cutoff implied by exponent k and the requested median.

    Normalizing C * a**(-k) on [a_min, inf) forces C = (k-1) * a_min**(k-1),
    and the median then sits at a_min * 2**(1/(k-1)).
    """
    if k < 2:
        raise ValueError(f"power-law exponent k must be >= 2, got {k}")
    if median <= 0:
        raise ValueError(f"median must be > 0, got {median}")
    return median * 2.0 ** (-1.0 / (k - 1.0))


def powerlaw_quantile(u, k: float, median: float, a_max: float | None = None):
    """Inverse CDF of the power-law action distribution at u in [0, 1).

    With the default unbounded support this is a_min * (1-u)**(-1/(k-1));
    for k = 2 that reduces to a_min / (1-u).  Passing a_max rescales u onto
    the truncated support [a_min, a_max].
    """
    a_min = powerlaw_min(k, median)
    u = np.asarray(u, dtype=float)
    if np.any(u < 0) or np.any(u >= 1):
        raise ValueError("quantile levels must lie in [0, 1)")
    if a_max is not None:
        if a_max <= a_min:
            raise ValueError(f"a_max must exceed the lower cutoff {a_min}")
        u = u * (1.0 - (a_min / a_max) ** (k - 1.0))
    a = a_min * (1.0 - u) ** (-1.0 / (k - 1.0))
    return float(a) if np.ndim(a) == 0 else a


def sample_powerlaw_actions(
    n: int, k: float, median: float, seed: int, a_max: float | None = None
) -> AgentPopulation:
    """n inverse-CDF draws from the power-law action distribution.

    a_max, when given, truncates the upper tail (the draw is still exact for
    the truncated law, not a clamp).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    u = rng.random(size=n)
    a = powerlaw_quantile(u, k, median, a_max=a_max)
    return AgentPopulation(np.asarray(a, dtype=float), "powerlaw", seed)


@dataclass
class Histogram:
    """Fixed-width bins anchored at `origin`; bin k covers
    [origin + k*bin_width, origin + (k+1)*bin_width).  Bin indices may be
    negative, so value histograms can cover losses."""

    bin_width: float
    origin: float
    counts: dict = field(default_factory=dict)

    def bin_edges(self, index: int) -> tuple:
        lo = self.origin + index * self.bin_width
        return (lo, lo + self.bin_width)

    def total(self) -> int:
        return sum(self.counts.values())

    def rows(self):
        """(bin_lower, bin_upper, count) sorted by bin, for CSV output."""
        return [(*self.bin_edges(k), self.counts[k]) for k in sorted(self.counts)]

    def modal_bin(self) -> tuple:
        """Edges of the fullest bin (ties broken toward the lower bin)."""
        if not self.counts:
            raise ValueError("empty histogram has no modal bin")
        best = min(sorted(self.counts), key=lambda k: (-self.counts[k], k))
        return self.bin_edges(best)


def histogram(values, bin_width: float = 0.025, origin: float = 0.0) -> Histogram:
    """Bin values into fixed-width bins indexed by floor((v-origin)/width)."""
    if bin_width <= 0:
        raise ValueError(f"bin_width must be > 0, got {bin_width}")
    values = np.asarray(values, dtype=float)
    h = Histogram(bin_width, origin)
    if values.size == 0:
        return h
    idx = np.floor((values - origin) / bin_width + _BIN_EPS).astype(np.int64)
    uniq, cnt = np.unique(idx, return_counts=True)
    h.counts = {int(k): int(c) for k, c in zip(uniq, cnt)}
    return h
