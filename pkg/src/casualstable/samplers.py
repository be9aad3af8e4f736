"""Exact, seed-deterministic samplers for the integer and positive laws.

All randomness flows through a counter-based Philox generator keyed by
an explicit ``Seed(value, stream_id)`` pair, so parallel simulations
are reproducible independent of scheduling: one stream per logical
task, never a shared global state.

Two Sibuya samplers are provided.  ``sample_sibuya`` runs the
generative mechanism itself (a paper with k-1 citations stops being
cited with probability p/k), which is exact but heavy-tailed in running
time, so it carries a hard iteration cap.  ``sibuya_rvs`` draws whole
arrays by inverting the survival function (cumulative-product table for
the bulk, bisection on the log-survival for the tail) and is used
wherever millions of draws are needed; the two agree in distribution
and are cross-checked against each other in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import (
    IterationCapError,
    ParameterError,
    TableError,
    UnsupportedError,
)
from .extraction import PmfTable
from .families import TemperedStable

__all__ = [
    "Seed",
    "make_rng",
    "sample_geometric",
    "sample_sibuya",
    "sample_poisson",
    "thin_bernoulli",
    "thin_general",
    "sample_discrete_stable_svh",
    "sample_discrete_stable_ex1",
    "sample_inverse_gaussian",
    "geometric_rvs",
    "sibuya_rvs",
    "svh_rvs",
    "ex1_rvs",
    "inverse_gaussian_rvs",
    "SIBUYA_ITERATION_CAP",
]

SIBUYA_ITERATION_CAP = 10 ** 9
# array sampler cap: largest value the int64 pipeline handles safely
SIBUYA_VALUE_CAP = 2 ** 61
_SIBUYA_TABLE_SIZE = 8192
_SIBUYA_BLOCK = 1 << 16
_MAX_TABLE_DEFICIT = 1e-6


@dataclass(frozen=True)
class Seed:
    """Explicit (value, stream) address for a reproducible random stream."""

    value: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name in ("value", "stream_id"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= int(v) < 2 ** 64:
                raise ParameterError(f"{name} must be a 64-bit unsigned integer")
            object.__setattr__(self, name, int(v))

    def with_stream(self, stream_id: int) -> "Seed":
        return Seed(self.value, stream_id)


def make_rng(seed: Seed | int) -> np.random.Generator:
    """Philox generator keyed by (value, stream_id)."""
    if isinstance(seed, int):
        seed = Seed(seed)
    return np.random.Generator(np.random.Philox(key=[seed.value, seed.stream_id]))


def _check_prob(name: str, value: float, *, closed_top: bool = True) -> None:
    top_ok = value <= 1 if closed_top else value < 1
    if not (0 < value and top_ok):
        interval = "(0, 1]" if closed_top else "(0, 1)"
        raise ParameterError(f"{name} must lie in {interval}")


# ---------------------------------------------------------------------------
# scalar sampling operations
# ---------------------------------------------------------------------------


def sample_geometric(q: float, rng: np.random.Generator) -> int:
    """One draw with P(k) = q(1-q)^(k-1), k >= 1."""
    _check_prob("q", q)
    return int(rng.geometric(q))


def sample_sibuya(p: float, rng: np.random.Generator, *, cap: int = SIBUYA_ITERATION_CAP) -> int:
    """One draw from the sequential citation mechanism.

    Start at k = 1; stop with probability p/k, else advance.  The
    resulting law is P(k) = p (1-p)_(k-1)/k! with survival ~ k^(-p).
    Running time is proportional to the value drawn, so the loop stops
    with an ``IterationCapError`` after ``cap`` steps; the error keeps
    runaway tail draws (probability ~ cap^(-p)) from hanging callers.
    """
    _check_prob("p", p)
    if p == 1.0:
        return 1
    k = 1
    block = 64  # most draws stop within a few steps; grow 64x on escape
    while k <= cap:
        # vectorize the stop trials in blocks; acceptance at step k has
        # probability p/k, checked against one uniform per step
        block = min(block, cap - k + 1)
        steps = np.arange(k, k + block, dtype=float)
        hits = rng.random(block) < (p / steps)
        if hits.any():
            return int(k + np.argmax(hits))
        k += block
        block = min(block * 64, _SIBUYA_BLOCK)
    raise IterationCapError(
        f"sibuya draw exceeded the iteration cap {cap}; the tail event has "
        f"probability ~ cap^(-p) = {cap ** -p:.2e}"
    )


def sample_poisson(lam: float, rng: np.random.Generator) -> int:
    if lam <= 0:
        raise ParameterError("lam must be positive")
    return int(rng.poisson(lam))


def thin_bernoulli(x: int, p: float, rng: np.random.Generator) -> int:
    """Binomial(x, p): each of x particles survives independently."""
    if x < 0:
        raise ParameterError("x must be nonnegative")
    _check_prob("p", p)
    return int(rng.binomial(x, p))


def thin_general(x: int, law: PmfTable, rng: np.random.Generator) -> int:
    """Sum of x independent draws from a tabulated normalizer law.

    A multinomial split of the x draws over the table's atoms (memory
    O(atoms), independent of x, so heavy-tailed counts are safe); the
    residual ``mass_deficit`` is assigned to the largest tabulated atom,
    and ``law.overflow_hits`` counts how often that bucket was used.
    """
    if x < 0:
        raise ParameterError("x must be nonnegative")
    if law.mass_deficit > _MAX_TABLE_DEFICIT:
        raise TableError(
            f"mass_deficit {law.mass_deficit:.3e} exceeds {_MAX_TABLE_DEFICIT:.0e}; "
            "rebuild the table with a larger n_max before sampling"
        )
    if x == 0:
        return 0
    probs = np.clip(law.masses, 0.0, None)  # certified noise only
    pvals = np.append(probs, law.mass_deficit)
    counts = rng.multinomial(x, pvals / pvals.sum())
    if counts[-1]:
        law.overflow_hits += int(counts[-1])
    total = law.ks @ counts[:-1] + law.ks[-1] * counts[-1]
    return int(total)


def sample_discrete_stable_svh(lam: float, alpha: float, rng: np.random.Generator) -> int:
    """One draw with p.g.f. exp{-lam (1-z)^alpha}.

    Compound Poisson construction: N ~ Poisson(lam) many Sibuya(alpha)
    summands, exact because 1 - (1-z)^alpha is the Sibuya p.g.f.
    """
    return int(svh_rvs(lam, alpha, rng, 1)[0])


def sample_discrete_stable_ex1(
    lam: float, gamma: float, kappa: float, m: int, rng: np.random.Generator
) -> int:
    """One draw with p.g.f. exp{-lam ((1-z^m)/(1-kappa z^m))^gamma}.

    Compound Poisson over Sibuya(gamma) many Geometric(1-kappa) draws,
    all scaled by m: 1 - ((1-w)/(1-kappa w))^gamma is the Sibuya(gamma)
    compound of Geometric(1-kappa) at w = z^m.
    """
    return int(ex1_rvs(lam, gamma, kappa, m, rng, 1)[0])


def sample_inverse_gaussian(family: TemperedStable, rng: np.random.Generator) -> float:
    """One exact inverse Gaussian draw for the alpha = 1/2 family."""
    return float(inverse_gaussian_rvs(family, rng, 1)[0])


# ---------------------------------------------------------------------------
# array samplers
# ---------------------------------------------------------------------------


def geometric_rvs(q: float, rng: np.random.Generator, size: int) -> np.ndarray:
    _check_prob("q", q)
    return rng.geometric(q, size).astype(np.int64)


def _sibuya_log_survival(k, p: float):
    # log P(X > k) = log [ Gamma(k+1-p) / (Gamma(1-p) Gamma(k+1)) ]; the
    # direct gammaln difference cancels catastrophically once gammaln(k)
    # outgrows the ~18-digit mantissa, so switch to the Stirling ratio
    # log Gamma(z+p) - log Gamma(z) = p log z + p(p-1)/(2z) - p/(12 z^2)
    # + O(z^-3) (z = k+1-p), which is exact to ~1e-18 for k >= 1e6
    k = np.asarray(k, dtype=float)
    z = k + 1.0 - p
    with np.errstate(invalid="ignore"):
        exact = gammaln(z) - gammaln(k + 1.0)
    asymptotic = -(p * np.log(z) + p * (p - 1.0) / (2.0 * z) - p / (12.0 * z * z))
    return np.where(k < 1e6, exact, asymptotic) - gammaln(1.0 - p)


def sibuya_rvs(p: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Array of Sibuya(p) draws by exact inversion of the survival function.

    The survival values S(k) = prod_{j<=k} (1 - p/j) are tabulated for
    k <= 8192 and inverted with a binary search; draws falling beyond
    the table are resolved by bisection on the closed-form log-survival
    (log-gamma ratios), so the law is exact over the whole int64 range.
    Draws beyond 2^61 (probability ~ 2^(-61 p)) raise
    ``IterationCapError`` rather than silently overflowing.
    """
    _check_prob("p", p)
    if size < 0:
        raise ParameterError("size must be nonnegative")
    if p == 1.0:
        return np.ones(size, dtype=np.int64)
    u = rng.random(size)
    steps = np.arange(1, _SIBUYA_TABLE_SIZE + 1, dtype=float)
    survival = np.concatenate([[1.0], np.cumprod(1.0 - p / steps)])
    # S is decreasing: X = min{k : S(k) < u}; search on -S keeps it sorted
    draws = np.searchsorted(-survival, -u, side="right").astype(np.float64)
    in_tail = draws > _SIBUYA_TABLE_SIZE
    if in_tail.any():
        u_tail = u[in_tail]
        log_u = np.log(u_tail)
        lo = np.full(u_tail.shape, float(_SIBUYA_TABLE_SIZE))
        # S(k) ~ k^(-p)/Gamma(1-p): start the upper bracket at twice the
        # asymptotic quantile and widen geometrically if needed
        hi = np.minimum(
            np.maximum(2.0 * (u_tail * np.exp(gammaln(1.0 - p))) ** (-1.0 / p), 4.0 * _SIBUYA_TABLE_SIZE),
            float(SIBUYA_VALUE_CAP),
        )
        for _ in range(8):
            short = _sibuya_log_survival(hi, p) >= log_u
            if not short.any():
                break
            hi[short] = np.minimum(hi[short] * 16.0, float(SIBUYA_VALUE_CAP))
        if (_sibuya_log_survival(hi, p) >= log_u).any():
            raise IterationCapError(
                f"sibuya draw exceeded the array sampler value cap 2^61 "
                f"(tail probability ~ {float(SIBUYA_VALUE_CAP) ** -p:.2e})"
            )
        for _ in range(64):
            mid = np.floor(0.5 * (lo + hi))
            above = _sibuya_log_survival(mid, p) >= log_u
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
            if np.all(hi - lo <= 1.0):
                break
        draws[in_tail] = hi
    return draws.astype(np.int64)


def _segment_sums(values: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Sum consecutive runs of ``values`` with run lengths ``counts``."""
    boundaries = np.zeros(len(counts) + 1, dtype=np.int64)
    np.cumsum(counts, out=boundaries[1:])
    prefix = np.concatenate([[0], np.cumsum(values)])
    return prefix[boundaries[1:]] - prefix[boundaries[:-1]]


def svh_rvs(lam: float, alpha: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Array sampler for exp{-lam (1-z)^alpha}."""
    if lam <= 0:
        raise ParameterError("lam must be positive")
    _check_prob("alpha", alpha)
    counts = rng.poisson(lam, size)
    summands = sibuya_rvs(alpha, rng, int(counts.sum()))
    return _segment_sums(summands, counts)


def ex1_rvs(
    lam: float, gamma: float, kappa: float, m: int, rng: np.random.Generator, size: int
) -> np.ndarray:
    """Array sampler for exp{-lam ((1-z^m)/(1-kappa z^m))^gamma}."""
    if lam <= 0:
        raise ParameterError("lam must be positive")
    _check_prob("gamma", gamma)
    if not 0 <= kappa < 1:
        raise ParameterError("kappa must lie in [0, 1)")
    if int(m) != m or m < 1:
        raise ParameterError("m must be a positive integer")
    counts = rng.poisson(lam, size)
    papers = sibuya_rvs(gamma, rng, int(counts.sum()))
    if kappa > 0:
        # sum of k Geometric(1-kappa) draws = k + NegativeBinomial(k, 1-kappa)
        papers = papers + rng.negative_binomial(papers, 1.0 - kappa)
    return int(m) * _segment_sums(papers, counts)


def inverse_gaussian_rvs(family: TemperedStable, rng: np.random.Generator, size: int) -> np.ndarray:
    """Array of exact inverse Gaussian draws for the alpha = 1/2 family.

    Matching exp{-2 sqrt(lam) (sqrt(s+h) - sqrt(h))} to the standard
    inverse Gaussian transform exp{(l/mu)(1 - sqrt(1 + 2 mu^2 s/l))}
    forces mean mu = sqrt(lam/h) and shape l = 2 lam; the identity is
    re-derived in the tests against the family's ``laplace``.
    """
    if not isinstance(family, TemperedStable):
        raise ParameterError("family must be TemperedStable")
    if abs(family.alpha - 0.5) > 1e-12:
        raise UnsupportedError(
            "exact inverse Gaussian sampling requires alpha = 1/2; "
            f"got alpha = {family.alpha}"
        )
    mean = np.sqrt(family.lam / family.h)
    shape = 2.0 * family.lam
    return rng.wald(mean, shape, size)
