"""Residual certification of the stability identities.

Discrete stability: P(z) = P(Q_p(z))^n with the normalizing thinning
parameter p = p(n).  Casual stability: L(s) = L(-log g_n(s))^n.  Both
are checked as sup-norm residuals over dense grids; when the identity
holds the residual sits at rounding level (1e-14 or below), and a 1%
perturbation of p(n) lifts it above 1e-4, so the checks cannot pass
vacuously.

Residuals are evaluated entirely in the complement domain u = 1 - z
(see ``families``): the thinning complement 1 - Q_p(z) feeds the
family's complement kernel directly, which keeps the comparison
meaningful near z = 1 where literal composition loses every digit.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .extraction import ResidualReport
from .families import (
    Bernoulli,
    Example1,
    Example1Thin,
    Example2,
    Example2Thin,
    FieldCitations,
    LAPLACE_FAMILIES,
    PGF_FAMILIES,
    SvhStable,
    THINNING_FAMILIES,
)

__all__ = [
    "default_z_grid",
    "default_s_grid",
    "discrete_stability_residual",
    "casual_stability_residual",
    "commutativity_residual",
    "compose_thinning",
    "solve_pn",
]

Z_GRID_POINTS = 2001
Z_GRID_TOP = 1.0 - 1e-6
S_GRID_POINTS = 200
S_GRID_DECADES = (-3.0, 3.0)
GOLDEN_TOL = 1e-10
GOLDEN_MAX_ITER = 200


def default_z_grid() -> np.ndarray:
    """Uniform grid on [0, 1 - 1e-6]: dense approach to the branch point."""
    return np.linspace(0.0, Z_GRID_TOP, Z_GRID_POINTS)


def default_s_grid() -> np.ndarray:
    """Log-spaced transform grid on [1e-3, 1e3]."""
    return np.logspace(S_GRID_DECADES[0], S_GRID_DECADES[1], S_GRID_POINTS)


def _sup_report(residuals: np.ndarray, grid: np.ndarray, spec: str) -> ResidualReport:
    worst = int(np.argmax(residuals))
    return ResidualReport(
        sup_residual=float(residuals[worst]),
        argmax_point=float(grid[worst]),
        grid_spec=spec,
    )


def discrete_stability_residual(family, thinning, n: int, p: float, z_grid=None) -> ResidualReport:
    """sup_z |P(z) - P(Q_p(z))^n| over the grid, in complement form."""
    if not isinstance(family, PGF_FAMILIES):
        raise ParameterError(f"not a p.g.f. family: {family!r}")
    if not isinstance(thinning, THINNING_FAMILIES):
        raise ParameterError(f"not a thinning family: {thinning!r}")
    if int(n) != n or n < 1:
        raise ParameterError("n must be an integer >= 1")
    z = default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    if z.size == 0:
        raise ParameterError("z grid must be nonempty")
    u = 1.0 - z
    thinned_u = thinning.complement_map(p, u)
    lhs = family.pgf_from_complement(u)
    rhs = family.pgf_from_complement(thinned_u) ** n
    return _sup_report(
        np.abs(lhs - rhs),
        z,
        f"z grid {z.size} points on [{z.min():g}, {z.max():g}], "
        f"complement-form evaluation, n={n}, p={p!r}",
    )


def casual_stability_residual(family, n: int, s_grid=None) -> ResidualReport:
    """sup_s |L(s) - L(-log g_n(s))^n| over the grid, in log space."""
    if not isinstance(family, LAPLACE_FAMILIES):
        raise ParameterError(f"not a Laplace family: {family!r}")
    if int(n) != n or n < 1:
        raise ParameterError("n must be an integer >= 1")
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    if s.size == 0:
        raise ParameterError("s grid must be nonempty")
    lhs = np.exp(family.log_laplace(s))
    rhs = np.exp(n * family.log_laplace(family.neg_log_gfun(n, s)))
    return _sup_report(
        np.abs(lhs - rhs),
        s,
        f"s grid {s.size} log points on [{s.min():g}, {s.max():g}], "
        f"log-space evaluation, n={n}",
    )


def commutativity_residual(thinning, p1: float, p2: float, z_grid=None) -> ResidualReport:
    """sup_z |Q_p1(Q_p2(z)) - Q_p2(Q_p1(z))|: semigroup commutativity."""
    if not isinstance(thinning, THINNING_FAMILIES):
        raise ParameterError(f"not a thinning family: {thinning!r}")
    z = default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    if z.size == 0:
        raise ParameterError("z grid must be nonempty")
    u = 1.0 - z
    forward = thinning.complement_map(p1, thinning.complement_map(p2, u))
    backward = thinning.complement_map(p2, thinning.complement_map(p1, u))
    return _sup_report(
        np.abs(forward - backward),
        z,
        f"z grid {z.size} points, complement-form composition, "
        f"p1={p1!r}, p2={p2!r}",
    )


def _golden_section(objective, lo: float, hi: float) -> float:
    """Golden-section minimizer; ties resolved toward the smaller argument."""
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = objective(x1), objective(x2)
    for _ in range(GOLDEN_MAX_ITER):
        if b - a <= GOLDEN_TOL:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = objective(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = objective(x2)
    best = a if objective(a) <= objective(0.5 * (a + b)) else 0.5 * (a + b)
    return float(best)


def _admissible_interval(thinning) -> tuple[float, float]:
    if isinstance(thinning, Example1Thin) and thinning.m > 1:
        return (0.0, thinning.kappa)
    return (0.0, 1.0)


def compose_thinning(thinning, p1: float, p2: float, z_grid=None) -> tuple[float, float]:
    """Empirical composition law: fit Q_p1 o Q_p2 by a single Q_p_eff.

    Returns (p_eff, fit_residual); non-closure shows up as a residual
    above tolerance rather than an error.  For all three families the
    semigroup gives p_eff = p1 p2, which the fit recovers numerically.
    """
    if not isinstance(thinning, THINNING_FAMILIES):
        raise ParameterError(f"not a thinning family: {thinning!r}")
    z = default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    u = 1.0 - z
    target = thinning.complement_map(p1, thinning.complement_map(p2, u))

    def objective(p: float) -> float:
        return float(np.abs(thinning.complement_map(p, u) - target).max())

    lo, hi = _admissible_interval(thinning)
    pad = 1e-9 * (hi - lo)
    p_eff = _golden_section(objective, lo + pad, hi - pad)
    return p_eff, objective(p_eff)


def _matched_exponent(family, thinning) -> float | None:
    """Stability exponent when (family, thinning) form a matched pair."""
    if isinstance(family, SvhStable) and isinstance(thinning, Bernoulli):
        return family.alpha
    if isinstance(family, Example1) and isinstance(thinning, Example1Thin):
        if family.kappa == thinning.kappa and family.m == thinning.m:
            return family.gamma
    if isinstance(family, FieldCitations) and isinstance(thinning, Example1Thin):
        if thinning.kappa == 1.0 - family.q and thinning.m == 1:
            return family.p
    if isinstance(family, Example2) and isinstance(thinning, Example2Thin):
        if family.b == thinning.b:
            return family.gamma
    # SvhStable is Example1/Example1Thin with kappa = 0, m = 1
    if isinstance(family, SvhStable) and isinstance(thinning, Example1Thin):
        if thinning.kappa == 0.0 and thinning.m == 1:
            return family.alpha
    return None


def solve_pn(family, thinning, n: int) -> float:
    """Normalizing thinning parameter p(n) for n-fold stability.

    Matched (family, thinning) pairs admit the closed form
    p(n) = n^(-1/exponent) (exponent alpha, gamma or p as appropriate);
    the residual checker certifies the choice.  Unmatched pairs fall
    back to a golden-section search minimizing the stability residual
    over the admissible interval.  Raises when p(n) lands outside the
    thinning family's domain (m > 1 needs n^(-1/gamma) < kappa).
    """
    if int(n) != n or n < 1:
        raise ParameterError("n must be an integer >= 1")
    if n == 1:
        return 1.0
    exponent = _matched_exponent(family, thinning)
    if exponent is not None:
        p = float(n) ** (-1.0 / exponent)
        thinning.check_p(p)  # admissibility: raises outside the domain
        return p
    z = default_z_grid()

    def objective(p: float) -> float:
        return discrete_stability_residual(family, thinning, n, p, z).sup_residual

    lo, hi = _admissible_interval(thinning)
    pad = 1e-9 * (hi - lo)
    return _golden_section(objective, lo + pad, hi - pad)
