"""Transform-domain definitions of the stable families.

Every distribution handled by this package is specified through a
transform: a probability generating function (p.g.f.) for the integer
families, a Laplace transform for the positive continuous ones.

P.g.f. families
    SvhStable        P(z) = exp{-lam (1-z)^alpha}
    Example1         P(z) = exp{-lam ((1-z^m)/(1-kappa z^m))^gamma}
    Example2         P(z) = exp{-lam arccos(A(z))^gamma},
                     A(z) = ((1+b)z - 2b)/(2 - (1+b)z)
    Geometric        P(z) = q z/(1-(1-q)z), support {1, 2, ...}
    Sibuya           P(z) = 1 - (1-z)^p, support {1, 2, ...}
    AuthorCitations  Sibuya p.g.f. composed with the Geometric one
    FieldCitations   P(z) = exp{-lam ((1-z)/(1-(1-q)z))^p}

Thinning (normalizer) families, each a p.g.f. Q_p(z) indexed by a
thinning parameter p
    Bernoulli        Q_p(z) = 1 - p + p z
    Example1Thin     Q_p(z) = (((1-p)+(p-kappa)z^m)/((1-p kappa)-kappa(1-p)z^m))^(1/m)
    Example2Thin     Q_p = A^(-1) o T_p o A with T_p(x) = cos(p arccos x)

Laplace families with their casual normalizers g_n
    Gamma            L(s) = (1+bs)^(-gamma),  g_n(s) = exp{(1/b)(1-(1+bs)^(1/n))}
    TemperedStable   L(s) = exp{-lam^alpha (1+tan(pi alpha/2))((s+h)^alpha - h^alpha)},
                     g_n(s) = exp{h - ((s+h)^alpha/n + (n-1)h^alpha/n)^(1/alpha)}

Numerical form
    The discrete stability identity P(z) = P(Q_p(z))^n is tightest near
    the branch point z = 1, where forming 1 - Q_p(z) from a computed
    Q_p(z) ~ 1 loses all significant digits.  Every p.g.f. kernel here
    is therefore written as a function of the complement u = 1 - z, and
    every thinning family exposes ``complement_map`` taking u directly
    to 1 - Q_p(z) without ever forming Q_p(z).  The subtraction 1 - z
    itself is exact in floating point for real z in [0, 1], so chaining
    kernels through complements loses nothing.  Laplace transforms and
    the g_n normalizers are evaluated through their logarithms with
    ``log1p``/``expm1`` so that large-s tails do not underflow.

    All fractional powers, logarithms and inverse trigonometric
    functions use principal branches.  Complex arguments are supported
    everywhere (needed for coefficient extraction on circles inside the
    unit disk); the Example2 kernel uses the principal-branch identity
    arccos(1-d) = 2 arcsin(sqrt(d/2)), which is stable for small d and
    agrees with the direct arccos to machine precision on the disk.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = [
    "SvhStable",
    "Example1",
    "Example2",
    "Geometric",
    "Sibuya",
    "AuthorCitations",
    "FieldCitations",
    "Bernoulli",
    "Example1Thin",
    "Example2Thin",
    "Gamma",
    "TemperedStable",
    "pgf_eval",
    "thinning_eval",
    "laplace_eval",
    "gfun_eval",
]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


def _coerce_float(obj, *fields: str) -> None:
    # frozen dataclasses: normalize numeric fields to float on construction
    for name in fields:
        object.__setattr__(obj, name, float(getattr(obj, name)))


def _complement(z):
    """Return u = 1 - z as a floating array; exact for real z in [0, 1]."""
    z = np.asarray(z)
    return np.asarray(1.0 - z, dtype=np.result_type(z, np.float64))


def _geometric_sum(w, m: int):
    """sum_{j=0}^{m-1} w^j by Horner's rule (no cancellation for w ~ 1)."""
    total = np.ones_like(w)
    for _ in range(m - 1):
        total = 1.0 + w * total
    return total


def _one_minus_zm(u, m: int):
    """1 - z^m written as u * (1 + z + ... + z^(m-1)) with z = 1 - u."""
    if m == 1:
        return u
    return u * _geometric_sum(1.0 - u, m)


# ---------------------------------------------------------------------------
# p.g.f. families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SvhStable:
    """Discrete stable law in the Steutel-van Harn sense.

    P(z) = exp{-lam (1-z)^alpha} with lam > 0 and alpha in (0, 1].
    Under Bernoulli thinning with p(n) = n^(-1/alpha) the law solves
    P(z) = P(1-p+pz)^n for every n.
    """

    lam: float
    alpha: float

    def __post_init__(self) -> None:
        _coerce_float(self, "lam", "alpha")
        _require(self.lam > 0, "lam must be positive")
        _require(
            0 < self.alpha <= 1,
            "alpha must lie in (0, 1]: the exponent of a discrete stable "
            "p.g.f. cannot be greater than 1",
        )

    def pgf_from_complement(self, u):
        return np.exp(-self.lam * np.power(u, self.alpha))

    def pgf(self, z):
        return self.pgf_from_complement(_complement(z))


@dataclass(frozen=True)
class Example1:
    """Discrete stable family for the Moebius thinning semigroup.

    P(z) = exp{-lam W(z)^gamma} with W(z) = (1-z^m)/(1-kappa z^m).
    kappa = 0, m = 1 reduces to ``SvhStable`` with alpha = gamma.
    """

    lam: float
    gamma: float
    kappa: float
    m: int = 1

    def __post_init__(self) -> None:
        _coerce_float(self, "lam", "gamma", "kappa")
        object.__setattr__(self, "m", int(self.m))
        _require(self.lam > 0, "lam must be positive")
        _require(
            0 < self.gamma <= 1,
            "gamma must lie in (0, 1]: W ~ 1 - z near z = 1, so a larger "
            "exponent cannot give a p.g.f.",
        )
        _require(0 <= self.kappa < 1, "kappa must lie in [0, 1)")
        _require(self.m >= 1, "m must be a positive integer")

    def w_from_complement(self, u):
        # W = v/((1-kappa) + kappa v) with v = 1 - z^m; denominator equals
        # 1 - kappa z^m, rewritten so that v -> 0 stays fully significant
        v = _one_minus_zm(u, self.m)
        return v / ((1.0 - self.kappa) + self.kappa * v)

    def pgf_from_complement(self, u):
        return np.exp(-self.lam * np.power(self.w_from_complement(u), self.gamma))

    def pgf(self, z):
        return self.pgf_from_complement(_complement(z))


def _arccos_from_complement(d):
    """Principal arccos(1 - d) via 2 arcsin(sqrt(d/2)); stable for d ~ 0."""
    return 2.0 * np.arcsin(np.sqrt(0.5 * d))


@dataclass(frozen=True)
class Example2:
    """Discrete stable family for the Chebyshev thinning semigroup.

    P(z) = exp{-lam theta(z)^gamma} where theta(z) = arccos A(z) and
    A(z) = ((1+b)z - 2b)/(2 - (1+b)z); gamma in (0, 2], b in (-1, 1).
    """

    lam: float
    gamma: float
    b: float

    def __post_init__(self) -> None:
        _coerce_float(self, "lam", "gamma", "b")
        _require(self.lam > 0, "lam must be positive")
        _require(0 < self.gamma <= 2, "gamma must lie in (0, 2]")
        _require(-1 < self.b < 1, "b must lie in (-1, 1)")

    def theta_from_complement(self, u):
        # 1 - A(z) = 2(1+b)u / ((1-b) + (1+b)u); the denominator is
        # 2 - (1+b)z and never vanishes on the closed unit disk
        d = 2.0 * (1.0 + self.b) * u / ((1.0 - self.b) + (1.0 + self.b) * u)
        return _arccos_from_complement(d)

    def pgf_from_complement(self, u):
        theta = self.theta_from_complement(u)
        return np.exp(-self.lam * np.power(theta, self.gamma))

    def pgf(self, z):
        return self.pgf_from_complement(_complement(z))


@dataclass(frozen=True)
class Geometric:
    """Number of publications: P(k) = q(1-q)^(k-1) on {1, 2, ...}."""

    q: float

    def __post_init__(self) -> None:
        _coerce_float(self, "q")
        _require(0 < self.q <= 1, "q must lie in (0, 1]")

    def pgf_from_complement(self, u):
        # q z / (1 - (1-q) z) with both parts rewritten in u = 1 - z
        return self.q * (1.0 - u) / (self.q + (1.0 - self.q) * u)

    def pgf(self, z):
        return self.pgf_from_complement(_complement(z))


@dataclass(frozen=True)
class Sibuya:
    """Citations of a single paper: P(z) = 1 - (1-z)^p on {1, 2, ...}.

    P(k) = p (1-p)_(k-1) / k! where (x)_j is the rising factorial; the
    survival function decays like k^(-p), so the mean is infinite for
    p < 1.
    """

    p: float

    def __post_init__(self) -> None:
        _coerce_float(self, "p")
        _require(0 < self.p <= 1, "p must lie in (0, 1]")

    def pgf_from_complement(self, u):
        return 1.0 - np.power(u, self.p)

    def pgf(self, z):
        return self.pgf_from_complement(_complement(z))


@dataclass(frozen=True)
class AuthorCitations:
    """Citations of one author: Sibuya(p) many papers... composed law.

    P(z) = 1 - (1 - G(z))^p where G is the ``Geometric`` p.g.f.; the
    composition order follows the displayed transform (Sibuya outside),
    which is the one consistent with the field-level stable form.
    """

    p: float
    q: float

    def __post_init__(self) -> None:
        _coerce_float(self, "p", "q")
        _require(0 < self.p <= 1, "p must lie in (0, 1]")
        _require(0 < self.q <= 1, "q must lie in (0, 1]")

    def pgf_from_complement(self, u):
        # 1 - G(z) = u / (q + (1-q) u)
        g_c = u / (self.q + (1.0 - self.q) * u)
        return 1.0 - np.power(g_c, self.p)

    def pgf(self, z):
        return self.pgf_from_complement(_complement(z))


@dataclass(frozen=True)
class FieldCitations:
    """Total citations of a field with Poisson(lam) many authors.

    P(z) = exp{-lam ((1-z)/(1-(1-q)z))^p}; identical to ``Example1``
    with gamma = p, kappa = 1 - q, m = 1, hence discrete stable.
    """

    lam: float
    p: float
    q: float

    def __post_init__(self) -> None:
        _coerce_float(self, "lam", "p", "q")
        _require(self.lam > 0, "lam must be positive")
        _require(0 < self.p <= 1, "p must lie in (0, 1]")
        _require(0 < self.q <= 1, "q must lie in (0, 1]")

    def as_example1(self) -> Example1:
        return Example1(lam=self.lam, gamma=self.p, kappa=1.0 - self.q, m=1)

    def pgf_from_complement(self, u):
        g_c = u / (self.q + (1.0 - self.q) * u)
        return np.exp(-self.lam * np.power(g_c, self.p))

    def pgf(self, z):
        return self.pgf_from_complement(_complement(z))


# ---------------------------------------------------------------------------
# thinning families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bernoulli:
    """Classical binomial thinning: Q_p(z) = 1 - p + p z."""

    def check_p(self, p: float) -> None:
        _require(0 < p <= 1, "thinning parameter p must lie in (0, 1]")

    def complement_map(self, p: float, u):
        self.check_p(p)
        return p * u

    def thin(self, p: float, z):
        return 1.0 - self.complement_map(p, _complement(z))


@dataclass(frozen=True)
class Example1Thin:
    """Moebius normalizer family.

    Q_p(z) = (((1-p)+(p-kappa)z^m) / ((1-p kappa)-kappa(1-p)z^m))^(1/m).
    Admissible parameters: m = 1 needs 0 <= kappa < 1 and 0 < p <= 1;
    m > 1 needs 0 < p < kappa < 1.

    The kernel uses the exact semigroup relation
    W(Q_p(z)) = p W(z), W(z) = (1-z^m)/(1-kappa z^m),
    solved for 1 - Q_p(z)^m:
    1 - Q_p^m = (1-kappa) p v / ((1-kappa) + kappa (1-p) v), v = 1 - z^m.
    """

    kappa: float
    m: int = 1

    def __post_init__(self) -> None:
        _coerce_float(self, "kappa")
        object.__setattr__(self, "m", int(self.m))
        _require(self.m >= 1, "m must be a positive integer")
        if self.m == 1:
            _require(0 <= self.kappa < 1, "kappa must lie in [0, 1) when m = 1")
        else:
            _require(
                0 < self.kappa < 1,
                "kappa must lie in (0, 1) when m > 1 (admissibility needs p < kappa)",
            )

    def check_p(self, p: float) -> None:
        if self.m == 1:
            _require(0 < p <= 1, "thinning parameter p must lie in (0, 1] when m = 1")
        else:
            _require(
                0 < p < self.kappa,
                f"thinning parameter p must lie in (0, kappa) = (0, {self.kappa}) "
                "when m > 1",
            )

    def complement_map(self, p: float, u):
        self.check_p(p)
        v = _one_minus_zm(u, self.m)
        cm = (1.0 - self.kappa) * p * v / (
            (1.0 - self.kappa) + self.kappa * (1.0 - p) * v
        )
        if self.m == 1:
            return cm
        # 1 - Q = (1 - Q^m) / sum_{j<m} Q^j, with Q = (1 - cm)^(1/m)
        root = np.power(1.0 - cm, 1.0 / self.m)
        return cm / _geometric_sum(root, self.m)

    def thin(self, p: float, z):
        return 1.0 - self.complement_map(p, _complement(z))


@dataclass(frozen=True)
class Example2Thin:
    """Chebyshev normalizer family: Q_p = A^(-1) o T_p o A.

    A(z) = ((1+b)z - 2b)/(2 - (1+b)z), T_p(x) = cos(p arccos x).
    A conjugates Q_p to T_p on [-1, 1], so compositions multiply the
    parameters: Q_p1 o Q_p2 = Q_(p1 p2).
    """

    b: float

    def __post_init__(self) -> None:
        _coerce_float(self, "b")
        _require(-1 < self.b < 1, "b must lie in (-1, 1)")

    def check_p(self, p: float) -> None:
        _require(0 < p <= 1, "thinning parameter p must lie in (0, 1]")

    def complement_map(self, p: float, u):
        self.check_p(p)
        d = 2.0 * (1.0 + self.b) * u / ((1.0 - self.b) + (1.0 + self.b) * u)
        theta = _arccos_from_complement(d)
        # 1 - T_p(A(z)) = 2 sin^2(p theta / 2), then pull back through
        # 1 - A^(-1)(w) = (1-b)(1-w) / ((1+b)(1+w))
        one_minus_t = 2.0 * np.square(np.sin(0.5 * p * theta))
        return (1.0 - self.b) * one_minus_t / (
            (1.0 + self.b) * (2.0 - one_minus_t)
        )

    def thin(self, p: float, z):
        return 1.0 - self.complement_map(p, _complement(z))


# ---------------------------------------------------------------------------
# Laplace families
# ---------------------------------------------------------------------------


def _check_s(s) -> None:
    s = np.asarray(s)
    if s.size and np.min(s) < 0:
        raise ParameterError("s must be nonnegative")


@dataclass(frozen=True)
class Gamma:
    """Gamma law: L(s) = (1 + b s)^(-gamma_shape).

    Casual normalizer g_n(s) = exp{(1/b)(1 - (1+bs)^(1/n))} makes the
    stability identity L(s) = L(-log g_n(s))^n exact for every n.
    """

    b: float
    gamma_shape: float

    def __post_init__(self) -> None:
        _coerce_float(self, "b", "gamma_shape")
        _require(self.b > 0, "b must be positive")
        _require(self.gamma_shape > 0, "gamma_shape must be positive")

    def log_laplace(self, s):
        _check_s(s)
        return -self.gamma_shape * np.log1p(self.b * np.asarray(s, dtype=float))

    def laplace(self, s):
        return np.exp(self.log_laplace(s))

    def neg_log_gfun(self, n: int, s):
        """-log g_n(s) = ((1+bs)^(1/n) - 1)/b, evaluated in log space."""
        _check_n(n)
        _check_s(s)
        s = np.asarray(s, dtype=float)
        return np.expm1(np.log1p(self.b * s) / n) / self.b

    def gfun(self, n: int, s):
        return np.exp(-self.neg_log_gfun(n, s))


def _check_n(n: int) -> None:
    _require(int(n) == n and n >= 1, "n must be an integer >= 1")


@dataclass(frozen=True)
class TemperedStable:
    """Tempered positive stable law with tempering parameter h.

    L(s) = exp{-lam^alpha (1+tan(pi alpha/2)) ((s+h)^alpha - h^alpha)}
    with alpha in (0, 1) and 1/alpha a positive integer.  The casual
    normalizer g_n(s) = exp{h - ((s+h)^alpha/n + (n-1)h^alpha/n)^(1/alpha)}
    telescopes the exponent exactly, so the stability identity holds to
    machine precision.  alpha = 1/2 is the inverse Gaussian law.
    """

    lam: float
    alpha: float
    h: float

    def __post_init__(self) -> None:
        _coerce_float(self, "lam", "alpha", "h")
        _require(self.lam > 0, "lam must be positive")
        _require(0 < self.alpha < 1, "alpha must lie in (0, 1)")
        inv = 1.0 / self.alpha
        _require(
            abs(inv - round(inv)) < 1e-9,
            "1/alpha must be a positive integer for the normalizer family",
        )
        _require(self.h > 0, "h must be positive")

    @property
    def tempering_coefficient(self) -> float:
        return self.lam ** self.alpha * (1.0 + math.tan(math.pi * self.alpha / 2.0))

    def log_laplace(self, s):
        _check_s(s)
        s = np.asarray(s, dtype=float)
        # (s+h)^alpha - h^alpha = h^alpha expm1(alpha log1p(s/h))
        increment = self.h ** self.alpha * np.expm1(self.alpha * np.log1p(s / self.h))
        return -self.tempering_coefficient * increment

    def laplace(self, s):
        return np.exp(self.log_laplace(s))

    def neg_log_gfun(self, n: int, s):
        """-log g_n(s) = ((s+h)^alpha/n + (n-1)h^alpha/n)^(1/alpha) - h."""
        _check_n(n)
        _check_s(s)
        s = np.asarray(s, dtype=float)
        d = np.expm1(self.alpha * np.log1p(s / self.h)) / n
        return self.h * np.expm1(np.log1p(d) / self.alpha)

    def gfun(self, n: int, s):
        return np.exp(-self.neg_log_gfun(n, s))


# ---------------------------------------------------------------------------
# functional front end
# ---------------------------------------------------------------------------

PGF_FAMILIES = (
    SvhStable,
    Example1,
    Example2,
    Geometric,
    Sibuya,
    AuthorCitations,
    FieldCitations,
)
THINNING_FAMILIES = (Bernoulli, Example1Thin, Example2Thin)
LAPLACE_FAMILIES = (Gamma, TemperedStable)


def pgf_eval(family, z):
    """Evaluate the family's p.g.f. at z (scalar or array, real or complex).

    Arguments must stay in the closed unit disk; the families with a
    branch point at z = 1 (SvhStable, Sibuya, Example2, ...) are defined
    there only as radial limits and should be approached, not hit.
    """
    _require(isinstance(family, PGF_FAMILIES), f"not a p.g.f. family: {family!r}")
    return family.pgf(z)


def thinning_eval(family, p: float, z):
    """Evaluate the normalizer Q_p(z) for an admissible thinning parameter."""
    _require(isinstance(family, THINNING_FAMILIES), f"not a thinning family: {family!r}")
    return family.thin(p, z)


def laplace_eval(family, s):
    """Evaluate the family's Laplace transform at s >= 0."""
    _require(isinstance(family, LAPLACE_FAMILIES), f"not a Laplace family: {family!r}")
    return family.laplace(s)


def gfun_eval(family, n: int, s):
    """Evaluate the casual normalizer g_n(s); g_1(s) = exp(-s)."""
    _require(isinstance(family, LAPLACE_FAMILIES), f"not a Laplace family: {family!r}")
    return family.gfun(n, s)


def family_fields(family) -> dict:
    """Parameter dict of any family dataclass (for reports and CSV)."""
    return dataclasses.asdict(family)
