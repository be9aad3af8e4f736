"""Parameter validation and closed-form values of the distribution families."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casualstable import (
    AuthorCitations,
    Bernoulli,
    Example1,
    Example1Thin,
    Example2,
    Example2Thin,
    FieldCitations,
    Gamma,
    Geometric,
    ParameterError,
    Sibuya,
    SvhStable,
    TemperedStable,
    family_fields,
    gfun_eval,
    laplace_eval,
    pgf_eval,
    thinning_eval,
)

Z = np.linspace(0.0, 1.0, 41)


def test_svh_rejects_alpha_above_one():
    with pytest.raises(ParameterError, match="cannot be greater than 1"):
        SvhStable(1.0, 1.5)


@pytest.mark.parametrize(
    "ctor",
    [
        lambda: SvhStable(0.0, 0.5),
        lambda: SvhStable(1.0, 0.0),
        lambda: Example1(1.0, 0.5, 1.0, 1),
        lambda: Example1(1.0, 0.5, -0.1, 1),
        lambda: Example1(1.0, 0.5, 0.3, 0),
        lambda: Example1(1.0, 1.2, 0.3, 1),
        lambda: Example2(1.0, 2.5, 0.0),
        lambda: Example2(1.0, 1.0, 1.0),
        lambda: Example2(1.0, 1.0, -1.0),
        lambda: Geometric(0.0),
        lambda: Sibuya(1.1),
        lambda: AuthorCitations(0.5, 1.2),
        lambda: FieldCitations(-1.0, 0.5, 0.5),
        lambda: Example1Thin(0.0, 2),
        lambda: Example1Thin(1.0, 2),
        lambda: Gamma(0.0, 1.0),
        lambda: Gamma(1.0, -1.0),
        lambda: TemperedStable(1.0, 0.4, 1.0),
        lambda: TemperedStable(1.0, 0.5, 0.0),
    ],
)
def test_invalid_parameters_raise(ctor):
    with pytest.raises(ParameterError):
        ctor()


def test_families_are_frozen():
    fam = SvhStable(1.0, 0.5)
    with pytest.raises(Exception):
        fam.lam = 2.0


def test_family_fields_roundtrip():
    fam = Example1(1.0, 0.7, 0.3, 2)
    assert family_fields(fam) == {"lam": 1.0, "gamma": 0.7, "kappa": 0.3, "m": 2}
    assert Example1(**family_fields(fam)) == fam


def test_svh_pgf_closed_form():
    fam = SvhStable(2.0, 0.5)
    assert np.allclose(fam.pgf(Z), np.exp(-2.0 * (1.0 - Z) ** 0.5), atol=1e-15)
    assert fam.pgf(1.0) == pytest.approx(1.0, abs=1e-15)
    # alpha = 1 is Poisson
    assert SvhStable(3.0, 1.0).pgf(0.25) == pytest.approx(np.exp(-3.0 * 0.75), abs=1e-15)


def test_geometric_and_sibuya_pgf_closed_forms():
    q = 0.4
    z = np.linspace(0.0, 0.999, 30)
    assert np.allclose(Geometric(q).pgf(z), q * z / (1.0 - (1.0 - q) * z), atol=1e-15)
    p = 0.3
    assert np.allclose(Sibuya(p).pgf(z), 1.0 - (1.0 - z) ** p, atol=1e-15)


def test_author_is_sibuya_of_geometric():
    author = AuthorCitations(0.5, 0.4)
    composed = Sibuya(0.5).pgf(Geometric(0.4).pgf(Z))
    assert np.allclose(author.pgf(Z), composed, atol=1e-14)


def test_field_reduces_to_example1():
    field = FieldCitations(2.0, 0.6, 0.3)
    ex1 = field.as_example1()
    assert ex1 == Example1(2.0, 0.6, 0.7, 1)
    assert np.allclose(field.pgf(Z), ex1.pgf(Z), atol=1e-15)


def test_example1_literal_form():
    # exp(-lam W^gamma) with W = (1 - z^m)/(1 - kappa z^m)
    fam = Example1(1.5, 0.7, 0.3, 2)
    w = (1.0 - Z**2) / (1.0 - 0.3 * Z**2)
    assert np.allclose(fam.pgf(Z), np.exp(-1.5 * w**0.7), atol=1e-14)


def test_example2_literal_form():
    fam = Example2(1.0, 1.3, 0.2)
    a = ((1.0 + 0.2) * Z - 2 * 0.2) / (2.0 - (1.0 + 0.2) * Z)
    theta = np.arccos(a)
    assert np.allclose(fam.pgf(Z), np.exp(-1.0 * theta**1.3), atol=1e-13)


def test_bernoulli_thin_literal():
    thin = Bernoulli()
    assert np.allclose(thin.thin(0.3, Z), 1.0 - 0.3 + 0.3 * Z, atol=1e-16)
    thin.check_p(1.0)
    with pytest.raises(ParameterError):
        thin.check_p(0.0)


def test_example1_thin_literal_m1():
    kappa, p = 0.4, 0.35
    thin = Example1Thin(kappa, 1)
    expect = ((1.0 - p) + (p - kappa) * Z) / ((1.0 - p * kappa) - kappa * (1.0 - p) * Z)
    assert np.allclose(thin.thin(p, Z), expect, atol=1e-14)


def test_example1_thin_literal_m2():
    kappa, p, m = 0.6, 0.25, 2
    thin = Example1Thin(kappa, m)
    zm = Z**m
    inner = ((1.0 - p) + (p - kappa) * zm) / ((1.0 - p * kappa) - kappa * (1.0 - p) * zm)
    assert np.allclose(thin.thin(p, Z), inner ** (1.0 / m), atol=1e-14)
    # m > 1 restricts p to (0, kappa)
    thin.check_p(0.5)
    with pytest.raises(ParameterError):
        thin.check_p(0.7)


def test_example2_thin_literal():
    b, p = 0.2, 0.45
    thin = Example2Thin(b)

    def a_map(z):
        return ((1.0 + b) * z - 2.0 * b) / (2.0 - (1.0 + b) * z)

    def a_inv(w):
        return 2.0 * (w + b) / ((1.0 + b) * (1.0 + w))

    expect = a_inv(np.cos(p * np.arccos(a_map(Z))))
    assert np.allclose(thin.thin(p, Z), expect, atol=1e-13)


def test_thin_at_p_one_is_identity():
    for thin in [Bernoulli(), Example1Thin(0.5, 1), Example2Thin(-0.3)]:
        assert np.allclose(thin.thin(1.0, Z), Z, atol=1e-14)


def test_thin_fixes_z_one():
    for thin in [Bernoulli(), Example1Thin(0.5, 1), Example1Thin(0.5, 2), Example2Thin(0.3)]:
        p = 0.3
        assert thin.thin(p, 1.0) == pytest.approx(1.0, abs=1e-15)
        assert thin.complement_map(p, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_gamma_laplace_closed_form():
    # (1 + b s)^(-shape), frozen 17-digit values
    fam = Gamma(0.5, 2.0)
    assert fam.laplace(0.1) == pytest.approx(0.90702947845804989, abs=5e-16)
    assert fam.laplace(1.0) == pytest.approx(0.44444444444444444, abs=5e-16)
    assert fam.laplace(10.0) == pytest.approx(0.027777777777777778, abs=5e-17)


def test_tempered_stable_laplace_closed_form():
    # exp(-lam^a (1 + tan(pi a/2)) ((s+h)^a - h^a)), frozen values
    fam = TemperedStable(1.0, 0.5, 2.0)
    assert fam.laplace(0.1) == pytest.approx(0.93253534519166686, abs=1e-15)
    assert fam.laplace(1.0) == pytest.approx(0.52957817243915898, abs=1e-15)
    assert fam.laplace(10.0) == pytest.approx(0.016576386347562713, abs=1e-16)


def test_tempered_stable_requires_integer_reciprocal_alpha():
    TemperedStable(1.0, 1.0 / 3.0, 1.0)
    with pytest.raises(ParameterError, match="1/alpha"):
        TemperedStable(1.0, 0.4, 1.0)


def test_gfun_telescopes():
    # g_n for the tempered stable family composes: applying the n-fold
    # root twice equals the (n*m)-fold root
    fam = TemperedStable(1.0, 0.5, 1.0)
    s = np.logspace(-2, 2, 25)
    twice = fam.neg_log_gfun(3, fam.neg_log_gfun(5, s))
    assert np.allclose(twice, fam.neg_log_gfun(15, s), rtol=1e-13)


def test_gfun_validity_necessary_conditions():
    # g_n(0) = 1, decreasing, convex and log-convex on the s-grid
    s = np.linspace(0.0, 8.0, 401)
    for fam, n in [(Gamma(1.0, 2.0), 7), (TemperedStable(1.0, 0.5, 1.0), 4)]:
        g = np.exp(-fam.neg_log_gfun(n, s))
        assert g[0] == pytest.approx(1.0, abs=1e-14)
        assert np.all(np.diff(g) < 0)
        assert np.all(np.diff(g, 2) > -1e-12)
        assert np.all(np.diff(np.log(g), 2) > -1e-12)


def test_eval_dispatchers_reject_wrong_kind():
    with pytest.raises(ParameterError):
        pgf_eval(Gamma(1.0, 1.0), 0.5)
    with pytest.raises(ParameterError):
        laplace_eval(SvhStable(1.0, 0.5), 0.5)
    with pytest.raises(ParameterError):
        thinning_eval(SvhStable(1.0, 0.5), 0.5, 0.5)
    assert pgf_eval(SvhStable(1.0, 1.0), 0.5) == pytest.approx(np.exp(-0.5))
    assert laplace_eval(Gamma(1.0, 1.0), 1.0) == pytest.approx(0.5)
    assert thinning_eval(Bernoulli(), 0.25, 0.0) == pytest.approx(0.75)
    # -log g_2(3) = sqrt(1 + 3) - 1 = 1 for b = 1
    assert gfun_eval(Gamma(1.0, 1.0), 2, 3.0) == pytest.approx(np.exp(-1.0))


@given(
    p=st.floats(0.01, 1.0),
    kappa=st.floats(0.0, 0.95),
    u=st.floats(0.0, 1.0),
)
@settings(max_examples=200, deadline=None)
def test_thinned_complement_shrinks(p, kappa, u):
    # thinning pulls the p.g.f. argument toward 1: 0 <= 1-Q(z) <= 1-z
    cm = Example1Thin(kappa, 1).complement_map(p, u)
    assert -1e-15 <= cm <= u + 1e-12


@given(p=st.floats(0.01, 1.0), b=st.floats(-0.9, 0.9), u=st.floats(0.0, 1.0))
@settings(max_examples=200, deadline=None)
def test_example2_complement_shrinks(p, b, u):
    cm = Example2Thin(b).complement_map(p, u)
    assert -1e-12 <= cm <= u + 1e-12


@given(z=st.floats(0.0, 1.0), p=st.floats(0.01, 1.0))
@settings(max_examples=200, deadline=None)
def test_complement_form_matches_literal_example1(z, p):
    kappa = 0.3
    thin = Example1Thin(kappa, 1)
    literal = ((1.0 - p) + (p - kappa) * z) / ((1.0 - p * kappa) - kappa * (1.0 - p) * z)
    assert thin.thin(p, z) == pytest.approx(literal, abs=1e-12)
