"""Coefficient extraction against independently computed series oracles.

The frozen arrays below are Taylor coefficients of the respective
generating functions computed with mpmath at 60 decimal digits
(mp.taylor of the closed-form expression); they are written out to 17
significant digits, the full double precision.
"""

import numpy as np
import pytest
from scipy.special import gammaln

from casualstable import (
    Example1,
    Example2,
    FieldCitations,
    Geometric,
    ParameterError,
    PmfTable,
    PrecisionError,
    Sibuya,
    SvhStable,
    extract_pmf,
    radial_norm_defect,
    validate_pgf,
)

# mpmath taylor(exp(-lam*(1-z)**alpha), 0, ...) at dps=60
SVH_1_05 = [0.36787944117144232, 0.18393972058572116, 0.09196986029286058,
            0.053649085170835339, 0.035446716987873349, 0.025483315456146786,
            0.019407875900342367, 0.015400731751793686]
SVH_2_08 = [0.13533528323661269, 0.21653645317858031, 0.19488280786072228,
            0.13569617732524366, 0.085026647281455867, 0.052523082082996439,
            0.033655731606216745, 0.022803600991540991]
# mpmath taylor(exp(-lam*((1-z**m)/(1-kappa*z**m))**gamma), 0, ...)
EX1_07_03_M1 = [0.36787944117144232, 0.18026092617400674, 0.11716960201310438,
                0.076307454398226619, 0.050674868946445611, 0.034678924481414787,
                0.024583184707007109]
EX1_05_04_M2 = [0.36787944117144232, 0.0, 0.1103638323514327, 0.0,
                0.077254682646002888, 0.0, 0.055733735337473512, 0.0,
                0.041455414527006907]
# mpmath taylor(exp(-lam*acos(((1+b)z-2b)/(2-(1+b)z))**gamma), 0, ...)
EX2_1_02 = [0.16996644435107651, 0.08326621241105795, 0.066192390148211053,
            0.05449306243259941, 0.045578745329216269, 0.038548369841838457,
            0.032914049954266774]
EX2_2_M05 = [0.33399718598613179, 0.30290194179883182, 0.18831459316717003,
             0.09756591732607084, 0.04519344098263782, 0.01937601161533845,
             0.0078445641607233588]
EX2_05_0 = [0.28555685229871412, 0.056960350920152051, 0.038693909236809445,
            0.028830465738485844, 0.022628864120554569, 0.018416709492765271,
            0.01540594040423078]
# mpmath taylor(exp(-lam*((1-z)/(1-(1-q)z))**p), 0, ...)
FIELD_1_05_05 = [0.36787944117144232, 0.09196986029286058, 0.068977395219645435,
                 0.052691065792784708, 0.041015204622792642, 0.03253074550593174,
                 0.026274554637784175]


@pytest.mark.parametrize(
    "family,oracle",
    [
        (SvhStable(1.0, 0.5), SVH_1_05),
        (SvhStable(2.0, 0.8), SVH_2_08),
        (Example1(1.0, 0.7, 0.3, 1), EX1_07_03_M1),
        (Example1(1.0, 0.5, 0.4, 2), EX1_05_04_M2),
        (Example2(1.0, 1.0, 0.2), EX2_1_02),
        (Example2(1.0, 2.0, -0.5), EX2_2_M05),
        (Example2(1.0, 0.5, 0.0), EX2_05_0),
        (FieldCitations(1.0, 0.5, 0.5), FIELD_1_05_05),
    ],
)
def test_extraction_matches_series_oracle(family, oracle):
    table = extract_pmf(family, len(oracle) - 1)
    assert np.max(np.abs(table.masses - np.array(oracle))) < 1e-13


def test_sibuya_pmf_closed_form():
    # p (1-p)_{k-1}/k! = exp(log p + gammaln(k-p) - gammaln(1-p) - gammaln(k+1))
    p = 0.3
    table = extract_pmf(Sibuya(p), 12)
    k = np.arange(1, 13)
    pmf = np.exp(np.log(p) + gammaln(k - p) - gammaln(1 - p) - gammaln(k + 1))
    assert table.masses[0] == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(table.masses[1:], pmf, atol=1e-12)


def test_sibuya_pmf_frozen_values():
    # k = 1..8 at p = 1/2: 1/2, 1/8, 1/16, 5/128, ...
    table = extract_pmf(Sibuya(0.5), 8)
    frozen = [0.5, 0.125, 0.0625, 0.0390625, 0.02734375, 0.0205078125,
              0.01611328125, 0.013092041015625]
    assert np.allclose(table.masses[1:], frozen, atol=1e-12)


def test_geometric_pmf_closed_form():
    q = 0.35
    table = extract_pmf(Geometric(q), 10)
    k = np.arange(1, 11)
    assert np.allclose(table.masses[1:], q * (1 - q) ** (k - 1), atol=1e-12)
    assert table.mass_deficit == pytest.approx((1 - q) ** 10, abs=1e-10)


def test_poisson_special_case():
    lam = 3.0
    table = extract_pmf(SvhStable(lam, 1.0), 15)
    k = np.arange(16)
    pmf = np.exp(-lam + k * np.log(lam) - gammaln(k + 1))
    assert np.allclose(table.masses, pmf, atol=1e-12)


def test_table_helpers():
    table = extract_pmf(Geometric(0.5), 4)
    assert table.ks.tolist() == [0, 1, 2, 3, 4]
    assert table.atoms[1] == (1, pytest.approx(0.5, abs=1e-12))
    assert table.min_mass == pytest.approx(0.0, abs=1e-12)
    assert table.argmin_atom == 0
    assert table.support_step == 1
    assert extract_pmf(Example1(1.0, 0.5, 0.4, 2), 8).support_step == 2


def test_pmf_table_validation():
    with pytest.raises(ParameterError):
        PmfTable(ks=[0, 1], masses=[0.5], mass_deficit=0.0)
    with pytest.raises(ParameterError):
        PmfTable(ks=[0], masses=[1.0], mass_deficit=1.5)


def test_extract_pmf_argument_validation():
    with pytest.raises(ParameterError):
        extract_pmf(Geometric(0.5), 0)
    with pytest.raises(ParameterError):
        extract_pmf(Geometric(0.5), 10, radius=1.0)
    with pytest.raises(ParameterError):
        extract_pmf(object(), 10)


def test_precision_request():
    # requesting more than the certificate can give raises, the default
    # request-free call returns the table with the bound recorded
    with pytest.raises(PrecisionError):
        extract_pmf(Geometric(0.5), 400, tol=1e-12)
    table = extract_pmf(Geometric(0.5), 400)
    assert table.tol_neg > 1e-9


def test_extraction_invariant_under_settings():
    # deeper tables and a different radius reproduce the shared
    # coefficients; the noise floor at depth 50 is ~1e-13
    base = extract_pmf(FieldCitations(1.0, 0.5, 0.5), 50)
    deeper = extract_pmf(FieldCitations(1.0, 0.5, 0.5), 200)
    assert np.max(np.abs(base.masses - deeper.masses[:51])) < 1e-10
    smaller = extract_pmf(FieldCitations(1.0, 0.5, 0.5), 50, radius=0.8)
    assert np.max(np.abs(base.masses - smaller.masses)) < 1e-9


def test_thinning_pgf_table_is_clean():
    from casualstable import Example1Thin

    thin = Example1Thin(0.5, 1)
    table = extract_pmf(lambda z: thin.thin(0.3, z), 50)
    assert table.min_mass >= -1e-9
    assert table.masses.sum() + table.mass_deficit == pytest.approx(1.0, abs=1e-9)


def test_mass_accounting():
    for fam in [Geometric(0.25), Sibuya(0.5), SvhStable(1.0, 0.5)]:
        table = extract_pmf(fam, 60)
        assert table.masses.sum() + table.mass_deficit == pytest.approx(1.0, abs=1e-9)


def test_validate_pgf_accepts_true_pgf():
    report = validate_pgf(FieldCitations(1.0, 0.5, 0.5), n_max=200)
    assert report.sup_residual == 0.0
    report = validate_pgf(SvhStable(1.0, 0.3), n_max=200)
    assert report.sup_residual < 1e-8


def test_validate_pgf_flags_negative_coefficient():
    # exp(-(1-z)^2) = e^{-1} sum H_k(1) z^k / k! with Hermite H_3(1) = -4
    # and H_4(1) = -20; the most negative coefficient is -20 e^{-1}/24
    report = validate_pgf(lambda z: np.exp(-((1.0 - z) ** 2)), n_max=50)
    assert report.sup_residual == pytest.approx(20.0 * np.exp(-1.0) / 24.0, abs=1e-9)
    assert report.argmax_point == 4


def test_radial_norm_defect():
    assert radial_norm_defect(Geometric(0.5)) < 1e-5
    # a defective "pgf" that does not reach 1 at z = 1
    assert radial_norm_defect(lambda z: 0.9 * Geometric(0.5).pgf(z)) > 0.09
