import numpy as np
import pytest

from ergodisk.errors import DomainError, PreconditionError
from ergodisk.weights import (
    ExpWeight,
    KernelFunction,
    LogWeight,
    StandardAlpha,
    Tabulated,
    associated_weight_bracket,
    check_decreasing,
    check_lusky,
    check_properties,
    check_vanishing,
    kernel_norm,
    nu_tilde_slack,
    require_standing,
    weight_eval,
)

DYADIC = 1 - 2.0 ** -np.arange(0, 12)


def test_weight_eval_examples():
    assert weight_eval(StandardAlpha(1), 0.5) == 0.5
    assert weight_eval(StandardAlpha(2), 0.9) == pytest.approx(0.01, abs=1e-15)
    assert weight_eval(StandardAlpha(1), 0.5j) == 0.5
    table = Tabulated(DYADIC, 1 - DYADIC)
    assert weight_eval(table, 0.75) == pytest.approx(0.25, abs=1e-12)


def test_weight_eval_rejects_boundary():
    with pytest.raises(DomainError):
        weight_eval(StandardAlpha(1), 1.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5])
def test_lusky_standard(alpha):
    c = check_lusky(StandardAlpha(alpha))
    assert c.floor == pytest.approx(2**-alpha, rel=1e-12)
    assert c.passed


def test_lusky_exponential_fails():
    c = check_lusky(ExpWeight(1.0), n_check=4)
    assert c.floor == pytest.approx(np.exp(-(2**4)), rel=1e-9)
    assert not c.passed


def test_constant_tail_table():
    t = Tabulated([0.0, 0.5], [1.0, 1.0], tail="constant")
    assert check_lusky(t).floor == 1.0 and check_lusky(t).passed
    assert not check_vanishing(t)[1]
    with pytest.raises(PreconditionError):
        require_standing(t)


def test_table_zero_tail_and_validation():
    t = Tabulated([0.0, 0.5], [1.0, 0.5])
    assert t(0.75) == pytest.approx(0.25)
    assert check_vanishing(t)[1]
    with pytest.raises(ValueError):
        Tabulated([0.5, 0.2], [1.0, 0.5])
    with pytest.raises(ValueError):
        Tabulated([0.0], [0.0])
    assert not Tabulated([0.0, 0.5], [0.5, 1.0]).is_decreasing()


def test_properties_report():
    props = check_properties(LogWeight(1, 1))
    assert props.ok
    d = props.to_dict()
    assert d["radial"] and d["decreasing"] and d["lusky_pass"]


@pytest.mark.parametrize("nu", [StandardAlpha(1), StandardAlpha(0.3), LogWeight(1, 2), Tabulated(DYADIC, (1 - DYADIC) ** 2)])
def test_monotone_along_radii(nu):
    r = np.linspace(0, 1 - 1e-9, 1000)
    assert np.all(np.diff(nu(r)) <= 1e-15)
    assert check_decreasing(nu)


def test_bracket_examples():
    b = associated_weight_bracket(StandardAlpha(1), 0.0)
    assert b.lower == 1.0 and b.upper == pytest.approx(1.0, abs=1e-12)
    b = associated_weight_bracket(StandardAlpha(1), 0.5)
    assert b.lower == 0.5
    assert b.lower <= b.upper <= 0.75


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_bracket_tightness_alpha(alpha):
    nu = StandardAlpha(alpha)
    for r in 1 - 2.0 ** -np.linspace(0.1, 25, 100):
        b = associated_weight_bracket(nu, r * np.exp(0.3j))
        assert b.lower <= b.upper
        assert b.ratio <= 2**alpha


def test_bracket_witness_attains_upper():
    nu = LogWeight(1, 1)
    z = 0.9 * np.exp(1.1j)
    b = associated_weight_bracket(nu, z)
    assert abs(b.witness(z)) == pytest.approx(1 / b.upper, rel=1e-12)
    # the witness lies in the unit ball of the weighted space
    r = 1 - 2.0 ** -np.linspace(0, 30, 400)
    ray = r * z / abs(z)
    assert np.max(nu(r) * np.abs(b.witness(ray))) <= 1 + 1e-9


def test_kernel_norm_closed_form_matches_numeric():
    nu = StandardAlpha(1)
    t = np.linspace(0, 1, 200001, endpoint=False)
    for s in [0.0, 0.3, 0.5, 0.8, 0.99]:
        numeric = np.max((1 - t) * (1 - s * s) / (1 - s * t) ** 2)
        assert kernel_norm(nu, s, 1.0) == pytest.approx(numeric, rel=1e-6)


def test_kernel_function_constant_case():
    g = KernelFunction(0j, 0.0, 2.0)
    assert np.all(g(np.array([0.1, 0.5j])) == 0.5)


def test_slack():
    assert nu_tilde_slack(StandardAlpha(1.5)) == 2**1.5
    assert 1.0 <= nu_tilde_slack(LogWeight(1, 1)) < 2.0
