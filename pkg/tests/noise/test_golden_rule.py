# coding=utf-8

import pytest

from tpst.noise import fit_exponent, golden_rule_numeric, golden_rule_rate, matrix_element
from tpst.utils.errors import PreconditionError


def test_matrix_element_is_antisymmetric():
    assert matrix_element(1.0, 1.0, 0.2, 0.3, 0.5) == pytest.approx(-matrix_element(1.0, 1.0, 0.3, 0.2, 0.5))
    assert matrix_element(1.0, 1.0, 0.25, 0.25, 0.5) == 0.0


def test_rate_is_homogeneous():
    assert golden_rule_rate(1.0, 1.0, 0.2) / golden_rule_rate(1.0, 1.0, 0.1) == pytest.approx(8192, rel=1e-4)


def test_rate_scales_with_coupling_and_velocity():
    base = golden_rule_rate(1.0, 1.0, 0.3)
    assert golden_rule_rate(2.0, 1.0, 0.3) == pytest.approx(4 * base, rel=1e-6)
    assert golden_rule_rate(1.0, 2.0, 0.3) == pytest.approx(base / 2, rel=1e-6)


def test_numeric_exponent():
    result = golden_rule_numeric(1.0, 1.0, 0.1, points=5)
    assert result.exponent == pytest.approx(13.0, abs=0.5)
    assert len(result.rows()) == 5
    assert result.to_dict()["label"] == "scaling estimate"


def test_zero_interaction():
    assert golden_rule_rate(0.0, 1.0, 0.5) == 0.0


def test_invalid_inputs():
    with pytest.raises(PreconditionError):
        golden_rule_rate(1.0, 1.0, 0.0)
    with pytest.raises(PreconditionError):
        golden_rule_rate(1.0, 0.0, 0.5)
    with pytest.raises(PreconditionError):
        fit_exponent([1.0], [1.0])
