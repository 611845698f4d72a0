import numpy as np
import pytest

from qmit.resources import (
    FtOverheadReport,
    ModularSystem,
    cnot_volume,
    ft_report,
    modular_scale,
    t_volume,
)


def test_golden_values_at_1e9():
    # literal evaluation of the fits: 1610 + 45*9**2.77 = 21400.8...,
    # 3.13 + 3220*9**3.20 = 3.64e6 -- "roughly 2e4 and 4e6"
    assert 2.0e4 <= cnot_volume(1e9) <= 2.2e4
    assert 3.5e6 <= t_volume(1e9) <= 3.8e6


def test_base_values_at_1():
    assert cnot_volume(1) == pytest.approx(1610.0)
    assert t_volume(1) == pytest.approx(3.13)


def test_values_at_10():
    assert cnot_volume(10) == pytest.approx(1655.0)
    assert t_volume(10) == pytest.approx(3223.13)


def test_domain_errors():
    with pytest.raises(ValueError):
        cnot_volume(0.5)
    with pytest.raises(ValueError):
        t_volume(0.0)


def test_monotone_and_convex_in_log_n():
    logs = np.linspace(1, 12, 60)
    for f in (cnot_volume, t_volume):
        vals = np.array([f(10 ** x) for x in logs])
        assert np.all(np.diff(vals) > 0)
        assert np.all(np.diff(vals, 2) > -1e-9)


def test_ft_report_zero_counts():
    report = ft_report(0, 0)
    assert report.total_cnot_volume == 0.0
    assert report.total_t_volume == 0.0
    assert report.total_volume == 0.0


def test_ft_report_headline_scenario():
    report = ft_report(1e7, 1e9)
    assert report.total_t_volume == pytest.approx(1e9 * t_volume(1e9 + 1e7), rel=1e-12)
    assert 3.5e15 <= report.total_t_volume <= 3.8e15
    assert report.circuit_size == pytest.approx(1e9 + 1e7)


def test_ft_report_linear_in_counts_at_fixed_n():
    n = 1e8
    a = ft_report(1e6, 1e7, circuit_size=n)
    b = ft_report(2e6, 2e7, circuit_size=n)
    assert b.total_cnot_volume == pytest.approx(2 * a.total_cnot_volume)
    assert b.total_t_volume == pytest.approx(2 * a.total_t_volume)


def test_ft_report_not_additive_across_reports():
    a = ft_report(1e6, 1e6)
    b = ft_report(1e6, 1e6)
    combined = ft_report(2e6, 2e6)
    # volumes grow with total N, so the combined report exceeds the sum
    assert combined.total_volume > a.total_volume + b.total_volume - 1e-9


def test_ft_report_validation():
    with pytest.raises(ValueError):
        ft_report(-1, 0)


def test_modular_scale():
    sys = ModularSystem(q=100, m=4, l=3, t=2, p=5)
    assert modular_scale(sys) == 12000
    assert modular_scale(ModularSystem(1, 1, 1, 1, 1)) == 1
    # commutativity of the factors
    assert modular_scale(ModularSystem(5, 2, 3, 4, 100)) == modular_scale(
        ModularSystem(100, 4, 3, 2, 5))


def test_modular_validation():
    with pytest.raises(ValueError):
        ModularSystem(0, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        ModularSystem(2, 1, 1, 1, -3)
