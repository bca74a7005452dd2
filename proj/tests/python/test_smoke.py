import math

import pytest

import varexp


def unit_interval(h):
    g = varexp.Grid.over_box([0.0], [1.0], h)
    return varexp.GridFunction(g, [1.0] * g.size)


def test_version():
    assert varexp.__version__


def test_luxemburg_of_indicator():
    f = unit_interval(1 / 64)
    assert varexp.luxemburg_norm(f, varexp.ExponentField.constant(1, 3.0)) == pytest.approx(1.0, rel=1e-8)


def test_modular_with_variable_exponent():
    g = varexp.Grid.over_box([0.0], [1.0], 1 / 4096)
    nodes = 1025
    p = varexp.ExponentField([0.0], [1.0], [nodes], [2.0 + k / (nodes - 1) for k in range(nodes)], 2.0)
    f = varexp.sample(g, lambda x: 2.0)
    assert abs(varexp.modular(f, p) - 4 / math.log(2)) < 1e-4


def test_holder_pair_returns_report():
    f = unit_interval(1 / 32)
    r = varexp.holder_pair_check(f, f, varexp.ExponentField.constant(1, 2.0))
    assert r["ratio"] == pytest.approx(1.0, abs=1e-9)


def test_riesz_potential():
    f = unit_interval(1 / 512)
    (v,) = varexp.apply_Ialpha([f], 0.5, [0.5])
    assert abs(v - 2 * math.sqrt(2)) < 0.02 * 2 * math.sqrt(2)


def test_commutator_with_constant_b_vanishes():
    f = unit_interval(1 / 64)
    bg = varexp.Grid.over_box([-1.0], [2.0], 1 / 64)
    b = varexp.GridFunction(bg, [0.75] * bg.size)
    vals = varexp.apply_commutator(b, [f, f], 0, 0.8, [0.5, 1.5])
    assert max(abs(v) for v in vals) <= 1e-12


def test_atom_moments():
    g = varexp.Grid.over_box([-1.0], [1.0], 1 / 64)
    values, residual = varexp.make_atom(g, varexp.Cube([0.0], 0.5), 1, 3)
    assert residual <= 1e-9
    assert values.sup_abs() == pytest.approx(1.0)


def test_frac_maximal_shape():
    f = unit_interval(1 / 16)
    m = varexp.frac_maximal(f, alpha=0.3)
    assert len(m) == len(f)
    assert m.values.max() > 0


def test_log_holder_constant():
    r = varexp.check_log_holder(varexp.ExponentField.constant(1, 2.0))
    assert r["c_local"] == 0.0 and r["pass"]


def test_errors_map_to_varexp_error():
    with pytest.raises(varexp.VarexpError):
        varexp.Grid.over_box([0.0], [1.0], 0.3)


def test_run_scenario_dict():
    report = varexp.run_scenario({
        "name": "py_holder",
        "check": "holder",
        "seed": 3,
        "params": {"trials": 5, "exponent": {"type": "constant", "value": 2.0}},
        "thresholds": {"rows_ok": True},
    })
    assert report["pass"]
    assert len(report["rows"]) == 5


def test_builtin_suite_lists_all_criteria():
    crits = {s["criterion"] for s in varexp.builtin_suite()}
    assert crits == set(range(1, 14))
