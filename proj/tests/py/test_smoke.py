"""Smoke tests for the Python bindings: one probe per exposed area."""

import cmath
import math

import pytest

import qosc


def test_version():
    assert qosc.__version__ == "0.1.0"


def test_params_and_ladder():
    p = qosc.preset("hermite_I", 0.5)
    assert p.alpha == 0.5 and p.beta == -1.0 and p.l == 2.0
    assert p.qprime() == pytest.approx(0.5)
    # f_n = q^((n+1)/2 - 1/2) * sqrt((1 - q^(n+1)) / (1 - q)) at this preset
    assert qosc.structure_function(p, 2) == pytest.approx(
        0.5 * math.sqrt((1 - 0.5**3) / (1 - 0.5)), rel=1e-14
    )
    assert qosc.structure_function(p, -1) == 0.0


def test_preset_validation():
    with pytest.raises(ValueError):
        qosc.make_params(0.0, 0.0, 2.0, 1.0)  # q = 1 is excluded
    with pytest.raises(ValueError):
        qosc.preset("no-such-preset", 0.5)
    sym = qosc.preset("symmetric", 0.5, 3.0)
    assert sym.l == 3.0


def test_eval_routes_agree():
    fam = qosc.discrete_family_I(0.5)
    for n in range(12):
        for x in (-1.5, -0.3, 0.4, 2.0):
            a = qosc.eval_recurrence(fam, n, x)
            b = qosc.eval_explicit(fam, n, x)
            c = qosc.eval_hypergeometric(fam, n, x)
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))
            assert abs(a - c) <= 1e-10 * max(1.0, abs(a))


def test_known_value():
    fam = qosc.discrete_family_I(0.5)
    assert qosc.eval_recurrence(fam, 2, 1.0).real == pytest.approx(0.5, abs=1e-15)
    co = qosc.coefficients(fam, 3)
    assert co.coeffs == pytest.approx([0.0, -0.875, 0.0, 1.0])


def test_defining_relations():
    rep = qosc.verify_defining_relations(qosc.preset("hermite_II", 0.5), 32, 1e-12)
    assert rep.pass_ and bool(rep)


def test_hamiltonian_classical():
    lam = qosc.hamiltonian_spectrum(qosc.preset("classical", 0.5), 10)
    for n, v in enumerate(lam):
        assert v == pytest.approx(2 * n + 1, rel=1e-13)


def test_classification():
    v = qosc.classify_self_adjointness(qosc.make_params(-1.0, 0.0, 2.0, 0.5))
    assert v.series_convergent and v.deficiency_indices == (1, 1)
    w = qosc.classify_self_adjointness(qosc.make_params(0.5, 0.0, 2.0, 0.5))
    assert not w.series_convergent and w.deficiency_indices == (0, 0)
    assert w.carleman_condition_holds


def test_orthogonality():
    fam = qosc.discrete_family_II(0.5, 1.0)
    for m in range(4):
        for n in range(m + 1):
            chk = qosc.verify_orthogonality(fam, m, n, 60)
            assert chk.abs_gap <= 1e-7


def test_spectrum_tools():
    fam = qosc.discrete_family_I(0.5)
    lat = qosc.analytic_spectrum(fam, 8)
    assert lat.applicable and lat.points[0] == pytest.approx(lat.scale)
    eig = qosc.truncated_position_spectrum(fam.params, 64)
    assert abs(eig[0] - lat.points[0]) <= 1e-6 * lat.points[0]
    p2 = qosc.preset("hermite_II", 0.5)
    n_below = qosc.eigenvalue_count_below(p2, 64, 0.0)
    assert n_below == 32  # symmetric spectrum, even dimension


def test_coherent_state():
    p = qosc.preset("hermite_I", 0.5)
    s = qosc.coherent_state(p, 1.0, 200)
    assert qosc.eigen_residual(s, p) <= 1e-10
    assert abs(abs(qosc.overlap(s, s)) - 1.0) <= 1e-12
    kind, r2 = qosc.coherent_series_radius(p)
    assert kind == "zero" and r2 == 0.0
    with pytest.raises(RuntimeError):
        qosc.coherent_state(p, 1.0, 200, True)  # certification impossible


def test_generating_function():
    fam = qosc.discrete_family_II(0.5)
    chk = qosc.generating_function_check(fam, 0.5, 0.2)
    assert chk.gap <= 1e-8 and not chk.identity_mismatch
    with pytest.raises(RuntimeError):
        qosc.generating_function_check(qosc.discrete_family_I(0.5), 0.5, 0.1)


def test_duality():
    d = qosc.duality_transform_discrete(3, 1.0, 0.5)
    assert cmath.isclose(d.lhs, d.rhs, rel_tol=1e-11, abs_tol=1e-11)


def test_q_pochhammer():
    assert qosc.q_pochhammer(0.5 + 0j, 0.5, 3) == pytest.approx(
        (1 - 0.5) * (1 - 0.25) * (1 - 0.125)
    )
    value, bound, terms = qosc.q_pochhammer_inf(0.5 + 0j, 0.5)
    assert bound <= 1e-12 * abs(value) and terms > 0
    assert value.real == pytest.approx(0.2887880950866, rel=1e-10)
