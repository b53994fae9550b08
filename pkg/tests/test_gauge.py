import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from derived_brackets.core.linear import Vector
from derived_brackets.gauge import (
    TimeDerivation, check_rhs_forms, boxes_sum, build_M, build_U, check_Q_ode, check_transported,
    check_U_ode, check_U_unique, check_Z, eqn_rhs, integrate_flow, integrate_U, second_sum,
    transport_mc,
)
from derived_brackets.instances import fixture, random_incidence
from derived_brackets.lie import DerivationSpec
from derived_brackets.linfty import Coderivation, derived_brackets, words_for
from derived_brackets.poisson import field_derivation

seeds = st.integers(0, 10_000)


def incidence_with_flow(seed):
    rng = random.Random(seed)
    while True:
        inst = random_incidence(rng, mc=True)
        if inst.flow:
            return inst


def constant_inner(V, key, order):
    gla = V.gla
    return TimeDerivation(gla, [DerivationSpec.inner(gla, Vector.basis(key), 0)], order)


def test_time_derivation_pads_and_checks_degree():
    inst = fixture("incidence")
    gla = inst.V.gla
    m = TimeDerivation(gla, [], 2)
    assert len(m.coeffs) == 3 and m.is_zero
    odd = next(k for k in gla.basis_keys() if gla.degree(k) == 1)
    with pytest.raises(ValueError):
        TimeDerivation(gla, [DerivationSpec.inner(gla, Vector.basis(odd))], 1)
    with pytest.raises(ValueError):
        TimeDerivation(gla, [], -1)


@given(seeds)
@settings(max_examples=15)
def test_constant_flow_is_the_exponential(seed):
    inst = incidence_with_flow(seed)
    V = inst.V
    m0 = inst.time_derivation(0).coeffs[0]
    N = 4
    flow = integrate_flow(TimeDerivation(V.gla, [m0], N), V)
    for k in V.window:
        power = Vector.basis(k)
        for j in range(N + 1):
            assert flow.coeffs[j].column(k) == F(1, math.factorial(j)) * power
            power = m0(power)


def test_zero_flow_is_trivial():
    inst = fixture("incidence")
    V = inst.V
    m = TimeDerivation(V.gla, [], 3)
    flow = integrate_flow(m, V)
    E_t = transport_mc(inst.E, flow)
    for k in V.window:
        assert E_t.column(k) == inst.E.column(k)
    U = build_U(V, flow)
    for w in words_for(V, 3, 1):
        expected = Vector.basis(w[0]) if len(w) == 1 else Vector()
        assert U.raw(w) == expected


@given(seeds)
@settings(max_examples=10)
def test_U_starts_at_identity(seed):
    inst = incidence_with_flow(seed)
    V = inst.V
    U = build_U(V, integrate_flow(inst.time_derivation(2), V))
    for w in words_for(V, 3, 1):
        at_zero = U.raw(w).t_truncate(0)
        assert at_zero == (Vector.basis(w[0]) if len(w) == 1 else Vector())


@given(seeds)
@settings(max_examples=10)
def test_incidence_flow_identities(seed):
    inst = incidence_with_flow(seed)
    V, N = inst.V, 2
    m = inst.time_derivation(N)
    flow = integrate_flow(m, V)
    E_t = transport_mc(inst.E, flow)
    words = words_for(V, 3)
    D_m, U = build_M(V, m), build_U(V, flow)
    assert flow.check(V).ok
    assert check_transported(V, E_t).ok
    assert check_U_ode(D_m, U, words, N).ok
    assert check_U_unique(U, integrate_U(V, m), words).ok
    assert check_Q_ode(V, E_t, m, words, N).ok
    Q0, Qt = Coderivation(derived_brackets(V, inst.E)), Coderivation(derived_brackets(V, E_t))
    assert check_Z(U, Qt, Q0, words, V.degree).ok


@pytest.mark.parametrize("name", ["r2-y_dx", "r2-y2_dy"])
def test_poisson_flows_have_higher_components(name):
    inst = fixture(name)
    V = inst.V
    U = build_U(V, integrate_flow(inst.time_derivation(3), V))
    assert any(U.raw(w) for w in words_for(V, 3, 2))


@pytest.mark.parametrize("name", ["r2-y_dx", "sym4-x1x3_d3"])
def test_rhs_forms_agree(name):
    inst = fixture(name)
    V = inst.V
    m = inst.time_derivation(2)
    D, U = build_M(V, m), build_U(V, integrate_flow(m, V))
    for w in words_for(V, 3, 1):
        first = eqn_rhs(D, U, w)
        assert first == second_sum(D, U, w) == boxes_sum(D, U, w)
        assert check_rhs_forms(D, U, w).ok


def test_wrong_U_breaks_the_ode():
    inst = fixture("r2-y_dx")
    V = inst.V
    m = inst.time_derivation(2)
    D = build_M(V, m)
    # U from a different flow
    U_other = build_U(V, integrate_flow(fixture("r2-y2_dy").time_derivation(2), V))
    rep = check_U_ode(D, U_other, words_for(V, 2, 1), 2)
    assert not rep.ok


def test_normal_field_flow_rejected():
    inst = fixture("r2-xy_dy")
    V = inst.V
    dy = V.gla.element([((0, 0), (1,), 1)])
    m = TimeDerivation(V.gla, [field_derivation(V, dy)], 2)
    with pytest.raises(ValueError, match="flow generator rejected"):
        integrate_flow(m, V)


def test_order_zero_checks_are_vacuous():
    inst = fixture("r2-xy_dy")
    V = inst.V
    m = inst.time_derivation(0)
    D, U = build_M(V, m), build_U(V, integrate_flow(m, V))
    rep = check_U_ode(D, U, words_for(V, 2), 0)
    assert rep.ok and "vacuous" in rep.note
