import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from derived_brackets.core.linear import GradedBasis, LinMap, Vector
from derived_brackets.instances import fixture, random_incidence
from derived_brackets.lie import (
    DerivationSpec, TableGLA, VAlgebra, check_adapted, check_derivation, check_square_expansion,
    commutator_derivation, decompose_wlog, is_maurer_cartan, koszul, validate_gla, validate_valgebra,
)

seeds = st.integers(0, 10_000)


def heisenberg():
    # odd q, p with [q, p] = c, c even and central
    basis = GradedBasis((("q", 1), ("p", 1), ("c", 2)))
    return TableGLA.from_entries(basis, [(0, 1, Vector.basis(2)), (0, 0, Vector()),
                                         (1, 0, Vector.basis(2))])


def test_koszul():
    assert koszul(1, 3) == -1
    assert koszul(2, 3) == 1
    assert koszul(-1, 1) == -1


def test_from_entries_fills_opposite_order():
    basis = GradedBasis((("a", 0), ("b", 1)))
    A = TableGLA.from_entries(basis, [(1, 0, Vector.basis(1))])
    assert A.bracket_basis(0, 1) == -Vector.basis(1)
    assert A.bracket_basis(1, 0) == Vector.basis(1)


def test_odd_brackets_are_symmetric():
    A = heisenberg()
    q, p = Vector.basis(0), Vector.basis(1)
    assert A.bracket(q, p) == A.bracket(p, q)
    assert validate_gla(A).ok


def test_inconsistent_explicit_entries_detected():
    A = heisenberg()
    A.table[(1, 0)] = -Vector.basis(2)
    rep = validate_gla(A)
    assert not rep.ok
    assert ("skew", 0, 1) in rep.witnesses


def test_corrupted_structure_constant_names_jacobi_triple():
    inst = fixture("incidence")
    A = inst.V.gla
    key = next(k for k, v in sorted(A.table.items()) if v)
    A.table[key] = 2 * A.table[key]
    A._bracket_cache.clear()
    rep = validate_gla(A)
    assert not rep.ok
    assert any(w[0] == "jacobi" for w in rep.witnesses)


def test_inhomogeneous_table_entry_detected():
    basis = GradedBasis((("a", 0), ("b", 1)))
    A = TableGLA(basis, {(0, 0): Vector.basis(1)})
    rep = validate_gla(A)
    assert ("degree", 0, 0) in rep.witnesses


@given(seeds)
def test_random_incidence_algebras_are_valid(seed):
    inst = random_incidence(random.Random(seed), mc=seed % 2 == 0)
    assert validate_gla(inst.V.gla).ok
    assert validate_valgebra(inst.V).ok
    assert check_adapted(inst.V, inst.E).ok


@given(seeds)
def test_adjoint_maps_are_derivations(seed):
    rng = random.Random(seed)
    inst = random_incidence(rng, mc=False)
    A = inst.V.gla
    k = rng.choice(A.basis_keys())
    assert check_derivation(A, A.ad(Vector.basis(k))).ok


@given(seeds)
def test_square_expansion(seed):
    inst = random_incidence(random.Random(seed), mc=False)
    assert check_square_expansion(inst.V, inst.E).ok


@given(seeds)
def test_mc_instances_square_to_zero(seed):
    inst = random_incidence(random.Random(seed), mc=True)
    assert is_maurer_cartan(inst.V, inst.E) == (True, None)


@given(seeds)
def test_commutator_derivation_matches_operator_commutator(seed):
    rng = random.Random(seed)
    inst = random_incidence(rng, mc=False)
    A, E = inst.V.gla, inst.E
    even = [k for k in A.basis_keys() if A.degree(k) == 0]
    m = DerivationSpec.inner(A, Vector.basis(rng.choice(even)), 0)
    c = commutator_derivation(m, E)
    for k in A.basis_keys():
        assert c.column(k) == m(E.column(k)) - E(m.column(k))


@given(seeds)
def test_decompose_wlog_preserves_the_map(seed):
    inst = random_incidence(random.Random(seed), mc=False)
    V, E = inst.V, inst.E
    E2 = decompose_wlog(V, E)
    assert not V.proj_p(E2.p_element)
    for k in V.window:
        assert E2.column(k) == E.column(k)


def test_non_abelian_a_rejected():
    A = heisenberg()
    V = VAlgebra(A, [0, 1])
    rep = validate_valgebra(V)
    assert not rep.ok
    assert ("aa", 0, 1) in rep.witnesses


def test_unadapted_ehat_detected():
    inst = fixture("incidence")
    V = inst.V
    a, p = V.a_letters[0], V.p_window[0]
    deg = V.degree(a) - V.degree(p)
    bad = DerivationSpec(V.gla, deg, LinMap(deg, {p: Vector.basis(a)}))
    rep = check_adapted(V, bad)
    assert not rep.ok and p in rep.witnesses


def test_non_mc_reports_witness():
    inst = random_incidence(random.Random(3), mc=False)
    ok, witness = is_maurer_cartan(inst.V, inst.E.scaled(F(1)))
    if not ok:
        assert witness is not None
    even = DerivationSpec.inner(inst.V.gla, Vector(), 0)
    assert is_maurer_cartan(inst.V, even) == (False, "degree 0 != 1")


def test_square_requires_odd():
    A = heisenberg()
    with pytest.raises(ValueError):
        DerivationSpec.inner(A, Vector.basis(2)).square()
    with pytest.raises(ValueError):
        DerivationSpec.inner(A, Vector())


def test_ehat_degree_mismatch_rejected():
    A = heisenberg()
    with pytest.raises(ValueError):
        DerivationSpec(A, 1, LinMap(0, {}))


def test_bracket_is_bilinear():
    A = heisenberg()
    q, p = Vector.basis(0), Vector.basis(1)
    for a, b in product([F(1), F(-2, 3)], repeat=2):
        assert A.bracket(a * q, b * p) == a * b * Vector.basis(2)
