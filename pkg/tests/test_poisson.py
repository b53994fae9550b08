import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from derived_brackets.core.linear import Vector
from derived_brackets.instances import fixture, random_poisson
from derived_brackets.lie import validate_gla
from derived_brackets.linfty import check_linfty, derived_brackets, words_for
from derived_brackets.poisson import (
    SchoutenAlgebra, SubmanifoldContext, build_valgebra, check_multiderivation, check_poisson,
    coisotropy_obstruction,
    is_coisotropic, is_flat, is_tangent, merge_indices, pinfty_brackets, rescaling,
)

R2 = SchoutenAlgebra(2, ["x", "y"])


def el(*terms, A=R2):
    return A.element(terms)


def test_merge_indices():
    assert merge_indices((1,), (0,)) == (-1, (0, 1))
    assert merge_indices((0,), (1, 2)) == (1, (0, 1, 2))
    assert merge_indices((0, 1), (1,)) == (0, ())


def test_vector_field_acts_on_functions():
    x_dx = el(((1, 0), (0,), 1))
    x = el(((1, 0), (), 1))
    assert R2.bracket(x_dx, x) == x


def test_bivector_contracts_a_function():
    dxdy = el(((0, 0), (0, 1), 1))
    x = el(((1, 0), (), 1))
    assert R2.bracket(dxdy, x) == -el(((0, 0), (1,), 1))


def test_vector_fields_commute_as_fields():
    # [x dy, y dx] = x dx - y dy
    a, b = el(((1, 0), (1,), 1)), el(((0, 1), (0,), 1))
    assert R2.bracket(a, b) == el(((1, 0), (0,), 1), ((0, 1), (1,), -1))


def test_element_sorts_indices_with_sign():
    assert el(((0, 0), (1, 0), 1)) == -el(((0, 0), (0, 1), 1))
    with pytest.raises(ValueError):
        el(((0, 0), (0, 0), 1))
    with pytest.raises(ValueError):
        el(((0,), (), 1))


def test_names():
    assert R2.name(((1, 0), (1,))) == "x*dy"
    A = SchoutenAlgebra(3)
    assert A.name(((2, 0, 0), (0, 2))) == "x1^2*dx1^dx3"
    assert R2.name(((0, 0), ())) == "1"


def test_a_letters_for_a_line():
    ctx = SubmanifoldContext(2, 1)
    names = [R2.name(k) for k in ctx.a_letters()]
    assert sorted(names) == sorted(["1", "x", "dy", "x*dy"])
    degs = sorted(R2.degree(k) for k in ctx.a_letters())
    assert degs == [-1, -1, 0, 0]


def test_context_validation():
    with pytest.raises(ValueError):
        SubmanifoldContext(2, 3)
    with pytest.raises(ValueError):
        SubmanifoldContext(2, 1, D=-1)


def random_multivector(rng, A, wedge, max_deg=2):
    """Random homogeneous polynomial field of the given wedge degree."""
    terms = []
    for _ in range(rng.randint(1, 3)):
        exps = [0] * A.dim
        for _ in range(rng.randint(0, max_deg)):
            exps[rng.randrange(A.dim)] += 1
        terms.append((exps, rng.sample(range(A.dim), wedge), F(rng.randint(-3, 3), rng.choice([1, 2]))))
    return A.element(terms)


@given(st.integers(0, 10_000), st.integers(1, 3), st.data())
@settings(max_examples=60)
def test_schouten_jacobi_on_random_multivectors(seed, dim, data):
    rng = random.Random(seed)
    A = SchoutenAlgebra(dim)
    wedges = [data.draw(st.integers(0, dim)) for _ in range(3)]
    x, y, z = (random_multivector(rng, A, r) for r in wedges)
    s = -1 if ((wedges[0] - 1) * (wedges[1] - 1)) % 2 else 1
    lhs = A.bracket(x, A.bracket(y, z))
    rhs = A.bracket(A.bracket(x, y), z) + s * A.bracket(y, A.bracket(x, z))
    assert lhs == rhs


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=40)
def test_schouten_skew_symmetry(seed, dim, r1, r2):
    rng = random.Random(seed)
    A = SchoutenAlgebra(dim)
    x, y = random_multivector(rng, A, min(r1, dim)), random_multivector(rng, A, min(r2, dim))
    s = -1 if ((min(r1, dim) - 1) * (min(r2, dim) - 1)) % 2 else 1
    assert A.bracket(x, y) == -s * A.bracket(y, x)


def test_exhaustive_jacobi_on_small_window():
    ctx = SubmanifoldContext(2, 1)
    V = build_valgebra(ctx, ["x", "y"])
    assert validate_gla(V.gla, V.window).ok


def test_sym4_is_coisotropic_and_flat():
    inst = fixture("sym4-x3_d1")
    assert is_coisotropic(inst.ctx, inst.pi)
    assert is_flat(inst.V, inst.pi)


def test_point_is_curved():
    inst = fixture("point-x1_d2")
    assert not is_coisotropic(inst.ctx, inst.pi)
    D0 = pinfty_brackets(inst.V, inst.pi).raw(())
    assert D0 == inst.V.gla.element([((0, 0), (0, 1), 1)])
    assert coisotropy_obstruction(inst.ctx, inst.pi) == D0
    assert check_linfty(pinfty_brackets(inst.V, inst.pi), words_for(inst.V, 3)).ok


def test_noncoisotropic_split_is_curved():
    inst = fixture("sym4-noncoiso")
    assert not is_coisotropic(inst.ctx, inst.pi)
    assert not is_flat(inst.V, inst.pi)


def test_non_poisson_bivector_rejected():
    ctx = SubmanifoldContext(3, 1)
    A = SchoutenAlgebra(3)
    V = build_valgebra(ctx)
    # {x1, x2} = x2, {x2, x3} = 1 violates Jacobi at the origin
    pi = A.element([((0, 1, 0), (0, 1), 1), ((0, 0, 0), (1, 2), 1)])
    assert A.bracket(pi, pi) == A.element([((0, 0, 0), (0, 1, 2), -2)])
    assert not check_poisson(V, ctx, pi).ok
    assert not check_poisson(V, ctx, A.element([((0, 0, 0), (0,), 1)])).ok


def test_tangent_fields():
    ctx = SubmanifoldContext(2, 1)
    assert is_tangent(ctx, el(((1, 1), (1,), 1)))
    assert is_tangent(ctx, el(((0, 1), (0,), 1)))
    assert not is_tangent(ctx, el(((0, 0), (1,), 1)))
    assert not is_tangent(ctx, el(((0, 0), (0, 1), 1)))


@given(st.integers(0, 10_000), st.sampled_from([0, 1, 2]))
@settings(max_examples=12)
def test_random_poisson_flat_iff_coisotropic(seed, codim):
    inst = random_poisson(random.Random(seed), codim)
    assert check_poisson(inst.V, inst.ctx, inst.pi).ok
    assert is_flat(inst.V, inst.pi) == is_coisotropic(inst.ctx, inst.pi)
    assert (not coisotropy_obstruction(inst.ctx, inst.pi)) == is_coisotropic(inst.ctx, inst.pi)


@pytest.mark.parametrize("name", ["r2-xy_dy", "sym4-x3_d1", "point-x1_d2"])
@pytest.mark.parametrize("arity", [1, 2, 3])
def test_multiderivation(name, arity):
    inst = fixture(name)
    D = derived_brackets(inst.V, inst.E)
    rep = check_multiderivation(inst.V, D, arity, 20, random.Random(arity))
    assert rep.ok and rep.checked > 0


def test_rescaling():
    phi = rescaling(R2, [2, F(1, 3)])
    x_dy = Vector.basis(((1, 0), (1,)))
    assert phi(x_dy) == F(1, 2) * F(1, 3) * x_dy
    with pytest.raises(ValueError):
        rescaling(R2, [0, 1])
