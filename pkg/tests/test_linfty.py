import math
import random
from fractions import Fraction as F
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from derived_brackets.core.combinatorics import Permutation, koszul_sign
from derived_brackets.core.linear import LinMap, Vector
from derived_brackets.instances import fixture, random_incidence
from derived_brackets.lie import DerivationSpec
from derived_brackets.linfty import (
    BracketFamily, CoalgMorphism, Coderivation, check_coalgebra_morphism, check_coderivation,
    check_codifferential, check_degrees, check_JD2, check_linfty, check_linfty_morphism,
    check_symmetry, corestriction, derived_brackets, jacobiator, linear_morphism, words_for,
)

seeds = st.integers(0, 10_000)


def brute_jacobiator(m, word):
    # sum over all permutations, each unordered split counted r!(n-r)! times
    n = len(word)
    degs = [m.letter_degree(x) for x in word]
    total = Vector()
    for images in permutations(range(1, n + 1)):
        p = Permutation(images)
        sw = p.act(word)
        eps = koszul_sign(p, degs)
        for r in range(n + 1):
            w = F(1, math.factorial(r) * math.factorial(n - r))
            inner = m.raw(tuple(sw[:r]))
            for k, c in inner.items():
                total = total + (eps * c * w) * m.raw((k,) + tuple(sw[r:]))
    return total


def brute_bracket(V, E, word):
    if not word:
        return V.proj_a(E.p_element)
    v = E.column(word[0])
    for x in word[1:]:
        v = V.gla.bracket(v, Vector.basis(x))
    return V.proj_a(v)


@given(seeds)
def test_derived_brackets_match_direct_nesting(seed):
    inst = random_incidence(random.Random(seed), mc=False)
    D = derived_brackets(inst.V, inst.E)
    rng = random.Random(seed)
    for _ in range(10):
        word = tuple(rng.choice(inst.V.a_letters) for _ in range(rng.randint(0, 3)))
        assert D.raw(word) == brute_bracket(inst.V, inst.E, word)


@given(seeds)
@settings(max_examples=25)
def test_jacobiator_matches_permutation_sum(seed):
    inst = random_incidence(random.Random(seed), mc=False)
    D = derived_brackets(inst.V, inst.E)
    for w in words_for(inst.V, 3):
        assert jacobiator(D, w) == brute_jacobiator(D, w)


@given(seeds)
@settings(max_examples=20)
def test_mc_derived_brackets_are_linfty(seed):
    inst = random_incidence(random.Random(seed), mc=True)
    D = derived_brackets(inst.V, inst.E)
    words = words_for(inst.V, 4)
    assert check_linfty(D, words).ok
    assert check_symmetry(D, words_for(inst.V, 4, 2)).ok
    assert check_degrees(D, words).ok


@given(seeds)
@settings(max_examples=20)
def test_jacobiator_equals_brackets_of_square(seed):
    inst = random_incidence(random.Random(seed), mc=False)
    assert check_JD2(inst.V, inst.E, words_for(inst.V, 4)).ok


@given(seeds)
@settings(max_examples=20)
def test_coderivation_rules(seed):
    inst = random_incidence(random.Random(seed), mc=False)
    D = derived_brackets(inst.V, inst.E)
    Q = Coderivation(D)
    words = words_for(inst.V, 3)
    assert check_coderivation(Q, words).ok
    for w in words:
        assert corestriction(Q, w) == D.raw(w)
        assert corestriction(Coderivation(D), w) == D.raw(w)


def test_codifferential_on_mc_fixture():
    inst = fixture("incidence")
    Q = Coderivation(derived_brackets(inst.V, inst.E))
    assert check_codifferential(Q, words_for(inst.V, 4)).ok


def test_nonzero_jacobiator_is_reported():
    # a nonzero curvature term with nothing to cancel it
    inst = fixture("incidence")
    V = inst.V
    x = V.a_letters[0]
    fake = BracketFamily(lambda w: Vector.basis(x) if w in ((), (x,)) else Vector(), 1,
                         V.degree, "bad")
    rep = check_linfty(fake, [()])
    assert not rep.ok and () in rep.witnesses


def test_asymmetric_family_is_reported():
    inst = fixture("incidence")
    V = inst.V
    a, b = V.a_letters[:2]
    fake = BracketFamily(lambda w: Vector.basis(a) if w == (a, b) else Vector(), 0, V.degree, "bad")
    rep = check_symmetry(fake, [(a, b)])
    assert not rep.ok


def test_identity_is_a_strict_morphism():
    inst = fixture("incidence")
    V = inst.V
    ident = LinMap.identity()
    U = linear_morphism(ident, V, V)
    Q = Coderivation(derived_brackets(V, inst.E))
    words = words_for(V, 3)
    assert check_linfty_morphism(U, Q, Q, words).ok
    assert check_coalgebra_morphism(U, words).ok
    for w in words:
        assert U(Vector.basis(w)) == Vector.basis(w)


def test_scaled_identity_is_not_a_morphism_when_curved():
    # D^0 != 0 breaks the equation for a rescaled identity
    inst = random_incidence(random.Random(5), mc=False)
    V = inst.V
    Q = Coderivation(derived_brackets(V, inst.E))
    U = linear_morphism(2 * LinMap.identity(), V, V)
    if Q.family.raw(()):
        assert not check_linfty_morphism(U, Q, Q, [()]).ok


def test_morphism_components_need_degree_zero():
    inst = fixture("incidence")
    with pytest.raises(ValueError):
        CoalgMorphism(derived_brackets(inst.V, inst.E), inst.V.degree)


def test_multilinear_call():
    inst = random_incidence(random.Random(8), mc=False)
    V = inst.V
    D = derived_brackets(V, inst.E)
    a, b = V.a_letters[0], V.a_letters[-1]
    x = Vector.basis(a) + F(2) * Vector.basis(b)
    assert D(x) == D.raw((a,)) + 2 * D.raw((b,))
    assert D() == D.raw(())


def test_inner_square_of_even_fails():
    inst = fixture("incidence")
    E0 = DerivationSpec.inner(inst.V.gla, Vector(), 0)
    with pytest.raises(ValueError):
        check_JD2(inst.V, E0, [()])
