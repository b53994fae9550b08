"""Symmetric L-infinity structures: bracket families, derived brackets,
Jacobiators, coderivations and L-infinity morphisms.

All brackets are graded symmetric with a common degree.  Multi-brackets are
evaluated on basis words and cached, so repeated checks reuse work.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Sequence

from .core.combinatorics import (canonical_words, koszul_sign, partition_sign,
                                 set_partitions, shuffles)
from .core.linear import Vector, accumulate
from .lie import DerivationSpec, VAlgebra, koszul
from .report import Report
from .symalg import (add_word, coproduct, letters_to_words, linear_extend, sym_product,
                     tensor_apply, words_to_letters)

Key = Hashable


class BracketFamily:
    """Multilinear maps ``m^n`` of a fixed degree, defined on basis words."""

    def __init__(self, fn: Callable[[tuple], Vector], degree: int,
                 letter_degree: Callable[[Key], int], label: str = "m"):
        self._fn = fn
        self.degree = int(degree)
        self.letter_degree = letter_degree
        self.label = label
        self._cache: dict = {}

    def raw(self, word: tuple) -> Vector:
        v = self._cache.get(word)
        if v is None:
            v = self._fn(word)
            self._cache[word] = v
        return v

    def __call__(self, *xs: Vector) -> Vector:
        terms = {(): Fraction(1)}
        for x in xs:
            terms = {w + (k,): c * ck for w, c in terms.items() for k, ck in x.items()}
        acc: dict = {}
        for w, c in terms.items():
            accumulate(acc, self.raw(w), c)
        return Vector.from_accumulator(acc)


def derived_brackets(V: VAlgebra, E: DerivationSpec, label: str = "D") -> BracketFamily:
    """``D^n(x1..xn) = proj_a [..[E x1, x2].., xn]`` and ``D^0 = proj_a P``."""
    nested: dict = {}

    def nest(word: tuple) -> Vector:
        v = nested.get(word)
        if v is None:
            if len(word) == 1:
                v = E.column(word[0])
            else:
                v = V.gla.bracket(nest(word[:-1]), Vector.basis(word[-1]))
            nested[word] = v
        return v

    def fn(word: tuple) -> Vector:
        if not word:
            return V.proj_a(E.p_element)
        return V.proj_a(nest(word))

    return BracketFamily(fn, E.degree, V.degree, label)


def jacobiator(m: BracketFamily, word: tuple) -> Vector:
    """``sum_r sum_shuffles e * m(m(x_first r), x_rest)`` on a basis word."""
    n = len(word)
    degs = [m.letter_degree(x) for x in word]
    acc: dict = {}
    for r in range(n + 1):
        for sh in shuffles(r, n - r):
            sw = sh.act(word)
            inner = m.raw(tuple(sw[:r]))
            if not inner:
                continue
            eps = koszul_sign(sh, degs)
            rest = tuple(sw[r:])
            for k, c in inner.items():
                accumulate(acc, m.raw((k,) + rest), eps * c)
    return Vector.from_accumulator(acc)


def words_for(V: VAlgebra, max_len: int, min_len: int = 0) -> list[tuple]:
    return canonical_words(V.a_letters, max_len, V.degree, min_len)


def check_symmetry(m: BracketFamily, words: Sequence[tuple]) -> Report:
    rep = Report(f"{m.label} symmetry")
    deg = m.letter_degree
    for w in words:
        for i in range(len(w) - 1):
            rep.count()
            swapped = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
            if m.raw(swapped) != koszul(deg(w[i]), deg(w[i + 1])) * m.raw(w):
                rep.fail(f"{m.label}{w} is not graded symmetric at position {i + 1}", w)
    return rep


def check_degrees(m: BracketFamily, words: Sequence[tuple]) -> Report:
    rep = Report(f"{m.label} degree")
    deg = m.letter_degree
    for w in words:
        rep.count()
        if not m.raw(w).is_homogeneous(deg, m.degree + sum(deg(x) for x in w)):
            rep.fail(f"{m.label}{w} has the wrong degree", w)
    return rep


def check_linfty(m: BracketFamily, words: Sequence[tuple]) -> Report:
    rep = Report(f"{m.label} Jacobi")
    for w in words:
        rep.count()
        if jacobiator(m, w):
            rep.fail(f"Jacobiator of {m.label} is nonzero on {w}", w)
    return rep


def compare_jacobiator(m: BracketFamily, target: BracketFamily, words: Sequence[tuple],
                       name: str) -> Report:
    rep = Report(name)
    for w in words:
        rep.count()
        if jacobiator(m, w) != target.raw(w):
            rep.fail(f"Jacobiator differs from {target.label} on {w}", w)
    return rep


def check_JD(V: VAlgebra, P: Vector, words: Sequence[tuple]) -> Report:
    """Jacobiator of the brackets derived from ad(P) against those of ad([P,P]/2)."""
    E = DerivationSpec.inner(V.gla, P)
    return compare_jacobiator(derived_brackets(V, E), derived_brackets(V, E.square(), "D[E,E]"),
                              words, "JD")


def check_JD2(V: VAlgebra, E: DerivationSpec, words: Sequence[tuple]) -> Report:
    """Jacobiator of ``D_E`` against the brackets derived from ``E o E``."""
    return compare_jacobiator(derived_brackets(V, E), derived_brackets(V, E.square(), "D[E,E]"),
                              words, "JD2")


# --- coderivations -----------------------------------------------------------

class Coderivation:
    """Extension of a bracket family to a coderivation of S(a)."""

    def __init__(self, m: BracketFamily):
        self.family = m
        self.degree = m.degree
        self.letter_degree = m.letter_degree
        self._cache: dict = {}

    def word_image(self, w: tuple) -> Vector:
        v = self._cache.get(w)
        if v is not None:
            return v
        deg = self.letter_degree
        degs = [deg(x) for x in w]
        n = len(w)
        acc: dict = {}
        for r in range(n + 1):
            for sh in shuffles(r, n - r):
                sw = sh.act(w)
                out = self.family.raw(tuple(sw[:r]))
                if not out:
                    continue
                eps = koszul_sign(sh, degs)
                rest = tuple(sw[r:])
                for k, c in out.items():
                    add_word(acc, (k,) + rest, eps * c, deg)
        v = Vector.from_accumulator(acc)
        self._cache[w] = v
        return v

    def __call__(self, v: Vector) -> Vector:
        return linear_extend(self.word_image, v)


class CoderivationCommutator:
    """``[Q1, Q2] = Q1 Q2 - (-1)^(|Q1||Q2|) Q2 Q1`` acting on S(a)."""

    def __init__(self, q1, q2):
        self.q1, self.q2 = q1, q2
        self.degree = q1.degree + q2.degree
        self.letter_degree = q1.letter_degree
        self._sign = koszul(q1.degree, q2.degree)

    def __call__(self, v: Vector) -> Vector:
        return self.q1(self.q2(v)) - self._sign * self.q2(self.q1(v))


def corestriction(q, w: tuple) -> Vector:
    """Length-one component of ``q(w)`` as a vector of letters."""
    return words_to_letters(q(Vector.basis(w)))


def check_coderivation(q, words: Sequence[tuple]) -> Report:
    """Co-Leibniz rule ``Delta q = (q (x) 1 + 1 (x) q) Delta`` on basis words."""
    rep = Report("co-Leibniz")
    deg = q.letter_degree
    for w in words:
        rep.count()
        dw = coproduct(Vector.basis(w), deg)
        lhs = coproduct(q(Vector.basis(w)), deg)
        rhs = tensor_apply(q, None, dw) + tensor_apply(
            None, q, dw, lambda left: koszul(q.degree, sum(deg(x) for x in left)))
        if lhs != rhs:
            rep.fail(f"co-Leibniz rule fails on {w}", w)
    return rep


def check_codifferential(q: Coderivation, words: Sequence[tuple]) -> Report:
    """``pr Q^2`` equals the Jacobiator and Q squares to zero."""
    rep = Report("codifferential")
    for w in words:
        rep.count()
        sq = q(q(Vector.basis(w)))
        if words_to_letters(sq) != jacobiator(q.family, w):
            rep.fail(f"pr Q^2 differs from the Jacobiator on {w}", ("pr", w))
        if sq:
            rep.fail(f"Q^2 is nonzero on {w}", ("square", w))
    return rep


# --- morphisms ---------------------------------------------------------------

class CoalgMorphism:
    """Coalgebra morphism ``S(a1) -> S(a2)`` from degree-0 components ``U^n``, ``U^0 = 0``."""

    def __init__(self, u: BracketFamily, tgt_degree: Callable[[Key], int]):
        if u.degree != 0:
            raise ValueError("morphism components must have degree 0")
        self.family = u
        self.src_degree = u.letter_degree
        self.tgt_degree = tgt_degree
        self._cache: dict = {}

    def component(self, word: tuple) -> Vector:
        return self.family.raw(word) if word else Vector()

    def word_image(self, w: tuple) -> Vector:
        v = self._cache.get(w)
        if v is not None:
            return v
        degs = [self.src_degree(x) for x in w]
        acc: dict = {}
        for blocks in set_partitions(len(w)):
            parts = []
            for b in blocks:
                img = self.component(tuple(w[i] for i in b))
                if not img:
                    break
                parts.append(letters_to_words(img))
            else:
                prod = sym_product(parts, self.tgt_degree)
                if prod:
                    accumulate(acc, prod, partition_sign(blocks, degs))
        v = Vector.from_accumulator(acc)
        self._cache[w] = v
        return v

    def __call__(self, v: Vector) -> Vector:
        return linear_extend(self.word_image, v)


def morphism_defect(U: CoalgMorphism, q_src, q_tgt, w: tuple) -> Vector:
    """``pr(Q_tgt U - U Q_src)`` on a basis word."""
    e = Vector.basis(w)
    return words_to_letters(q_tgt(U(e)) - U(q_src(e)))


def check_linfty_morphism(U: CoalgMorphism, q_src, q_tgt, words: Sequence[tuple],
                          name: str = "L-infinity morphism") -> Report:
    rep = Report(name)
    for w in words:
        rep.count()
        if morphism_defect(U, q_src, q_tgt, w):
            rep.fail(f"morphism equation fails on {w}", w)
    return rep


def check_coalgebra_morphism(U: CoalgMorphism, words: Sequence[tuple]) -> Report:
    rep = Report("coalgebra morphism")
    for w in words:
        rep.count()
        lhs = coproduct(U(Vector.basis(w)), U.tgt_degree)
        rhs = tensor_apply(U, U, coproduct(Vector.basis(w), U.src_degree))
        if lhs != rhs:
            rep.fail(f"Delta U != (U (x) U) Delta on {w}", w)
    return rep


def linear_morphism(phi, V1: VAlgebra, V2: VAlgebra) -> CoalgMorphism:
    """Strict morphism with ``U^1 = proj_a phi`` and no higher components."""
    def fn(word: tuple) -> Vector:
        if len(word) == 1:
            return V2.proj_a(phi.column(word[0]))
        return Vector()
    return CoalgMorphism(BracketFamily(fn, 0, V1.degree, "U"), V2.degree)
