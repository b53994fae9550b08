"""The graded symmetric coalgebra S(a) on a set of basis letters.

Elements are :class:`Vector` objects keyed by canonical words (sorted tuples
of letters).  The coproduct is the unshuffle coproduct, so a repeated even
letter contributes with multiplicity.
"""

from __future__ import annotations

from typing import Callable, Hashable, Sequence

from .core.combinatorics import koszul_sign, shuffles, sort_with_sign
from .core.linear import Vector, accumulate

Key = Hashable


def word_degree(word: Sequence[Key], degree: Callable[[Key], int]) -> int:
    return sum(degree(x) for x in word)


def add_word(acc: dict, letters: Sequence[Key], coeff, degree: Callable) -> None:
    """``acc += coeff * letters`` after sorting the letters into canonical order."""
    sign, word = sort_with_sign(letters, degree)
    if sign == 0:
        return
    term = coeff if sign == 1 else -coeff
    acc[word] = acc[word] + term if word in acc else term


def word(letters: Sequence[Key], degree: Callable, coeff=1) -> Vector:
    acc: dict = {}
    add_word(acc, letters, coeff, degree)
    return Vector.from_accumulator(acc)


def sym_product(factors: Sequence[Vector], degree: Callable) -> Vector:
    """Product in S(a) of elements given as vectors of words."""
    acc: dict = {(): 1}
    for f in factors:
        nxt: dict = {}
        for w1, c1 in acc.items():
            for w2, c2 in f.items():
                add_word(nxt, w1 + w2, c1 * c2, degree)
        acc = nxt
    return Vector.from_accumulator(acc)


def letters_to_words(v: Vector) -> Vector:
    """Embed a vector of letters as length-one words."""
    return Vector._wrap({(k,): c for k, c in v.items()})


def words_to_letters(v: Vector, length: int = 1) -> Vector:
    """Component of a word vector of the given length, as letters when ``length == 1``."""
    if length == 1:
        return Vector._wrap({w[0]: c for w, c in v.items() if len(w) == 1})
    return v.restrict(lambda w: len(w) == length)


def unshuffle_terms(w: Sequence[Key], degree: Callable):
    """Yield ``(sign, left, right)`` over all unshuffles of a word."""
    n = len(w)
    degs = [degree(x) for x in w]
    for r in range(n + 1):
        for sh in shuffles(r, n - r):
            sw = sh.act(w)
            yield koszul_sign(sh, degs), tuple(sw[:r]), tuple(sw[r:])


def coproduct(v: Vector, degree: Callable) -> Vector:
    """Unshuffle coproduct; the result is keyed by pairs of canonical words."""
    acc: dict = {}
    for w, c in v.items():
        for s, left, right in unshuffle_terms(w, degree):
            key = (left, right)
            term = c if s == 1 else -c
            acc[key] = acc[key] + term if key in acc else term
    return Vector.from_accumulator(acc)


def tensor_apply(f: Callable[[Vector], Vector] | None, g: Callable[[Vector], Vector] | None,
                 t: Vector, sign_of: Callable[[tuple], int] | None = None) -> Vector:
    """``(f (x) g)`` on a tensor vector; ``None`` stands for the identity.

    ``sign_of(left)`` supplies the Koszul sign of moving ``g`` past the left factor.
    """
    acc: dict = {}
    for (left, right), c in t.items():
        s = sign_of(left) if sign_of is not None else 1
        lv = Vector.basis(left) if f is None else f(Vector.basis(left))
        rv = Vector.basis(right) if g is None else g(Vector.basis(right))
        for lw, lc in lv.items():
            for rw, rc in rv.items():
                key = (lw, rw)
                term = s * c * lc * rc
                acc[key] = acc[key] + term if key in acc else term
    return Vector.from_accumulator(acc)


def linear_extend(fn: Callable[[tuple], Vector], v: Vector) -> Vector:
    acc: dict = {}
    for w, c in v.items():
        accumulate(acc, fn(w), c)
    return Vector.from_accumulator(acc)
