"""Polynomial multivector fields on R^n with the Schouten-Nijenhuis bracket,
and the V-algebra attached to a linear submanifold.

A basis key is ``(exps, idx)``: the monomial ``x^exps`` times the wedge of
``d_i`` for ``i`` in the increasing tuple ``idx`` (0-based).  Its Lie degree
is ``len(idx) - 1``.  Multivectors are treated as functions of even ``x_i``
and odd ``theta_i``; the bracket is

    [X, Y] = sum_i (X d/dtheta_i) (d/dx_i Y) - (X d/dx_i) (d/dtheta_i Y)

with right derivatives on ``X`` and left derivatives on ``Y``.

The algebra is kept exact and infinite-dimensional: keys are produced on
demand, and finite key windows only bound which identities get checked.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .core.linear import LinMap, Vector, accumulate
from .lie import DerivationSpec, GradedLieAlgebra, VAlgebra
from .linfty import BracketFamily, derived_brackets
from .report import Report

Key = tuple  # (exps, idx)


def merge_indices(I: tuple, J: tuple) -> tuple[int, tuple]:
    """Sign and sorted result of ``theta_I theta_J``; sign 0 when they overlap."""
    if set(I) & set(J):
        return 0, ()
    inv = sum(1 for a in I for b in J if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(I + J))


def _shift(exps: tuple, i: int, delta: int) -> tuple:
    return exps[:i] + (exps[i] + delta,) + exps[i + 1:]


def _add(e1: tuple, e2: tuple) -> tuple:
    return tuple(a + b for a, b in zip(e1, e2))


class SchoutenAlgebra(GradedLieAlgebra):
    def __init__(self, dim: int, names: Sequence[str] | None = None,
                 window: Sequence[Key] | None = None):
        super().__init__()
        self.dim = dim
        self.names = list(names) if names else [f"x{i + 1}" for i in range(dim)]
        if len(self.names) != dim:
            raise ValueError("need one variable name per coordinate")
        self._window = list(window) if window is not None else None

    def key(self, exps: Iterable[int], idx: Iterable[int]) -> Key:
        exps, idx = tuple(int(e) for e in exps), tuple(int(i) for i in idx)
        if len(exps) != self.dim or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps}")
        if any(not 0 <= i < self.dim for i in idx) or len(set(idx)) != len(idx):
            raise ValueError(f"bad index set {idx}")
        return exps, tuple(sorted(idx))

    def element(self, terms: Iterable[tuple[Iterable[int], Iterable[int], object]]) -> Vector:
        """Vector from ``(exps, idx, coeff)`` terms; ``idx`` is in any order."""
        acc: dict = {}
        for exps, idx, c in terms:
            seq = list(idx)
            sign = 1
            for a in range(len(seq)):
                for b in range(a + 1, len(seq)):
                    if seq[a] > seq[b]:
                        sign = -sign
            k = self.key(exps, idx)
            accumulate(acc, Vector.basis(k), sign * Fraction(c))
        return Vector.from_accumulator(acc)

    def degree(self, key: Key) -> int:
        return len(key[1]) - 1

    def name(self, key: Key) -> str:
        exps, idx = key
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, exps) if e)
        vec = "^".join(f"d{self.names[i]}" for i in idx)
        if mono and vec:
            return f"{mono}*{vec}"
        return mono or vec or "1"

    def basis_keys(self) -> list:
        if self._window is None:
            raise ValueError("the Schouten algebra is infinite; give a key window")
        return list(self._window)

    def bracket_basis(self, X: Key, Y: Key) -> Vector:
        (e1, I1), (e2, I2) = X, Y
        acc: dict = {}
        for pos, i in enumerate(I1):
            if not e2[i]:
                continue
            s, I = merge_indices(I1[:pos] + I1[pos + 1:], I2)
            if s:
                if (len(I1) - pos - 1) % 2:
                    s = -s
                k = (_shift(_add(e1, e2), i, -1), I)
                acc[k] = acc.get(k, 0) + s * e2[i]
        for pos, i in enumerate(I2):
            if not e1[i]:
                continue
            s, I = merge_indices(I1, I2[:pos] + I2[pos + 1:])
            if s:
                if pos % 2:
                    s = -s
                k = (_shift(_add(e1, e2), i, -1), I)
                acc[k] = acc.get(k, 0) - s * e1[i]
        return Vector({k: Fraction(c) for k, c in acc.items() if c})

    def wedge(self, X: Vector, Y: Vector) -> Vector:
        acc: dict = {}
        for (e1, I1), c1 in X.items():
            for (e2, I2), c2 in Y.items():
                s, I = merge_indices(I1, I2)
                if s:
                    k = (_add(e1, e2), I)
                    term = s * c1 * c2
                    acc[k] = acc[k] + term if k in acc else term
        return Vector.from_accumulator(acc)

    def wedge_degree(self, key: Key) -> int:
        return len(key[1])


@dataclass(frozen=True)
class SubmanifoldContext:
    """``S = {x_k = .. = x_(n-1) = 0}`` in R^n: the first ``tangent`` coordinates
    run along S, the rest are normal.

    ``D`` bounds the normal and ``D_tan`` the tangential polynomial degree of
    the keys used in exhaustive checks.
    """

    dim: int
    tangent: int
    D: int = 1
    D_tan: int = 1

    def __post_init__(self):
        if not 0 <= self.tangent <= self.dim:
            raise ValueError("tangent dimension must lie between 0 and dim")
        if self.D < 0 or self.D_tan < 0:
            raise ValueError("degree bounds must be non-negative")

    @property
    def normal(self) -> range:
        return range(self.tangent, self.dim)

    def normal_degree(self, exps: tuple) -> int:
        return sum(exps[self.tangent:])

    def tangent_degree(self, exps: tuple) -> int:
        return sum(exps[:self.tangent])

    def in_a(self, key: Key) -> bool:
        exps, idx = key
        return not any(exps[self.tangent:]) and all(i >= self.tangent for i in idx)

    def _monomials(self, count: int, max_deg: int) -> list[tuple]:
        return [e for e in product(range(max_deg + 1), repeat=count) if sum(e) <= max_deg]

    def window(self) -> list[Key]:
        keys = []
        tans = self._monomials(self.tangent, self.D_tan)
        norms = self._monomials(self.dim - self.tangent, self.D)
        subsets = [c for r in range(self.dim + 1) for c in combinations(range(self.dim), r)]
        for t in tans:
            for nm in norms:
                for I in subsets:
                    keys.append((t + nm, I))
        return sorted(keys)

    def a_letters(self) -> list[Key]:
        zeros = (0,) * (self.dim - self.tangent)
        subsets = [c for r in range(len(self.normal) + 1) for c in combinations(self.normal, r)]
        return sorted((t + zeros, I) for t in self._monomials(self.tangent, self.D_tan)
                      for I in subsets)


def build_valgebra(ctx: SubmanifoldContext, names: Sequence[str] | None = None) -> VAlgebra:
    gla = SchoutenAlgebra(ctx.dim, names, ctx.window())
    return VAlgebra(gla, ctx.in_a, ctx.window(), ctx.a_letters())


def check_poisson(V: VAlgebra, ctx: SubmanifoldContext, pi: Vector) -> Report:
    """``[pi, pi]`` lies in the (D+1)-st power of the vanishing ideal of S."""
    rep = Report("Poisson", note="exact")
    rep.count()
    if not pi.is_homogeneous(V.degree, 1):
        rep.fail("pi is not a bivector")
        return rep
    sq = V.gla.bracket(pi, pi)
    if sq:
        rep.note = f"[pi,pi] in I^{ctx.D + 1}"
    low = [k for k in sq.keys() if ctx.normal_degree(k[0]) <= ctx.D]
    if low:
        rep.fail(f"[pi, pi] has terms of normal degree <= {ctx.D}", low[0])
    return rep


def poisson_derivation(V: VAlgebra, pi: Vector) -> DerivationSpec:
    return DerivationSpec.inner(V.gla, pi, 1)


def pinfty_brackets(V: VAlgebra, pi: Vector) -> BracketFamily:
    return derived_brackets(V, poisson_derivation(V, pi))


def is_coisotropic(ctx: SubmanifoldContext, pi: Vector) -> bool:
    """``pi(dy_i, dy_j)`` vanishes on S for all normal directions ``i < j``."""
    for i, j in combinations(ctx.normal, 2):
        for (exps, idx), c in pi.items():
            if idx == (i, j) and all(exps[k] == 0 for k in ctx.normal):
                return False
    return True


def coisotropy_obstruction(ctx: SubmanifoldContext, pi: Vector) -> Vector:
    """``proj_a pi``: the part of pi pairing conormal directions, restricted to S."""
    return pi.restrict(ctx.in_a)


def is_flat(V: VAlgebra, pi: Vector) -> bool:
    return not pinfty_brackets(V, pi).raw(())


def is_tangent(ctx: SubmanifoldContext, field: Vector) -> bool:
    """Normal components of a vector field vanish on S."""
    for (exps, idx), c in field.items():
        if len(idx) != 1:
            return False
        if idx[0] >= ctx.tangent and ctx.normal_degree(exps) == 0:
            return False
    return True


def check_multiderivation(V: VAlgebra, D: BracketFamily, arity: int, trials: int,
                          rng: random.Random) -> Report:
    """``D(.., y z) = D(.., y) z + (-1)^((|E| + sum|x|)(|y|+1)) y D(.., z)`` in the last slot."""
    gla = V.gla
    rep = Report(f"multiderivation D^{arity}")
    letters = V.a_letters
    for _ in range(trials):
        xs = tuple(rng.choice(letters) for _ in range(arity - 1))
        y, z = rng.choice(letters), rng.choice(letters)
        ey, ez = Vector.basis(y), Vector.basis(z)
        yz = gla.wedge(ey, ez)
        if not yz:
            continue
        rep.count()
        lhs = D(*[Vector.basis(x) for x in xs], yz)
        w_deg = D.degree + sum(V.degree(x) for x in xs)
        s = -1 if (w_deg * gla.wedge_degree(y)) % 2 else 1
        rhs = (gla.wedge(D.raw(xs + (y,)), ez)
               + s * gla.wedge(ey, D.raw(xs + (z,))))
        if lhs != rhs:
            rep.fail(f"D^{arity} is not a derivation at {[V.name(k) for k in xs + (y, z)]}",
                     xs + (y, z))
    return rep


def field_derivation(V: VAlgebra, field: Vector) -> DerivationSpec:
    """The degree-0 derivation ``[Y, .]`` of a vector field."""
    return DerivationSpec.inner(V.gla, field, 0)


def rescaling(gla: SchoutenAlgebra, lambdas: Sequence[Fraction]) -> LinMap:
    """Push-forward along ``x_i -> lambda_i x_i``."""
    lambdas = [Fraction(l) for l in lambdas]
    if any(l == 0 for l in lambdas):
        raise ValueError("rescaling factors must be nonzero")

    def fn(key: Key) -> Vector:
        exps, idx = key
        c = Fraction(1)
        for l, e in zip(lambdas, exps):
            c /= l ** e
        for i in idx:
            c *= lambdas[i]
        return Vector.basis(key, c)

    return LinMap(0, fn=fn, label="rescaling")
