"""Gauge flows in the formal setting.

A degree-0 time-dependent derivation ``m_t`` is integrated to an automorphism
``phi_t`` of ``h[[t]]``; an adapted Maurer-Cartan derivation is transported
along it, and the induced L-infinity isomorphism ``U(t)`` is built both from its
closed recursive formula and by integrating its differential equation.

Everything is computed modulo ``t^(N+1)``: t-dependent vectors carry
:class:`FormalSeries` coefficients, so the L-infinity routines apply verbatim.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .core.combinatorics import (all_permutations, compositions, factorial_product,
                                 koszul_sign, partition_sign, set_partitions, sort_with_sign)
from .core.linear import LinMap, Vector, accumulate, series_map, series_vector
from .core.series import FormalSeries, as_series
from .lie import (DerivationSpec, VAlgebra, check_adapted, check_derivation,
                  commutator_derivation)
from .linfty import (BracketFamily, CoalgMorphism, Coderivation, CoderivationCommutator,
                     derived_brackets, morphism_defect)
from .report import Report
from .symalg import words_to_letters


class TimeDerivation:
    """``m_t = sum_k t^k m_k`` with degree-0 derivations ``m_k``, known to order ``N``."""

    def __init__(self, gla, coeffs: Sequence[DerivationSpec], order: int):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.gla = gla
        self.order = order
        coeffs = list(coeffs)[:order + 1]
        for m in coeffs:
            if m.degree != 0:
                raise ValueError(f"flow generators must have degree 0, got {m.degree}")
        while len(coeffs) < order + 1:
            coeffs.append(DerivationSpec(gla, 0))
        self.coeffs = coeffs

    @property
    def is_zero(self) -> bool:
        return all(m.ehat is None and not m.p_element for m in self.coeffs)

    def series(self) -> DerivationSpec:
        """The derivation ``m_t`` acting with series coefficients."""
        hats = [m.ehat for m in self.coeffs]
        hat = None
        if any(h is not None for h in hats):
            hat = series_map([h if h is not None else LinMap.zero() for h in hats])
        return DerivationSpec(self.gla, 0, hat, series_vector([m.p_element for m in self.coeffs]))

    def validate(self, V: VAlgebra, keys: Sequence | None = None) -> Report:
        """Each coefficient is a derivation that preserves p."""
        keys = V.window if keys is None else keys
        rep = Report("flow generator")
        for k, m in enumerate(self.coeffs):
            if m.ehat is not None:
                rep.merge(check_derivation(V.gla, m.ehat, keys), f"order {k}: ")
            for key in keys:
                if V.in_a(key):
                    continue
                rep.count()
                if V.proj_a(m.column(key)):
                    rep.fail(f"m_{k} moves {V.name(key)} out of p", (k, key))
        return rep


class FlowAutomorphism:
    """``phi_t`` with ``phi_0 = id`` solving ``d phi/dt = m_t o phi``."""

    def __init__(self, coeffs: Sequence[LinMap]):
        self.coeffs = list(coeffs)
        self.order = len(self.coeffs) - 1
        self._inverse = None

    @property
    def map(self) -> LinMap:
        return series_map(self.coeffs)

    @property
    def inverse_coeffs(self) -> list[LinMap]:
        if self._inverse is None:
            self._inverse = list(FormalSeries(self.coeffs).invert().coeffs)
        return self._inverse

    @property
    def inverse(self) -> LinMap:
        return series_map(self.inverse_coeffs)

    def check(self, V: VAlgebra, keys: Sequence | None = None) -> Report:
        """Bracket automorphism and p-preservation, coefficientwise."""
        keys = list(V.window if keys is None else keys)
        rep = Report("flow")
        phi = self.map
        for x in keys:
            for y in keys:
                rep.count()
                lhs = phi(V.gla._cached(x, y))
                if lhs != V.gla.bracket(phi.column(x), phi.column(y)):
                    rep.fail(f"phi_t does not preserve [{V.name(x)}, {V.name(y)}]", ("bracket", x, y))
        for x in keys:
            if V.in_a(x):
                continue
            rep.count()
            if V.proj_a(phi.column(x)):
                rep.fail(f"phi_t moves {V.name(x)} out of p", ("p", x))
        inv = self.inverse
        for x in keys:
            rep.count()
            if inv(phi.column(x)) != Vector.basis(x):
                rep.fail(f"phi_t^-1 phi_t != id at {V.name(x)}", ("inverse", x))
        return rep


def integrate_flow(m: TimeDerivation, V: VAlgebra | None = None) -> FlowAutomorphism:
    """Solve ``(k+1) phi_{k+1} = sum_{i+j=k} m_i o phi_j`` with ``phi_0 = id``."""
    if V is not None:
        rep = m.validate(V)
        if not rep:
            raise ValueError("flow generator rejected: " + "; ".join(rep.failures[:3]))
    phis = [LinMap.identity()]
    for k in range(m.order):
        total = None
        for i in range(k + 1):
            term = m.coeffs[i].as_map * phis[k - i]
            total = term if total is None else total + term
        phis.append(Fraction(1, k + 1) * total)
    return FlowAutomorphism(phis)


def transport_mc(E: DerivationSpec, flow: FlowAutomorphism) -> DerivationSpec:
    """``E_t = phi_t o ehat o phi_t^-1 + [phi_t(P), .]``."""
    phi = flow.map
    hat = None
    if E.ehat is not None:
        hat = phi * E.ehat * flow.inverse
    return DerivationSpec(E.gla, E.degree, hat, phi(E.p_element))


def check_transported(V: VAlgebra, E_t: DerivationSpec, keys: Sequence | None = None) -> Report:
    rep = Report("transported MC")
    rep.merge(check_adapted(V, E_t))
    for k in (V.window if keys is None else keys):
        rep.count()
        if E_t(E_t.column(k)):
            rep.fail(f"E_t o E_t != 0 at {V.name(k)}", k)
    return rep


def build_M(V: VAlgebra, m: TimeDerivation) -> BracketFamily:
    """Derived brackets of ``m_t``; the 0-ary part is ``proj_a`` of its inner generator."""
    return derived_brackets(V, m.series(), "M")


# --- the isomorphism U(t) -------------------------------------------------------

class SymmetricFamily(BracketFamily):
    """Graded symmetric family evaluated through canonical (sorted) words."""

    def raw(self, word: tuple) -> Vector:
        sign, w = sort_with_sign(word, self.letter_degree)
        if sign == 0:
            return Vector()
        v = super().raw(w)
        return v if sign == 1 else -v


def _nested(gla, head: Vector, args: Sequence[Vector]) -> Vector:
    for a in args:
        if not head:
            break
        head = gla.bracket(head, a)
    return head


def build_U(V: VAlgebra, flow: FlowAutomorphism) -> SymmetricFamily:
    """``U^1 = proj_a phi_t`` and, for ``n >= 2``,
    ``U^n = sum_sigma e sum_mu 1/(n k! mu!) proj_a [..[phi_t x, U^mu1(..)].., U^muk(..)]``.
    """
    phi = flow.map

    def fn(w: tuple) -> Vector:
        n = len(w)
        if n == 0:
            return Vector()
        if n == 1:
            return V.proj_a(phi.column(w[0]))
        degs = [V.degree(x) for x in w]
        acc: dict = {}
        for perm in all_permutations(n):
            xs = perm.act(w)
            eps = koszul_sign(perm, degs)
            head = phi.column(xs[0])
            for k in range(1, n):
                for mu in compositions(n - 1, k):
                    args, pos = [], 1
                    for part in mu:
                        args.append(U.raw(tuple(xs[pos:pos + part])))
                        pos += part
                    val = V.proj_a(_nested(V.gla, head, args))
                    if val:
                        weight = Fraction(eps, n * math.factorial(k) * factorial_product(mu))
                        accumulate(acc, val, weight)
        return Vector.from_accumulator(acc)

    U = SymmetricFamily(fn, 0, V.degree, "U")
    return U


def eqn_rhs(D: BracketFamily, U: BracketFamily, w: tuple) -> Vector:
    """``sum_sigma e sum_k sum_l 1/(k! l!) D^k(U^l1 .. U^lk)`` summed literally."""
    n = len(w)
    degs = [D.letter_degree(x) for x in w]
    acc: dict = {}
    for perm in all_permutations(n):
        xs = perm.act(w)
        eps = koszul_sign(perm, degs)
        for k in range(1, n + 1):
            for ls in compositions(n, k):
                args, pos = [], 0
                for part in ls:
                    args.append(U.raw(tuple(xs[pos:pos + part])))
                    pos += part
                val = D(*args)
                if val:
                    accumulate(acc, val, Fraction(eps, math.factorial(k) * factorial_product(ls)))
    return Vector.from_accumulator(acc)


def second_sum(D: BracketFamily, U: BracketFamily, w: tuple) -> Vector:
    """``sum_sigma e sum_alpha 1/(n (r-1)! (alpha1-1)! alpha2! ..) D^r(U^alpha1 ..)``."""
    n = len(w)
    degs = [D.letter_degree(x) for x in w]
    acc: dict = {}
    for perm in all_permutations(n):
        xs = perm.act(w)
        eps = koszul_sign(perm, degs)
        for r in range(1, n + 1):
            for alpha in compositions(n, r):
                args, pos = [], 0
                for part in alpha:
                    args.append(U.raw(tuple(xs[pos:pos + part])))
                    pos += part
                val = D(*args)
                if val:
                    denom = (n * math.factorial(r - 1) * math.factorial(alpha[0] - 1)
                             * factorial_product(alpha[1:]))
                    accumulate(acc, val, Fraction(eps, denom))
    return Vector.from_accumulator(acc)


def boxes_sum(D: BracketFamily, U: BracketFamily, w: tuple, rep: Report | None = None) -> Vector:
    """Sum over every way of distributing the letters into boxes, once per way.

    Boxes holding equally many letters are indistinguishable; arguments are
    ordered by box size.  When ``rep`` is given the number of ways of each box
    type is checked against ``n! / (prod w_j! (l_j!)^w_j)``.
    """
    n = len(w)
    degs = [D.letter_degree(x) for x in w]
    by_type: dict = {}
    for blocks in set_partitions(n):
        by_type.setdefault(tuple(sorted(len(b) for b in blocks)), []).append(blocks)
    acc: dict = {}
    for sizes, ways in sorted(by_type.items()):
        if rep is not None:
            rep.count()
            denom = math.prod(math.factorial(sizes.count(l)) * math.factorial(l) ** sizes.count(l)
                              for l in set(sizes))
            expected = math.factorial(n) // denom
            if expected != len(ways):
                rep.fail(f"box type {sizes}: {len(ways)} ways, expected {expected}")
        for blocks in ways:
            ordered = sorted(blocks, key=lambda b: (len(b), b))
            val = D(*[U.raw(tuple(w[i] for i in b)) for b in ordered])
            if val:
                accumulate(acc, val, partition_sign(ordered, degs))
    return Vector.from_accumulator(acc)


def _partition_rhs(D: BracketFamily, lower, w: tuple, current: Vector) -> Vector:
    """Right side of the U equation over set partitions, with ``current`` standing for ``U^n(w)``."""
    degs = [D.letter_degree(x) for x in w]
    acc: dict = {}
    for blocks in set_partitions(len(w)):
        if len(blocks) == 1:
            args = [current]
        else:
            args = [lower(tuple(w[i] for i in b)) for b in blocks]
        val = D(*args)
        if val:
            accumulate(acc, val, partition_sign(blocks, degs))
    return Vector.from_accumulator(acc)


def _integrate(v: Vector, order: int) -> Vector:
    return v.map_coefficients(lambda c: as_series(c, order).integrate().truncate(order))


def integrate_U(V: VAlgebra, m: TimeDerivation) -> SymmetricFamily:
    """U(t) from ``dU/dt = M(t) o U(t)``, ``U(0) = id``, integrated order by order."""
    D = build_M(V, m)
    N = m.order

    def fn(w: tuple) -> Vector:
        n = len(w)
        if n == 0:
            return Vector()
        start = Vector.basis(w[0]) if n == 1 else Vector()
        u = start
        for _ in range(N):
            u = start + _integrate(_partition_rhs(D, U.raw, w, u), N)
        return u

    U = SymmetricFamily(fn, 0, V.degree, "U*")
    return U


# --- checks ---------------------------------------------------------------------

def check_U_ode(D: BracketFamily, U: BracketFamily, words: Sequence[tuple], order: int) -> Report:
    """``dU^n/dt`` against the right side of the U equation, modulo ``t^N``."""
    rep = Report("U equation", note=f"N={order}")
    if order == 0:
        rep.note += ", vacuous"
        return rep
    for w in words:
        if not w:
            continue
        rep.count()
        lhs = U.raw(w).t_derivative(order)
        rhs = eqn_rhs(D, U, w).t_truncate(order - 1)
        if lhs != rhs:
            rep.fail(f"dU/dt differs from the right side on {w}", w)
    return rep


def check_U_unique(U1: BracketFamily, U2: BracketFamily, words: Sequence[tuple]) -> Report:
    rep = Report("U uniqueness")
    for w in words:
        rep.count()
        if U1.raw(w) != U2.raw(w):
            rep.fail(f"recursive and integrated U differ on {w}", w)
    return rep


def check_Q_ode(V: VAlgebra, E_t: DerivationSpec, m: TimeDerivation, words: Sequence[tuple],
                order: int) -> Report:
    """``dQ/dt = pr(M Q - Q M)`` modulo ``t^N``, and both against ``D_[m_t, E_t]``."""
    rep = Report("Q equation", note=f"N={order}")
    if order == 0:
        rep.note += ", vacuous"
        return rep
    m_t = m.series()
    Dt = derived_brackets(V, E_t)
    comm = CoderivationCommutator(Coderivation(derived_brackets(V, m_t, "M")), Coderivation(Dt))
    tau = derived_brackets(V, commutator_derivation(m_t, E_t), "D[m,E]")
    for w in words:
        rep.count()
        lhs = Dt.raw(w).t_derivative(order)
        rhs = words_to_letters(comm(Vector.basis(w))).t_truncate(order - 1)
        if lhs != rhs:
            rep.fail(f"dQ/dt != pr[M, Q] on {w}", ("commutator", w))
        if rhs != tau.raw(w).t_truncate(order - 1):
            rep.fail(f"pr[M, Q] != D_[m,E] on {w}", ("tau", w))
    return rep


def check_Z(U: BracketFamily, Q_t: Coderivation, Q_0: Coderivation, words: Sequence[tuple],
            tgt_degree) -> Report:
    """``pr(Q(t) U(t) - U(t) Q(0)) = 0``, including the 0-ary component."""
    rep = Report("Z")
    morph = CoalgMorphism(U, tgt_degree)
    for w in words:
        rep.count()
        if morphism_defect(morph, Q_0, Q_t, w):
            rep.fail(f"Z(t) is nonzero on {w}", w)
    return rep


def check_rhs_forms(D: BracketFamily, U: BracketFamily, w: tuple) -> Report:
    """The literal, second-sum and boxes forms of the U equation agree on one word."""
    rep = Report("right side forms")
    first = eqn_rhs(D, U, w)
    second = second_sum(D, U, w)
    boxes = boxes_sum(D, U, w, rep)
    rep.count(2)
    if first != second:
        rep.fail(f"first and second sums differ on {w}", ("2nd", w))
    if first != boxes:
        rep.fail(f"first sum and boxes form differ on {w}", ("boxes", w))
    return rep
