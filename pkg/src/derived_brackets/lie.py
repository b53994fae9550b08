"""Graded Lie algebras, V-algebra splittings and adapted derivations."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .core.linear import GradedBasis, LinMap, Vector, accumulate
from .report import Report

Key = Hashable
HALF = Fraction(1, 2)


def koszul(a: int, b: int) -> int:
    return -1 if (a % 2 and b % 2) else 1


class GradedLieAlgebra:
    """Bracket on a graded space given by its values on pairs of basis keys.

    Subclasses provide ``degree``, ``bracket_basis``, ``name`` and a finite
    list of keys (``basis_keys``) over which exhaustive checks run.  For a
    finite algebra that list is the whole basis.
    """

    def __init__(self):
        self._bracket_cache: dict = {}

    def degree(self, key: Key) -> int:
        raise NotImplementedError

    def bracket_basis(self, a: Key, b: Key) -> Vector:
        raise NotImplementedError

    def name(self, key: Key) -> str:
        return str(key)

    def basis_keys(self) -> list:
        raise NotImplementedError

    def _cached(self, a: Key, b: Key) -> Vector:
        v = self._bracket_cache.get((a, b))
        if v is None:
            v = self.bracket_basis(a, b)
            self._bracket_cache[(a, b)] = v
        return v

    def bracket(self, x: Vector, y: Vector) -> Vector:
        acc: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                val = self._cached(a, b)
                if val:
                    accumulate(acc, val, ca * cb)
        return Vector.from_accumulator(acc)

    def ad(self, z: Vector, degree: int | None = None) -> LinMap:
        if degree is None:
            degree = z.degree(self.degree) or 0
        return LinMap(degree, fn=lambda k: self.bracket(z, Vector.basis(k)))

    def vector_degree(self, v: Vector) -> int | None:
        return v.degree(self.degree)

    def format(self, v: Vector) -> str:
        return v.format(self.name)


class TableGLA(GradedLieAlgebra):
    """Finite graded Lie algebra from structure constants.

    ``table`` maps ``(i, j)`` with ``i <= j`` to ``[e_i, e_j]``; the opposite
    order follows from graded skew-symmetry.  An explicitly given ``(j, i)``
    entry is kept as-is so that inconsistent input can be diagnosed.
    """

    def __init__(self, basis: GradedBasis, table: Mapping[tuple[int, int], Vector]):
        super().__init__()
        self.basis = basis
        self.table = {k: v for k, v in table.items() if v}

    @classmethod
    def from_entries(cls, basis: GradedBasis, entries: Iterable[tuple[int, int, Vector]]) -> TableGLA:
        raw = {}
        for i, j, v in entries:
            raw[(i, j)] = v
        table = {}
        for (i, j), v in raw.items():
            if i > j and (j, i) not in raw:
                s = -koszul(basis.degree(i), basis.degree(j))
                table[(j, i)] = s * v
            else:
                table[(i, j)] = v
        return cls(basis, table)

    def degree(self, key: int) -> int:
        return self.basis.degree(key)

    def name(self, key: int) -> str:
        return self.basis.name(key)

    def basis_keys(self) -> list[int]:
        return list(range(len(self.basis)))

    def bracket_basis(self, a: int, b: int) -> Vector:
        v = self.table.get((a, b))
        if v is not None:
            return v
        v = self.table.get((b, a))
        if v is not None:
            return -koszul(self.degree(a), self.degree(b)) * v
        return Vector()

    def vector(self, terms: Mapping[str, object]) -> Vector:
        return Vector({self.basis.index(n): Fraction(c) for n, c in terms.items()})


def validate_gla(A: GradedLieAlgebra, keys: Sequence[Key] | None = None,
                 triples: Iterable[tuple[Key, Key, Key]] | None = None) -> Report:
    """Homogeneity, skew-symmetry and the graded Jacobi identity on basis elements."""
    keys = list(A.basis_keys() if keys is None else keys)
    rep = Report("GLA")
    deg, name = A.degree, A.name
    if isinstance(A, TableGLA):
        for i, j in sorted(A.table):
            rep.count()
            if not A.table[(i, j)].is_homogeneous(deg, deg(i) + deg(j)):
                rep.fail(f"[{name(i)}, {name(j)}] is not homogeneous of degree {deg(i) + deg(j)}",
                         ("degree", i, j))
    for x, y in product(keys, repeat=2):
        if x > y:
            continue
        rep.count()
        lhs = A.bracket_basis(x, y)
        rhs = A.bracket_basis(y, x)
        if lhs + koszul(deg(x), deg(y)) * rhs:
            rep.fail(f"skew-symmetry violated for ({name(x)}, {name(y)})", ("skew", x, y))
    if triples is None:
        triples = product(keys, repeat=3)
    for x, y, z in triples:
        rep.count()
        ex, ey, ez = Vector.basis(x), Vector.basis(y), Vector.basis(z)
        lhs = A.bracket(ex, A._cached(y, z))
        rhs = A.bracket(A._cached(x, y), ez) + koszul(deg(x), deg(y)) * A.bracket(ey, A._cached(x, z))
        if lhs != rhs:
            rep.fail(f"Jacobi violated for ({name(x)}, {name(y)}, {name(z)})", ("jacobi", x, y, z))
    return rep


class VAlgebra:
    """Graded Lie algebra with a basis-aligned splitting ``h = a + p``.

    ``in_a`` decides membership of a basis key in ``a``; ``window`` is the
    finite set of keys used for exhaustive checks (the whole basis when finite).
    """

    def __init__(self, gla: GradedLieAlgebra, in_a: Callable[[Key], bool] | Iterable[Key],
                 window: Sequence[Key] | None = None, a_letters: Sequence[Key] | None = None):
        self.gla = gla
        if callable(in_a):
            self.in_a = in_a
        else:
            a_set = frozenset(in_a)
            self.in_a = a_set.__contains__
        self.window = sorted(gla.basis_keys() if window is None else window)
        self.a_letters = sorted(a_letters) if a_letters is not None else [
            k for k in self.window if self.in_a(k)]

    @property
    def p_window(self) -> list:
        return [k for k in self.window if not self.in_a(k)]

    def proj_a(self, v: Vector) -> Vector:
        return v.restrict(self.in_a)

    def proj_p(self, v: Vector) -> Vector:
        return v.restrict(lambda k: not self.in_a(k))

    def degree(self, key: Key) -> int:
        return self.gla.degree(key)

    def name(self, key: Key) -> str:
        return self.gla.name(key)

    def bracket(self, x: Vector, y: Vector) -> Vector:
        return self.gla.bracket(x, y)


def validate_valgebra(V: VAlgebra) -> Report:
    rep = Report("V-algebra")
    A, name = V.gla, V.name
    pp_ok = aa_proj_ok = proj_ok = True
    for x, y in product(V.window, repeat=2):
        xa, ya = V.in_a(x), V.in_a(y)
        br = A._cached(x, y)
        rep.count()
        if xa and ya and br:
            rep.fail(f"[{name(x)}, {name(y)}] != 0 inside a", ("aa", x, y))
            if V.proj_a(br):
                aa_proj_ok = False
        if not xa and not ya and V.proj_a(br):
            pp_ok = False
            rep.fail(f"[{name(x)}, {name(y)}] leaves p", ("pp", x, y))
        ex, ey = Vector.basis(x), Vector.basis(y)
        lhs = V.proj_a(br)
        rhs = V.proj_a(A.bracket(V.proj_a(ex), ey)) + V.proj_a(A.bracket(ex, V.proj_a(ey)))
        if lhs != rhs:
            proj_ok = False
            rep.fail(f"projection identity fails on ({name(x)}, {name(y)})", ("projection", x, y))
    if proj_ok != (pp_ok and aa_proj_ok):
        rep.fail("projection identity and subalgebra criterion disagree")
    return rep


class DerivationSpec:
    """Derivation ``x -> ehat(x) + [P, x]`` of degree ``degree``.

    ``ehat`` may be ``None`` (the derivation is then inner).
    """

    def __init__(self, gla: GradedLieAlgebra, degree: int, ehat: LinMap | None = None,
                 p_element: Vector | None = None):
        self.gla = gla
        self.degree = int(degree)
        if ehat is not None and ehat.degree != self.degree:
            raise ValueError(f"ehat has degree {ehat.degree}, expected {self.degree}")
        self.ehat = ehat
        self.p_element = p_element if p_element is not None else Vector()
        self._map = LinMap(self.degree, fn=self._column)

    @classmethod
    def inner(cls, gla: GradedLieAlgebra, P: Vector, degree: int | None = None) -> DerivationSpec:
        if degree is None:
            degree = P.degree(gla.degree)
            if degree is None:
                raise ValueError("degree of a zero inner derivation must be given")
        return cls(gla, degree, None, P)

    def _column(self, key: Key) -> Vector:
        e = Vector.basis(key)
        out = self.gla.bracket(self.p_element, e)
        if self.ehat is not None:
            out = out + self.ehat.column(key)
        return out

    def __call__(self, x: Vector) -> Vector:
        return self._map(x)

    def column(self, key: Key) -> Vector:
        return self._map.column(key)

    @property
    def as_map(self) -> LinMap:
        return self._map

    def square(self) -> DerivationSpec:
        """``E o E`` for odd ``E``, decomposed as ``ehat^2 + [ehat(P) + [P,P]/2, .]``."""
        if self.degree % 2 == 0:
            raise ValueError("E o E is a derivation only for odd E")
        P = self.p_element
        new_p = HALF * self.gla.bracket(P, P)
        new_hat = None
        if self.ehat is not None:
            new_p = new_p + self.ehat(P)
            new_hat = self.ehat * self.ehat
        return DerivationSpec(self.gla, 2 * self.degree, new_hat, new_p)

    def scaled(self, c) -> DerivationSpec:
        return DerivationSpec(self.gla, self.degree,
                              None if self.ehat is None else c * self.ehat, c * self.p_element)


def apply_derivation(E: DerivationSpec, x: Vector) -> Vector:
    return E(x)


def commutator_derivation(m: DerivationSpec, E: DerivationSpec) -> DerivationSpec:
    """``[m, E] = [m, ehat] + [m(P), .]``; the inner generator is ``m(P)``."""
    s = koszul(m.degree, E.degree)
    hat = None
    if E.ehat is not None:
        hat = m.as_map * E.ehat - s * (E.ehat * m.as_map)
    return DerivationSpec(E.gla, m.degree + E.degree, hat, m(E.p_element))


def check_derivation(A: GradedLieAlgebra, L: LinMap, keys: Sequence[Key] | None = None) -> Report:
    keys = list(A.basis_keys() if keys is None else keys)
    rep = Report("derivation")
    n = L.degree
    for x, y in product(keys, repeat=2):
        rep.count()
        ex, ey = Vector.basis(x), Vector.basis(y)
        lhs = L(A._cached(x, y))
        rhs = A.bracket(L.column(x), ey) + koszul(n, A.degree(x)) * A.bracket(ex, L.column(y))
        if lhs != rhs:
            rep.fail(f"Leibniz rule fails on ({A.name(x)}, {A.name(y)})", (x, y))
    return rep


def check_adapted(V: VAlgebra, E: DerivationSpec) -> Report:
    """ehat preserves p (kernel form), cross-checked against the projection form."""
    rep = Report("adapted")
    if E.p_element and not E.p_element.is_homogeneous(V.degree, E.degree):
        rep.fail(f"P is not homogeneous of degree {E.degree}")
    if E.ehat is None:
        return rep
    kernel_bad, proj_bad = set(), set()
    for k in V.window:
        rep.count()
        img = V.proj_a(E.ehat.column(k))
        if not V.in_a(k) and img:
            kernel_bad.add(k)
            rep.fail(f"ehat({V.name(k)}) leaves p", k)
        proj_img = V.proj_a(E.ehat(V.proj_a(Vector.basis(k))))
        if proj_img != img:
            proj_bad.add(k)
    if kernel_bad != proj_bad:
        rep.fail("kernel and projection forms of the adaptedness condition disagree")
    return rep


def decompose_wlog(V: VAlgebra, E: DerivationSpec) -> DerivationSpec:
    """Move the p-part of P into ehat so that the inner generator lies in a."""
    P = E.p_element
    Pp = V.proj_p(P)
    if not Pp:
        return E
    hat = V.gla.ad(Pp, E.degree)
    if E.ehat is not None:
        hat = E.ehat + hat
    return DerivationSpec(V.gla, E.degree, hat, V.proj_a(P))


def is_maurer_cartan(V: VAlgebra, E: DerivationSpec, keys: Sequence[Key] | None = None):
    """``(True, None)`` if E has degree 1 and squares to zero on the basis."""
    if E.degree != 1:
        return False, f"degree {E.degree} != 1"
    for k in (V.window if keys is None else keys):
        if E(E.column(k)):
            return False, k
    return True, None


def check_square_expansion(V: VAlgebra, E: DerivationSpec, keys: Sequence[Key] | None = None) -> Report:
    """``E o E`` agrees with ``ehat^2 + ad(ehat(P)) + ad([P,P]/2)`` on the basis."""
    rep = Report("square expansion")
    sq = E.square()
    for k in (V.window if keys is None else keys):
        rep.count()
        if E(E.column(k)) != sq.column(k):
            rep.fail(f"E o E differs from its expansion on {V.name(k)}", k)
    return rep


def check_v_morphism(phi: LinMap, V1: VAlgebra, V2: VAlgebra) -> Report:
    rep = Report("V-morphism")
    if phi.degree != 0:
        rep.fail("a V-morphism must have degree 0")
        return rep
    A1, A2 = V1.gla, V2.gla
    for x, y in product(V1.window, repeat=2):
        rep.count()
        if phi(A1._cached(x, y)) != A2.bracket(phi.column(x), phi.column(y)):
            rep.fail(f"bracket not preserved on ({V1.name(x)}, {V1.name(y)})", ("bracket", x, y))
    for k in V1.window:
        rep.count()
        if V2.proj_a(phi.column(k)) != phi(V1.proj_a(Vector.basis(k))):
            rep.fail(f"splitting not respected at {V1.name(k)}", ("split", k))
    return rep


def check_phi_related(phi: LinMap, E1: DerivationSpec, E2: DerivationSpec,
                      V1: VAlgebra, V2: VAlgebra) -> Report:
    rep = Report("phi-related")
    for k in V1.window:
        rep.count()
        if E2(phi.column(k)) != phi(E1.column(k)):
            rep.fail(f"E2 o phi != phi o E1 at {V1.name(k)}", k)
    rep.count()
    if V2.proj_a(E2.p_element - phi(E1.p_element)):
        rep.fail("P2 - phi(P1) has a component in a2")
    return rep
