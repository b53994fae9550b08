"""Graded bases, sparse vectors and degree-shifting linear maps.

Vectors are keyed by hashable, mutually comparable basis keys (integer
positions for finite bases, structured tuples for polynomial algebras).
Coefficients are exact: ``Fraction`` or a scalar ``FormalSeries``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .series import FormalSeries, coefficient, derivative, truncate

Key = Hashable


@dataclass(frozen=True)
class GradedBasis:
    elements: tuple[tuple[str, int], ...]

    def __post_init__(self):
        elems = tuple((str(n), int(d)) for n, d in self.elements)
        names = [n for n, _ in elems]
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def name(self, i: int) -> str:
        return self.elements[i][0]

    def degree(self, i: int) -> int:
        return self.elements[i][1]

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.elements]


class Vector:
    """Sparse linear combination of basis keys; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        self._terms = {k: c for k, c in terms.items() if c} if terms else {}

    @classmethod
    def basis(cls, key: Key, coeff=Fraction(1)) -> Vector:
        return cls({key: coeff})

    @classmethod
    def _wrap(cls, terms: dict) -> Vector:
        v = object.__new__(cls)
        v._terms = terms
        return v

    @classmethod
    def from_accumulator(cls, acc: dict) -> Vector:
        return cls._wrap({k: c for k, c in acc.items() if c})

    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def coefficient(self, key: Key):
        return self._terms.get(key, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: Vector) -> Vector:
        if not isinstance(other, Vector):
            if other == 0:
                return self
            return NotImplemented
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc[k] + c if k in acc else c
        return Vector.from_accumulator(acc)

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self) -> Vector:
        return Vector._wrap({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Vector) -> Vector:
        return self + (-other)

    def __mul__(self, scalar) -> Vector:
        if isinstance(scalar, Vector):
            return NotImplemented
        return Vector({k: c * scalar for k, c in self._terms.items()})

    def __rmul__(self, scalar) -> Vector:
        if isinstance(scalar, Vector):
            return NotImplemented
        return Vector({k: scalar * c for k, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Vector):
            return not (self - other)._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def map_coefficients(self, fn: Callable) -> Vector:
        return Vector({k: fn(c) for k, c in self._terms.items()})

    def restrict(self, keep: Callable[[Key], bool]) -> Vector:
        return Vector._wrap({k: c for k, c in self._terms.items() if keep(k)})

    def is_homogeneous(self, degree: Callable[[Key], int], d: int | None = None) -> bool:
        degs = {degree(k) for k in self._terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def degree(self, degree: Callable[[Key], int]) -> int | None:
        degs = {degree(k) for k in self._terms}
        if len(degs) > 1:
            raise ValueError("vector is not homogeneous")
        return degs.pop() if degs else None

    # t-dependent coefficients ----------------------------------------------

    def t_coefficient(self, k: int) -> Vector:
        return Vector({key: coefficient(c, k) for key, c in self._terms.items()})

    def t_derivative(self, order: int) -> Vector:
        return Vector({key: derivative(c, order) for key, c in self._terms.items()})

    def t_truncate(self, order: int) -> Vector:
        return Vector({key: truncate(c, order) for key, c in self._terms.items()})

    def format(self, name: Callable[[Key], str] = str) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms):
            c = self._terms[k]
            coeff = str(c) if not isinstance(c, FormalSeries) else f"[{'; '.join(map(str, c.coeffs))}]"
            parts.append(f"{coeff}*{name(k)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Vector({self.format()})"


def accumulate(acc: dict, vector: Vector, scale=None) -> None:
    """In-place ``acc += scale * vector`` on a raw coefficient dict."""
    if scale is None:
        for k, c in vector._terms.items():
            acc[k] = acc[k] + c if k in acc else c
    else:
        for k, c in vector._terms.items():
            term = scale * c
            acc[k] = acc[k] + term if k in acc else term


def series_vector(coeff_vectors: Sequence[Vector]) -> Vector:
    """Combine ``v_0..v_N`` into one vector with series coefficients."""
    if len(coeff_vectors) == 1:
        return coeff_vectors[0]
    keys = set().union(*(v.keys() for v in coeff_vectors))
    return Vector({k: FormalSeries([v.coefficient(k) for v in coeff_vectors]) for k in keys})


class LinMap:
    """Linear map shifting degree by ``degree``.

    Columns are given explicitly or produced on demand by ``fn`` and cached;
    lazy columns let maps act on infinite polynomial bases.
    """

    __slots__ = ("degree", "_columns", "_fn", "is_identity", "label")

    def __init__(self, degree: int, columns: Mapping[Key, Vector] | None = None,
                 fn: Callable[[Key], Vector] | None = None, *, is_identity: bool = False,
                 label: str = ""):
        self.degree = int(degree)
        self._columns = dict(columns) if columns else {}
        self._fn = fn
        self.is_identity = is_identity
        self.label = label

    @classmethod
    def identity(cls) -> LinMap:
        return cls(0, fn=Vector.basis, is_identity=True, label="id")

    @classmethod
    def zero(cls, degree: int = 0) -> LinMap:
        return cls(degree, fn=lambda k: Vector(), label="0")

    @property
    def columns(self) -> dict:
        return dict(self._columns)

    def column(self, key: Key) -> Vector:
        col = self._columns.get(key)
        if col is None:
            col = self._fn(key) if self._fn is not None else Vector()
            self._columns[key] = col
        return col

    def __call__(self, v: Vector) -> Vector:
        acc: dict = {}
        for k, c in v.items():
            accumulate(acc, self.column(k), c)
        return Vector.from_accumulator(acc)

    def __mul__(self, other):
        if isinstance(other, LinMap):
            if self.is_identity:
                return other
            if other.is_identity:
                return self
            return LinMap(self.degree + other.degree, fn=lambda k: self(other.column(k)))
        return LinMap(self.degree, fn=lambda k: self.column(k) * other)

    def __rmul__(self, scalar):
        return LinMap(self.degree, fn=lambda k: scalar * self.column(k))

    def __add__(self, other: LinMap) -> LinMap:
        if self.degree != other.degree:
            raise ValueError(f"cannot add maps of degrees {self.degree} and {other.degree}")
        return LinMap(self.degree, fn=lambda k: self.column(k) + other.column(k))

    def __neg__(self) -> LinMap:
        return LinMap(self.degree, fn=lambda k: -self.column(k))

    def __sub__(self, other: LinMap) -> LinMap:
        return self + (-other)

    def equal_on(self, other: LinMap, keys: Iterable[Key]) -> bool:
        return all(self.column(k) == other.column(k) for k in keys)

    def check_homogeneous(self, degree: Callable[[Key], int], keys: Iterable[Key]) -> list:
        """Keys whose image is not homogeneous of degree ``deg(key) + self.degree``."""
        return [k for k in keys
                if not self.column(k).is_homogeneous(degree, degree(k) + self.degree)]

    def __repr__(self) -> str:
        return f"LinMap(degree={self.degree}{', ' + self.label if self.label else ''})"


def series_map(maps: Sequence[LinMap]) -> LinMap:
    """The Q[t]-linear map sum_k t^k maps[k] acting with series coefficients."""
    if len(maps) == 1:
        return maps[0]
    degree = maps[0].degree
    return LinMap(degree, fn=lambda k: series_vector([m.column(k) for m in maps]))
