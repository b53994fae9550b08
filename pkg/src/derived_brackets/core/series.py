"""Truncated formal power series in one variable ``t``.

A :class:`FormalSeries` of order ``N`` holds ``c_0..c_N`` and every operation is
performed modulo ``t^(N+1)``.  Coefficients may be exact scalars, vectors or
linear maps; products use the coefficient type's own ``*`` (composition for
linear maps), so a series of maps composes as a non-commutative series.

Scalar series double as the coefficient ring ``Q[t]/(t^(N+1))`` for vectors.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Sequence


class TruncationMismatch(ValueError):
    pass


class FormalSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Any]):
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        self.coeffs = tuple(coeffs)

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, value, order: int, zero=Fraction(0)) -> FormalSeries:
        return cls((value,) + (zero,) * order)

    @classmethod
    def variable(cls, order: int) -> FormalSeries:
        """The series ``t`` (zero when ``order == 0``)."""
        coeffs = [Fraction(0)] * (order + 1)
        if order >= 1:
            coeffs[1] = Fraction(1)
        return cls(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def _check(self, other: FormalSeries):
        if other.order != self.order:
            raise TruncationMismatch(
                f"series truncated at different orders: {self.order} vs {other.order}")

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, FormalSeries):
            self._check(other)
            return FormalSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])
        if isinstance(other, Rational):
            return FormalSeries((self.coeffs[0] + other,) + self.coeffs[1:])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries([-a for a in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (FormalSeries, Rational)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            self._check(other)
            a, b = self.coeffs, other.coeffs
            out = []
            for k in range(len(a)):
                acc = None
                for i in range(k + 1):
                    term = a[i] * b[k - i]
                    acc = term if acc is None else acc + term
                out.append(acc)
            return FormalSeries(out)
        if isinstance(other, Rational):
            return FormalSeries([c * other for c in self.coeffs])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return FormalSeries([other * c for c in self.coeffs])
        return NotImplemented

    def scale(self, factor) -> FormalSeries:
        return FormalSeries([factor * c for c in self.coeffs])

    def map(self, fn: Callable) -> FormalSeries:
        return FormalSeries([fn(c) for c in self.coeffs])

    def invert(self, one=None) -> FormalSeries:
        """Two-sided inverse; needs an invertible constant coefficient.

        Map-valued series must start with the identity map.
        """
        c0 = self.coeffs[0]
        if isinstance(c0, Rational):
            if c0 == 0:
                raise ZeroDivisionError("constant coefficient is zero")
            inv0 = Fraction(1) / c0
        elif getattr(c0, "is_identity", False):
            inv0 = c0
        else:
            raise ValueError("constant coefficient is not a unit")
        out = [inv0]
        for k in range(1, len(self.coeffs)):
            acc = None
            for i in range(1, k + 1):
                term = self.coeffs[i] * out[k - i]
                acc = term if acc is None else acc + term
            out.append(-(inv0 * acc))
        return FormalSeries(out)

    def differentiate(self) -> FormalSeries:
        """d/dt; the result is only known modulo ``t^N`` so its order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate a series known only to order 0")
        return FormalSeries([k * self.coeffs[k] for k in range(1, len(self.coeffs))])

    def integrate(self, constant=Fraction(0)) -> FormalSeries:
        """Term-wise integral from 0; the order rises by one."""
        return FormalSeries([constant] + [Fraction(1, k + 1) * c for k, c in enumerate(self.coeffs)])

    def truncate(self, order: int) -> FormalSeries:
        if order > self.order:
            raise TruncationMismatch(f"cannot extend a series of order {self.order} to {order}")
        return FormalSeries(self.coeffs[:order + 1])

    # comparison -----------------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"FormalSeries({list(self.coeffs)!r})"

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            parts.append(str(c) if k == 0 else f"({c})*t^{k}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.order + 1})"


def coefficient(value, k: int):
    """k-th t-coefficient of a ring element (plain scalars are constants)."""
    if isinstance(value, FormalSeries):
        return value.coeffs[k] if k <= value.order else Fraction(0)
    return value if k == 0 else Fraction(0)


def as_series(value, order: int) -> FormalSeries:
    if isinstance(value, FormalSeries):
        if value.order != order:
            raise TruncationMismatch(f"expected order {order}, got {value.order}")
        return value
    return FormalSeries.constant(Fraction(value), order)


def derivative(value, order: int):
    """d/dt of a ring element known modulo ``t^(order+1)``."""
    return as_series(value, order).differentiate()


def truncate(value, order: int):
    if isinstance(value, FormalSeries):
        return value.truncate(order)
    return value
