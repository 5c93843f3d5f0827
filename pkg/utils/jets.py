"""
Truncated Taylor series ("jets") at an expansion point.

A Jet of order K stores c_0..c_K of f(x0 + s) = sum c_k s^k.  Arithmetic is
truncated at s^K, so derivatives up to order K of any rational expression of
the variable come out exact to rounding.
"""

from __future__ import annotations

import math
from typing import Iterable, Union

import numpy as np

Number = Union[int, float]


class Jet:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[float], order: int | None = None):
        c = np.asarray(list(coeffs), dtype=float)
        if order is not None:
            size = order + 1
            if c.size < size:
                c = np.concatenate([c, np.zeros(size - c.size)])
            c = c[:size]
        if c.size == 0:
            raise ValueError("a jet needs at least one coefficient")
        self.coeffs = c

    # Constructors

    @classmethod
    def variable(cls, x0: float, order: int) -> "Jet":
        """The identity x = x0 + s."""
        return cls([x0, 1.0], order)

    @classmethod
    def constant(cls, value: float, order: int) -> "Jet":
        return cls([value], order)

    # Basic properties

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, k: int) -> float:
        return float(self.coeffs[k])

    def __repr__(self) -> str:
        return f"Jet({self.coeffs.tolist()})"

    def derivatives(self) -> np.ndarray:
        """f^(k)(x0) for k = 0..K."""
        factorials = np.array([math.factorial(k) for k in range(self.coeffs.size)], dtype=float)
        return self.coeffs * factorials

    def derivative_at(self, k: int) -> float:
        return float(self.coeffs[k] * math.factorial(k))

    # Arithmetic

    def _coerce(self, other: "Jet | Number") -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError(f"jet orders differ ({self.order} vs {other.order})")
            return other
        return Jet.constant(float(other), self.order)

    def __add__(self, other: "Jet | Number") -> "Jet":
        return Jet(self.coeffs + self._coerce(other).coeffs)

    __radd__ = __add__

    def __sub__(self, other: "Jet | Number") -> "Jet":
        return Jet(self.coeffs - self._coerce(other).coeffs)

    def __rsub__(self, other: Number) -> "Jet":
        return Jet(self._coerce(other).coeffs - self.coeffs)

    def __neg__(self) -> "Jet":
        return Jet(-self.coeffs)

    def __mul__(self, other: "Jet | Number") -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.coeffs * float(other))
        other = self._coerce(other)
        return Jet(np.convolve(self.coeffs, other.coeffs)[: self.coeffs.size])

    __rmul__ = __mul__

    def __truediv__(self, other: "Jet | Number") -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.coeffs / float(other))
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other: Number) -> "Jet":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, exponent: int) -> "Jet":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Jet.constant(1.0, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def reciprocal(self) -> "Jet":
        b = self.coeffs
        if b[0] == 0.0:
            raise ZeroDivisionError("jet division requires a nonzero constant term")
        r = np.zeros_like(b)
        r[0] = 1.0 / b[0]
        for k in range(1, b.size):
            r[k] = -np.dot(b[1 : k + 1], r[k - 1 :: -1][:k]) / b[0]
        return Jet(r)

    def sqrt(self) -> "Jet":
        a = self.coeffs
        if a[0] <= 0.0:
            raise ValueError("jet sqrt requires a positive constant term")
        r = np.zeros_like(a)
        r[0] = math.sqrt(a[0])
        for k in range(1, a.size):
            acc = np.dot(r[1:k], r[k - 1 : 0 : -1]) if k > 1 else 0.0
            r[k] = (a[k] - acc) / (2.0 * r[0])
        return Jet(r)

    # Calculus

    def derivative(self) -> "Jet":
        """d/ds, padded with a zero top coefficient."""
        k = np.arange(1, self.coeffs.size)
        return Jet(np.concatenate([self.coeffs[1:] * k, [0.0]]))

    def integral(self, constant: float = 0.0) -> "Jet":
        """Antiderivative vanishing (up to ``constant``) at s = 0; top term dropped."""
        k = np.arange(1, self.coeffs.size)
        return Jet(np.concatenate([[constant], self.coeffs[:-1] / k]))

    def shift_down(self) -> "Jet":
        """f(s)/s for a jet with f(0) = 0, padded with a zero top coefficient."""
        return Jet(np.concatenate([self.coeffs[1:], [0.0]]))

    def compose(self, inner: "Jet") -> "Jet":
        """self(inner(s)); ``inner`` must vanish at s = 0."""
        inner = self._coerce(inner)
        scale = max(1.0, float(np.max(np.abs(inner.coeffs))))
        if abs(inner.coeffs[0]) > 1e-10 * scale:
            raise ValueError("composition requires an inner jet with zero constant term")
        inner = Jet(np.concatenate([[0.0], inner.coeffs[1:]]))
        result = Jet.constant(float(self.coeffs[-1]), self.order)
        for c in self.coeffs[-2::-1]:
            result = result * inner + float(c)
        return result

    def evaluate(self, s: float) -> float:
        """Polynomial value of the truncated series at offset s."""
        return float(np.polynomial.polynomial.polyval(s, self.coeffs))
