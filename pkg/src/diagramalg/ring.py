"""Polynomials in one variable with exact rational coefficients.

These are the generic coefficients of the diagram algebras: the product
of two diagrams picks up a power of the parameter ``x`` for every closed
loop, so generic algebra elements have coefficients in Q[x].  Specialized
elements use plain :class:`fractions.Fraction` coefficients instead.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class QPoly:
    """Immutable dense polynomial over Q, coefficients constant-first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *args):
        raise AttributeError("QPoly is immutable")

    @classmethod
    def const(cls, c) -> "QPoly":
        return cls([Fraction(c)])

    @classmethod
    def x(cls) -> "QPoly":
        return cls([0, 1])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with the zero polynomial given degree -1."""
        return len(self.coeffs) - 1

    def shift(self, k: int) -> "QPoly":
        """Multiply by x**k."""
        if self.is_zero() or k == 0:
            return self if k >= 0 else self._shift_checked(k)
        if k < 0:
            return self._shift_checked(k)
        return QPoly((Fraction(0),) * k + self.coeffs)

    def _shift_checked(self, k):
        raise ValueError(f"negative shift {k} not supported")

    def evaluate(self, x0) -> Fraction:
        x0 = Fraction(x0)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x0 + c
        return out

    def __add__(self, other) -> "QPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return QPoly([c + (b[i] if i < len(b) else 0) for i, c in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "QPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return QPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("QPoly", self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"QPoly({list(self.coeffs)})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                xpow = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    parts.append(xpow)
                elif c == -1:
                    parts.append(f"-{xpow}")
                else:
                    parts.append(f"{c}*{xpow}")
        return " + ".join(parts).replace("+ -", "- ")


def _coerce(v):
    if isinstance(v, QPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return QPoly([Fraction(v)])
    return NotImplemented


def exactify(v):
    """Normalize an exact scalar: plain int when the denominator is 1,
    Fraction otherwise.  Integer arithmetic is several times faster and
    the two types mix exactly."""
    q = Fraction(v)
    return q.numerator if q.denominator == 1 else q


def fraction_to_str(q) -> str:
    """Render a rational as 'p' or 'p/q' in lowest terms."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fraction_from_str(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {s!r}: {exc}") from None
