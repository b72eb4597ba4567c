"""Sparse Laurent polynomials with exact integer coefficients.

Exponents are stored doubled, so ``{3: 1}`` in the variable ``q`` means
``q**(3/2)``.  This keeps half-integer powers exact without fractions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

__all__ = ["LaurentPoly"]

VARIABLES = ("A", "q", "t")


class LaurentPoly:
    """Immutable Laurent polynomial in one variable.

    Parameters
    ----------
    terms : mapping or iterable of (doubled_exponent, coefficient)
    var : one of ``"A"``, ``"q"``, ``"t"``
    """

    __slots__ = ("_terms", "var", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = (), var: str = "t"):
        if var not in VARIABLES:
            raise ValueError(f"unknown variable {var!r}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            e, c = int(e), int(c)
            if c:
                acc[e] = acc.get(e, 0) + c
        self._terms = {e: c for e, c in acc.items() if c}
        self.var = var
        self._hash = None

    # construction helpers
    @classmethod
    def one(cls, var: str = "t") -> "LaurentPoly":
        return cls({0: 1}, var)

    @classmethod
    def zero(cls, var: str = "t") -> "LaurentPoly":
        return cls({}, var)

    @classmethod
    def monomial(cls, power: Fraction | int, coeff: int = 1, var: str = "t") -> "LaurentPoly":
        """``coeff * var**power``; ``power`` may be a half-integer."""
        doubled = Fraction(power) * 2
        if doubled.denominator != 1:
            raise ValueError("only integer or half-integer powers are representable")
        return cls({int(doubled): coeff}, var)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "LaurentPoly") -> None:
        if other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other}, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("monomial with non-unit coefficient is not invertible")
            return LaurentPoly({-e * -n: c ** -n}, self.var)
        result = LaurentPoly.one(self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other}, self.var)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.var == other.var and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.var, frozenset(self._terms.items())))
        return self._hash

    # degree bookkeeping, in doubled units unless stated
    def min_exp(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_exp(self) -> int:
        return max(self._terms) if self._terms else 0

    def span(self) -> Fraction:
        """Highest minus lowest power, in true (undoubled) units."""
        return Fraction(self.max_exp() - self.min_exp(), 2)

    def shift(self, doubled: int) -> "LaurentPoly":
        """Multiply by ``var**(doubled/2)``."""
        return LaurentPoly({e + doubled: c for e, c in self._terms.items()}, self.var)

    def substitute(self, var: str, scale: Fraction | int) -> "LaurentPoly":
        """Rename the variable, mapping ``x**e`` to ``y**(scale*e)``.

        ``A -> t**(-1/4)`` is ``substitute("t", Fraction(-1, 4))``.
        """
        out = {}
        for e, c in self._terms.items():
            ne = Fraction(e) * Fraction(scale)
            if ne.denominator != 1:
                raise ValueError(f"exponent {e}/2 does not map to a half-integer under scale {scale}")
            out[int(ne)] = c
        return LaurentPoly(out, var)

    def invert_variable(self) -> "LaurentPoly":
        """``p(x) -> p(1/x)``."""
        return LaurentPoly({-e: c for e, c in self._terms.items()}, self.var)

    def __call__(self, value):
        """Evaluate at a number; half-integer powers need a perfect-square-free caller."""
        total = Fraction(0)
        for e, c in self._terms.items():
            if e % 2:
                raise ValueError("cannot evaluate half-integer powers exactly")
            total += c * Fraction(value) ** (e // 2)
        return total

    def leading_coefficient(self) -> int:
        return self._terms[self.max_exp()] if self._terms else 0

    def to_json(self) -> dict:
        return {"var": self.var, "terms": [[e, c] for e, c in self.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        return cls([(e, c) for e, c in data["terms"]], data["var"])

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            power = Fraction(e, 2)
            if power == 0:
                mono = ""
            elif power == 1:
                mono = self.var
            else:
                mono = f"{self.var}^{power}" if power.denominator == 1 else f"{self.var}^({power})"
            if mono == "":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out
