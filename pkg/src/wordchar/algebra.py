"""Exact univariate polynomials and rational functions over Q.

Everything here works with :class:`fractions.Fraction` coefficients, lowest
degree first.  The symbol is implicit: the same classes are used for
functions of ``n`` and, after :func:`reciprocal_substitute`, of ``x = 1/n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "ExactPolynomial",
    "ExactRationalFunction",
    "fraction_to_json",
    "PoleError",
    "falling_factorial",
    "reciprocal_substitute",
    "taylor_coefficients",
    "gate_polynomial",
    "gate_factor_count",
    "divides",
    "int_poly_mul",
    "int_poly_add_into",
]


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated or expanded at a pole."""


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class ExactPolynomial:
    """Polynomial with rational coefficients, ``coeffs[i]`` multiplying ``n**i``.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c) -> ExactPolynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1) -> ExactPolynomial:
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> ExactPolynomial:
        """Monic polynomial prod (n - r)."""
        p = cls((1,))
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    # -- basic properties ---------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(other) -> ExactPolynomial:
        if isinstance(other, ExactPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactPolynomial((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return ExactPolynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return ExactPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExactRationalFunction):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ExactPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return ExactPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = ExactPolynomial((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.leading
        if len(rem) <= d:
            return ExactPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] / lead
            quot[i - d] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[i - d + j] -= c * y
        return ExactPolynomial(quot), ExactPolynomial(rem[:d])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return ExactPolynomial([c / other for c in self.coeffs])
        return ExactRationalFunction(self, other)

    def __call__(self, value):
        acc = Fraction(0) if not isinstance(value, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self) -> ExactPolynomial:
        return ExactPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> ExactPolynomial:
        if self.is_zero():
            return self
        return self / self.leading

    def reverse(self, degree: int | None = None) -> ExactPolynomial:
        """``x**degree * p(1/x)``; ``degree`` defaults to ``self.degree``."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        padded = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return ExactPolynomial(reversed(padded))

    def valuation(self) -> int:
        """Order of vanishing at 0 (``-1`` for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    # -- serialization ------------------------------------------------
    def to_json(self) -> list[str]:
        return [fraction_to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> ExactPolynomial:
        return cls(_parse_fraction(s) for s in data)

    def to_str(self, var: str = "n") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = _frac_str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{_frac_str(a)}*{mono}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_str()


def fraction_to_json(c) -> str:
    """Always ``"p/q"``, also for integers."""
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic gcd via the Euclidean algorithm (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
        if not b.is_zero():
            b = b.monic()
    return a.monic()


@dataclass(frozen=True)
class ExactRationalFunction:
    """Reduced quotient ``num/den`` with a monic denominator."""

    num: ExactPolynomial
    den: ExactPolynomial

    def __init__(self, num, den=None):
        num = ExactPolynomial._coerce(num) if not isinstance(num, ExactPolynomial) else num
        if den is None:
            den = ExactPolynomial((1,))
        elif not isinstance(den, ExactPolynomial):
            den = ExactPolynomial._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = ExactPolynomial(), ExactPolynomial((1,))
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                num, den = num / lead, den / lead
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def _coerce(other):
        if isinstance(other, ExactRationalFunction):
            return other
        if isinstance(other, (ExactPolynomial, int, Fraction)):
            return ExactRationalFunction(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return ExactRationalFunction(self.num + other.num, self.den)
        return ExactRationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ExactRationalFunction(-self.num, self.den)

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
        return ExactRationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return ExactRationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return ExactRationalFunction(self.den ** (-e), self.num ** (-e))
        return ExactRationalFunction(self.num**e, self.den**e)

    def __call__(self, value):
        d = self.den(value)
        if d == 0:
            raise PoleError(f"pole at {value}")
        return self.num(value) / d

    def derivative(self) -> ExactRationalFunction:
        return ExactRationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(), self.den**2
        )

    @property
    def degree_gap(self) -> int | None:
        """``deg(den) - deg(num)``: the order of decay at infinity (None for zero)."""
        if self.is_zero():
            return None
        return self.den.degree - self.num.degree

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> ExactRationalFunction:
        return cls(ExactPolynomial.from_json(data["num"]), ExactPolynomial.from_json(data["den"]))

    def to_str(self, var: str = "n") -> str:
        """``"num / den"``, with parentheses only around multi-term pieces."""
        if self.den.degree == 0:
            return self.num.to_str(var)

        def piece(p: ExactPolynomial) -> str:
            text = p.to_str(var)
            return f"({text})" if sum(1 for c in p.coeffs if c) > 1 else text

        return f"{piece(self.num)} / {piece(self.den)}"

    def __str__(self) -> str:
        return self.to_str()


def falling_factorial(m: int) -> ExactPolynomial:
    """``(n)_m = n (n-1) ... (n-m+1)``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return ExactPolynomial.from_roots(range(m))


def reciprocal_substitute(f: ExactRationalFunction) -> ExactRationalFunction:
    """Return ``g`` with ``g(x) = f(1/x)``.

    With ``f = N/D``, ``f(1/x) = x**(deg D - deg N) * rev(N) / rev(D)``.
    """
    if f.is_zero():
        return f
    a, b = f.num.degree, f.den.degree
    num, den = f.num.reverse(), f.den.reverse()
    shift = b - a
    if shift >= 0:
        num = num * ExactPolynomial.monomial(shift)
    else:
        den = den * ExactPolynomial.monomial(-shift)
    return ExactRationalFunction(num, den)


def taylor_coefficients(f: ExactRationalFunction, count: int) -> list[Fraction]:
    """First ``count`` Maclaurin coefficients of ``f`` by power-series division."""
    if count < 1:
        raise ValueError("count must be positive")
    d0 = f.den[0]
    if d0 == 0:
        raise PoleError("rational function has a pole at 0")
    num = [f.num[i] for i in range(count)]
    den = [f.den[i] for i in range(count)]
    out: list[Fraction] = []
    for i in range(count):
        acc = num[i]
        for j in range(1, i + 1):
            if den[j]:
                acc -= den[j] * out[i - j]
        out.append(acc / d0)
    return out


def _gate_factors(L: int, K: int) -> list[int]:
    """The constants ``b`` of the linear factors ``(1 - b x)``, trivial ones included."""
    if L < 1 or K < 1:
        raise ValueError("L and K must be positive")
    bs = []
    for c in range(1, K * L + 1):
        bs.extend([c] * L)
    for j in range(1, 2 * K + 1):
        bs.extend([j - 1] * L)
    return bs


def gate_factor_count(L: int, K: int) -> int:
    """Number of linear factors in the gate product, counting the constant ``j = 1`` ones."""
    return len(_gate_factors(L, K))


def gate_polynomial(L: int, K: int) -> ExactPolynomial:
    """``prod_{c=1}^{KL} (1-cx)^L * [prod_{j=1}^{2K} (1-(j-1)x)]^L`` expanded exactly.

    The ``j = 1`` factors equal 1, so the true degree is ``L*(KL + 2K - 1)``.
    """
    coeffs = [1]
    for b in _gate_factors(L, K):
        if b:
            coeffs = int_poly_mul(coeffs, [1, -b])
    return ExactPolynomial(coeffs)


def divides(d: ExactPolynomial, f: ExactPolynomial) -> bool:
    if d.is_zero():
        raise ZeroDivisionError("divisor must be nonzero")
    return (f % d).is_zero()


# -- integer coefficient helpers used on hot paths ------------------------

def int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def int_poly_add_into(acc: list[int], p: Sequence[int], scale: int = 1) -> None:
    """``acc += scale * p`` in place, growing ``acc`` as needed."""
    if len(acc) < len(p):
        acc.extend([0] * (len(p) - len(acc)))
    for i, c in enumerate(p):
        acc[i] += scale * c

