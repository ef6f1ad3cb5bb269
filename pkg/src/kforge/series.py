"""Exact truncated power series over the Gaussian rationals.

Coefficients are complex numbers with exact rational real and imaginary
parts, so every identity checked elsewhere in the package is decidable:
two series are equal iff all stored coefficients coincide.  A series
keeps coefficients up to and including a fixed truncation degree N and
every ring operation discards degrees above N.

The formal variable is anonymous.  The same type serves series in the
deformation parameter ``a`` and series in the commuting operator symbol
``A`` (the caller tracks which indeterminate is meant).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

from .errors import (
    ConstantTermNotOne,
    NonDivisibleSeries,
    NonInvertibleConstantTerm,
    NonNilpotentArgument,
    OrderMismatch,
)

#: Default truncation order used across the package.
DEFAULT_ORDER = 6

RationalLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "GaussianRational"]


def _frac(value: RationalLike) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """A complex number with exact rational real and imaginary parts.

    Field operations are exact; division by zero raises
    ``ZeroDivisionError``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        self.re = _frac(re)
        self.im = _frac(im)

    @staticmethod
    def coerce(value: ScalarLike) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    def __add__(self, other: ScalarLike) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: ScalarLike) -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __mul__(self, other: ScalarLike) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other: ScalarLike) -> "GaussianRational":
        return GaussianRational.coerce(other) / self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int) or exponent < 0:
            raise TypeError("only nonnegative integer powers are supported")
        out = ONE
        base = self
        n = exponent
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __str__(self) -> str:
        if not self.im:
            return _rat_str(self.re)
        if self.im == 1:
            im = "i"
        elif self.im == -1:
            im = "-i"
        else:
            im = f"{_rat_str(self.im)}*i"
        if not self.re:
            return im
        sign = " - " if self.im < 0 else " + "
        im_abs = "i" if abs(self.im) == 1 else f"{_rat_str(abs(self.im))}*i"
        return f"{_rat_str(self.re)}{sign}{im_abs}"

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class TruncatedSeries:
    """Formal power series truncated (inclusively) at a fixed degree.

    ``coeffs[m]`` is the coefficient of the m-th power of the formal
    variable.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs", "order", "_mindeg")

    def __init__(self, coeffs: Iterable[ScalarLike], order: int | None = None):
        items = [GaussianRational.coerce(c) for c in coeffs]
        if order is None:
            if not items:
                raise ValueError("empty coefficient list needs an explicit order")
            order = len(items) - 1
        if len(items) > order + 1:
            items = items[: order + 1]
        while len(items) < order + 1:
            items.append(ZERO)
        self.coeffs = tuple(items)
        self.order = order
        mindeg = order + 1
        for m, c in enumerate(self.coeffs):
            if c:
                mindeg = m
                break
        self._mindeg = mindeg

    # -- constructors ------------------------------------------------

    @classmethod
    def constant(cls, value: ScalarLike, order: int) -> "TruncatedSeries":
        return cls([GaussianRational.coerce(value)], order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([ONE], order)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        return cls([ZERO, ONE], order)

    @classmethod
    def monomial(cls, degree: int, value: ScalarLike, order: int) -> "TruncatedSeries":
        if degree > order:
            return cls.zero(order)
        coeffs = [ZERO] * degree + [GaussianRational.coerce(value)]
        return cls(coeffs, order)

    # -- basic queries -----------------------------------------------

    @property
    def min_degree(self) -> int:
        """Lowest degree with a nonzero coefficient (order+1 if zero)."""
        return self._mindeg

    def is_zero(self) -> bool:
        return self._mindeg > self.order

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __getitem__(self, degree: int) -> GaussianRational:
        return self.coeffs[degree]

    def _check(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")

    # -- ring operations ---------------------------------------------

    def __add__(self, other: "TruncatedSeries | ScalarLike") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(GaussianRational.coerce(other), self.order)
        self._check(other)
        return TruncatedSeries(
            [a + b for a, b in zip(self.coeffs, other.coeffs)], self.order
        )

    __radd__ = __add__

    def __sub__(self, other: "TruncatedSeries | ScalarLike") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(GaussianRational.coerce(other), self.order)
        self._check(other)
        return TruncatedSeries(
            [a - b for a, b in zip(self.coeffs, other.coeffs)], self.order
        )

    def __rsub__(self, other: ScalarLike) -> "TruncatedSeries":
        return TruncatedSeries.constant(GaussianRational.coerce(other), self.order) - self

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __mul__(self, other: "TruncatedSeries | ScalarLike") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            scalar = GaussianRational.coerce(other)
            return TruncatedSeries([c * scalar for c in self.coeffs], self.order)
        self._check(other)
        n = self.order
        if self._mindeg + other._mindeg > n:
            return TruncatedSeries.zero(n)
        out = [ZERO] * (n + 1)
        for ia in range(self._mindeg, n + 1 - other._mindeg):
            ca = self.coeffs[ia]
            if not ca:
                continue
            for ib in range(other._mindeg, n + 1 - ia):
                cb = other.coeffs[ib]
                if cb:
                    out[ia + ib] = out[ia + ib] + ca * cb
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other: "TruncatedSeries | ScalarLike") -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return self * other.invert()
        scalar = GaussianRational.coerce(other)
        return TruncatedSeries([c / scalar for c in self.coeffs], self.order)

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse modulo degree order+1.

        Raises ``NonInvertibleConstantTerm`` when the constant term is zero.
        """
        c0 = self.coeffs[0]
        if not c0:
            raise NonInvertibleConstantTerm("series has zero constant term")
        n = self.order
        inv0 = ONE / c0
        out = [inv0] + [ZERO] * n
        for m in range(1, n + 1):
            acc = ZERO
            for j in range(1, m + 1):
                cj = self.coeffs[j]
                if cj:
                    acc = acc + cj * out[m - j]
            out[m] = -acc * inv0
        return TruncatedSeries(out, n)

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if not isinstance(exponent, int):
            raise TypeError("use binom_pow for non-integer exponents")
        if exponent < 0:
            return self.invert() ** (-exponent)
        out = TruncatedSeries.one(self.order)
        for _ in range(exponent):
            out = out * self
        return out

    # -- transcendental operations (truncated) ------------------------

    def exp_series(self) -> "TruncatedSeries":
        """exp of a series with zero constant term, truncated.

        Raises ``NonNilpotentArgument`` otherwise.
        """
        if self.coeffs[0]:
            raise NonNilpotentArgument("exp needs zero constant term")
        n = self.order
        acc = TruncatedSeries.one(n)
        power = TruncatedSeries.one(n)
        for m in range(1, n + 1):
            power = power * self
            if power.is_zero():
                break
            acc = acc + power * Fraction(1, math.factorial(m))
        return acc

    def log1p_series(self) -> "TruncatedSeries":
        """log(1 + s) for a series s with zero constant term, truncated.

        Raises ``NonNilpotentArgument`` otherwise.
        """
        if self.coeffs[0]:
            raise NonNilpotentArgument("log1p needs zero constant term")
        n = self.order
        acc = TruncatedSeries.zero(n)
        power = TruncatedSeries.one(n)
        for m in range(1, n + 1):
            power = power * self
            if power.is_zero():
                break
            acc = acc + power * Fraction((-1) ** (m + 1), m)
        return acc

    def binom_pow(self, exponent: RationalLike) -> "TruncatedSeries":
        """Generalized binomial power (1 + u)^exponent with u = self - 1.

        The coefficients follow the falling-factorial pattern
        b(b-1)...(b-m+1)/m!.  Requires constant term exactly 1.
        """
        if self.coeffs[0] != ONE:
            raise ConstantTermNotOne("binomial power needs constant term 1")
        beta = _frac(exponent)
        n = self.order
        u = self - TruncatedSeries.one(n)
        acc = TruncatedSeries.one(n)
        power = TruncatedSeries.one(n)
        coef = Fraction(1)
        for m in range(1, n + 1):
            power = power * u
            if power.is_zero():
                break
            coef = coef * (beta - (m - 1)) / m
            if coef:
                acc = acc + power * coef
        return acc

    # -- calculus-flavoured helpers -----------------------------------

    def derivative(self) -> "TruncatedSeries":
        """Termwise derivative; the top coefficient is unknowable and set to 0.

        The result is therefore exact only through degree order-1.
        """
        n = self.order
        out = [self.coeffs[m + 1] * (m + 1) for m in range(n)]
        out.append(ZERO)
        return TruncatedSeries(out, n)

    def integrate(self) -> "TruncatedSeries":
        """Termwise antiderivative with zero constant term (exact through order)."""
        n = self.order
        out = [ZERO] + [self.coeffs[m] / (m + 1) for m in range(n)]
        return TruncatedSeries(out, n)

    def divide_by_var(self, power: int = 1) -> "TruncatedSeries":
        """Exact division by variable**power.

        The low coefficients must vanish (``NonDivisibleSeries`` otherwise);
        the top ``power`` coefficients of the result are unknowable and set
        to zero, so the result is exact only through degree order-power.
        """
        for m in range(power):
            if self.coeffs[m]:
                raise NonDivisibleSeries(
                    f"coefficient of degree {m} is nonzero; cannot divide"
                )
        n = self.order
        out = list(self.coeffs[power:]) + [ZERO] * power
        return TruncatedSeries(out, n)

    def shift_up(self, power: int = 1) -> "TruncatedSeries":
        """Multiply by variable**power (truncating at the order)."""
        out = [ZERO] * power + list(self.coeffs)
        return TruncatedSeries(out, self.order)

    def truncate(self, new_order: int) -> "TruncatedSeries":
        if new_order > self.order:
            raise OrderMismatch("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: new_order + 1], new_order)

    def equal_through(self, other: "TruncatedSeries", degree: int) -> bool:
        """Coefficientwise equality through the given degree."""
        self._check(other)
        return all(self.coeffs[m] == other.coeffs[m] for m in range(degree + 1))

    # -- evaluation and printing --------------------------------------

    def eval_real(self, x: float) -> float:
        """Evaluate at a real point; all coefficients must be real."""
        acc = 0.0
        for m in range(self.order, -1, -1):
            c = self.coeffs[m]
            if c.im:
                raise ValueError("series has nonreal coefficients")
            acc = acc * x + float(c.re)
        return acc

    def text(self, var: str = "t") -> str:
        """Canonical text form ``c0 + c1*t + c2*t^2 + ...`` (nonzero terms)."""
        parts = []
        for m, c in enumerate(self.coeffs):
            if not c:
                continue
            parts.append(_scaled_symbol_text(c, _power_text(var, m)))
        return join_terms(parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.text()!r}, order={self.order})"


def _power_text(var: str, exponent: int) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return var
    return f"{var}^{exponent}"


def _scaled_symbol_text(coeff: GaussianRational, symbol: str) -> str:
    """Render coeff*symbol, eliding unit coefficients."""
    if not symbol:
        return str(coeff)
    if coeff == ONE:
        return symbol
    if coeff == -ONE:
        return f"-{symbol}"
    if coeff.re and coeff.im:
        return f"({coeff})*{symbol}"
    return f"{coeff}*{symbol}"


def join_terms(parts: list[str]) -> str:
    """Join printed terms with ``+``/``-``, turning ``+ -x`` into ``- x``."""
    if not parts:
        return "0"
    out = [parts[0]]
    for part in parts[1:]:
        if part.startswith("-"):
            out.append(f" - {part[1:]}")
        else:
            out.append(f" + {part}")
    return "".join(out)
