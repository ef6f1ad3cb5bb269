"""Normally ordered polynomial differential operators with series coefficients.

An operator is a finite sum of monomials ``x^alpha d^beta`` (all position
factors left of all derivative factors) whose coefficients are truncated
series in the deformation parameter ``a``.  Products re-normal-order via
the iterated Leibniz exchange ``[d_mu, x^nu] = delta_mu^nu``.

Tensor products (two or more legs) reuse the same machinery: a k-leg
tensor is an operator over ``k*dim`` coordinates whose index blocks do
not interact, which makes leg-wise multiplication automatic.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import (
    DegreeCapExceeded,
    DimMismatch,
    LegNotInSpan,
    NonInvertibleOperator,
    NonInvertibleTensor,
    OrderMismatch,
)
from .series import (
    DEFAULT_ORDER,
    GaussianRational,
    I,
    ONE,
    TruncatedSeries,
    ZERO,
    join_terms,
    _power_text,
    _scaled_symbol_text,
)


class Monomial(NamedTuple):
    """Exponent data of a normally ordered monomial ``x^alpha d^beta``."""

    x_exp: tuple[int, ...]
    d_exp: tuple[int, ...]

    def degree(self) -> int:
        return sum(self.x_exp) + sum(self.d_exp)

    def is_identity(self) -> bool:
        return not any(self.x_exp) and not any(self.d_exp)

    def text(self) -> str:
        parts = [
            _power_text(f"x{i}", e) for i, e in enumerate(self.x_exp) if e
        ] + [_power_text(f"d{i}", e) for i, e in enumerate(self.d_exp) if e]
        return "*".join(parts)


def unit_monomial(dim: int) -> Monomial:
    zero = (0,) * dim
    return Monomial(zero, zero)


def _tuple_add(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(u, v))


def _tuple_sub(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a - b for a, b in zip(u, v))


def ia_series(order: int) -> TruncatedSeries:
    """The series ``i*a`` (degree one, coefficient i)."""
    return TruncatedSeries.monomial(1, I, order)


class DiffOp:
    """Sum of normally ordered monomials with TruncatedSeries coefficients.

    Canonical form: no stored term has an identically zero coefficient,
    so equality is plain dictionary equality.  Instances are immutable.
    """

    __slots__ = ("dim", "order", "terms", "cap", "_mina", "_hash")

    def __init__(
        self,
        dim: int,
        order: int,
        terms: Mapping[Monomial, TruncatedSeries] | None = None,
        cap: int | None = None,
    ):
        self.dim = dim
        self.order = order
        self.cap = cap if cap is not None else 3 * order + 6
        clean: dict[Monomial, TruncatedSeries] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff.order != order:
                    raise OrderMismatch("coefficient order differs from operator order")
                if len(mono.x_exp) != dim or len(mono.d_exp) != dim:
                    raise DimMismatch("monomial width differs from operator dimension")
                if not coeff.is_zero():
                    if mono.degree() > self.cap:
                        raise DegreeCapExceeded(
                            f"monomial degree {mono.degree()} exceeds cap {self.cap}"
                        )
                    clean[mono] = coeff
        self.terms = clean
        self._mina = min(
            (c.min_degree for c in clean.values()), default=order + 1
        )
        self._hash: int | None = None

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, dim: int, order: int, cap: int | None = None) -> "DiffOp":
        return cls(dim, order, {}, cap)

    @classmethod
    def identity(cls, dim: int, order: int, cap: int | None = None) -> "DiffOp":
        return cls(dim, order, {unit_monomial(dim): TruncatedSeries.one(order)}, cap)

    @classmethod
    def single(
        cls,
        dim: int,
        order: int,
        x_exp: Sequence[int],
        d_exp: Sequence[int],
        coeff: TruncatedSeries | GaussianRational | int | Fraction = 1,
        cap: int | None = None,
    ) -> "DiffOp":
        if not isinstance(coeff, TruncatedSeries):
            coeff = TruncatedSeries.constant(GaussianRational.coerce(coeff), order)
        mono = Monomial(tuple(x_exp), tuple(d_exp))
        return cls(dim, order, {mono: coeff}, cap)

    @classmethod
    def coordinate(cls, dim: int, order: int, index: int) -> "DiffOp":
        x = [0] * dim
        x[index] = 1
        return cls.single(dim, order, x, [0] * dim)

    @classmethod
    def partial(cls, dim: int, order: int, index: int) -> "DiffOp":
        d = [0] * dim
        d[index] = 1
        return cls.single(dim, order, [0] * dim, d)

    @classmethod
    def from_time_series(
        cls, series: TruncatedSeries, dim: int, cap: int | None = None
    ) -> "DiffOp":
        """Expand f(A) with A = i*a*d0 into an operator.

        Each power A^m contributes the monomial d0^m carrying a-degree m
        with an extra factor i^m.
        """
        order = series.order
        terms: dict[Monomial, TruncatedSeries] = {}
        zero = (0,) * dim
        for m in range(order + 1):
            c = series.coeffs[m]
            if not c:
                continue
            d = [0] * dim
            d[0] = m
            terms[Monomial(zero, tuple(d))] = TruncatedSeries.monomial(
                m, c * I**m, order
            )
        return cls(dim, order, terms, cap)

    # -- queries ---------------------------------------------------------

    @property
    def min_a_degree(self) -> int:
        """Lowest a-degree carried by any coefficient (order+1 if zero)."""
        return self._mina

    def is_zero(self) -> bool:
        return not self.terms

    def is_identity(self) -> bool:
        return self == DiffOp.identity(self.dim, self.order, self.cap)

    def is_polynomial(self) -> bool:
        return all(not any(m.d_exp) for m in self.terms)

    def a_slice(self, degree: int) -> dict[Monomial, GaussianRational]:
        """Coefficients of a^degree, as exact scalars keyed by monomial."""
        out = {}
        for mono, coeff in self.terms.items():
            c = coeff.coeffs[degree]
            if c:
                out[mono] = c
        return out

    def coefficient(self, x_exp: Sequence[int], d_exp: Sequence[int]) -> TruncatedSeries:
        mono = Monomial(tuple(x_exp), tuple(d_exp))
        return self.terms.get(mono, TruncatedSeries.zero(self.order))

    def _check(self, other: "DiffOp") -> None:
        if self.dim != other.dim:
            raise DimMismatch(f"dimensions differ: {self.dim} vs {other.dim}")
        if self.order != other.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._check(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            cur = terms.get(mono)
            terms[mono] = coeff if cur is None else cur + coeff
        return DiffOp(self.dim, self.order, terms, max(self.cap, other.cap))

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __neg__(self) -> "DiffOp":
        return DiffOp(
            self.dim, self.order, {m: -c for m, c in self.terms.items()}, self.cap
        )

    def scale(
        self, factor: TruncatedSeries | GaussianRational | int | Fraction
    ) -> "DiffOp":
        if not isinstance(factor, TruncatedSeries):
            factor = TruncatedSeries.constant(GaussianRational.coerce(factor), self.order)
        return DiffOp(
            self.dim,
            self.order,
            {m: c * factor for m, c in self.terms.items()},
            self.cap,
        )

    # -- multiplication ----------------------------------------------------

    def __mul__(self, other: "DiffOp") -> "DiffOp":
        """Normally ordered composition (Leibniz exchange of d past x)."""
        self._check(other)
        order = self.order
        cap = max(self.cap, other.cap)
        out: dict[Monomial, TruncatedSeries] = {}
        # Sorting by minimum a-degree lets the inner loop break early.
        other_items = sorted(
            ((c.min_degree, m, c) for m, c in other.terms.items()), key=lambda t: t[0]
        )
        for m1, c1 in self.terms.items():
            min1 = c1.min_degree
            budget = order - min1
            d1 = m1.d_exp
            has_d1 = any(d1)
            for min2, m2, c2 in other_items:
                if min2 > budget:
                    break
                cprod = c1 * c2
                if cprod.is_zero():
                    continue
                x2 = m2.x_exp
                if not has_d1 or not any(d and x for d, x in zip(d1, x2)):
                    mono = Monomial(_tuple_add(m1.x_exp, x2), _tuple_add(d1, m2.d_exp))
                    if mono.degree() > cap:
                        raise DegreeCapExceeded(
                            f"product monomial degree {mono.degree()} exceeds cap {cap}"
                        )
                    cur = out.get(mono)
                    out[mono] = cprod if cur is None else cur + cprod
                    continue
                ranges = [range(min(d, x) + 1) for d, x in zip(d1, x2)]
                for k in itertools.product(*ranges):
                    factor = 1
                    for di, xi, ki in zip(d1, x2, k):
                        if ki:
                            factor *= math.comb(di, ki) * math.comb(xi, ki) * math.factorial(ki)
                    mono = Monomial(
                        _tuple_sub(_tuple_add(m1.x_exp, x2), k),
                        _tuple_sub(_tuple_add(d1, m2.d_exp), k),
                    )
                    if mono.degree() > cap:
                        raise DegreeCapExceeded(
                            f"product monomial degree {mono.degree()} exceeds cap {cap}"
                        )
                    add = cprod if factor == 1 else cprod * factor
                    cur = out.get(mono)
                    out[mono] = add if cur is None else cur + add
        return DiffOp(self.dim, order, out, cap)

    def commutator(self, other: "DiffOp") -> "DiffOp":
        return self * other - other * self

    def __pow__(self, exponent: int) -> "DiffOp":
        if exponent < 0:
            raise ValueError("negative operator powers are not defined")
        out = DiffOp.identity(self.dim, self.order, self.cap)
        for _ in range(exponent):
            out = out * self
        return out

    # -- action on polynomials ---------------------------------------------

    def apply(self, poly: "DiffOp") -> "DiffOp":
        """Act on a polynomial in the coordinates (a pure-x operator)."""
        self._check(poly)
        if not poly.is_polynomial():
            raise ValueError("apply expects a polynomial (no derivative factors)")
        order = self.order
        out: dict[Monomial, TruncatedSeries] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in poly.terms.items():
                if c1.min_degree + c2.min_degree > order:
                    continue
                gamma = m2.x_exp
                beta = m1.d_exp
                if any(b > g for b, g in zip(beta, gamma)):
                    continue
                factor = 1
                for b, g in zip(beta, gamma):
                    for step in range(b):
                        factor *= g - step
                if factor == 0:
                    continue
                cprod = c1 * c2
                if cprod.is_zero():
                    continue
                mono = Monomial(
                    _tuple_add(m1.x_exp, _tuple_sub(gamma, beta)), (0,) * self.dim
                )
                add = cprod if factor == 1 else cprod * factor
                cur = out.get(mono)
                out[mono] = add if cur is None else cur + add
        return DiffOp(self.dim, order, out, max(self.cap, poly.cap))

    # -- comparisons and printing -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.order == other.order
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self.dim, self.order, frozenset(self.terms.items()))
            )
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, TruncatedSeries]]:
        """Deterministic ordering: descending lexicographic on exponents."""
        return sorted(
            self.terms.items(), key=lambda kv: (kv[0].x_exp, kv[0].d_exp), reverse=True
        )

    def text(self) -> str:
        """Canonical text: terms in descending lexicographic monomial order,
        coefficients flattened over powers of ``a``."""
        parts = []
        for mono, coeff in self.sorted_terms():
            mono_text = mono.text()
            for m, c in enumerate(coeff.coeffs):
                if not c:
                    continue
                symbol = "*".join(s for s in (_power_text("a", m), mono_text) if s)
                parts.append(_scaled_symbol_text(c, symbol))
        return join_terms(parts)

    def __repr__(self) -> str:
        return f"DiffOp({self.text()!r}, dim={self.dim}, order={self.order})"


def first_difference_order(lhs: DiffOp, rhs: DiffOp) -> int | None:
    """Lowest a-degree at which two operators differ, or None when equal."""
    diff = lhs - rhs
    if diff.is_zero():
        return None
    return diff.min_a_degree


def invert_unipotent(op: DiffOp) -> DiffOp:
    """Invert an operator equal to the identity at zeroth order in ``a``."""
    ident = DiffOp.identity(op.dim, op.order, op.cap)
    if op.a_slice(0) != ident.a_slice(0):
        raise NonInvertibleOperator("zeroth order in a is not the identity")
    nil = ident - op
    out = ident
    power = ident
    for _ in range(op.order):
        power = power * nil
        if power.is_zero():
            break
        out = out + power
    return out


class GeneratorTable:
    """Named operator realizations of the inhomogeneous linear generators.

    ``L(mu, nu)`` is x^mu d_nu, ``P(lam)`` is d_lam; derived elements
    (trace, traceless part, dilation, the Borel element, and the metric
    rotations/boosts) are built from these.
    """

    def __init__(self, dim: int = 4, order: int = DEFAULT_ORDER, cap: int | None = None):
        self.dim = dim
        self.order = order
        self.cap = cap

    def identity(self) -> DiffOp:
        return DiffOp.identity(self.dim, self.order, self.cap)

    def L(self, mu: int, nu: int) -> DiffOp:
        x = [0] * self.dim
        d = [0] * self.dim
        x[mu] += 1
        d[nu] += 1
        return DiffOp.single(self.dim, self.order, x, d, 1, self.cap)

    def P(self, lam: int) -> DiffOp:
        return DiffOp.partial(self.dim, self.order, lam).scale(1)

    def x(self, mu: int) -> DiffOp:
        return DiffOp.coordinate(self.dim, self.order, mu)

    def L_trace(self) -> DiffOp:
        out = DiffOp.zero(self.dim, self.order, self.cap)
        for mu in range(self.dim):
            out = out + self.L(mu, mu)
        return out

    def L_traceless(self, mu: int) -> DiffOp:
        return self.L(mu, mu) - self.L_trace().scale(Fraction(1, self.dim))

    def D(self) -> DiffOp:
        """Spatial dilation x^k d_k (k = 1..dim-1)."""
        out = DiffOp.zero(self.dim, self.order, self.cap)
        for k in range(1, self.dim):
            out = out + self.L(k, k)
        return out

    def J(self, r: Fraction | int) -> DiffOp:
        """Borel element -x^0 d_0 + (1/r) x^k d_k."""
        r = Fraction(r)
        if r == 0:
            raise ValueError("Borel element needs r != 0")
        return -self.L(0, 0) + self.D().scale(Fraction(1, 1) / r)

    def M(self, mu: int, nu: int, metric: Sequence[int]) -> DiffOp:
        """Rotation/boost for a diagonal metric: g_mm L(m,n) - g_nn L(n,m)."""
        return self.L(mu, nu).scale(metric[mu]) - self.L(nu, mu).scale(metric[nu])


# ---------------------------------------------------------------------------
# Tensor legs
# ---------------------------------------------------------------------------


class TensorOp:
    """A sum of leg-wise operator products (default: two legs).

    Internally a k-leg tensor is one DiffOp over ``k*base_dim``
    coordinates; block i of the exponent tuples is leg i.  Since blocks
    never interact, multiplication is automatically leg-wise.
    """

    __slots__ = ("op", "legs", "base_dim")

    def __init__(self, op: DiffOp, legs: int, base_dim: int):
        if op.dim != legs * base_dim:
            raise DimMismatch("operator width does not match leg count")
        self.op = op
        self.legs = legs
        self.base_dim = base_dim

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, base_dim: int, order: int, legs: int = 2) -> "TensorOp":
        cap = legs * (3 * order + 6)
        return cls(DiffOp.identity(legs * base_dim, order, cap), legs, base_dim)

    @classmethod
    def zero(cls, base_dim: int, order: int, legs: int = 2) -> "TensorOp":
        cap = legs * (3 * order + 6)
        return cls(DiffOp.zero(legs * base_dim, order, cap), legs, base_dim)

    @classmethod
    def outer(cls, factors: Sequence[DiffOp]) -> "TensorOp":
        """Pure tensor product of one operator per leg."""
        legs = len(factors)
        base_dim = factors[0].dim
        order = factors[0].order
        cap = legs * (3 * order + 6)
        terms: dict[Monomial, TruncatedSeries] = {}
        items: list[tuple[Monomial, TruncatedSeries]] = [
            (unit_monomial(legs * base_dim), TruncatedSeries.one(order))
        ]
        for leg, factor in enumerate(factors):
            if factor.dim != base_dim or factor.order != order:
                raise DimMismatch("tensor factors must share dim and order")
            new_items = []
            for mono, coeff in items:
                for fm, fc in factor.terms.items():
                    x = list(mono.x_exp)
                    d = list(mono.d_exp)
                    for i in range(base_dim):
                        x[leg * base_dim + i] += fm.x_exp[i]
                        d[leg * base_dim + i] += fm.d_exp[i]
                    new_items.append((Monomial(tuple(x), tuple(d)), coeff * fc))
            items = new_items
        for mono, coeff in items:
            cur = terms.get(mono)
            terms[mono] = coeff if cur is None else cur + coeff
        return cls(DiffOp(legs * base_dim, order, terms, cap), legs, base_dim)

    @classmethod
    def embed(
        cls, op: DiffOp, positions: Sequence[int], legs: int
    ) -> "TensorOp":
        """Place a (len(positions))-leg object into the given slots of a
        legs-leg tensor, identity elsewhere.  ``op`` may be a DiffOp
        (one leg) or the inner operator of another TensorOp."""
        base_dim = op.dim // max(1, len(positions))
        if op.dim != base_dim * len(positions):
            raise DimMismatch("embedded operator width mismatch")
        order = op.order
        cap = legs * (3 * order + 6)
        terms: dict[Monomial, TruncatedSeries] = {}
        for mono, coeff in op.terms.items():
            x = [0] * (legs * base_dim)
            d = [0] * (legs * base_dim)
            for src, dst in enumerate(positions):
                for i in range(base_dim):
                    x[dst * base_dim + i] = mono.x_exp[src * base_dim + i]
                    d[dst * base_dim + i] = mono.d_exp[src * base_dim + i]
            terms[Monomial(tuple(x), tuple(d))] = coeff
        return cls(DiffOp(legs * base_dim, order, terms, cap), legs, base_dim)

    # -- structure helpers ---------------------------------------------------

    @property
    def order(self) -> int:
        return self.op.order

    def _blocks(self, mono: Monomial) -> tuple[Monomial, ...]:
        n = self.base_dim
        return tuple(
            Monomial(mono.x_exp[i * n : (i + 1) * n], mono.d_exp[i * n : (i + 1) * n])
            for i in range(self.legs)
        )

    def term_blocks(self) -> Iterator[tuple[tuple[Monomial, ...], TruncatedSeries]]:
        for mono, coeff in self.op.terms.items():
            yield self._blocks(mono), coeff

    def leg_operator(self, blocks: Sequence[Monomial], leg: int) -> DiffOp:
        return DiffOp(
            self.base_dim,
            self.order,
            {blocks[leg]: TruncatedSeries.one(self.order)},
        )

    def group_by_other(self, leg: int) -> dict[tuple[Monomial, ...], DiffOp]:
        """Aggregate the chosen leg into an operator per tuple of the other
        legs' monomials (tuple keeps original leg order, skipping ``leg``)."""
        groups: dict[tuple[Monomial, ...], dict[Monomial, TruncatedSeries]] = {}
        for blocks, coeff in self.term_blocks():
            key = tuple(b for i, b in enumerate(blocks) if i != leg)
            bucket = groups.setdefault(key, {})
            cur = bucket.get(blocks[leg])
            bucket[blocks[leg]] = coeff if cur is None else cur + coeff
        return {
            key: DiffOp(self.base_dim, self.order, terms)
            for key, terms in groups.items()
        }

    # -- algebra ----------------------------------------------------------

    def _check(self, other: "TensorOp") -> None:
        if self.legs != other.legs or self.base_dim != other.base_dim:
            raise DimMismatch("tensor shapes differ")

    def __add__(self, other: "TensorOp") -> "TensorOp":
        self._check(other)
        return TensorOp(self.op + other.op, self.legs, self.base_dim)

    def __sub__(self, other: "TensorOp") -> "TensorOp":
        self._check(other)
        return TensorOp(self.op - other.op, self.legs, self.base_dim)

    def __neg__(self) -> "TensorOp":
        return TensorOp(-self.op, self.legs, self.base_dim)

    def __mul__(self, other: "TensorOp") -> "TensorOp":
        self._check(other)
        return TensorOp(self.op * other.op, self.legs, self.base_dim)

    def scale(self, factor) -> "TensorOp":
        return TensorOp(self.op.scale(factor), self.legs, self.base_dim)

    def is_zero(self) -> bool:
        return self.op.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorOp):
            return NotImplemented
        return (
            self.legs == other.legs
            and self.base_dim == other.base_dim
            and self.op == other.op
        )

    def __hash__(self) -> int:
        return hash((self.legs, self.base_dim, self.op))

    def exp(self) -> "TensorOp":
        """Exponential of a tensor vanishing at zeroth order in ``a``."""
        if self.op.min_a_degree < 1:
            raise NonInvertibleTensor("exponent must vanish at order a^0")
        out = TensorOp.identity(self.base_dim, self.order, self.legs)
        power = out
        for m in range(1, self.order + 1):
            power = power * self
            if power.is_zero():
                break
            out = out + power.scale(Fraction(1, math.factorial(m)))
        return out

    def invert(self) -> "TensorOp":
        """Two-sided inverse within truncation; leading term must be 1 in
        every leg (``NonInvertibleTensor`` otherwise)."""
        ident = TensorOp.identity(self.base_dim, self.order, self.legs)
        if self.op.a_slice(0) != ident.op.a_slice(0):
            raise NonInvertibleTensor("leading term is not the identity tensor")
        nil = ident - self
        out = ident
        power = ident
        for _ in range(self.order):
            power = power * nil
            if power.is_zero():
                break
            out = out + power
        return out

    def flip(self) -> "TensorOp":
        """Swap the two legs (only defined for two-leg tensors)."""
        if self.legs != 2:
            raise DimMismatch("flip is defined for two-leg tensors")
        n = self.base_dim
        terms = {}
        for mono, coeff in self.op.terms.items():
            x = mono.x_exp[n:] + mono.x_exp[:n]
            d = mono.d_exp[n:] + mono.d_exp[:n]
            terms[Monomial(x, d)] = coeff
        return TensorOp(DiffOp(2 * n, self.order, terms, self.op.cap), 2, n)

    def embed_into(self, positions: Sequence[int], legs: int) -> "TensorOp":
        return TensorOp.embed(self.op, positions, legs)

    # -- Hopf-flavoured contractions ----------------------------------------

    def counit_leg(self, leg: int) -> "TensorOp | DiffOp":
        """Apply the counit (identity-component functional) to one leg."""
        n = self.base_dim
        out_terms: dict[Monomial, TruncatedSeries] = {}
        for blocks, coeff in self.term_blocks():
            if not blocks[leg].is_identity():
                continue
            rest = [b for i, b in enumerate(blocks) if i != leg]
            x: tuple[int, ...] = ()
            d: tuple[int, ...] = ()
            for b in rest:
                x += b.x_exp
                d += b.d_exp
            mono = Monomial(x, d)
            cur = out_terms.get(mono)
            out_terms[mono] = coeff if cur is None else cur + coeff
        op = DiffOp((self.legs - 1) * n, self.order, out_terms)
        if self.legs == 2:
            return op
        return TensorOp(op, self.legs - 1, n)

    def mu_contract(
        self, left: DiffOp | None = None, mid: DiffOp | None = None
    ) -> DiffOp:
        """Multiply the legs together (two legs), optionally sandwiching:
        returns sum of left * leg1 * mid * leg2 per term."""
        if self.legs != 2:
            raise DimMismatch("mu_contract is defined for two-leg tensors")
        out = DiffOp.zero(self.base_dim, self.order)
        head_cache: dict[Monomial, DiffOp] = {}
        for blocks, coeff in self.term_blocks():
            head = head_cache.get(blocks[0])
            if head is None:
                head = self.leg_operator(blocks, 0)
                if left is not None:
                    head = left * head
                if mid is not None:
                    head = head * mid
                head_cache[blocks[0]] = head
            piece = head * self.leg_operator(blocks, 1)
            out = out + piece.scale(coeff)
        return out

    def apply_pointwise(self, polys: Sequence[DiffOp]) -> DiffOp:
        """Evaluate mu after acting leg-wise on the given polynomials."""
        if len(polys) != self.legs:
            raise DimMismatch("one polynomial per leg required")
        out = DiffOp.zero(self.base_dim, self.order)
        for blocks, coeff in self.term_blocks():
            piece: DiffOp | None = None
            dead = False
            for leg, poly in enumerate(polys):
                acted = self.leg_operator(blocks, leg).apply(poly)
                if acted.is_zero():
                    dead = True
                    break
                piece = acted if piece is None else piece * acted
            if dead or piece is None:
                continue
            out = out + piece.scale(coeff)
        return out

    def min_a_degree(self) -> int:
        return self.op.min_a_degree

    def text(self) -> str:
        parts = []
        for blocks, coeff in sorted(
            self.term_blocks(), key=lambda bc: tuple((b.x_exp, b.d_exp) for b in bc[0]), reverse=True
        ):
            block_text = " (x) ".join(b.text() or "1" for b in blocks)
            for m, c in enumerate(coeff.coeffs):
                if not c:
                    continue
                a_text = _power_text("a", m)
                symbol = f"{a_text}*{block_text}" if a_text else block_text
                if symbol == "1":
                    parts.append(str(c))
                else:
                    parts.append(_scaled_symbol_text(c, symbol))
        return join_terms(parts)

    def __repr__(self) -> str:
        return f"TensorOp({self.text()!r}, legs={self.legs})"


# ---------------------------------------------------------------------------
# Generator words: recognizing tensor legs as polynomials in commuting
# primitive generators, to apply coproducts and antipodes leg-wise.
# ---------------------------------------------------------------------------


class WordBasis:
    """Ordered products g1^e1 * ... * gk^ek * tail of commuting, a-free
    generators with an optional tail factor (identity or one generator).

    Words must realize to linearly independent operators; a leg that is a
    combination of these words can then be decomposed exactly and mapped
    through the primitive coproduct or the antipode without ambiguity.
    """

    def __init__(
        self,
        gens: Sequence[DiffOp],
        tails: Sequence[DiffOp] | None = None,
        max_power: int | None = None,
    ):
        if not gens:
            raise ValueError("need at least one generator")
        self.dim = gens[0].dim
        self.order = gens[0].order
        self.gens = tuple(gens)
        ident = DiffOp.identity(self.dim, self.order)
        self.tails = (ident,) + tuple(tails or ())
        self.max_power = self.order if max_power is None else max_power
        for g in list(self.gens) + list(self.tails):
            if g.dim != self.dim or g.order != self.order:
                raise DimMismatch("word pieces must share dim and order")
        self._powers: list[list[DiffOp]] = []
        for g in self.gens:
            pws = [ident]
            for _ in range(self.max_power):
                pws.append(pws[-1] * g)
            self._powers.append(pws)
        self.words: list[tuple[tuple[int, ...], int]] = []
        self.realized: list[DiffOp] = []
        for exps in itertools.product(range(self.max_power + 1), repeat=len(self.gens)):
            if sum(exps) > self.max_power:
                continue
            base = ident
            for i, e in enumerate(exps):
                if e:
                    base = base * self._powers[i][e]
            for t_idx, tail in enumerate(self.tails):
                if t_idx == 0:
                    word_op = base
                else:
                    word_op = base * tail
                self.words.append((exps, t_idx))
                self.realized.append(word_op)
        self._coproduct_cache: dict[int, TensorOp] = {}

    # -- decomposition ------------------------------------------------------

    def decompose(self, op: DiffOp) -> list[TruncatedSeries]:
        """Write ``op`` as sum of coefficient * word; exact or raises
        ``LegNotInSpan`` (with the residual's lowest a-degree)."""
        coeffs = self._solve(op)
        recon = DiffOp.zero(self.dim, self.order)
        for c, w in zip(coeffs, self.realized):
            if not c.is_zero():
                recon = recon + w.scale(c)
        residual = op - recon
        if not residual.is_zero():
            raise LegNotInSpan(
                "leg operator is not a combination of the generator words",
                residual.min_a_degree,
            )
        return coeffs

    def _solve(self, op: DiffOp) -> list[TruncatedSeries]:
        order = self.order
        monos = sorted(
            set(op.terms) | set().union(*(w.terms.keys() for w in self.realized)),
        )
        index = {mono: i for i, mono in enumerate(monos)}
        nrows = len(monos)
        ncols = len(self.realized)
        # Sparse rows: column index -> scalar.
        rows: list[dict[int, GaussianRational]] = [{} for _ in range(nrows)]
        for j, w in enumerate(self.realized):
            for mono, coeff in w.terms.items():
                if coeff.min_degree > 0:
                    raise ValueError("word realizations must be a-free")
                rows[index[mono]][j] = coeff.coeffs[0]
        zero_series = TruncatedSeries.zero(order)
        rhs: list[TruncatedSeries] = [zero_series] * nrows
        for mono, coeff in op.terms.items():
            rhs[index[mono]] = coeff
        # Gauss-Jordan over the exact scalars; the right-hand sides are series.
        pivot_row_of_col: dict[int, int] = {}
        pivoted_rows: set[int] = set()
        for col in range(ncols):
            piv = next(
                (r for r in range(nrows) if r not in pivoted_rows and rows[r].get(col)),
                None,
            )
            if piv is None:
                continue
            pivot = rows[piv]
            scale = pivot[col]
            if scale != ONE:
                inv = ONE / scale
                rows[piv] = pivot = {k: v * inv for k, v in pivot.items()}
                rhs[piv] = rhs[piv] * inv
            for r in range(nrows):
                if r == piv:
                    continue
                f = rows[r].get(col)
                if not f:
                    continue
                target = rows[r]
                for k, vp in pivot.items():
                    nv = target.get(k, ZERO) - f * vp
                    if nv:
                        target[k] = nv
                    else:
                        target.pop(k, None)
                if not rhs[piv].is_zero():
                    rhs[r] = rhs[r] - rhs[piv] * f
            pivot_row_of_col[col] = piv
            pivoted_rows.add(piv)
        out = []
        for col in range(ncols):
            r = pivot_row_of_col.get(col)
            out.append(zero_series if r is None else rhs[r])
        return out

    # -- primitive coproduct and antipode on words ---------------------------

    def word_coproduct(self, word_index: int) -> TensorOp:
        """Delta(word) with every generator primitive, as a two-leg tensor."""
        cached = self._coproduct_cache.get(word_index)
        if cached is not None:
            return cached
        exps, t_idx = self.words[word_index]
        out = TensorOp.identity(self.dim, self.order, 2)
        for i, e in enumerate(exps):
            if not e:
                continue
            g = self.gens[i]
            primitive = TensorOp.embed(g, [0], 2) + TensorOp.embed(g, [1], 2)
            for _ in range(e):
                out = out * primitive
        if t_idx:
            tail = self.tails[t_idx]
            out = out * (TensorOp.embed(tail, [0], 2) + TensorOp.embed(tail, [1], 2))
        self._coproduct_cache[word_index] = out
        return out

    def word_antipode(self, word_index: int) -> DiffOp:
        """S(word): reverse factors, negate each generator."""
        exps, t_idx = self.words[word_index]
        sign = (-1) ** (sum(exps) + (1 if t_idx else 0))
        base = DiffOp.identity(self.dim, self.order)
        if t_idx:
            base = self.tails[t_idx]
        for i, e in enumerate(exps):
            if e:
                base = base * self._powers[i][e]
        return base.scale(sign)


def extend_leg(
    t: TensorOp,
    leg: int,
    basis: WordBasis,
    image: Callable[[int], TensorOp] | None = None,
) -> TensorOp:
    """Replace one leg by a two-leg image of each word (default: the
    primitive coproduct), producing a tensor with one extra leg."""
    if image is None:
        image = basis.word_coproduct
    n = t.base_dim
    order = t.order
    out = TensorOp.zero(n, order, t.legs + 1)
    acc = out.op.terms  # accumulate in place, re-wrap at the end
    terms: dict[Monomial, TruncatedSeries] = {}
    for other_key, aggregate in t.group_by_other(leg).items():
        coeffs = basis.decompose(aggregate)
        for widx, c in enumerate(coeffs):
            if c.is_zero():
                continue
            img = image(widx)
            for img_blocks, img_coeff in img.term_blocks():
                blocks: list[Monomial] = []
                oi = iter(other_key)
                for pos in range(t.legs + 1):
                    if pos == leg:
                        blocks.append(img_blocks[0])
                    elif pos == leg + 1:
                        blocks.append(img_blocks[1])
                    else:
                        blocks.append(next(oi))
                x: tuple[int, ...] = ()
                d: tuple[int, ...] = ()
                for b in blocks:
                    x += b.x_exp
                    d += b.d_exp
                mono = Monomial(x, d)
                add = c * img_coeff
                cur = terms.get(mono)
                terms[mono] = add if cur is None else cur + add
    cap = (t.legs + 1) * (3 * order + 6)
    return TensorOp(DiffOp((t.legs + 1) * n, order, terms, cap), t.legs + 1, n)


def delta0_extend(t: TensorOp, leg: int, basis: WordBasis) -> TensorOp:
    """Apply the primitive coproduct multiplicatively to one tensor leg.

    The leg must decompose in the given word basis; the result has one
    more leg (the chosen leg splits into two adjacent ones).
    """
    return extend_leg(t, leg, basis, None)


def map_leg(
    t: TensorOp, leg: int, basis: WordBasis, image: Callable[[int], DiffOp]
) -> TensorOp:
    """Replace one leg word-wise by a one-leg image (same leg count)."""
    n = t.base_dim
    order = t.order
    terms: dict[Monomial, TruncatedSeries] = {}
    for other_key, aggregate in t.group_by_other(leg).items():
        coeffs = basis.decompose(aggregate)
        for widx, c in enumerate(coeffs):
            if c.is_zero():
                continue
            img = image(widx)
            for img_mono, img_coeff in img.terms.items():
                blocks: list[Monomial] = []
                oi = iter(other_key)
                for pos in range(t.legs):
                    if pos == leg:
                        blocks.append(img_mono)
                    else:
                        blocks.append(next(oi))
                x: tuple[int, ...] = ()
                d: tuple[int, ...] = ()
                for b in blocks:
                    x += b.x_exp
                    d += b.d_exp
                mono = Monomial(x, d)
                add = c * img_coeff
                cur = terms.get(mono)
                terms[mono] = add if cur is None else cur + add
    return TensorOp(DiffOp(t.legs * n, order, terms, t.op.cap), t.legs, n)


def antipode_on_leg(t: TensorOp, leg: int, basis: WordBasis) -> TensorOp:
    """Apply the undeformed antipode to one leg via word decomposition."""
    return map_leg(t, leg, basis, basis.word_antipode)
