"""Jordanian and Abelian twist families and their star-product geometry.

The Jordanian twist is exp(J_r (x) sigma_r) with sigma_r = ln(1 + i*a*r*d0)
built on the Borel pair [J_r, r*d0] = r*d0; the Abelian twist is
exp(-i*a*(s*d0 (x) D - (1-s)*D (x) d0)) with D = x^k d_k.  Both deform the
coordinate algebra to the same Lie-algebra type commutation relations
[x^0, x^m]_* = i*a*x^m with all other star commutators vanishing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import LegNotInSpan
from .series import DEFAULT_ORDER, GaussianRational, I, TruncatedSeries
from .weyl_ops import (
    DiffOp,
    GeneratorTable,
    Monomial,
    TensorOp,
    WordBasis,
    delta0_extend,
)

JORDANIAN = "jordanian"
ABELIAN = "abelian"

#: Distinguished parameter values exercised by the verification suites.
GRID_JORDANIAN_R = (Fraction(-1), Fraction(1), Fraction(2), Fraction(3))
GRID_ABELIAN_S = (Fraction(0), Fraction(1, 2), Fraction(1))


@dataclass(frozen=True)
class TwistSpec:
    """Family tag plus parameter, spacetime dimension, truncation order."""

    family: str
    param: Fraction
    dim: int = 4
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        object.__setattr__(self, "param", Fraction(self.param))
        if self.family not in (JORDANIAN, ABELIAN):
            raise ValueError(f"unknown twist family {self.family!r}")
        if self.family == JORDANIAN and self.param == 0:
            raise ValueError("Jordanian family requires parameter r != 0")
        if self.dim < 2:
            raise ValueError("dimension must be at least 2")
        if self.order < 0:
            raise ValueError("truncation order must be nonnegative")

    def label(self) -> str:
        return f"{self.family}({self.param})"

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "param": str(self.param),
            "dim": self.dim,
            "order": self.order,
        }


def grid_specs(dim: int = 4, order: int = DEFAULT_ORDER) -> list[TwistSpec]:
    """Both families at their distinguished parameter values."""
    out = [TwistSpec(JORDANIAN, r, dim, order) for r in GRID_JORDANIAN_R]
    out += [TwistSpec(ABELIAN, s, dim, order) for s in GRID_ABELIAN_S]
    return out


def generators(spec: TwistSpec) -> GeneratorTable:
    return GeneratorTable(spec.dim, spec.order)


def sigma_op(spec: TwistSpec, scale: Fraction = Fraction(1)) -> DiffOp:
    """sigma_r = ln(1 + i*a*r*d0) as an operator (Jordanian only).

    ``scale`` multiplies sigma (used for beta*sigma exponentials).
    """
    assert spec.family == JORDANIAN
    series = TruncatedSeries.monomial(1, spec.param, spec.order).log1p_series()
    return DiffOp.from_time_series(series * scale, spec.dim)


def exp_beta_sigma(spec: TwistSpec, beta: Fraction) -> DiffOp:
    """e^(beta*sigma_r) = (1 + i*a*r*d0)^beta via the falling-factorial
    binomial expansion."""
    assert spec.family == JORDANIAN
    series = TruncatedSeries([1, spec.param], spec.order).binom_pow(beta)
    return DiffOp.from_time_series(series, spec.dim)


def exp_c_p0(spec: TwistSpec, c: GaussianRational | Fraction | int) -> DiffOp:
    """e^(i*a*c*d0) as an operator (Abelian closed forms)."""
    series = TruncatedSeries.monomial(
        1, GaussianRational.coerce(c), spec.order
    ).exp_series()
    return DiffOp.from_time_series(series, spec.dim)


@lru_cache(maxsize=None)
def build_twist(spec: TwistSpec) -> TensorOp:
    """The twisting tensor, truncated at the spec order; leading term 1 (x) 1."""
    g = generators(spec)
    if spec.family == JORDANIAN:
        exponent = TensorOp.outer([g.J(spec.param), sigma_op(spec)])
    else:
        s = spec.param
        ia = TruncatedSeries.monomial(1, I, spec.order)
        exponent = TensorOp.outer([g.P(0), g.D()]).scale(ia * (-s)) + TensorOp.outer(
            [g.D(), g.P(0)]
        ).scale(ia * (1 - s))
    return exponent.exp()


@lru_cache(maxsize=None)
def build_twist_inverse(spec: TwistSpec) -> TensorOp:
    return build_twist(spec).invert()


@lru_cache(maxsize=None)
def leg_bases(spec: TwistSpec) -> tuple[WordBasis, WordBasis]:
    """Word bases for the two twist legs (commuting primitive generators)."""
    g = generators(spec)
    if spec.family == JORDANIAN:
        return WordBasis([g.J(spec.param)]), WordBasis([g.P(0)])
    basis = WordBasis([g.P(0), g.D()])
    return basis, basis


@dataclass
class CocycleReport:
    """Outcome of the 2-cocycle and normalization checks."""

    spec: TwistSpec
    passed: bool
    first_failure: int | None
    normalization_ok: bool

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "order": self.spec.order,
            "pass": self.passed and self.normalization_ok,
            "first_failure": self.first_failure,
        }


def verify_cocycle(spec: TwistSpec, twist: TensorOp | None = None) -> CocycleReport:
    """Check F12 (Delta (x) id)F = F23 (id (x) Delta)F and the counit
    normalization, reporting the first failing order in ``a``."""
    twisting = build_twist(spec) if twist is None else twist
    b1, b2 = leg_bases(spec)
    ident = DiffOp.identity(spec.dim, spec.order)
    normalization_ok = (
        twisting.counit_leg(0) == ident and twisting.counit_leg(1) == ident
    )
    try:
        left_ext = delta0_extend(twisting, 0, b1)
        right_ext = delta0_extend(twisting, 1, b2)
    except LegNotInSpan as err:
        return CocycleReport(spec, False, err.failure_order, normalization_ok)
    lhs = twisting.embed_into([0, 1], 3) * left_ext
    rhs = twisting.embed_into([1, 2], 3) * right_ext
    diff = lhs - rhs
    if diff.is_zero():
        return CocycleReport(spec, True, None, normalization_ok)
    return CocycleReport(spec, False, diff.min_a_degree(), normalization_ok)


def star_product(spec: TwistSpec, f: DiffOp, g: DiffOp) -> DiffOp:
    """f * g = mu(F^{-1}(f (x) g)) on polynomials."""
    return build_twist_inverse(spec).apply_pointwise([f, g])


def star_commutator(spec: TwistSpec, f: DiffOp, g: DiffOp) -> DiffOp:
    return star_product(spec, f, g) - star_product(spec, g, f)


@dataclass
class StarAlgebraReport:
    """Constant, linear, and residual parts of all star commutators.

    ``theta_const[(mu, nu)]`` and ``theta_lin[(mu, nu, lam)]`` are the
    series theta^{mu nu} and theta^{mu nu}_lam in
    [x^mu, x^nu]_* = i theta^{mu nu} + i theta^{mu nu}_lam x^lam + ...;
    ``residual[(mu, nu)]`` collects everything beyond linear order.
    """

    spec: TwistSpec
    theta_const: dict[tuple[int, int], TruncatedSeries]
    theta_lin: dict[tuple[int, int, int], TruncatedSeries]
    residual: dict[tuple[int, int], DiffOp]

    def is_kappa_minkowski(self) -> bool:
        """True iff [x^0, x^m]_* = i a x^m and every other commutator is 0."""
        n = self.spec.dim
        order = self.spec.order
        a = TruncatedSeries.variable(order)
        for key, value in self.theta_const.items():
            if not value.is_zero():
                return False
        for (mu, nu), op in self.residual.items():
            if not op.is_zero():
                return False
        for (mu, nu, lam), value in self.theta_lin.items():
            expected = a if (mu == 0 and 1 <= nu == lam) else None
            if expected is None:
                expected = -a if (nu == 0 and 1 <= mu == lam) else TruncatedSeries.zero(order)
            if value != expected:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "order": self.spec.order,
            "pass": self.is_kappa_minkowski(),
            "theta_const": {
                f"{mu},{nu}": s.text("a") for (mu, nu), s in sorted(self.theta_const.items())
            },
            "theta_lin": {
                f"{mu},{nu},{lam}": s.text("a")
                for (mu, nu, lam), s in sorted(self.theta_lin.items())
                if not s.is_zero()
            },
        }


def extract_theta(spec: TwistSpec) -> StarAlgebraReport:
    """Compute every [x^mu, x^nu]_* and split it into constant, linear,
    and residual parts (antisymmetry filled in by construction)."""
    g = generators(spec)
    n = spec.dim
    order = spec.order
    minus_i = GaussianRational(0, -1)
    theta_const: dict[tuple[int, int], TruncatedSeries] = {}
    theta_lin: dict[tuple[int, int, int], TruncatedSeries] = {}
    residual: dict[tuple[int, int], DiffOp] = {}
    zero_series = TruncatedSeries.zero(order)
    for mu in range(n):
        for nu in range(n):
            if mu == nu:
                continue
            if mu > nu:
                theta_const[(mu, nu)] = -theta_const[(nu, mu)]
                for lam in range(n):
                    theta_lin[(mu, nu, lam)] = -theta_lin[(nu, mu, lam)]
                residual[(mu, nu)] = -residual[(nu, mu)]
                continue
            comm = star_commutator(spec, g.x(mu), g.x(nu))
            const = comm.coefficient([0] * n, [0] * n) * minus_i
            theta_const[(mu, nu)] = const
            rest = dict(comm.terms)
            rest.pop(Monomial((0,) * n, (0,) * n), None)
            for lam in range(n):
                x = [0] * n
                x[lam] = 1
                mono = Monomial(tuple(x), (0,) * n)
                coeff = rest.pop(mono, zero_series)
                theta_lin[(mu, nu, lam)] = coeff * minus_i
            residual[(mu, nu)] = DiffOp(n, order, rest)
    return StarAlgebraReport(spec, theta_const, theta_lin, residual)


def r_matrix(spec: TwistSpec) -> TensorOp:
    """Order-a coefficient of F21 F^{-1} - 1 (x) 1, reported as a tensor
    with constant coefficients."""
    quantum_r = build_twist(spec).flip() * build_twist_inverse(spec)
    shifted = quantum_r - TensorOp.identity(spec.dim, spec.order, 2)
    terms = {}
    for mono, coeff in shifted.op.terms.items():
        c = coeff.coeffs[1] if spec.order >= 1 else None
        if c:
            terms[mono] = TruncatedSeries.constant(c, spec.order)
    return TensorOp(
        DiffOp(2 * spec.dim, spec.order, terms, shifted.op.cap), 2, spec.dim
    )


def bidiff_form(t: TensorOp) -> dict:
    """Canonical form of a two-leg tensor as a bidifferential operator:
    both legs' multiplication parts commute past each other, so tensors
    that act identically on f (x) g get the same key set."""
    out: dict[tuple, TruncatedSeries] = {}
    for (b1, b2), coeff in t.term_blocks():
        key = (
            tuple(x1 + x2 for x1, x2 in zip(b1.x_exp, b2.x_exp)),
            b1.d_exp,
            b2.d_exp,
        )
        cur = out.get(key)
        total = coeff if cur is None else cur + coeff
        if total.is_zero():
            out.pop(key, None)
        else:
            out[key] = total
    return out


@lru_cache(maxsize=None)
def left_realization(spec: TwistSpec, mu: int) -> DiffOp:
    """The operator implementing left star multiplication by x^mu."""
    g = generators(spec)
    xmu = g.x(mu)
    out = DiffOp.zero(spec.dim, spec.order)
    for (m1, m2), coeff in build_twist_inverse(spec).term_blocks():
        acted = DiffOp(spec.dim, spec.order, {m1: TruncatedSeries.one(spec.order)}).apply(xmu)
        if acted.is_zero():
            continue
        tail = DiffOp(spec.dim, spec.order, {m2: TruncatedSeries.one(spec.order)})
        out = out + (acted * tail).scale(coeff)
    return out


@lru_cache(maxsize=None)
def right_realization(spec: TwistSpec, mu: int) -> DiffOp:
    """The operator implementing right star multiplication by x^mu."""
    g = generators(spec)
    xmu = g.x(mu)
    out = DiffOp.zero(spec.dim, spec.order)
    for (m1, m2), coeff in build_twist_inverse(spec).term_blocks():
        acted = DiffOp(spec.dim, spec.order, {m2: TruncatedSeries.one(spec.order)}).apply(xmu)
        if acted.is_zero():
            continue
        head = DiffOp(spec.dim, spec.order, {m1: TruncatedSeries.one(spec.order)})
        out = out + (acted * head).scale(coeff)
    return out


def star_commutator_with_function(spec: TwistSpec, mu: int, f: DiffOp) -> DiffOp:
    """[x^mu, f]_* computed as the left-minus-right realization action."""
    return (left_realization(spec, mu) - right_realization(spec, mu)).apply(f)
