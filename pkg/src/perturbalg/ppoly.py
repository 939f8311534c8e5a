"""Polynomials with truncated-series coefficients.

Implements the perturbation side of polynomial algebra: Euclidean division in
the extended ring, the perturbed GCD (last remainder that is not wholly
infinitesimal), and the leading-order root corrections

    xi^k ~ -k! * Xi(u) / P^(k)(u)

for a root u of multiplicity k of the exact base polynomial P perturbed by an
infinitesimal polynomial Xi, together with the dominant-balance case analysis
at a double root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    DegenerateError,
    DomainError,
    NonUnitError,
    RingMismatchError,
    UnsupportedOrderError,
)
from .exactpoly import ExactPolynomial
from .goze import GozeDecomposition
from .scalars import GaussianRational
from .series import SeriesRing, TruncatedSeries, divide_univariate


class PerturbedPolynomial:
    """Dense polynomial over a series ring, low degree first."""

    __slots__ = ("ring", "coeffs", "var")

    def __init__(self, ring: SeriesRing, coeffs, var: str = "X"):
        cleaned = []
        for c in coeffs:
            if isinstance(c, TruncatedSeries):
                if c.ring != ring:
                    raise RingMismatchError("coefficient from a different ring")
                cleaned.append(c)
            else:
                cleaned.append(ring.constant(c))
        while cleaned and cleaned[-1].is_zero():
            cleaned.pop()
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(cleaned))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("PerturbedPolynomial is immutable")

    @staticmethod
    def from_exact(poly: ExactPolynomial, ring: SeriesRing, var: Optional[str] = None):
        return PerturbedPolynomial(ring, list(poly.coeffs), var or poly.var)

    @staticmethod
    def zero(ring: SeriesRing, var: str = "X") -> "PerturbedPolynomial":
        return PerturbedPolynomial(ring, (), var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def leading(self) -> TruncatedSeries:
        if not self.coeffs:
            return self.ring.zero()
        return self.coeffs[-1]

    def coefficient(self, degree: int) -> TruncatedSeries:
        if 0 <= degree < len(self.coeffs):
            return self.coeffs[degree]
        return self.ring.zero()

    def _coerce(self, other) -> "PerturbedPolynomial":
        if isinstance(other, PerturbedPolynomial):
            if other.ring != self.ring:
                raise RingMismatchError("polynomials from different rings")
            if other.var != self.var:
                raise DomainError(
                    f"indeterminates differ: {other.var!r} vs {self.var!r}"
                )
            return other
        if isinstance(other, (TruncatedSeries, GaussianRational, Fraction, int)):
            return PerturbedPolynomial(self.ring, (other,), self.var)
        raise TypeError(f"cannot coerce {other!r} to a perturbed polynomial")

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, RingMismatchError, DomainError):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other):
        other = self._coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return PerturbedPolynomial(
            self.ring,
            [self.coefficient(k) + other.coefficient(k) for k in range(size)],
            self.var,
        )

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return PerturbedPolynomial(self.ring, [-c for c in self.coeffs], self.var)

    def __mul__(self, other):
        if isinstance(other, (TruncatedSeries, GaussianRational, Fraction, int)):
            other = self._coerce(other)
        elif not isinstance(other, PerturbedPolynomial):
            return NotImplemented
        else:
            other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return PerturbedPolynomial.zero(self.ring, self.var)
        out = [self.ring.zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PerturbedPolynomial(self.ring, out, self.var)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative polynomial power")
        result = PerturbedPolynomial(self.ring, (1,), self.var)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def evaluate(self, point) -> TruncatedSeries:
        """Horner evaluation at a series (scalars are lifted to constants)."""
        if not isinstance(point, TruncatedSeries):
            point = self.ring.constant(point)
        elif point.ring != self.ring:
            raise RingMismatchError("evaluation point from a different ring")
        acc = self.ring.zero()
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def derivative(self, order: int = 1) -> "PerturbedPolynomial":
        poly = self
        for _ in range(order):
            poly = PerturbedPolynomial(
                poly.ring,
                [poly.coeffs[k] * k for k in range(1, len(poly.coeffs))],
                poly.var,
            )
        return poly

    def shadow(self) -> ExactPolynomial:
        """Coefficient-wise standard part; the degree may drop."""
        return ExactPolynomial([c.standard_part() for c in self.coeffs], self.var)

    def is_infinitesimal(self) -> bool:
        """True when every coefficient has valuation >= 1 (0 included)."""
        return all(c.is_infinitesimal() for c in self.coeffs)

    def numeric_coeffs(self, values) -> list[complex]:
        return [c.numeric_sample(values) for c in self.coeffs]

    def evaluate_numeric(self, point: complex, values) -> complex:
        """Horner evaluation with generators sampled at complex values."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * complex(point) + c.numeric_sample(values)
        return acc

    def strip_infinitesimal_leading(self):
        """Drop leading coefficients of valuation >= 1.

        Returns (polynomial, stripped_degrees).  Used before a Euclidean
        division step so the divisor keeps a unit leading coefficient; a
        wholly infinitesimal polynomial strips to zero.
        """
        coeffs = list(self.coeffs)
        stripped = []
        while coeffs and coeffs[-1].is_infinitesimal():
            stripped.append(len(coeffs) - 1)
            coeffs.pop()
        return PerturbedPolynomial(self.ring, coeffs, self.var), tuple(stripped)

    def __str__(self):
        return format_perturbed_polynomial(self)

    def __repr__(self):
        return f"<perturbed poly {self}>"


def euclid_divide(a: PerturbedPolynomial, b: PerturbedPolynomial):
    """Euclidean division a = b*q + r with deg r < deg b, exact in the ring.

    The leading coefficient of b must be a unit; otherwise the division is
    singular and NonUnitError is raised (the PGCD machinery strips such
    leading terms instead of dividing by them).
    """
    b = a._coerce(b)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if not b.leading.is_unit():
        raise NonUnitError("divisor has a non-unit leading coefficient")
    if a.degree < b.degree:
        return PerturbedPolynomial.zero(a.ring, a.var), a
    lead_inv = b.leading.invert()
    quotient = [a.ring.zero() for _ in range(a.degree - b.degree + 1)]
    rest = list(a.coeffs)
    for k in range(a.degree - b.degree, -1, -1):
        factor = rest[k + b.degree] * lead_inv
        quotient[k] = factor
        if not factor.is_zero():
            for j, c in enumerate(b.coeffs):
                rest[k + j] = rest[k + j] - factor * c
    remainder = PerturbedPolynomial(a.ring, rest[: max(b.degree, 0)], a.var)
    return PerturbedPolynomial(a.ring, quotient, a.var), remainder


@dataclass(frozen=True)
class RemainderStep:
    """One Euclidean step in the PGCD chain."""

    remainder: PerturbedPolynomial
    divisor_stripped_degrees: tuple = ()
    wholly_infinitesimal: bool = False
    exact_zero: bool = False


def pgcd(a: PerturbedPolynomial, b: PerturbedPolynomial):
    """Perturbed GCD: last Euclidean remainder not wholly infinitesimal.

    Returns (pgcd, trace).  A remainder that is exactly zero ends the chain
    and the preceding remainder is returned, matching the classical GCD on
    exact inputs.  Divisors whose leading coefficients are infinitesimal but
    which are not wholly infinitesimal have those terms stripped (recorded in
    the trace) so every division is by a unit leading coefficient.
    """
    if a.is_zero() or b.is_zero():
        raise DomainError("PGCD requires two nonzero polynomials")
    b = a._coerce(b)
    trace: list[RemainderStep] = []
    previous, current = a, b
    if previous.is_infinitesimal() and current.is_infinitesimal():
        raise DomainError("both inputs are wholly infinitesimal; no PGCD exists")
    while True:
        if current.is_zero():
            return previous, trace
        if current.is_infinitesimal():
            return previous, trace
        divisor, stripped = current.strip_infinitesimal_leading()
        if divisor.is_zero():  # unreachable: current not wholly infinitesimal
            return previous, trace
        _, remainder = euclid_divide(previous, divisor)
        trace.append(
            RemainderStep(
                remainder=remainder,
                divisor_stripped_degrees=stripped,
                wholly_infinitesimal=remainder.is_infinitesimal()
                and not remainder.is_zero(),
                exact_zero=remainder.is_zero(),
            )
        )
        previous, current = divisor, remainder


def monic_shadow(poly: PerturbedPolynomial) -> ExactPolynomial:
    """Shadow of the polynomial, normalized monic (for GCD comparisons)."""
    return poly.shadow().monic()


@dataclass(frozen=True)
class RootAsymptotics:
    """The statement xi^k ~ rhs for a perturbed root u + xi.

    `leading_level` is the 0-based index of the first decomposition level
    whose direction polynomial does not vanish at u, when a decomposition was
    supplied to root_correction.
    """

    base_root: GaussianRational
    order: int
    rhs: TruncatedSeries
    leading_level: Optional[int] = None

    def __post_init__(self):
        if self.order < 1:
            raise DomainError("branch count must be at least 1")
        if not self.rhs.is_infinitesimal():
            raise DomainError("the asserted xi^k value must be infinitesimal")

    def __str__(self):
        power = "" if self.order == 1 else f"^{self.order}"
        return f"xi{power} ~ {self.rhs} (at root {self.base_root})"


@dataclass(frozen=True)
class BalanceQuadratic:
    """Balanced double-root case: quad_coeff*xi^2 + linear*xi + constant ~ 0.

    Returned when the two branch magnitudes coincide and the correction is a
    root of a genuine quadratic whose roots need not live in the coefficient
    ring.
    """

    base_root: GaussianRational
    quad_coeff: GaussianRational
    linear: TruncatedSeries
    constant: TruncatedSeries

    def __str__(self):
        return (
            f"{self.quad_coeff}*xi^2 + ({self.linear})*xi + ({self.constant}) ~ 0 "
            f"(at root {self.base_root})"
        )


def _exact_multiplicity(poly: ExactPolynomial, root: GaussianRational) -> int:
    mult = poly.multiplicity(root)
    if mult == 0:
        raise DomainError(f"{root} is not a root of {poly}")
    return mult


def apply_root_sensitivity(
    base: ExactPolynomial, root, shift_poly: PerturbedPolynomial
) -> TruncatedSeries:
    """Sensitivity map L(H) = -r! * H(u) / P^(r)(u) at a root u of multiplicity r.

    For any perturbed root xi of P + H with shadow u, xi^r differs from L(H)
    by an infinitesimal multiple of the perturbation size.
    """
    root = GaussianRational.coerce(root)
    mult = _exact_multiplicity(base, root)
    denominator = base.derivative(mult).evaluate(root)
    scale = GaussianRational(-math.factorial(mult)) / denominator
    return shift_poly.evaluate(root) * scale


def root_correction(
    base: ExactPolynomial,
    shift_poly: PerturbedPolynomial,
    root,
    order: Optional[int] = None,
    decomposition: Optional[GozeDecomposition] = None,
) -> RootAsymptotics:
    """Leading asymptotics of a root of multiplicity k under perturbation.

    Computes xi^k ~ -k! * Xi(u) / P^(k)(u), keeping the leading-valuation
    part.  With a decomposition of Xi's coefficient vector the right-hand
    side is expressed through the first level whose direction polynomial does
    not vanish at u.
    """
    if not shift_poly.is_infinitesimal():
        raise DomainError("the perturbation polynomial must be wholly infinitesimal")
    root = GaussianRational.coerce(root)
    mult = _exact_multiplicity(base, root)
    if order is not None and order != mult:
        raise DomainError(
            f"declared multiplicity {order} but {root} has multiplicity {mult}"
        )
    order = mult
    denominator = base.derivative(order).evaluate(root)
    if not denominator:  # cannot happen once mult is exact; guard anyway
        raise DomainError("multiplicity misdeclared: P^(k)(u) = 0")
    scale = GaussianRational(-math.factorial(order)) / denominator

    level_index = None
    if decomposition is not None:
        rhs = None
        prefix = decomposition.ring.one()
        for index, (alpha, direction) in enumerate(decomposition.levels):
            prefix = prefix * alpha
            value = ExactPolynomial(direction, shift_poly.var).evaluate(root)
            if value:
                rhs = prefix * (value * scale)
                level_index = index
                break
        if rhs is None:
            raise DegenerateError(
                "every direction polynomial vanishes at the root; "
                "use dominant_balance"
            )
    else:
        shifted = shift_poly.evaluate(root)
        if shifted.is_zero():
            raise DegenerateError(
                "Xi(u) vanishes up to the truncation bound; use dominant_balance"
            )
        rhs = (shifted * scale).leading_part()
    return RootAsymptotics(root, order, rhs, level_index)


def dominant_balance(base: ExactPolynomial, shift_poly: PerturbedPolynomial, root):
    """Branch analysis at a double root: Xi(u) + xi*Xi'(u) + xi^2*P''(u)/2 ~ 0.

    Returns a list of RootAsymptotics, or a single-element list holding a
    BalanceQuadratic when the two scales coincide and neither term dominates.
    """
    root = GaussianRational.coerce(root)
    if base.evaluate(root):
        raise DomainError(f"{root} is not a root of {base}")
    if base.derivative().evaluate(root):
        raise DomainError("simple root: use root_correction instead")
    curvature = base.derivative(2).evaluate(root)
    if not curvature:
        raise UnsupportedOrderError(
            "root of multiplicity three or higher; not supported by the balance"
        )
    half_curv = curvature / 2
    value = shift_poly.evaluate(root)
    slope = shift_poly.derivative().evaluate(root)

    if value.is_zero():
        ring = shift_poly.ring
        still = RootAsymptotics(root, 1, ring.zero())
        if slope.is_zero():
            return [still, still]
        moved = (slope * (GaussianRational(-1) / half_curv)).leading_part()
        return [still, RootAsymptotics(root, 1, moved)]
    if slope.is_zero():
        rhs = (value * (GaussianRational(-1) / half_curv)).leading_part()
        return [RootAsymptotics(root, 2, rhs)]

    value_val = value.valuation()
    slope_val = slope.valuation()
    if value_val < 2 * slope_val:
        rhs = (value * (GaussianRational(-1) / half_curv)).leading_part()
        return [RootAsymptotics(root, 2, rhs)]
    if value_val > 2 * slope_val:
        if not shift_poly.ring.is_univariate:
            raise DomainError(
                "mixed-scale balance needs the univariate ring; specialize first"
            )
        small = (-divide_univariate(value, slope)).leading_part()
        large = (slope * (GaussianRational(-1) / half_curv)).leading_part()
        return [
            RootAsymptotics(root, 1, small),
            RootAsymptotics(root, 1, large),
        ]
    return [
        BalanceQuadratic(
            base_root=root,
            quad_coeff=half_curv,
            linear=slope.leading_part(),
            constant=value.leading_part(),
        )
    ]


def format_perturbed_polynomial(poly: PerturbedPolynomial) -> str:
    from .series import _monomial_text, _scalar_pieces, format_series

    if poly.is_zero():
        return "0"
    chunks = []
    for degree in range(poly.degree, -1, -1):
        coeff = poly.coefficient(degree)
        if coeff.is_zero():
            continue
        if degree == 0:
            monomial = ""
        elif degree == 1:
            monomial = poly.var
        else:
            monomial = f"{poly.var}^{degree}"
        if len(coeff.terms) == 1:
            ((index, scalar),) = coeff.terms.items()
            gen_text = _monomial_text(poly.ring.generators, index)
            sign, factor = _scalar_pieces(
                scalar, with_monomial=bool(gen_text or monomial)
            )
            parts = [p for p in (factor, gen_text, monomial) if p]
            body = "*".join(parts) if parts else "1"
        elif monomial:
            sign, body = "+", f"({format_series(coeff)})*{monomial}"
        else:
            sign, body = "+", f"({format_series(coeff)})"
        chunks.append((sign, body))
    first_sign, first_body = chunks[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in chunks[1:]:
        text += f" {sign} {body}"
    return text
