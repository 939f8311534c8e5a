"""Polynomials and rational functions over the exact Gaussian rationals.

These carry the shadow (standard-part) side of every computation: shadows of
perturbed polynomials, reduced transfer functions, and the base polynomials
whose roots get corrected.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .scalars import GaussianRational


def _coerce_scalar(value) -> GaussianRational:
    return GaussianRational.coerce(value)


class ExactPolynomial:
    """Dense polynomial with GaussianRational coefficients, low degree first."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, var: str = "X"):
        cleaned = [_coerce_scalar(c) for c in coeffs]
        while cleaned and not cleaned[-1]:
            cleaned.pop()
        object.__setattr__(self, "coeffs", tuple(cleaned))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("ExactPolynomial is immutable")

    @staticmethod
    def zero(var: str = "X") -> "ExactPolynomial":
        return ExactPolynomial((), var)

    @staticmethod
    def constant(value, var: str = "X") -> "ExactPolynomial":
        return ExactPolynomial((value,), var)

    @staticmethod
    def monomial(coeff, degree: int, var: str = "X") -> "ExactPolynomial":
        return ExactPolynomial([0] * degree + [coeff], var)

    @property
    def degree(self) -> int:
        """Degree, with the usual -1 convention for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def leading(self) -> GaussianRational:
        if not self.coeffs:
            return GaussianRational(0)
        return self.coeffs[-1]

    def coefficient(self, degree: int) -> GaussianRational:
        if 0 <= degree < len(self.coeffs):
            return self.coeffs[degree]
        return GaussianRational(0)

    def _coerce(self, other) -> "ExactPolynomial":
        if isinstance(other, ExactPolynomial):
            return other
        return ExactPolynomial.constant(other, self.var)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return ExactPolynomial(
            [self.coefficient(k) + other.coefficient(k) for k in range(size)], self.var
        )

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return ExactPolynomial([-c for c in self.coeffs], self.var)

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, Fraction, int)):
            other = self._coerce(other)
        elif not isinstance(other, ExactPolynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ExactPolynomial.zero(self.var)
        out = [GaussianRational(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return ExactPolynomial(out, self.var)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        quotient = [GaussianRational(0)] * max(0, self.degree - other.degree + 1)
        rest = list(self.coeffs)
        lead_inv = GaussianRational(1) / other.leading
        for k in range(self.degree - other.degree, -1, -1):
            factor = rest[k + other.degree] * lead_inv
            quotient[k] = factor
            if factor:
                for j, b in enumerate(other.coeffs):
                    rest[k + j] = rest[k + j] - factor * b
        return (
            ExactPolynomial(quotient, self.var),
            ExactPolynomial(rest[: max(other.degree, 0)], self.var),
        )

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative polynomial power")
        result = ExactPolynomial.constant(1, self.var)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def derivative(self, order: int = 1) -> "ExactPolynomial":
        poly = self
        for _ in range(order):
            poly = ExactPolynomial(
                [poly.coeffs[k] * k for k in range(1, len(poly.coeffs))], poly.var
            )
        return poly

    def evaluate(self, point):
        """Horner evaluation; exact for GaussianRational points, float for complex."""
        if isinstance(point, (GaussianRational, Fraction, int)):
            point = GaussianRational.coerce(point)
            acc = GaussianRational(0)
        else:
            point = complex(point)
            acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * point + (c if isinstance(acc, GaussianRational) else complex(c))
        return acc

    def monic(self) -> "ExactPolynomial":
        if self.is_zero():
            return self
        lead_inv = GaussianRational(1) / self.leading
        return self * lead_inv

    def multiplicity(self, root) -> int:
        """Exact multiplicity of `root` (0 when it is not a root)."""
        root = GaussianRational.coerce(root)
        count = 0
        poly = self
        while not poly.is_zero() and not poly.evaluate(root):
            count += 1
            poly = poly.derivative()
        return count

    def numeric_coeffs(self) -> list[complex]:
        return [complex(c) for c in self.coeffs]

    def __str__(self):
        return format_exact_polynomial(self)

    def __repr__(self):
        return f"<exact poly {self}>"


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic greatest common divisor by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def from_roots(roots, var: str = "X", scale=1) -> ExactPolynomial:
    poly = ExactPolynomial.constant(scale, var)
    for r in roots:
        poly = poly * ExactPolynomial([-GaussianRational.coerce(r), 1], var)
    return poly


class ExactRationalFunction:
    """Quotient of exact polynomials, kept coprime with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: ExactPolynomial, den: ExactPolynomial):
        if den.is_zero():
            raise DomainError("rational function with zero denominator")
        if num.is_zero():
            num = ExactPolynomial.zero(num.var)
            den = ExactPolynomial.constant(1, den.var)
        else:
            common = poly_gcd(num, den)
            if common.degree > 0:
                num = num // common
                den = den // common
            lead_inv = GaussianRational(1) / den.leading
            num = num * lead_inv
            den = den * lead_inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("ExactRationalFunction is immutable")

    @staticmethod
    def zero(var: str = "p") -> "ExactRationalFunction":
        return ExactRationalFunction(
            ExactPolynomial.zero(var), ExactPolynomial.constant(1, var)
        )

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, ExactRationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, ExactRationalFunction):
            return NotImplemented
        return ExactRationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        return self + ExactRationalFunction(-other.num, other.den)

    def __neg__(self):
        return ExactRationalFunction(-self.num, self.den)

    def __mul__(self, other):
        if not isinstance(other, ExactRationalFunction):
            return NotImplemented
        return ExactRationalFunction(self.num * other.num, self.den * other.den)

    def evaluate(self, point) -> complex:
        den = self.den.evaluate(point)
        return self.num.evaluate(point) / den

    def __str__(self):
        num_text = format_exact_polynomial(self.num)
        if self.den.degree == 0 and self.den.leading == 1:
            return num_text
        return f"({num_text})/({format_exact_polynomial(self.den)})"

    def __repr__(self):
        return f"<rational function {self}>"


def format_exact_polynomial(poly: ExactPolynomial) -> str:
    from .series import _scalar_pieces  # shared term formatting

    if poly.is_zero():
        return "0"
    chunks = []
    for degree in range(poly.degree, -1, -1):
        coeff = poly.coefficient(degree)
        if not coeff:
            continue
        if degree == 0:
            monomial = ""
        elif degree == 1:
            monomial = poly.var
        else:
            monomial = f"{poly.var}^{degree}"
        sign, factor = _scalar_pieces(coeff, with_monomial=bool(monomial))
        if monomial and factor:
            body = f"{factor}*{monomial}"
        else:
            body = monomial or factor or "1"
        chunks.append((sign, body))
    first_sign, first_body = chunks[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in chunks[1:]:
        text += f" {sign} {body}"
    return text
