"""
Exact rational scalars and dense univariate polynomials

Every exact identity in this repo is decided on `Poly` values whose
coefficients are `fractions.Fraction`. Nothing here ever touches a float.

The variable symbol is not stored: a Poly is "in ξ_N", "in x" or "in u"
only by the context that built it.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

# Rational is the scalar field for all exact work
Rational = Fraction
Scalar = Union[int, Fraction]

_INTEGER_OR_RATIO = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


# ============================================================================
# ERRORS
# ============================================================================

class AbnsError(Exception):
    """Base class for every error raised by this package."""


class ParityError(AbnsError):
    """A polynomial mixes even and odd powers where a single parity was claimed."""


class DomainError(AbnsError):
    """A parameter lies outside the domain of the requested operation."""


# ============================================================================
# RATIONALS
# ============================================================================

def parse_rational(text: str, allow_decimal: bool = False) -> Fraction:
    """
    Parse "p/q" or an integer literal into an exact Fraction.

    Decimal or exponent notation ("0.5", "1e-9") is accepted only when
    allow_decimal is set, and is still converted exactly.
    """
    if not isinstance(text, str):
        raise DomainError(f"expected a string, got {type(text).__name__}")
    if _INTEGER_OR_RATIO.match(text):
        try:
            value = Fraction(text.replace(" ", ""))
        except ZeroDivisionError as e:
            raise DomainError(f"zero denominator: {text!r}") from e
    elif allow_decimal:
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"not a number: {text!r}") from e
    else:
        raise DomainError(f"not an exact rational (use p/q or an integer): {text!r}")
    return value


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q" (or "p" for integers), never as a float."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ============================================================================
# POLYNOMIALS
# ============================================================================

@dataclass(frozen=True)
class Poly:
    """
    Dense polynomial over Q, coefficient index = power.

    Trailing zeros are stripped on construction, so the zero polynomial is
    always the empty tuple and `==` is exact coefficient-wise equality.
    """

    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        values = [Fraction(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, value: Scalar) -> "Poly":
        return cls((value,))

    @classmethod
    def monomial(cls, power: int, value: Scalar = 1) -> "Poly":
        if power < 0:
            raise DomainError(f"negative power {power}")
        return cls((0,) * power + (value,))

    @classmethod
    def from_strings(cls, values: Iterable[str]) -> "Poly":
        return cls(tuple(parse_rational(v) for v in values))

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    def has_parity(self, parity: int) -> bool:
        return all(c == 0 for k, c in enumerate(self.coeffs) if (k - parity) % 2)

    def to_strings(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]

    # -- ring ----------------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coefficient(k) + other.coefficient(k) for k in range(size)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(tuple(c * other for c in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError(f"only nonnegative integer powers, got {exponent!r}")
        result = Poly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, divisor: "Poly") -> Tuple["Poly", "Poly"]:
        """Euclidean division over Q."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        quotient = [Fraction(0)] * max(len(remainder) - len(divisor.coeffs) + 1, 0)
        lead = divisor.leading
        shift = len(remainder) - len(divisor.coeffs)
        while shift >= 0:
            factor = remainder[shift + len(divisor.coeffs) - 1] / lead
            quotient[shift] = factor
            if factor:
                for j, d in enumerate(divisor.coeffs):
                    remainder[shift + j] -= factor * d
            remainder.pop()
            shift -= 1
        return Poly(tuple(quotient)), Poly(tuple(remainder))

    def __mod__(self, divisor: "Poly") -> "Poly":
        return divmod(self, divisor)[1]

    # -- calculus and evaluation --------------------------------------------

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def __call__(self, x: Scalar) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def float_coeffs(self) -> List[float]:
        return [float(c) for c in self.coeffs]

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(format_rational(c) + ("" if k == 0 else "*t" if k == 1 else f"*t^{k}"))
        return "Poly(" + " + ".join(terms) + ")"


def _as_poly(value):
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.constant(value)
    return NotImplemented


# the variable (ξ, x or u by context)
T = Poly.monomial(1)


# ============================================================================
# OPERATIONS
# ============================================================================

def add(a: Poly, b: Poly) -> Poly:
    return a + b


def subtract(a: Poly, b: Poly) -> Poly:
    return a - b


def multiply(a: Poly, b: Poly) -> Poly:
    return a * b


def scale(p: Poly, c: Scalar) -> Poly:
    return p * Fraction(c)


def differentiate(p: Poly) -> Poly:
    return p.derivative()


def evaluate(p: Poly, x: Scalar) -> Fraction:
    """Horner evaluation, exact."""
    return p(x)


def check_parity(p: Poly, parity: int, what: str = "polynomial") -> None:
    if not p.has_parity(parity):
        odd_even = "even" if parity % 2 == 0 else "odd"
        raise ParityError(f"{what} is not {odd_even}: {p!r}")


def scaled_compose(p: Poly, c: Scalar, parity: int) -> Poly:
    """
    Exact (√c)^parity · p(√c·ξ) for a polynomial of the given parity.

    Coefficient a_k picks up c^((parity+k)/2). The parity claim makes every
    exponent an integer, which is what lets the shifted-argument identities
    be checked over Q at all. The claim is validated, not trusted.
    """
    c = Fraction(c)
    if c <= 0:
        raise DomainError(f"scale factor must be positive, got {format_rational(c)}")
    check_parity(p, parity, "scaled_compose input")
    return Poly(tuple(a * c ** ((parity + k) // 2) for k, a in enumerate(p.coeffs)))


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a * (1 / a.leading)


def squarefree_part(p: Poly) -> Poly:
    if p.degree < 1:
        return p
    g = gcd(p, p.derivative())
    if g.degree < 1:
        return p
    return divmod(p, g)[0]


def max_abs_coefficient(p: Poly) -> Fraction:
    return max((abs(c) for c in p.coeffs), default=Fraction(0))


def coefficient_distance(a: Poly, b: Poly) -> Fraction:
    """‖coeffs(a) − coeffs(b)‖∞, exact."""
    return max_abs_coefficient(a - b)
