"""Exact scalars in Q(r) with r the positive real fourth root of m = |H|/|K|."""

import logging
from fractions import Fraction
from numbers import Rational
from typing import Dict, Optional, Tuple, Union

from sympy import integer_nthroot

from group_type_planar.config import ScalarDomainError

logger = logging.getLogger(__name__)

Coeffs = Tuple[Fraction, Fraction, Fraction, Fraction]
RationalLike = Union[int, Fraction]


def rational_root(value: Fraction, k: int) -> Optional[Fraction]:
    """The positive rational k-th root of a positive rational, if it exists."""
    num, num_exact = integer_nthroot(value.numerator, k)
    den, den_exact = integer_nthroot(value.denominator, k)
    if num_exact and den_exact:
        return Fraction(int(num), int(den))
    return None


class ScalarRing:
    """The field Q(r), r^4 = m, with r > 0."""

    def __init__(self, m: RationalLike):
        m = Fraction(m)
        if m <= 0:
            raise ScalarDomainError(f"m must be positive, got {m}")
        self.m = m
        # r rational (degree 1), r^2 rational (degree 2), or neither
        self.rho = rational_root(m, 4)
        self.q = rational_root(m, 2)
        if self.rho is not None:
            self.degree = 1
        elif self.q is not None:
            self.degree = 2
        else:
            self.degree = 4
        self._r_float = float(m) ** 0.25
        logger.debug(f"Scalar ring for m = {m} has degree {self.degree}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScalarRing) and self.m == other.m

    def __hash__(self) -> int:
        return hash(self.m)

    def __repr__(self) -> str:
        return f"ScalarRing(m={self.m})"

    def canonical(self, coeffs) -> Coeffs:
        c0, c1, c2, c3 = (Fraction(c) for c in coeffs)
        if self.degree == 1:
            rho = self.rho
            return (c0 + c1 * rho + c2 * rho ** 2 + c3 * rho ** 3, Fraction(0), Fraction(0), Fraction(0))
        if self.degree == 2:
            q = self.q
            return (c0 + c2 * q, c1 + c3 * q, Fraction(0), Fraction(0))
        return (c0, c1, c2, c3)

    def scalar(self, coeffs) -> "Scalar":
        return Scalar(self, self.canonical(coeffs))

    def rational(self, value: RationalLike) -> "Scalar":
        return self.scalar((value, 0, 0, 0))

    @property
    def zero(self) -> "Scalar":
        return self.rational(0)

    @property
    def one(self) -> "Scalar":
        return self.rational(1)

    @property
    def r(self) -> "Scalar":
        return self.scalar((0, 1, 0, 0))

    def power(self, j: int) -> "Scalar":
        """r^j = m^(j/4) for any integer j."""
        base = [Fraction(0)] * 4
        base[j % 4] = self.m ** (j // 4)
        return self.scalar(base)

    def sqrt_ratio(self, top: int, bottom: int) -> "Scalar":
        """sqrt(top/bottom) for top/bottom in {|H|, |K|}; equal sizes give 1."""
        ratio = Fraction(top, bottom)
        if ratio == 1:
            return self.one
        if ratio == self.m:
            return self.power(2)
        if ratio == 1 / self.m:
            return self.power(-2)
        raise ScalarDomainError(f"sqrt({ratio}) is not a power of r")

    def delta(self, k_order: int) -> "Scalar":
        """sqrt(|H||K|) = |K| r^2."""
        return self.power(2) * k_order


class Scalar:
    """c0 + c1 r + c2 r^2 + c3 r^3 in canonical form."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: ScalarRing, coeffs: Coeffs):
        self.ring = ring
        self.coeffs = coeffs

    def _coerce(self, other) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise ScalarDomainError(f"mixing scalars of {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, Rational)):
            return self.ring.rational(Fraction(other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product = [Fraction(0)] * 7
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        product[i + j] += a * b
        m = self.ring.m
        reduced = [product[k] + m * product[k + 4] if k < 3 else product[k] for k in range(4)]
        return self.ring.scalar(reduced)

    __rmul__ = __mul__

    def conj_r(self) -> "Scalar":
        """r -> -r."""
        c0, c1, c2, c3 = self.coeffs
        return Scalar(self.ring, (c0, -c1, c2, -c3))

    def conj_s(self) -> "Scalar":
        """r^2 -> -r^2 on elements with no odd part."""
        c0, c1, c2, c3 = self.coeffs
        return Scalar(self.ring, (c0, c1, -c2, c3))

    def inverse(self) -> "Scalar":
        if not self:
            raise ScalarDomainError("inverse of zero")
        even = self * self.conj_r()
        norm = even * even.conj_s()
        rational = norm.coeffs[0]
        return self.conj_r() * even.conj_s() / rational

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ScalarDomainError("division by zero")
            return Scalar(self.ring, tuple(a / Fraction(other) for a in self.coeffs))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.ring.one
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> "Scalar":
        # every element is real
        return self

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except ScalarDomainError:
            return False
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring.m, self.coeffs))

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ScalarDomainError(f"{self} is not rational")
        return self.coeffs[0]

    def to_float(self) -> float:
        r = self.ring._r_float
        return float(sum(float(c) * r ** i for i, c in enumerate(self.coeffs)))

    def to_dict(self) -> Dict[str, str]:
        return {f"c{i}": str(c) for i, c in enumerate(self.coeffs)}

    def to_text(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                power = "r" if i == 1 else f"r^{i}"
                terms.append(power if c == 1 else f"{c}*{power}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r}, m={self.ring.m})"
