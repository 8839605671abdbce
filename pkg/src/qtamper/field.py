"""Exact arithmetic in prime fields F_q and univariate polynomial utilities.

Only prime q is supported; the characteristic equals q.  Root counting is
done by exhaustive evaluation, which is exact and cheap at desk scale
(q up to a few hundred).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import DivisionByZero, ModulusMismatch, ZeroPolynomial


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Trial-division primality test (q is small by construction)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldElement:
    """An element of F_q for prime q, with value in [0, q)."""

    __slots__ = ("value", "q")

    def __init__(self, value: int, q: int):
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        self.value = value % q
        self.q = q

    def _coerce(self, other: Union["FieldElement", int]) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.q != self.q:
                raise ModulusMismatch(f"moduli differ: {self.q} vs {other.q}")
            return other
        return FieldElement(other, self.q)

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.value + other.value, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.value - other.value, self.q)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return FieldElement(self.value * other.value, self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.q)

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise DivisionByZero(f"inverse of 0 in F_{self.q}")
        return FieldElement(pow(self.value, self.q - 2, self.q), self.q)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inv() ** (-exponent)
        return FieldElement(pow(self.value, exponent, self.q), self.q)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.q
        return (
            isinstance(other, FieldElement)
            and self.q == other.q
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.value, self.q))

    def __repr__(self):
        return f"FieldElement({self.value}, q={self.q})"


class FqPoly:
    """Univariate polynomial over F_q, coefficients indexed by degree.

    The coefficient tuple is normalized: trailing zeros are stripped, so
    the zero polynomial has an empty tuple and every nonzero polynomial
    has a nonzero leading coefficient.
    """

    __slots__ = ("coeffs", "q")

    def __init__(self, coeffs: Iterable[Union[int, FieldElement]], q: int):
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        vals = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.q != q:
                    raise ModulusMismatch(f"coefficient modulus {c.q} != {q}")
                vals.append(c.value)
            else:
                vals.append(c % q)
        while vals and vals[-1] == 0:
            vals.pop()
        self.coeffs = tuple(vals)
        self.q = q

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return (
            isinstance(other, FqPoly)
            and self.q == other.q
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.coeffs, self.q))

    def __repr__(self):
        return f"FqPoly({list(self.coeffs)}, q={self.q})"

    def __add__(self, other: "FqPoly") -> "FqPoly":
        if self.q != other.q:
            raise ModulusMismatch(f"moduli differ: {self.q} vs {other.q}")
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FqPoly([x + y for x, y in zip(a, b)], self.q)

    def __sub__(self, other: "FqPoly") -> "FqPoly":
        if self.q != other.q:
            raise ModulusMismatch(f"moduli differ: {self.q} vs {other.q}")
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return FqPoly([x - y for x, y in zip(a, b)], self.q)

    def __call__(self, x: Union[int, FieldElement]) -> FieldElement:
        return fq_eval(self, x)

    def shift(self, a: int) -> "FqPoly":
        """Return p(y + a) as a polynomial in y (Taylor shift)."""
        a %= self.q
        out = FqPoly([], self.q)
        # Horner on shifted variable: p(y+a) = c_n*(y+a)^... built degree-down.
        for c in reversed(self.coeffs):
            out = _mul_linear(out, a) + FqPoly([c], self.q)
        return out

    def count_roots(self) -> int:
        return fq_count_roots(self)


def _mul_linear(p: FqPoly, a: int) -> FqPoly:
    """Multiply p by (y + a)."""
    if p.is_zero:
        return p
    q = p.q
    out = [0] * (len(p.coeffs) + 1)
    for i, c in enumerate(p.coeffs):
        out[i] = (out[i] + c * a) % q
        out[i + 1] = (out[i + 1] + c) % q
    return FqPoly(out, q)


def fq_eval(p: FqPoly, x: Union[int, FieldElement]) -> FieldElement:
    """Horner evaluation of p at x in F_q."""
    if isinstance(x, FieldElement):
        if x.q != p.q:
            raise ModulusMismatch(f"moduli differ: {p.q} vs {x.q}")
        xv = x.value
    else:
        xv = x % p.q
    acc = 0
    for c in reversed(p.coeffs):
        acc = (acc * xv + c) % p.q
    return FieldElement(acc, p.q)


def fq_count_roots(p: FqPoly) -> int:
    """Exact number of x in F_q with p(x) = 0, by exhaustive evaluation.

    Raises ZeroPolynomial for the zero polynomial, whose root set is all
    of F_q; callers must handle that case explicitly.
    """
    if p.is_zero:
        raise ZeroPolynomial("every point of F_q is a root of the zero polynomial")
    count = 0
    for x in range(p.q):
        acc = 0
        for c in reversed(p.coeffs):
            acc = (acc * x + c) % p.q
        if acc == 0:
            count += 1
    return count


def fq_roots(p: FqPoly) -> list[int]:
    """Root set of a nonzero polynomial, as sorted integer representatives."""
    if p.is_zero:
        raise ZeroPolynomial("every point of F_q is a root of the zero polynomial")
    roots = []
    for x in range(p.q):
        acc = 0
        for c in reversed(p.coeffs):
            acc = (acc * x + c) % p.q
        if acc == 0:
            roots.append(x)
    return roots


def elements(q: int) -> Sequence[FieldElement]:
    """All elements of F_q in value order."""
    return [FieldElement(v, q) for v in range(q)]
