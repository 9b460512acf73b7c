"""Exact coefficient fields: prime fields, the rationals and prime cyclotomic fields.

Elements of the prime fields and of the rationals are python-flint scalars
(``nmod`` and ``fmpq``); matrices over them are ``nmod_mat`` / ``fmpq_mat``.
Cyclotomic numbers are implemented here on top of ``fmpq_poly`` and use the
generic dense matrix from :mod:`covhom.algebra.linalg`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import flint


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface of the exact fields."""

    characteristic: int
    name: str

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, x) -> bool:
        return x == 0

    def contains(self, x) -> bool:
        try:
            self(x)
        except TypeError:
            return False
        return True

    def matrix(self, nrows: int, ncols: int, entries=None):
        """Dense backend matrix from a row-major entry list (zeros if omitted)."""
        raise NotImplementedError

    def poly(self, coeffs):
        """Polynomial over the field (used by truncated power series)."""
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()

    def __repr__(self):
        return self.name


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def _key(self):
        return (self.p,)

    def __call__(self, x):
        if isinstance(x, flint.nmod):
            if x.modulus() != self.p:
                raise TypeError(f"element of GF({x.modulus()}) is not in {self.name}")
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return flint.nmod(x, self.p)
        if isinstance(x, (Fraction, flint.fmpq)):
            num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x.p), int(x.q))
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes in {self.name}")
            return flint.nmod(num, self.p) / flint.nmod(den, self.p)
        if isinstance(x, flint.fmpz):
            return flint.nmod(int(x), self.p)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.name}")

    def matrix(self, nrows, ncols, entries=None):
        if entries is None:
            return flint.nmod_mat(nrows, ncols, self.p)
        return flint.nmod_mat(nrows, ncols, [int(self(e)) for e in entries], self.p)

    def poly(self, coeffs):
        return flint.nmod_poly([int(self(c)) for c in coeffs], self.p)

    def to_int(self, x) -> int:
        return int(x)


class RationalField(Field):
    characteristic = 0
    name = "QQ"

    def __call__(self, x):
        if isinstance(x, flint.fmpq):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (int, flint.fmpz)):
            return flint.fmpq(int(x))
        if isinstance(x, Fraction):
            return flint.fmpq(x.numerator, x.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} into QQ")

    def matrix(self, nrows, ncols, entries=None):
        if entries is None:
            return flint.fmpq_mat(nrows, ncols)
        return flint.fmpq_mat(nrows, ncols, [self(e) for e in entries])

    def poly(self, coeffs):
        return flint.fmpq_poly([self(c) for c in coeffs])


@lru_cache(maxsize=None)
def _cyclotomic_modulus(c: int):
    return flint.fmpq_poly([1] * c)


class CyclotomicNumber:
    """Element of Q(zeta_c), c prime, stored as a polynomial of degree < c - 1."""

    __slots__ = ("field", "poly")

    def __init__(self, field: "CyclotomicField", poly):
        self.field = field
        self.poly = poly % _cyclotomic_modulus(field.conductor)

    def _coerce(self, other):
        return self.field(other)

    def __add__(self, other):
        return CyclotomicNumber(self.field, self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return CyclotomicNumber(self.field, self.poly - self._coerce(other).poly)

    def __rsub__(self, other):
        return CyclotomicNumber(self.field, self._coerce(other).poly - self.poly)

    def __neg__(self):
        return CyclotomicNumber(self.field, -self.poly)

    def __mul__(self, other):
        return CyclotomicNumber(self.field, self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        g, a, _ = self.poly.xgcd(_cyclotomic_modulus(self.field.conductor))
        # g is a nonzero constant since the modulus is irreducible
        return CyclotomicNumber(self.field, a / g[0])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        return hash((self.field.conductor, tuple(str(c) for c in self.poly.coeffs())))

    def __bool__(self):
        return not self.poly.is_zero()

    def coefficients(self) -> list:
        cs = list(self.poly.coeffs())
        return cs + [flint.fmpq(0)] * (self.field.degree - len(cs))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coefficients()):
            if c == 0:
                continue
            terms.append(str(c) if k == 0 else f"{c}*z^{k}")
        return " + ".join(terms) if terms else "0"


class CyclotomicField(Field):
    """Q(zeta_c) for a prime conductor c, as Q[z]/(1 + z + ... + z^(c-1))."""

    characteristic = 0

    def __init__(self, conductor: int):
        if not is_prime(conductor):
            raise ValueError("only prime conductors are supported")
        self.conductor = conductor
        self.degree = conductor - 1
        self.name = f"QQ(zeta_{conductor})"

    def _key(self):
        return (self.conductor,)

    def __call__(self, x):
        if isinstance(x, CyclotomicNumber):
            if x.field.conductor != self.conductor:
                raise TypeError(f"element of {x.field.name} is not in {self.name}")
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (int, flint.fmpz, flint.fmpq, Fraction)):
            return CyclotomicNumber(self, flint.fmpq_poly([RationalField()(x)]))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.name}")

    def from_coefficients(self, coeffs) -> CyclotomicNumber:
        return CyclotomicNumber(self, flint.fmpq_poly([RationalField()(c) for c in coeffs]))

    @property
    def zeta(self) -> CyclotomicNumber:
        return CyclotomicNumber(self, flint.fmpq_poly([0, 1]))

    def is_zero(self, x) -> bool:
        return not bool(x)

    def matrix(self, nrows, ncols, entries=None):
        from covhom.algebra.linalg import GenericMatrix

        if entries is None:
            entries = [self.zero] * (nrows * ncols)
        return GenericMatrix(self, nrows, ncols, [self(e) for e in entries])


QQ = RationalField()


def parse_field(spec: str) -> Field:
    """Field from a selector string: ``q0`` (rationals), ``p<prime>`` or ``zeta<prime>``."""
    spec = spec.strip().lower()
    if spec in ("q0", "q", "qq"):
        return QQ
    if spec.startswith("zeta"):
        return CyclotomicField(int(spec[4:]))
    if spec.startswith("p") and spec[1:].isdigit():
        return PrimeField(int(spec[1:]))
    raise ValueError(f"unknown field selector {spec!r}")


def field_selector(field: Field) -> str:
    if isinstance(field, PrimeField):
        return f"p{field.p}"
    if isinstance(field, CyclotomicField):
        return f"zeta{field.conductor}"
    return "q0"
