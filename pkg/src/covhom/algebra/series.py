"""Truncated power series K[s]/(s^m), their matrix normal form, and module homology.

The ring R_m = K[s]/(s^m) is local with maximal ideal (s), so every element is
``s^v * unit`` and every finitely generated module is a direct sum of cyclic
modules R_m/(s^e). Summands with e = m are free.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from covhom.algebra.fields import Field, PrimeField, RationalField
from covhom.algebra.sparse import ExactMatrix


class PreconditionError(ValueError):
    """An operation was called on inputs violating its stated precondition."""


class TruncatedRing:
    def __init__(self, base: Field, m: int):
        if m < 1:
            raise ValueError("truncation modulus must be positive")
        if not isinstance(base, (PrimeField, RationalField)):
            raise TypeError("truncated series are supported over prime fields and QQ")
        self.base = base
        self.m = m

    def __call__(self, x) -> "TruncatedSeries":
        if isinstance(x, TruncatedSeries):
            if x.ring != self:
                raise TypeError(f"series over {x.ring} is not in {self}")
            return x
        return TruncatedSeries(self, self.base.poly([self.base(x)]))

    def series(self, coeffs) -> "TruncatedSeries":
        return TruncatedSeries(self, self.base.poly(list(coeffs)[: self.m]))

    def s_power(self, k: int) -> "TruncatedSeries":
        if k >= self.m:
            return self.zero
        return self.series([0] * k + [1])

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __eq__(self, other):
        return isinstance(other, TruncatedRing) and self.base == other.base and self.m == other.m

    def __hash__(self):
        return hash((self.base, self.m))

    def __repr__(self):
        return f"{self.base}[s]/(s^{self.m})"


class TruncatedSeries:
    __slots__ = ("ring", "poly")

    def __init__(self, ring: TruncatedRing, poly):
        self.ring = ring
        if poly.degree() >= ring.m:
            poly = poly.truncate(ring.m)
        self.poly = poly

    def _c(self, other) -> "TruncatedSeries":
        return self.ring(other)

    def __add__(self, other):
        return TruncatedSeries(self.ring, self.poly + self._c(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return TruncatedSeries(self.ring, self.poly - self._c(other).poly)

    def __rsub__(self, other):
        return TruncatedSeries(self.ring, self._c(other).poly - self.poly)

    def __neg__(self):
        return TruncatedSeries(self.ring, -self.poly)

    def __mul__(self, other):
        o = self._c(other)
        return TruncatedSeries(self.ring, self.poly.mul_low(o.poly, self.ring.m))

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = self._c(other)
        except TypeError:
            return NotImplemented
        return self.poly == o.poly

    def __hash__(self):
        return hash(tuple(str(c) for c in self.poly.coeffs()))

    def __bool__(self):
        return not self.poly.is_zero()

    def coefficients(self) -> list:
        cs = list(self.poly.coeffs())
        z = self.ring.base.zero
        return cs + [z] * (self.ring.m - len(cs))

    def valuation(self) -> int:
        """s-adic valuation; the zero series has valuation m."""
        if self.poly.is_zero():
            return self.ring.m
        for k, c in enumerate(self.poly.coeffs()):
            if c != 0:
                return k
        return self.ring.m

    def is_unit(self) -> bool:
        return self.poly[0] != 0

    def inverse(self) -> "TruncatedSeries":
        if not self.is_unit():
            raise ZeroDivisionError("series with zero constant term is not a unit")
        m = self.ring.m
        f = self.poly
        g = self.ring.base.poly([self.ring.base.one / f[0]])
        prec = 1
        while prec < m:
            prec = min(2 * prec, m)
            # Newton step g <- g (2 - f g) mod s^prec
            fg = f.mul_low(g, prec)
            g = g.mul_low(2 - fg, prec)
        return TruncatedSeries(self.ring, g)

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by s^k (valuation must be >= k); the result is a lift mod s^(m-k)."""
        if k == 0:
            return self
        if self.valuation() < k:
            raise ValueError("series not divisible by the requested power of s")
        return TruncatedSeries(self.ring, self.poly.right_shift(k))

    def shift_up(self, k: int) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.poly.left_shift(k))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.poly.coeffs()):
            if c == 0:
                continue
            terms.append(f"{c}" if k == 0 else f"{c}*s^{k}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class ModuleDecomposition:
    """R_m^free_rank plus cyclic torsion summands R_m/(s^e), exponents sorted."""

    modulus: int
    free_rank: int
    torsion_exponents: tuple[int, ...] = dc_field(default=())

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if any(not (0 < e < self.modulus) for e in self.torsion_exponents):
            raise ValueError("torsion exponents must lie in (0, m)")
        object.__setattr__(self, "torsion_exponents", tuple(sorted(self.torsion_exponents)))

    @property
    def dimension(self) -> int:
        return self.modulus * self.free_rank + sum(self.torsion_exponents)

    @classmethod
    def from_exponents(cls, m: int, exponents) -> "ModuleDecomposition":
        """Assemble from cyclic summand exponents (0 dropped, m counted as free)."""
        free = sum(1 for e in exponents if e >= m)
        return cls(m, free, tuple(e for e in exponents if 0 < e < m))

    def as_dict(self) -> dict:
        return {"modulus": self.modulus, "free_rank": self.free_rank, "torsion": list(self.torsion_exponents)}


@dataclass(frozen=True)
class Diagonalization:
    exponents: tuple[int, ...]
    left: list  # U, rows x rows
    right: list  # V, cols x cols
    right_inverse: list


def _dense(M: ExactMatrix) -> list[list[TruncatedSeries]]:
    if not isinstance(M.ring, TruncatedRing):
        raise TypeError("expected a matrix over a truncated series ring")
    return M.to_rows()


def _eye(R: TruncatedRing, n: int):
    return [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]


def diagonalize_truncated(M: ExactMatrix) -> Diagonalization:
    """Smith form over K[s]/(s^m): U M V = diag(s^k_1, ..., s^k_q), k_i in [0, m].

    Pivots are chosen with minimal s-valuation (ties broken by position), which
    is always legitimate in a local ring.
    """
    R = M.ring
    m = R.m
    A = _dense(M)
    nr, nc = M.nrows, M.ncols
    U = _eye(R, nr)
    V = _eye(R, nc)
    Vinv = _eye(R, nc)
    q = min(nr, nc)
    exps = []
    for t in range(q):
        best = None
        for i in range(t, nr):
            row = A[i]
            for j in range(t, nc):
                x = row[j]
                if x:
                    v = x.valuation()
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            exps.extend([m] * (q - t))
            break
        v, i, j = best
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
            for row in V:
                row[t], row[j] = row[j], row[t]
            Vinv[t], Vinv[j] = Vinv[j], Vinv[t]
        unit_inv = A[t][t].shift_down(v).inverse()
        A[t] = [x * unit_inv for x in A[t]]
        U[t] = [x * unit_inv for x in U[t]]
        for r in range(nr):
            if r != t and A[r][t]:
                f = A[r][t].shift_down(v)
                A[r] = [a - f * b for a, b in zip(A[r], A[t])]
                U[r] = [a - f * b for a, b in zip(U[r], U[t])]
        for c in range(nc):
            if c != t and A[t][c]:
                f = A[t][c].shift_down(v)
                A[t][c] = A[t][c] - f * A[t][t]
                for row in V:
                    row[c] = row[c] - f * row[t]
                Vinv[t] = [a + f * b for a, b in zip(Vinv[t], Vinv[c])]
        exps.append(v)
    return Diagonalization(tuple(exps), U, V, Vinv)


def _matmul(A, B, R):
    n, k = len(A), len(B)
    p = len(B[0]) if B else 0
    out = [[R.zero] * p for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = A[i][t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(p):
                    if Bt[j]:
                        row[j] = row[j] + a * Bt[j]
    return out


def cokernel(M: ExactMatrix) -> ModuleDecomposition:
    """Decomposition of R_m^rows / image(M)."""
    d = diagonalize_truncated(M)
    m = M.ring.m
    exps = list(d.exponents) + [m] * (M.nrows - len(d.exponents))
    return ModuleDecomposition.from_exponents(m, exps)


def module_homology(d_in: ExactMatrix, d_out: ExactMatrix) -> ModuleDecomposition:
    """ker(d_out) / im(d_in) for free modules over K[s]/(s^m).

    ``d_in`` maps into the middle term (its row count is the middle rank) and
    ``d_out`` maps out of it (its column count is the middle rank).
    """
    R = d_out.ring
    if d_in.ring != R:
        raise TypeError("differentials over different rings")
    if d_in.nrows != d_out.ncols:
        raise ValueError("middle ranks of the differentials disagree")
    m = R.m
    if not (d_out @ d_in).is_zero():
        raise PreconditionError("d_out * d_in is not zero")
    n = d_out.ncols
    diag = diagonalize_truncated(d_out)
    ks = list(diag.exponents) + [m] * (n - len(diag.exponents))
    # generator i of ker(d_out) is s^(m - k_i) V e_i, with annihilator s^k_i
    gens = [i for i in range(n) if ks[i] > 0]
    Vinv = diag.right_inverse
    cols = d_in.to_rows()
    ncols_in = d_in.ncols
    relations: dict = {}
    for row_idx, i in enumerate(gens):
        k = ks[i]
        if k < m:
            relations[(row_idx, row_idx)] = R.s_power(k)
    offset = len(gens)
    for c in range(ncols_in):
        col = [cols[r][c] for r in range(n)]
        y = [sum((Vinv[i][r] * col[r] for r in range(n) if col[r] and Vinv[i][r]), R.zero) for i in gens]
        for row_idx, i in enumerate(gens):
            yi = y[row_idx]
            if yi:
                zi = yi.shift_down(m - ks[i])
                relations[(row_idx, offset + c)] = zi
    rel = ExactMatrix(R, len(gens), offset + ncols_in, relations)
    return cokernel(rel)


def flatten(M: ExactMatrix):
    """K-linear matrix of M acting on coordinates (generator, power of s)."""
    R = M.ring
    m = R.m
    K = R.base
    out = K.matrix(M.nrows * m, M.ncols * m)
    for (i, j), x in M.items():
        cs = x.coefficients()
        for a in range(m):
            for b in range(m - a):
                if cs[b] != 0:
                    out[i * m + a + b, j * m + a] = cs[b]
    return out
