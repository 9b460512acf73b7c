"""The column-filtered double complex A^{i,j} = C^{i+j}(X) s^i and its spectral sequence.

The total differential is ``delta + s (eta u -)`` with no extra signs, so the
total complex is literally the twisted cochain complex over K[s]/(s^m).

Pages are computed on the minimal model (H^*(X), sum_j s^j c_j), which is a
filtered homotopy equivalent replacement, by tracking two increasing chains
of subspaces of each H^n:

* ``Zl(q)``: classes z admitting a lift z + s x_1 + ... + s^(q-1) x_(q-1) whose
  differential vanishes below s^q;
* ``Bl(q)``: the span of the s^q coefficients phi_q(z) produced by such lifts,
  over all q' <= q.

In column p (at modulus m) this gives E_r^p = Zl(min(r, m-p)) / Bl(min(r-1, p))
and d_r = phi_r modulo Bl(r-1). A brute-force Z_r / B_r computation on the
full double complex is provided as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from covhom.algebra import PrimeField
from covhom.algebra.series import flatten
from covhom.algebra import linalg as la
from covhom.simplicial import Cochain, OrderedSimplicialComplex, coboundary_matrices, left_cup_matrix
from covhom.twisted import ConsistencyError, MinimalModel, build_twisted_cochain, minimal_model


# ---------------------------------------------------------------- double complex


@dataclass
class DoubleComplex:
    complex: OrderedSimplicialComplex
    eta: Cochain
    m: int
    vertical: list  # delta_k: C^k -> C^{k+1}
    horizontal: list  # eta u -: C^k -> C^{k+1}

    @property
    def field(self):
        return self.eta.field

    def dims(self) -> dict:
        """(i, j) -> dim A^{i,j} for the nonzero cells."""
        X = self.complex
        return {
            (i, n - i): X.count(n)
            for i in range(self.m)
            for n in range(X.dim + 1)
        }

    def total_dimension(self, n: int) -> int:
        return self.m * self.complex.count(n) if 0 <= n <= self.complex.dim else 0

    def total_matrix(self, n: int):
        """Total differential on degree n, coordinates (simplex, column) -> simplex * m + column."""
        F, m, X = self.field, self.m, self.complex
        rows = self.total_dimension(n + 1)
        M = F.matrix(rows, self.total_dimension(n))
        if rows == 0:
            return M
        for (r, c), x in self.vertical[n].items():
            for a in range(m):
                M[r * m + a, c * m + a] = x
        for (r, c), x in self.horizontal[n].items():
            for a in range(m - 1):
                M[r * m + a + 1, c * m + a] = x
        return M


def build_double_complex(X: OrderedSimplicialComplex, eta: Cochain, m: int) -> DoubleComplex:
    if m < 1:
        raise ValueError("need at least one column")
    deltas = coboundary_matrices(X, eta.field)
    thetas = [left_cup_matrix(eta, k) for k in range(X.dim + 1)]
    return DoubleComplex(X, eta, m, deltas, thetas)


def flattening_identity_holds(D: DoubleComplex) -> bool:
    """The total complex coincides with the flattened twisted cochain complex."""
    T = build_twisted_cochain(D.complex, D.eta, D.m)
    return all(D.total_matrix(n) == flatten(T.D[n]) for n in range(D.complex.dim))


# ---------------------------------------------------------------- windowed pages


@dataclass
class _Lifted:
    vec: list
    lift: list  # x_0 = vec, x_1, ..., x_(q-1)


def _vmat(F, vecs: list, n: int):
    return la.from_columns(F, vecs, n) if vecs else F.matrix(n, 0)


def _axpy(acc: list, a, x: list) -> None:
    if a == 0:
        return
    for i, y in enumerate(x):
        if y != 0:
            acc[i] += a * y


class FilteredSequence:
    """Zl / Bl chains of the minimal model at modulus m, for every total degree."""

    def __init__(self, model: MinimalModel, m: int):
        if m < 1:
            raise ValueError("modulus must be positive")
        model.extend(m)
        self.model = model
        self.m = m
        self.field = F = model.field
        self.betti = b = list(model.betti)
        top = len(b)
        self._c = [[model.coefficient(n, j).tolist() for j in range(1, m)] for n in range(top)]
        zero = F.zero
        cur = [[_Lifted(v, [v]) for v in la.columns(la.identity(F, b[n]))] for n in range(top)]
        bl_cur: list = [[] for _ in range(top)]  # entries (vector, q, lift)
        # zl[n][q] for q = 1..m, bl[n][q] for q = 0..m-1, phi[n][q] for q = 1..m-1
        self.zl = [[None, [z.vec for z in cur[n]]] for n in range(top)]
        self.bl = [[[]] for _ in range(top)]
        self.phi = [[None] for _ in range(top)]
        for q in range(1, m):
            phis = [[self._phi(n, z.lift, q) for z in cur[n]] for n in range(top)]
            nxt = []
            for n in range(top):
                tgt = b[n + 1] if n + 1 < top else 0
                basis = bl_cur[n + 1] if n + 1 < top else []
                A = la.hstack(F, _vmat(F, phis[n], tgt), _vmat(F, [e[0] for e in basis], tgt))
                K = la.nullspace(F, A)
                new = []
                for col in la.columns(K):
                    a, beta = col[: len(cur[n])], col[len(cur[n]):]
                    vec = [zero] * b[n]
                    lift = [[zero] * b[n] for _ in range(q + 1)]
                    for ai, z in zip(a, cur[n]):
                        _axpy(vec, ai, z.vec)
                        for pos, x in enumerate(z.lift):
                            _axpy(lift[pos], ai, x)
                    for bk, (_, r, wl) in zip(beta, basis):
                        for pos, x in enumerate(wl):
                            _axpy(lift[q - r + pos], bk, x)
                    new.append(_Lifted(vec, lift))
                nxt.append(new)
            for n in range(top - 1):
                basis = bl_cur[n + 1]
                tgt = b[n + 1]
                ext = la.extending_columns(F, _vmat(F, [e[0] for e in basis], tgt), _vmat(F, phis[n], tgt))
                bl_cur[n + 1] = basis + [(phis[n][i], q, cur[n][i].lift) for i in ext]
            for n in range(top):
                self.phi[n].append(phis[n])
                self.zl[n].append([z.vec for z in nxt[n]])
                self.bl[n].append([e[0] for e in bl_cur[n]])
            cur = nxt

    def _phi(self, n: int, lift: list, q: int) -> list:
        """s^q coefficient of the differential of a lift of length q."""
        top = len(self.betti)
        tgt = self.betti[n + 1] if n + 1 < top else 0
        out = [self.field.zero] * tgt
        if tgt == 0:
            return out
        for j in range(1, q + 1):
            x = lift[q - j]
            C = self._c[n][j - 1]
            for i in range(tgt):
                row = C[i]
                acc = out[i]
                for l, y in enumerate(x):
                    if y != 0 and row[l] != 0:
                        acc += row[l] * y
                out[i] = acc
        return out

    # dims -------------------------------------------------------------
    def zl_dim(self, n: int, q: int) -> int:
        if not 0 <= n < len(self.betti):
            return 0
        return len(self.zl[n][max(1, min(q, self.m))])

    def bl_dim(self, n: int, q: int) -> int:
        if not 0 <= n < len(self.betti):
            return 0
        return len(self.bl[n][max(0, min(q, self.m - 1))])

    def page_dim(self, r: int, p: int, n: int) -> int:
        """dim E_r^{p, n-p}."""
        if not 0 <= p < self.m:
            return 0
        return self.zl_dim(n, min(r, self.m - p)) - self.bl_dim(n, min(r - 1, p))

    def infinity_dim(self, p: int, n: int) -> int:
        return self.page_dim(self.m, p, n) if 0 <= p < self.m else 0

    def rank(self, r: int, n: int) -> int:
        """Rank of d_r on column p from total degree n, the same for every p with p + r < m."""
        if r < 1 or r >= self.m or n + 1 >= len(self.betti):
            return 0
        return self.bl_dim(n + 1, r) - self.bl_dim(n + 1, r - 1)

    def max_nonzero_page(self) -> int:
        return max((r for r in range(1, self.m) for n in range(len(self.betti)) if self.rank(r, n)), default=0)

    # matrices ---------------------------------------------------------
    def _quotient(self, n: int, zq: int, bq: int):
        """Basis of Zl(zq) / Bl(bq) as vectors, plus the matrix [Bl | basis]."""
        F, dim = self.field, self.betti[n]
        Z = self.zl[n][max(1, min(zq, self.m))]
        B = self.bl[n][max(0, min(bq, self.m - 1))]
        ext = la.extending_columns(F, _vmat(F, B, dim), _vmat(F, Z, dim))
        comp = [Z[i] for i in ext]
        return comp, _vmat(F, B + comp, dim), len(B)

    def phi_of(self, r: int, n: int, z: list) -> list:
        """phi_r(z) for z in Zl_n(r) (well defined modulo Bl_{n+1}(r-1))."""
        F = self.field
        Z = self.zl[n][r]
        coeffs = la.solve(F, _vmat(F, Z, self.betti[n]), _vmat(F, [z], self.betti[n]))
        if coeffs is None:
            raise ValueError(f"class does not survive to page {r}")
        out = [F.zero] * (self.betti[n + 1] if n + 1 < len(self.betti) else 0)
        for a, v in zip(la.column(coeffs, 0), self.phi[n][r]):
            _axpy(out, a, v)
        return out

    def differential(self, r: int, p: int, n: int):
        """d_r: E_r^{p, n-p} -> E_r^{p+r, n+1-p-r} in the echelon quotient bases."""
        F = self.field
        src, _, _ = self._quotient(n, min(r, self.m - p), min(r - 1, p))
        if p + r >= self.m or n + 1 >= len(self.betti):
            return F.matrix(0, len(src))
        tgt, T, nb = self._quotient(n + 1, min(r, self.m - p - r), r - 1)
        M = F.matrix(len(tgt), len(src))
        for c, z in enumerate(src):
            v = self.phi_of(r, n, z)
            x = la.solve(F, T, _vmat(F, [v], self.betti[n + 1]))
            if x is None:
                raise ConsistencyError("d_r lands outside the target page")
            for i in range(len(tgt)):
                M[i, c] = x[nb + i, 0]
        return M


_SEQUENCES: dict = {}


def filtered_sequence(X: OrderedSimplicialComplex, eta: Cochain, m: int) -> FilteredSequence:
    key = (id(X), id(eta), m)
    seq = _SEQUENCES.get(key)
    if seq is None or seq.model.complex is not X or seq.model.eta is not eta:
        seq = FilteredSequence(minimal_model(X, eta, m), m)
        _SEQUENCES.clear()
        _SEQUENCES[key] = seq
    return seq


# ---------------------------------------------------------------- pages


@dataclass
class PageData:
    page: int
    m: int
    table: dict  # (i, j) -> dim E_page^{i,j}
    ranks: dict  # total degree n -> rank of d_page on every column i with i + page < m
    source: FilteredSequence = dc_field(repr=False, compare=False, default=None)

    def differential(self, i: int, j: int):
        return self.source.differential(self.page, i, i + j)

    @property
    def is_zero(self) -> bool:
        return not any(self.ranks.values())

    def nonzero_differentials(self) -> list[tuple]:
        """(total degree, rank, last column) for every nonzero d_page."""
        return [(n, r, self.m - 1 - self.page) for n, r in sorted(self.ranks.items()) if r]

    def total(self, n: int) -> int:
        return sum(d for (i, j), d in self.table.items() if i + j == n)


def _page(seq: FilteredSequence, r: int) -> PageData:
    top = len(seq.betti)
    table = {(p, n - p): seq.page_dim(r, p, n) for p in range(seq.m) for n in range(top)}
    ranks = {n: seq.rank(r, n) for n in range(top)}
    return PageData(r, seq.m, table, ranks, seq)


@dataclass
class DegenerationReport:
    m: int
    page: int  # least r with d_r' = 0 for all r' >= r
    max_nonzero: int  # largest r with d_r != 0 (0 if none)
    einf: list  # per total degree

    def as_dict(self) -> dict:
        return {"m": self.m, "degeneration_page": self.page, "max_nonzero_differential": self.max_nonzero, "e_infinity": list(self.einf)}


def degeneration(seq: FilteredSequence) -> DegenerationReport:
    R = seq.max_nonzero_page()
    einf = [sum(seq.infinity_dim(p, n) for p in range(seq.m)) for n in range(len(seq.betti))]
    page = R + 1 if R else 1
    if page > max(seq.m, 1):
        raise ConsistencyError("degeneration page exceeds the number of columns")
    return DegenerationReport(seq.m, page, R, einf)


def compute_pages(D: DoubleComplex, last: int | None = None) -> list[PageData]:
    """Pages E_1 .. E_last (default: up to the degeneration page)."""
    seq = filtered_sequence(D.complex, D.eta, D.m)
    if last is None:
        last = max(degeneration(seq).page, 1)
    return [_page(seq, r) for r in range(1, last + 1)]


def check_e1(D: DoubleComplex, ring=None) -> bool:
    """E_1 = H^*(X) and d_1 = [eta] u - in the ring basis."""
    from covhom.simplicial import cohomology_ring

    seq = filtered_sequence(D.complex, D.eta, D.m)
    ring = ring or cohomology_ring(D.complex, D.field)
    if list(ring.betti) != seq.betti:
        return False
    a = ring.class_of(D.eta)
    for n in range(len(seq.betti) - 1):
        L = ring.left_multiplication_matrix(1, a, n)
        if seq.m > 1 and seq.betti[n] and seq.betti[n + 1]:
            phi = _vmat(D.field, [seq.phi[n][1][i] for i in range(seq.betti[n])], seq.betti[n + 1])
            if phi != L:
                return False
    return True


# ---------------------------------------------------------------- brute force oracle


def bruteforce_pages(D: DoubleComplex, last: int) -> dict:
    """{r: {(p, n): dim E_r^{p, n-p}}} for r = 1 .. last from Z_r / B_r on the total complex.

    Z_r^p = {x in F^p : Dx in F^(p+r)} and E_r^p = Z_r^p / (Z_(r-1)^(p+1) + D Z_(r-1)^(p-r+1)).
    """
    F, m, X = D.field, D.m, D.complex
    mats = {n: D.total_matrix(n) for n in range(X.dim + 1)}

    def Z(n: int, p: int, r: int):
        size = D.total_dimension(n)
        cols = [k for k in range(size) if k % m >= max(p, 0)]
        rows = [k for k in range(D.total_dimension(n + 1)) if k % m < p + r]
        if not cols:
            return F.matrix(size, 0)
        sub = la.submatrix(F, mats[n], rows, cols)
        K = la.nullspace(F, sub) if rows else la.identity(F, len(cols))
        out = F.matrix(size, K.ncols())
        data = K.tolist()
        for a, k in enumerate(cols):
            for c, x in enumerate(data[a]):
                if x != 0:
                    out[k, c] = x
        return out

    result = {}
    for r in range(1, last + 1):
        table = {}
        for n in range(X.dim + 1):
            for p in range(m):
                Zr = Z(n, p, r)
                parts = [Z(n, p + 1, r - 1)]
                if n > 0:
                    parts.append(mats[n - 1] * Z(n - 1, p - r + 1, r - 1))
                parts = [P for P in parts if P.ncols()]
                den = la.rank(la.hstack(F, *parts)) if parts else 0
                table[(p, n)] = la.rank(Zr) - den
        result[r] = table
    return result


def windowed_table(seq: FilteredSequence, r: int) -> dict:
    return {(p, n): seq.page_dim(r, p, n) for p in range(seq.m) for n in range(len(seq.betti))}


# ---------------------------------------------------------------- prime tower covers


@dataclass
class TruncatedReport:
    p: int
    r: int
    pages: list
    degeneration: DegenerationReport
    cover_betti: list

    @property
    def abutment_holds(self) -> bool:
        return self.degeneration.einf == self.cover_betti


def truncated_ss(X: OrderedSimplicialComplex, cm, p: int, r: int, check: bool = True) -> TruncatedReport:
    """The spectral sequence over F_p with p^r columns, checked against the explicit cover."""
    from covhom.circle import eta_from_circle_map
    from covhom.covers import build_finite_cover
    from covhom.simplicial import betti_numbers

    F = PrimeField(p)
    eta = eta_from_circle_map(X, cm, F)
    m = p**r
    D = build_double_complex(X, eta, m)
    seq = filtered_sequence(X, eta, m)
    report = degeneration(seq)
    pages = compute_pages(D, report.page)
    cover = betti_numbers(build_finite_cover(X, cm, m).complex, F)
    cover += [0] * (len(report.einf) - len(cover))
    out = TruncatedReport(p, r, pages, report, cover)
    if check and not out.abutment_holds:
        raise ConsistencyError(f"E_infinity {report.einf} does not abut to the cover Betti numbers {cover}")
    if report.page > m:
        raise ConsistencyError("degeneration beyond page p^r")
    return out


@dataclass
class E2Verdict:
    equality: bool
    degenerates_at_e2: bool
    cover_betti: list
    bound: list

    @property
    def consistent(self) -> bool:
        return self.equality == self.degenerates_at_e2


def e2_equality_test(X: OrderedSimplicialComplex, cm, p: int, r: int) -> E2Verdict:
    """(equality in the Betti bound for every degree, degeneration at E_2)."""
    from covhom.arrangements import aomoto_betti
    from covhom.circle import class_of_eta
    from covhom.covers import DegenerateInputError
    from covhom.simplicial import cohomology_ring

    if p**r <= 2:
        raise DegenerateInputError("the biconditional is stated for p^r > 2")
    F = PrimeField(p)
    ring = cohomology_ring(X, F)
    a = class_of_eta(X, cm, F, ring)
    if all(x == 0 for x in a):
        raise DegenerateInputError("eta vanishes mod p, so the cover is disconnected")
    rep = truncated_ss(X, cm, p, r)
    beta = aomoto_betti(ring, a, F)
    bound = [b + (p**r - 1) * be for b, be in zip(ring.betti, beta)]
    equality = all(c == bd for c, bd in zip(rep.cover_betti, bound))
    degenerate = rep.degeneration.max_nonzero <= 1
    verdict = E2Verdict(equality, degenerate, rep.cover_betti, bound)
    if not verdict.consistent:
        raise ConsistencyError(f"equality={equality} but E_2 degeneration={degenerate}")
    return verdict
