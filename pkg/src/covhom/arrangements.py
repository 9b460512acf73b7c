"""Aomoto complexes, matroids of central arrangements and Orlik-Solomon algebras."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Sequence

from covhom.algebra import QQ, CyclotomicField, PrimeField
from covhom.algebra import linalg as la
from covhom.algebra.series import PreconditionError


# ---------------------------------------------------------------- Aomoto complex


@dataclass
class AomotoComplex:
    ring: object
    a: list
    maps: list  # maps[q]: H^q -> H^{q+1}

    def composes_to_zero(self) -> bool:
        return all(la.is_zero(self.maps[q + 1] * self.maps[q]) for q in range(len(self.maps) - 1))


def aomoto_complex(ring, a: Sequence, field=None) -> AomotoComplex:
    """Multiplication by the degree-1 class ``a`` on a graded ring.

    ``ring`` needs ``betti``, ``multiply(p, x, q, y)`` and
    ``left_multiplication_matrix(p, x, q)``; both :class:`CohomologyRing` and
    :class:`OSAlgebra` qualify.
    """
    F = field or ring.field
    a = [F(x) for x in a]
    if len(ring.betti) > 2 and any(x != 0 for x in ring.multiply(1, a, 1, a)):
        raise PreconditionError("a u a is not zero")
    maps = [ring.left_multiplication_matrix(1, a, q) for q in range(len(ring.betti))]
    return AomotoComplex(ring, a, maps)


def aomoto_betti(ring, a: Sequence, field=None) -> list[int]:
    """beta_i = dim ker(a: H^i -> H^{i+1}) - rank(a: H^{i-1} -> H^i)."""
    cx = aomoto_complex(ring, a, field)
    ranks = [la.rank(M) if M.nrows() and M.ncols() else 0 for M in cx.maps]
    return [b - ranks[q] - (ranks[q - 1] if q else 0) for q, b in enumerate(ring.betti)]


# ---------------------------------------------------------------- arrangements


class ArrangementError(ValueError):
    pass


@dataclass
class HyperplaneArrangement:
    """Central arrangement given by linear forms over QQ or a cyclotomic field."""

    n: int
    forms: list  # each a list of n field elements
    labels: list
    field: object = QQ

    def __post_init__(self):
        F = self.field
        self.forms = [[F(x) for x in f] for f in self.forms]
        if len(self.labels) != len(self.forms):
            raise ArrangementError("one label per hyperplane required")
        for lab, f in zip(self.labels, self.forms):
            if len(f) != self.n:
                raise ArrangementError(f"form {lab} has {len(f)} coefficients, expected {self.n}")
            if all(x == 0 for x in f):
                raise ArrangementError(f"form {lab} is zero")
        for i, j in combinations(range(len(self.forms)), 2):
            if self.rank((i, j)) < 2:
                raise ArrangementError(f"hyperplanes {self.labels[i]} and {self.labels[j]} coincide")

    @property
    def size(self) -> int:
        return len(self.forms)

    def rank(self, subset) -> int:
        subset = tuple(sorted(set(subset)))
        if not subset:
            return 0
        cache = self.__dict__.setdefault("_ranks", {})
        if subset not in cache:
            rows = [self.forms[i] for i in subset]
            cache[subset] = la.rank(la.from_rows(self.field, rows, self.n))
        return cache[subset]


def monomial_arrangement(p: int, n: int = 3) -> HyperplaneArrangement:
    """The full monomial arrangement A(p, 1, n): z_i - zeta^q z_j and the coordinate hyperplanes.

    Hyperplanes are listed pair by pair ((1,2), (1,3), ..., in lexicographic
    order) with q = 0..p-1 inside each pair, followed by z_1, ..., z_n.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    F = CyclotomicField(p) if p > 2 else QQ
    zeta = F.zeta if p > 2 else F(-1)
    forms, labels = [], []
    for i, j in combinations(range(n), 2):
        for q in range(p):
            f = [F(0)] * n
            f[i] = F(1)
            f[j] = -(zeta**q)
            forms.append(f)
            labels.append(f"H{i + 1}{j + 1}^{q}")
    for i in range(n):
        f = [F(0)] * n
        f[i] = F(1)
        forms.append(f)
        labels.append(f"z{i + 1}")
    return HyperplaneArrangement(n, forms, labels, F)


def graphic_arrangement(vertices: Sequence, edges: Sequence[tuple]) -> HyperplaneArrangement:
    pos = {v: i for i, v in enumerate(vertices)}
    seen = set()
    forms, labels = [], []
    for u, v in edges:
        if u == v:
            raise ArrangementError(f"loop at {u}")
        key = frozenset((u, v))
        if key in seen:
            raise ArrangementError(f"multiple edge {u}-{v}")
        if u not in pos or v not in pos:
            raise ArrangementError(f"edge {u}-{v} uses an unknown vertex")
        seen.add(key)
        f = [0] * len(vertices)
        f[pos[u]], f[pos[v]] = 1, -1
        forms.append(f)
        labels.append(f"{u}-{v}")
    return HyperplaneArrangement(len(vertices), forms, labels, QQ)


def boolean_arrangement(n: int) -> HyperplaneArrangement:
    forms = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return HyperplaneArrangement(n, forms, [f"z{i + 1}" for i in range(n)], QQ)


# ---------------------------------------------------------------- matroid


@dataclass
class Matroid:
    size: int
    rank: int
    circuits: list  # sorted tuples
    independent: dict  # k -> list of independent k-subsets

    @classmethod
    def of(cls, A: HyperplaneArrangement) -> "Matroid":
        d = A.size
        r = A.rank(range(d))
        independent = {0: [()]}
        circuits = []
        for k in range(1, r + 2):
            level = []
            for S in combinations(range(d), k):
                rk = A.rank(S)
                if rk == k:
                    level.append(S)
                elif rk == k - 1 and all(A.rank(S[:i] + S[i + 1:]) == k - 1 for i in range(k)):
                    circuits.append(S)
            if k <= r:
                independent[k] = level
        return cls(d, r, circuits, independent)

    @property
    def broken_circuits(self) -> list:
        return [C[1:] for C in self.circuits]

    def nbc(self, k: int) -> list:
        bcs = [set(b) for b in self.broken_circuits]
        return [S for S in self.independent.get(k, []) if not any(b <= set(S) for b in bcs)]

    def __post_init__(self):
        self._independent = {S for level in self.independent.values() for S in level}

    def is_independent(self, S) -> bool:
        return tuple(S) in self._independent


def flats(A: HyperplaneArrangement) -> dict:
    """Flats by rank, each a sorted tuple of hyperplane indices (closure of an independent set)."""
    d = A.size
    r = A.rank(range(d))
    out = {0: [()]}
    for k in range(1, r + 1):
        seen = set()
        for S in combinations(range(d), k):
            if A.rank(S) != k:
                continue
            closure = tuple(i for i in range(d) if i in S or A.rank(S + (i,)) == k)
            seen.add(closure)
        out[k] = sorted(seen)
    return out


def whitney_numbers(A: HyperplaneArrangement) -> list[int]:
    """|w_k| = sum over rank-k flats of |mu(0, F)|, from the Moebius function of the lattice."""
    fl = flats(A)
    mu = {(): 1}
    out = [1]
    for k in range(1, max(fl) + 1):
        total = 0
        for F in fl[k]:
            s = set(F)
            m = -sum(v for G, v in mu.items() if set(G) < s)
            mu[F] = m
            total += abs(m)
        out.append(total)
    return out


# ---------------------------------------------------------------- Orlik-Solomon


def _sort_sign(seq) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``seq`` (0 if an entry repeats) and the sorted tuple."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


class OSAlgebra:
    """Orlik-Solomon algebra over a prime field in the nbc basis."""

    def __init__(self, A: HyperplaneArrangement, p: int):
        self.arrangement = A
        self.field = PrimeField(p)
        self.p = p
        self.matroid = Matroid.of(A)
        self.basis = [self.matroid.nbc(k) for k in range(self.matroid.rank + 1)]
        self._pos = [{S: i for i, S in enumerate(level)} for level in self.basis]
        self._bc = sorted(self.matroid.circuits)
        self._memo: dict = {}

    @property
    def betti(self) -> list[int]:
        return [len(b) for b in self.basis]

    def normal_form(self, S: tuple) -> dict:
        """e_S rewritten in the nbc basis, coefficients as integers mod p."""
        S = tuple(S)
        if S in self._memo:
            return self._memo[S]
        if not self.matroid.is_independent(S):
            out = {}
        elif S in self._pos[len(S)]:
            out = {S: 1}
        else:
            C = next(C for C in self._bc if set(C[1:]) <= set(S))
            B, rest = C[1:], tuple(x for x in S if x not in C[1:])
            s0, _ = _sort_sign(B + rest)
            out = {}
            # sum_j (-1)^j e_{C - c_j} = 0, so e_B = -sum_{j>=1} (-1)^j e_{C - c_j}
            for j in range(1, len(C)):
                term = C[:j] + C[j + 1:]
                s1, T = _sort_sign(term + rest)
                if s1 == 0:
                    continue
                coeff = -((-1) ** j) * s0 * s1
                for U, x in self.normal_form(T).items():
                    out[U] = (out.get(U, 0) + coeff * x) % self.p
            out = {U: x for U, x in out.items() if x}
        self._memo[S] = out
        return out

    def product(self, S: tuple, T: tuple) -> dict:
        sign, U = _sort_sign(S + T)
        if sign == 0:
            return {}
        return {V: (sign * x) % self.p for V, x in self.normal_form(U).items()}

    def multiply(self, p: int, x: Sequence, q: int, y: Sequence) -> list:
        n = p + q
        if n >= len(self.basis):
            return []
        F = self.field
        out = [F.zero] * len(self.basis[n])
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                for U, c in self.product(self.basis[p][i], self.basis[q][j]).items():
                    k = self._pos[n][U]
                    out[k] = out[k] + F(c) * xi * yj
        return out

    def left_multiplication_matrix(self, p: int, x: Sequence, q: int):
        n = p + q
        F = self.field
        rows = len(self.basis[n]) if n < len(self.basis) else 0
        cols = []
        for j in range(len(self.basis[q])):
            e = [F.zero] * len(self.basis[q])
            e[j] = F.one
            cols.append(self.multiply(p, x, q, e) if rows else [])
        return la.from_columns(F, cols, rows)


def os_algebra(A: HyperplaneArrangement, p: int) -> OSAlgebra:
    return OSAlgebra(A, p)


def os_quotient_dimensions(A: HyperplaneArrangement, p: int) -> list[int]:
    """Dimensions of E / I computed directly from the exterior algebra (no nbc rewriting).

    I is spanned in degree k by e_T * d(e_C) for circuits C and by e_S for dependent S.
    """
    F = PrimeField(p)
    M = Matroid.of(A)
    d = A.size
    dims = []
    for k in range(M.rank + 2):
        monos = list(combinations(range(d), k))
        idx = {S: i for i, S in enumerate(monos)}
        gens = []
        for S in monos:
            if A.rank(S) < k:
                v = [F.zero] * len(monos)
                v[idx[S]] = F.one
                gens.append(v)
        for C in M.circuits:
            c = len(C)
            for T in combinations(range(d), k - c + 1) if k - c + 1 >= 0 else ():
                v = [F.zero] * len(monos)
                for j in range(c):
                    sign, U = _sort_sign(T + C[:j] + C[j + 1:])
                    if sign:
                        v[idx[U]] = v[idx[U]] + F((-1) ** j * sign)
                gens.append(v)
        r = la.rank(la.from_rows(F, gens, len(monos))) if gens and monos else 0
        dims.append(len(monos) - r)
    while dims and dims[-1] == 0:
        dims.pop()
    return dims


# ---------------------------------------------------------------- weights and bounds


@dataclass(frozen=True)
class WeightVector:
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    @property
    def gcd(self) -> int:
        g = 0
        for w in self.weights:
            g = gcd(g, w)
        return g

    @property
    def surjective(self) -> bool:
        return self.gcd == 1

    def reduce(self, p: int) -> list:
        F = PrimeField(p)
        return [F(w) for w in self.weights]


def arrangement_class(os: OSAlgebra, w: WeightVector) -> list:
    """Coordinates of sum_H w_H e_H in the degree-1 nbc basis."""
    if len(w.weights) != os.arrangement.size:
        raise ArrangementError(f"{len(w.weights)} weights for {os.arrangement.size} hyperplanes")
    F = os.field
    out = [F.zero] * os.betti[1]
    for i, x in enumerate(w.weights):
        out[os._pos[1][(i,)]] = out[os._pos[1][(i,)]] + F(x)
    return out


@dataclass
class BoundRow:
    degree: int
    cover_betti: int | None
    base_betti: int
    aomoto: int
    rhs: int
    holds: bool | None
    equality: bool | None


@dataclass
class BoundReport:
    p: int
    r: int
    rows: list
    combinatorial_only: bool
    local_system: dict  # degree -> (b_i(L), rhs of the no-p-torsion bound, rhs with correction)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "combinatorial_only": self.combinatorial_only,
            "rows": [row.__dict__ for row in self.rows],
            "local_system": {str(k): v for k, v in self.local_system.items()},
        }


def betti_bound_report(
    ring,
    a: Sequence,
    p: int,
    r: int = 1,
    cover_betti: Sequence[int] | None = None,
    local_betti: dict | None = None,
    char0_betti: Sequence[int] | None = None,
    massey_nonvanishing: dict | None = None,
) -> BoundReport:
    """Both sides of b_i(X_r) <= b_i(X) + (p^r - 1) beta_i, plus the local-system bounds.

    ``local_betti`` maps a degree to b_i(X, L_lambda) for lambda of order p;
    ``massey_nonvanishing`` maps a degree to True when some k-fold product with
    3 <= k <= p is nontrivial there, which predicts a strict inequality.
    """
    beta = aomoto_betti(ring, a)
    q = p**r
    rows = []
    for i, (b, be) in enumerate(zip(ring.betti, beta)):
        rhs = b + (q - 1) * be
        y = cover_betti[i] if cover_betti is not None and i < len(cover_betti) else None
        rows.append(BoundRow(i, y, b, be, rhs, None if y is None else y <= rhs, None if y is None else y == rhs))
    local = {}
    for i, bl in (local_betti or {}).items():
        be = beta[i]
        entry = {"b_L": bl, "beta": be, "holds_no_torsion": bl <= be}
        if char0_betti is not None:
            corr = (ring.betti[i] - char0_betti[i]) / (p - 1)
            entry["rhs_general"] = be + corr
            entry["holds_general"] = bl <= be + corr
        if massey_nonvanishing and massey_nonvanishing.get(i):
            entry["strict_predicted"] = True
            entry["strict"] = bl < be
        local[i] = entry
    return BoundReport(p, r, rows, cover_betti is None, local)


MATEI_WEIGHTS_P3 = (1, 1, 1, -1, -1, -1, 0, 0, 0, 0, 0, 0)
MATEI_OMEGA_P3 = (0, 0, 0, 1, 1, 1, -1, -1, -1, 0, 0, 0)
