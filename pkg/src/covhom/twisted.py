"""Twisted complexes over K[s]/(s^m) and eigenvalue-1 Alexander profiles.

The chain side has differential ``d + s (- n eta)`` and the cochain side
``delta + s (eta u -)``; with s = t - 1 they compute the homology of X with
coefficients in K[t]/((t-1)^m) twisted by nu. Homology is computed either on
the full complex or on the minimal model obtained by transferring the
perturbation ``s (eta u -)`` to cohomology (see :mod:`covhom.homotopy`).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field

from covhom.algebra import ExactMatrix, ModuleDecomposition, TruncatedRing, module_homology
from covhom.algebra import linalg as la
from covhom.homotopy import Retraction
from covhom.simplicial import (
    Cochain,
    OrderedSimplicialComplex,
    boundary_matrices,
    cap_matrix,
    coboundary_matrices,
    left_cup_matrix,
    retraction_of,
)


class ConsistencyError(ArithmeticError):
    """An internal cross-check failed; this indicates a bug, not bad input."""


def _lift(R: TruncatedRing, d: ExactMatrix, t: ExactMatrix) -> ExactMatrix:
    """d + s t as a matrix over R."""
    entries = {}
    for (i, j), x in d.items():
        entries[(i, j)] = [x, 0]
    for (i, j), x in t.items():
        entries.setdefault((i, j), [0, 0])[1] = x
    return ExactMatrix(R, d.nrows, d.ncols, {k: R.series(v) for k, v in entries.items()})


@dataclass
class TwistedComplex:
    ring: TruncatedRing
    side: str  # "chain": D[k]: C_k -> C_{k-1}; "cochain": D[k]: C^k -> C^{k+1}
    ranks: list
    D: list
    source: tuple = dc_field(default=None, repr=False)  # (X, eta) when built from a complex

    @property
    def m(self) -> int:
        return self.ring.m

    def check_square_zero(self) -> None:
        if self.side == "chain":
            pairs = [(self.D[k], self.D[k + 1]) for k in range(len(self.D) - 1)]
        else:
            pairs = [(self.D[k + 1], self.D[k]) for k in range(len(self.D) - 1)]
        for a, b in pairs:
            if a.ncols == b.nrows and not (a @ b).is_zero():
                raise ConsistencyError("twisted differential does not square to zero")


def build_twisted_chain(X: OrderedSimplicialComplex, eta: Cochain, m: int) -> TwistedComplex:
    R = TruncatedRing(eta.field, m)
    bd = boundary_matrices(X, eta.field)
    D = [ExactMatrix(R, 0, X.count(0))]
    for k in range(1, X.dim + 1):
        D.append(_lift(R, bd[k], cap_matrix(eta, k)))
    D.append(ExactMatrix(R, X.count(X.dim), 0))
    T = TwistedComplex(R, "chain", X.counts(), D, (X, eta))
    T.check_square_zero()
    return T


def build_twisted_cochain(X: OrderedSimplicialComplex, eta: Cochain, m: int) -> TwistedComplex:
    R = TruncatedRing(eta.field, m)
    deltas = coboundary_matrices(X, eta.field)
    D = [_lift(R, deltas[k], left_cup_matrix(eta, k)) for k in range(X.dim + 1)]
    T = TwistedComplex(R, "cochain", X.counts(), D, (X, eta))
    T.check_square_zero()
    return T


# ---------------------------------------------------------------- minimal model


class MinimalModel:
    """H^*(X) with the transferred differential sum_j s^j c_j[k]: H^k -> H^{k+1}.

    ``c[k][j-1]`` is c_j in degree k. The model over K[s]/(s^m) is homotopy
    equivalent, as an s-adically filtered complex, to the twisted cochain
    complex; its transpose models the chain side.
    """

    def __init__(self, X: OrderedSimplicialComplex, eta: Cochain, order: int, retraction: Retraction | None = None):
        self.complex = X
        self.eta = eta
        self.field = eta.field
        self.retraction = retraction or retraction_of(X, eta.field)
        self.theta = [left_cup_matrix(eta, k).dense() for k in range(X.dim + 1)]
        self.betti = self.retraction.betti
        self.order = 0
        self.c: list = [[] for _ in range(X.dim + 1)]
        self.extend(order)

    def extend(self, order: int) -> None:
        """Make c_1 .. c_{order-1} available."""
        if order <= self.order:
            return
        for k in range(self.complex.dim + 1):
            self.c[k] = self.retraction.transfer(self.theta, order, k)
        self.order = order

    def coefficient(self, k: int, j: int):
        """c_j in degree k as a backend matrix (zero outside the computed range)."""
        F = self.field
        rows = self.betti[k + 1] if k + 1 < len(self.betti) else 0
        if k < 0 or k >= len(self.c) or j < 1 or j > len(self.c[k]):
            return F.matrix(rows, self.betti[k] if 0 <= k < len(self.betti) else 0)
        return self.c[k][j - 1]

    def cochain_differential(self, k: int, m: int) -> ExactMatrix:
        self.extend(m)
        R = TruncatedRing(self.field, m)
        rows = self.betti[k + 1] if k + 1 < len(self.betti) else 0
        cols = self.betti[k] if 0 <= k < len(self.betti) else 0
        series: dict = {}
        for j in range(1, m):
            M = self.coefficient(k, j)
            for i in range(rows):
                for l in range(cols):
                    x = M[i, l]
                    if x != 0:
                        series.setdefault((i, l), [0] * m)[j] = x
        return ExactMatrix(R, rows, cols, {key: R.series(v) for key, v in series.items()})

    def chain_differential(self, k: int, m: int) -> ExactMatrix:
        """D'_k: C_k -> C_{k-1} of the reduced chain side (transpose of degree k-1)."""
        return self.cochain_differential(k - 1, m).transpose()

    def cochain_complex(self, m: int) -> TwistedComplex:
        R = TruncatedRing(self.field, m)
        D = [self.cochain_differential(k, m) for k in range(len(self.betti))]
        return TwistedComplex(R, "cochain", list(self.betti), D)

    def chain_complex(self, m: int) -> TwistedComplex:
        R = TruncatedRing(self.field, m)
        top = len(self.betti) - 1
        D = [ExactMatrix(R, 0, self.betti[0])]
        D += [self.chain_differential(k, m) for k in range(1, top + 1)]
        D.append(ExactMatrix(R, self.betti[top], 0))
        return TwistedComplex(R, "chain", list(self.betti), D)


_MODELS: dict = {}


def minimal_model(X: OrderedSimplicialComplex, eta: Cochain, order: int) -> MinimalModel:
    key = (id(X), id(eta), eta.field)
    model = _MODELS.get(key)
    if model is None or model.complex is not X or model.eta is not eta:
        model = MinimalModel(X, eta, order)
        _MODELS.clear()
        _MODELS[key] = model
    model.extend(order)
    return model


# ---------------------------------------------------------------- homology


def twisted_homology(T: TwistedComplex) -> list[ModuleDecomposition]:
    """Module decomposition of H_k (chain side) or H^k (cochain side) for every degree."""
    R = T.ring
    out = []
    n = len(T.ranks)
    for k in range(n):
        if T.side == "chain":
            d_out, d_in = T.D[k], T.D[k + 1]
        else:
            d_out = T.D[k]
            d_in = T.D[k - 1] if k > 0 else ExactMatrix(R, T.ranks[0], 0)
        out.append(module_homology(d_in, d_out))
    return out


def twisted_homology_of(X: OrderedSimplicialComplex, eta: Cochain, m: int, side: str = "chain", method: str = "reduced"):
    if method == "full":
        T = build_twisted_chain(X, eta, m) if side == "chain" else build_twisted_cochain(X, eta, m)
    elif method == "reduced":
        model = minimal_model(X, eta, m)
        T = model.chain_complex(m) if side == "chain" else model.cochain_complex(m)
    else:
        raise ValueError(f"unknown method {method!r}")
    return twisted_homology(T)


def twisted_dimensions(X, eta, m: int, side: str = "chain", method: str = "reduced") -> list[int]:
    return [d.dimension for d in twisted_homology_of(X, eta, m, side, method)]


# ---------------------------------------------------------------- Alexander profile


@dataclass
class AlexanderProfile:
    modulus: int
    free_ranks: list
    torsion: list  # per degree, sorted tuple of Jordan block sizes at eigenvalue 1

    @property
    def max_jordan(self) -> int:
        return max((max(t) for t in self.torsion if t), default=0)

    def as_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "free_ranks": list(self.free_ranks),
            "torsion": [list(t) for t in self.torsion],
        }

    def same_structure(self, other: "AlexanderProfile") -> bool:
        return self.free_ranks == other.free_ranks and self.torsion == other.torsion


def working_modulus(X: OrderedSimplicialComplex) -> int:
    return 1 + max(X.counts())


def _extract(decomps: list[ModuleDecomposition]) -> tuple[list, list]:
    free, torsion = [], []
    prev: Counter = Counter()
    for k, d in enumerate(decomps):
        S = Counter(d.torsion_exponents)
        if prev - S:
            raise ConsistencyError(f"degree {k}: torsion of degree {k - 1} is not contained in S_{k}")
        T = S - prev
        free.append(d.free_rank)
        torsion.append(tuple(sorted(T.elements())))
        prev = T
    return free, torsion


def alexander_profile(X: OrderedSimplicialComplex, eta: Cochain, m: int | None = None, stability: int = 1) -> AlexanderProfile:
    """Free ranks and eigenvalue-1 Jordan blocks of H_i(X^nu) from the twisted chain complex.

    Uses H_i(twisted, m) = H_i(X^nu) (x) R_m + Tor_1(H_{i-1}(X^nu), R_m), peeling
    off the Tor contribution of the previous degree.
    """
    if X.count(0) == 0:
        raise ValueError("empty complex")
    m = m or working_modulus(X)
    profiles = []
    for extra in range(stability + 1):
        decomps = twisted_homology_of(X, eta, m + extra, "chain")
        free, torsion = _extract(decomps)
        profiles.append(AlexanderProfile(m + extra, free, torsion))
    for other in profiles[1:]:
        if not profiles[0].same_structure(other):
            raise ConsistencyError(f"profile changes between modulus {m} and {other.modulus}")
    return profiles[0]


def sum_rule_holds(profile: AlexanderProfile, dims: list[int], m: int) -> bool:
    """dim H_i(twisted, m) = m r_i + sum_{T_i} min(j, m) + sum_{T_{i-1}} min(j, m)."""
    for i, d in enumerate(dims):
        expect = m * profile.free_ranks[i] + sum(min(j, m) for j in profile.torsion[i])
        if i > 0:
            expect += sum(min(j, m) for j in profile.torsion[i - 1])
        if expect != d:
            return False
    return True


@dataclass
class PropKeyReport:
    p: int
    r: int
    twisted: list
    cover: list

    @property
    def passed(self) -> bool:
        return self.twisted == self.cover


def verify_prop_key(X: OrderedSimplicialComplex, cm, p: int, r: int) -> PropKeyReport:
    """dim H_i(twisted, m = p^r) over F_p against b_i of the explicit p^r-fold cover."""
    from covhom.algebra import PrimeField
    from covhom.circle import eta_from_circle_map
    from covhom.covers import build_finite_cover
    from covhom.simplicial import betti_numbers

    F = PrimeField(p)
    eta = eta_from_circle_map(X, cm, F)
    n = p**r
    dims = twisted_dimensions(X, eta, n, "chain")
    cover = betti_numbers(build_finite_cover(X, cm, n).complex, F)
    return PropKeyReport(p, r, dims, cover)
