"""Iterated Massey products <[eta], ..., [eta], omega> and their indeterminacy.

A defining system of length k for a degree-i class omega is a sequence of
degree-i cochains alpha_1, ..., alpha_k with delta alpha_1 = 0, [alpha_1] = omega
and delta alpha_(j+1) = eta u alpha_j; its value is [eta u alpha_k].

Using a deformation retraction (iota, pi, h) of C^*(X) onto H^*(X), every
defining system can be moved, without changing its value, to the normal form

    alpha_1 = iota(omega),   alpha_(j+1) = h(eta u alpha_j) + iota(t_j),

where the free classes t_j are subject to pi(eta u alpha_j) = 0 for j < k.
(The move alpha_(j+1) += delta u, alpha_(j+2) -= eta u u preserves both the
equations and the value, because eta u eta = 0.) Constraints and value are
then linear in (omega, t_1, ..., t_(k-1)) with the transferred maps c_j as
coefficients. ``cochain_affine_set`` solves the same problem directly on
cochains and serves as an oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from covhom.algebra import linalg as la
from covhom.simplicial import Cochain, OrderedSimplicialComplex, coboundary_matrices, left_cup_matrix
from covhom.twisted import ConsistencyError, minimal_model


@dataclass
class DefiningSystem:
    degree: int
    length: int
    alphas: list  # cochains as coordinate lists in C^degree
    parameters: list  # t_1 .. t_(k-1) in cohomology coordinates

    def check(self, X: OrderedSimplicialComplex, eta: Cochain) -> bool:
        """delta alpha_1 = 0 and delta alpha_(j+1) = eta u alpha_j, exactly."""
        i = self.degree
        if i + 1 > X.dim:
            return True
        delta = coboundary_matrices(X, eta.field)[i]
        theta = left_cup_matrix(eta, i)
        if any(x != 0 for x in delta.apply(self.alphas[0])):
            return False
        return all(delta.apply(b) == theta.apply(a) for a, b in zip(self.alphas, self.alphas[1:]))


@dataclass
class Obstruction:
    degree: int
    stage: int  # eta u alpha_stage is never a coboundary
    obstruction: list  # class of eta u alpha_stage for a best partial system


@dataclass
class MasseyValue:
    degree: int
    length: int  # k + 1
    value: list  # representative in H^(degree+1)
    indeterminacy: list  # basis of the direction space
    nonzero: bool
    system: DefiningSystem | None = None


def in_span(F, vecs: list, v: list) -> bool:
    if all(x == 0 for x in v):
        return True
    if not vecs:
        return False
    n = len(v)
    return la.in_span(F, la.from_columns(F, vecs, n), la.from_columns(F, [v], n))


def span_basis(F, vecs: list, n: int) -> list:
    if not vecs:
        return []
    M = la.from_columns(F, vecs, n)
    return la.columns(la.column_space(F, M))


def same_span(F, a: list, b: list, n: int) -> bool:
    ra, rb = len(span_basis(F, a, n)), len(span_basis(F, b, n))
    return ra == rb == len(span_basis(F, list(a) + list(b), n))


class NormalForm:
    """The linear data of normal-form defining systems in degree i up to length k.

    Unknowns are (omega, t_1, ..., t_(k-1)), each b_i long. Row block j is
    sum_l (-1)^(j-1-l) c_(j-l) t_l with t_0 = omega; blocks 1..k-1 are the
    constraints and block k is the value.
    """

    def __init__(self, X: OrderedSimplicialComplex, eta: Cochain, i: int, k: int):
        if k < 1:
            raise ValueError("length must be at least 1")
        self.model = model = minimal_model(X, eta, k + 1)
        self.field = F = eta.field
        self.i, self.k = i, k
        if not 0 <= i < len(model.betti):
            raise ValueError(f"no cohomology in degree {i}")
        self.b = model.betti[i]
        self.bt = model.betti[i + 1] if i + 1 < len(model.betti) else 0
        self.nvars = self.b * k
        self.blocks = [self._block(j) for j in range(1, k + 1)]

    def _block(self, j: int):
        F, b = self.field, self.b
        M = F.matrix(self.bt, self.nvars)
        for l in range(j):
            C = self.model.coefficient(self.i, j - l)
            sign = -1 if (j - 1 - l) % 2 else 1
            for r in range(self.bt):
                for c in range(b):
                    x = C[r, c]
                    if x != 0:
                        M[r, l * b + c] = sign * x
        return M

    def constraint_matrix(self, upto: int | None = None):
        upto = self.k - 1 if upto is None else upto
        blocks = self.blocks[:upto]
        if not blocks or self.bt == 0:
            return self.field.matrix(0, self.nvars)
        return la.vstack(self.field, *blocks)

    def _cols(self, M, cols):
        return la.submatrix(self.field, M, range(M.nrows()), cols)

    def solve(self, omega: list, upto: int | None = None):
        """(particular t, kernel basis for t) of the constraints with omega fixed, or None."""
        F, b = self.field, self.b
        C = self.constraint_matrix(upto)
        ntail = self.nvars - b
        tail = list(range(b, self.nvars))
        if C.nrows() == 0:
            return [F.zero] * ntail, la.columns(la.identity(F, ntail))
        rhs = -(self._cols(C, range(b)) * la.from_columns(F, [omega], b)) if b else F.matrix(C.nrows(), 1)
        if ntail == 0:
            return ([], []) if la.is_zero(rhs) else None
        Ct = self._cols(C, tail)
        sol = la.solve(F, Ct, rhs)
        if sol is None:
            return None
        return la.column(sol, 0), la.columns(la.nullspace(F, Ct))

    def value(self, omega: list, t: list) -> list:
        if self.bt == 0:
            return []
        x = la.from_columns(self.field, [list(omega) + list(t)], self.nvars)
        return la.column(self.blocks[-1] * x, 0)

    def indeterminacy(self) -> list:
        """Values of the homogeneous systems (omega = 0)."""
        sol = self.solve([self.field.zero] * self.b)
        zero = [self.field.zero] * self.b
        vals = [self.value(zero, t) for t in sol[1]]
        return span_basis(self.field, vals, self.bt)

    def reachable(self) -> list:
        """Values over all omega admitting a system of this length."""
        F = self.field
        C = self.constraint_matrix()
        K = la.nullspace(F, C) if C.nrows() else la.identity(F, self.nvars)
        vals = [la.column(self.blocks[-1] * la.from_columns(F, [v], self.nvars), 0) for v in la.columns(K)] if self.bt else []
        return span_basis(F, vals, self.bt)

    def cochains(self, omega: list, ts: list) -> list:
        F, model, i = self.field, self.model, self.i
        ret = model.retraction
        theta = model.theta[i]
        h = ret.degrees[i + 1].h if i + 1 < len(ret.degrees) else None
        alphas = [ret.representative(i, omega)]
        for t in ts:
            prev = alphas[-1]
            if h is not None and theta.nrows():
                nxt = la.column(h * (theta * la.from_columns(F, [prev], len(prev))), 0)
            else:
                nxt = [F.zero] * len(prev)
            alphas.append([x + y for x, y in zip(nxt, ret.representative(i, t))])
        return alphas

    def class_of_product(self, alpha: list) -> list:
        """[eta u alpha] for a cochain alpha with eta u alpha a cocycle."""
        F, i = self.field, self.i
        if self.bt == 0:
            return []
        y = la.column(self.model.theta[i] * la.from_columns(F, [alpha], len(alpha)), 0)
        return self.model.retraction.project(i + 1, y)

    def chunks(self, t: list) -> list:
        b = self.b
        return [list(t[j * b:(j + 1) * b]) for j in range(self.k - 1)]


def find_defining_system(X: OrderedSimplicialComplex, eta: Cochain, omega: list, k: int, degree: int):
    """A defining system of length k for omega, or the first obstructed stage."""
    nf = NormalForm(X, eta, degree, k)
    F = nf.field
    omega = [F(x) for x in omega]
    sol = nf.solve(omega)
    if sol is None:
        for stage in range(1, k):
            if nf.solve(omega, stage) is None:
                sub = NormalForm(X, eta, degree, stage)
                t = sub.solve(omega)[0]
                alphas = sub.cochains(omega, sub.chunks(t))
                return Obstruction(degree, stage, nf.class_of_product(alphas[-1]))
        raise ConsistencyError("constraints are unsolvable but no stage is obstructed")
    ts = nf.chunks(sol[0])
    system = DefiningSystem(degree, k, nf.cochains(omega, ts), ts)
    if not system.check(X, eta):
        raise ConsistencyError("normal-form defining system fails its equations")
    return system


def massey_product(X: OrderedSimplicialComplex, eta: Cochain, omega: list, k: int, degree: int):
    """<[eta], ..., [eta], omega> with k copies of [eta]: a MasseyValue, or an Obstruction."""
    system = find_defining_system(X, eta, omega, k, degree)
    if isinstance(system, Obstruction):
        return system
    nf = NormalForm(X, eta, degree, k)
    F = nf.field
    omega = [F(x) for x in omega]
    flat = [x for t in system.parameters for x in t]
    value = nf.value(omega, flat)
    if nf.class_of_product(system.alphas[-1]) != value:
        raise ConsistencyError("cochain-level value disagrees with the normal form")
    ind = nf.indeterminacy()
    return MasseyValue(degree, k + 1, value, ind, not in_span(F, ind, value), system)


def random_defining_system(X: OrderedSimplicialComplex, eta: Cochain, omega: list, k: int, degree: int, rng: random.Random) -> DefiningSystem:
    """A random defining system: random normal-form parameters plus random coboundary moves."""
    nf = NormalForm(X, eta, degree, k)
    F = nf.field
    omega = [F(x) for x in omega]
    sol = nf.solve(omega)
    if sol is None:
        raise ValueError("no defining system of this length")
    t = list(sol[0])
    for v in sol[1]:
        c = F(rng.randrange(-3, 4))
        t = [x + c * y for x, y in zip(t, v)]
    ts = nf.chunks(t)
    alphas = nf.cochains(omega, ts)
    if degree > 0:
        dprev = coboundary_matrices(X, F)[degree - 1]
        theta_prev = left_cup_matrix(eta, degree - 1)
        for j in range(k):
            u = [F(rng.randrange(-2, 3)) for _ in range(X.count(degree - 1))]
            du = dprev.apply(u)
            alphas[j] = [x + y for x, y in zip(alphas[j], du)]
            if j + 1 < k:
                tu = theta_prev.apply(u)
                alphas[j + 1] = [x - y for x, y in zip(alphas[j + 1], tu)]
    system = DefiningSystem(degree, k, alphas, ts)
    if not system.check(X, eta):
        raise ConsistencyError("randomized defining system fails its equations")
    return system


def value_of(X: OrderedSimplicialComplex, eta: Cochain, system: DefiningSystem) -> list:
    nf = NormalForm(X, eta, system.degree, 1)
    return nf.class_of_product(system.alphas[-1])


def cochain_affine_set(X: OrderedSimplicialComplex, eta: Cochain, omega: list, k: int, degree: int):
    """Oracle: solve the defining equations on cochains directly.

    Unknowns are u (alpha_1 = iota(omega) + delta u) and alpha_2 .. alpha_k.
    Returns (value, indeterminacy basis) or None if there is no system.
    """
    from covhom.simplicial import retraction_of

    F = eta.field
    i = degree
    ret = retraction_of(X, F)
    n, nt = X.count(i), X.count(i + 1) if i + 1 <= X.dim else 0
    npre = X.count(i - 1) if i > 0 else 0
    if nt == 0:
        return [], []
    delta = coboundary_matrices(X, F)
    D = delta[i].dense()
    T = left_cup_matrix(eta, i).dense()
    Dp = delta[i - 1].dense() if i > 0 else F.matrix(n, 0)
    base = la.from_columns(F, [ret.representative(i, [F(x) for x in omega])], n)
    nvars = npre + n * (k - 1)
    # block rows j = 1..k-1: delta alpha_(j+1) - eta u alpha_j = 0
    rows = nt * (k - 1)
    A = F.matrix(rows, nvars)
    rhs = F.matrix(rows, 1)
    TDp = T * Dp

    def put(M, r0, c0):
        for (r, c), x in _items(M):
            A[r0 + r, c0 + c] = A[r0 + r, c0 + c] + x

    for j in range(1, k):
        r0 = nt * (j - 1)
        put(D, r0, npre + n * (j - 1))  # alpha_(j+1)
        if j == 1:
            put(-TDp, r0, 0)
            tb = T * base
            for r in range(nt):
                rhs[r0 + r, 0] = tb[r, 0]
        else:
            put(-T, r0, npre + n * (j - 2))
    if rows:
        sol = la.solve(F, A, rhs)
        if sol is None:
            return None
        kernel = la.columns(la.nullspace(F, A))
    else:
        sol, kernel = F.matrix(nvars, 1), la.columns(la.identity(F, nvars))

    def last_alpha(vec, with_base):
        if k == 1:
            a = la.from_columns(F, [vec[:npre]], npre) if npre else None
            out = Dp * a if a is not None else F.matrix(n, 1)
            return out + base if with_base else out
        return la.from_columns(F, [vec[npre + n * (k - 2):npre + n * (k - 1)]], n)

    def val(vec, with_base):
        a = last_alpha(vec, with_base)
        return ret.project(i + 1, la.column(T * a, 0))

    value = val(la.column(sol, 0), True)
    ind = [val(v, False) for v in kernel]
    return value, span_basis(F, ind, ret.betti[i + 1])


def _items(M):
    data = M.tolist()
    for r, row in enumerate(data):
        for c, x in enumerate(row):
            if x != 0:
                yield (r, c), x


# ---------------------------------------------------------------- profiles


def massey_length(X: OrderedSimplicialComplex, eta: Cochain, degree: int, k_max: int) -> int:
    """Largest k + 1 <= k_max + 1 with a nonvanishing product on degree ``degree``; 0 if none."""
    best = 0
    for k in range(1, k_max + 1):
        nf = NormalForm(X, eta, degree, k)
        if len(nf.reachable()) > len(nf.indeterminacy()):
            best = k + 1
    return best


def massey_length_profile(X: OrderedSimplicialComplex, eta: Cochain, k_max: int) -> list[int]:
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    model = minimal_model(X, eta, k_max + 1)
    return [massey_length(X, eta, i, k_max) for i in range(len(model.betti))]


# ---------------------------------------------------------------- comparison with d_k


@dataclass
class DkComparison:
    k: int
    degree: int
    classes: int  # dim of E_k surviving classes tested
    matches: bool
    indeterminacy_matches: bool
    nonzero: int  # rank of d_k on these classes


@dataclass
class DkReport:
    m: int
    rows: list

    @property
    def passed(self) -> bool:
        return all(r.matches and r.indeterminacy_matches for r in self.rows)


def compare_with_dk(X: OrderedSimplicialComplex, eta: Cochain, m: int | None = None, k_max: int | None = None) -> DkReport:
    """For each class z of H^i surviving to E_k in column 0, the Massey value
    <[eta], .., [eta], z> (k copies) equals (-1)^(k-1) d_k(z) modulo Bl(k-1),
    and the indeterminacy equals Bl(k-1)."""
    from covhom.spectral import filtered_sequence
    from covhom.twisted import working_modulus

    F = eta.field
    m = m or min(working_modulus(X), 8)
    seq = filtered_sequence(X, eta, m)
    k_max = min(k_max or m - 1, m - 1)
    rows = []
    for k in range(2, k_max + 1):
        for i in range(len(seq.betti) - 1):
            Z = seq.zl[i][k]
            B = seq.bl[i + 1][k - 1]
            ok = ind_ok = True
            rank_vals = []
            ind = None
            for z in Z:
                mv = massey_product(X, eta, z, k, i)
                if isinstance(mv, Obstruction):
                    ok = False
                    break
                if ind is None:
                    ind = mv.indeterminacy
                    ind_ok = same_span(F, ind, B, seq.betti[i + 1])
                d = seq.phi_of(k, i, z)
                sign = -1 if (k - 1) % 2 else 1
                diff = [x - sign * y for x, y in zip(mv.value, d)]
                if not in_span(F, B, diff):
                    ok = False
                rank_vals.append(d)
            nz = len(span_basis(F, B + rank_vals, seq.betti[i + 1])) - len(B) if rank_vals else 0
            rows.append(DkComparison(k, i, len(Z), ok, ind_ok, nz))
    return DkReport(m, rows)
