"""Fox calculus on finite presentations and simplicial models of presentation complexes."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from flint import fmpq_poly

from covhom.algebra import QQ, CyclotomicField, ExactMatrix, ModuleDecomposition, TruncatedRing, module_homology
from covhom.algebra import linalg as la
from covhom.circle import CircleMap, compatible_order_search, validate_circle_map
from covhom.simplicial import OrderedSimplicialComplex, validate_complex


class PresentationError(ValueError):
    pass


Word = tuple  # of (generator index, +1 | -1)


def free_reduce(word) -> Word:
    out: list = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def inverse(word: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


_TOKEN = re.compile(r"([A-Za-z_][A-Za-z_0-9]*?)(?:\^(-?\d+))?$")


def parse_word(text: str, generators: list[str]) -> Word:
    """Parse ``x y X^-1`` / ``x*y*x^-1`` tokens, or a run of single letters where
    an upper-case letter is the inverse of a lower-case generator."""
    text = text.strip()
    if not text or text == "1":
        return ()
    pos = {g: i for i, g in enumerate(generators)}
    tokens = [t for t in re.split(r"[\s*]+", text) if t]
    letters = []
    if len(tokens) == 1 and tokens[0] not in pos and "^" not in tokens[0] and all(len(g) == 1 for g in generators):
        for ch in tokens[0]:
            if ch in pos:
                letters.append((pos[ch], 1))
            elif ch.lower() in pos and ch.isupper():
                letters.append((pos[ch.lower()], -1))
            else:
                raise PresentationError(f"unknown generator {ch!r} in {text!r}")
        return free_reduce(letters)
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m or m.group(1) not in pos:
            raise PresentationError(f"unknown generator in token {tok!r} of {text!r}")
        e = int(m.group(2)) if m.group(2) else 1
        letters += [(pos[m.group(1)], 1 if e > 0 else -1)] * abs(e)
    return free_reduce(letters)


def format_word(word: Word, generators: list[str]) -> str:
    if not word:
        return "1"
    return " ".join(generators[g] + ("" if e > 0 else "^-1") for g, e in word)


@dataclass
class GroupPresentation:
    generators: list
    relators: list  # list of Word
    weights: tuple

    def __post_init__(self):
        self.generators = list(self.generators)
        self.relators = [free_reduce(r) for r in self.relators]
        self.weights = tuple(int(w) for w in self.weights)
        if len(self.weights) != len(self.generators):
            raise PresentationError("one weight per generator required")
        for r in self.relators:
            if self.nu(r) != 0:
                raise PresentationError(
                    f"relator {format_word(r, self.generators)} has weight {self.nu(r)}; nu is not defined on the group"
                )

    @classmethod
    def parse(cls, generators: list[str], relators: list[str], weights) -> "GroupPresentation":
        return cls(generators, [parse_word(r, generators) for r in relators], weights)

    def nu(self, word: Word) -> int:
        return sum(e * self.weights[g] for g, e in word)

    @property
    def surjective(self) -> bool:
        g = 0
        for w in self.weights:
            g = gcd(g, w)
        return g == 1


# ---------------------------------------------------------------- group ring


def _add(acc: dict, key, c: int) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def group_ring_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            _add(out, free_reduce(u + v), x * y)
    return out


def fox_derivative(word: Word, j: int) -> dict:
    """d word / d x_j in Z[F] as {reduced word: coefficient}."""
    out: dict = {}
    prefix: Word = ()
    for g, e in word:
        if g == j:
            if e > 0:
                _add(out, prefix, 1)
            else:
                _add(out, free_reduce(prefix + ((g, -1),)), -1)
        prefix = free_reduce(prefix + ((g, e),))
    return out


def fundamental_identity_holds(word: Word, ngens: int) -> bool:
    """sum_j (d w / d x_j)(x_j - 1) = w - 1 in Z[F]."""
    total: dict = {}
    for j in range(ngens):
        for key, c in group_ring_mul(fox_derivative(word, j), {((j, 1),): 1, (): -1}).items():
            _add(total, key, c)
    expect: dict = {}
    _add(expect, free_reduce(word), 1)
    _add(expect, (), -1)
    return total == expect


def push(element: dict, P: GroupPresentation) -> dict:
    """Image in Z[t, t^-1] under nu, as {exponent: coefficient}."""
    out: dict = {}
    for w, c in element.items():
        _add(out, P.nu(w), c)
    return out


# ---------------------------------------------------------------- Fox complex


@dataclass
class FoxChainComplex:
    """C_2 -> C_1 -> C_0 of the infinite cyclic cover of the presentation complex.

    Entries are Laurent polynomials {exponent: integer}; ``d2[j][i]`` is the
    image of d r_i / d x_j and ``d1[0][j]`` is t^nu(x_j) - 1.
    """

    presentation: GroupPresentation
    d2: list
    d1: list

    def evaluate(self, ring, t, t_inv):
        """Specialize t to an element of ``ring`` (scalars or truncated series)."""

        def ev(poly):
            total = ring(0)
            for e, c in poly.items():
                base = t if e >= 0 else t_inv
                x = ring(1)
                for _ in range(abs(e)):
                    x = x * base
                total = total + x * c
            return total

        g, r = len(self.d1[0]), len(self.d2[0]) if self.d2 else 0
        D2 = {(j, i): ev(self.d2[j][i]) for j in range(g) for i in range(r)}
        D1 = {(0, j): ev(self.d1[0][j]) for j in range(g)}
        return ExactMatrix(ring, g, r, D2), ExactMatrix(ring, 1, g, D1)

    def composite_vanishes(self) -> bool:
        g = len(self.d1[0])
        for i in range(len(self.d2[0]) if self.d2 else 0):
            acc: dict = {}
            for j in range(g):
                for e1, c1 in self.d1[0][j].items():
                    for e2, c2 in self.d2[j][i].items():
                        _add(acc, e1 + e2, c1 * c2)
            if acc:
                return False
        return True


def fox_chain_complex(P: GroupPresentation) -> FoxChainComplex:
    g = len(P.generators)
    d2 = [[push(fox_derivative(r, j), P) for r in P.relators] for j in range(g)]
    d1 = [[{P.weights[j]: 1, 0: -1} if P.weights[j] else {} for j in range(g)]]
    C = FoxChainComplex(P, d2, d1)
    if not C.composite_vanishes():
        raise PresentationError("d1 d2 is not zero; relator weights are inconsistent")
    return C


def h1_truncated(P: GroupPresentation, field, m: int) -> ModuleDecomposition:
    """H_1 of the Fox complex tensored with K[s]/(s^m), t = 1 + s."""
    R = TruncatedRing(field, m)
    t = R.series([1, 1])
    D2, D1 = fox_chain_complex(P).evaluate(R, t, t.inverse())
    return module_homology(D2, D1)


def _laurent_to_poly(poly: dict, shift: int) -> fmpq_poly:
    coeffs = [0] * (max((e + shift for e in poly), default=0) + 1)
    for e, c in poly.items():
        coeffs[e + shift] += c
    return fmpq_poly(coeffs)


def _det(M: list) -> fmpq_poly:
    n = len(M)
    if n == 0:
        return fmpq_poly([1])
    if n == 1:
        return M[0][0]
    total = fmpq_poly([0])
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def alexander_polynomial(P: GroupPresentation) -> fmpq_poly:
    """Generator of the first elementary ideal over QQ[t^+-1], monic with nonzero constant term."""
    C = fox_chain_complex(P)
    g, r = len(P.generators), len(P.relators)
    shift = max((-e for row in C.d2 for poly in row for e in poly), default=0)
    shift = max(shift, 0)
    A = [[_laurent_to_poly(C.d2[j][i], shift) for j in range(g)] for i in range(r)]  # r x g
    k = g - 1
    result = fmpq_poly([0])
    if k == 0:
        result = fmpq_poly([1])
    for rows in combinations(range(r), k):
        for cols in combinations(range(g), k):
            d = _det([[A[i][j] for j in cols] for i in rows])
            result = d if result == 0 else result.gcd(d)
    if result == 0:
        return result
    coeffs = list(result.coeffs())
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    poly = fmpq_poly(coeffs)
    return poly / poly.coeffs()[-1]


@dataclass(frozen=True)
class LocalSystemSpec:
    p: int
    power: int = 1  # lambda = zeta_p^power

    def __post_init__(self):
        if self.power % self.p == 0:
            raise ValueError("lambda = 1 is the trivial local system; use untwisted Betti numbers")


def b1_local_system(P: GroupPresentation, spec: LocalSystemSpec) -> int:
    """dim over QQ(zeta_p) of H_1 of the presentation complex with t -> lambda."""
    F = CyclotomicField(spec.p)
    lam = F.zeta**spec.power
    D2, D1 = fox_chain_complex(P).evaluate(F, lam, lam.inverse())
    g = len(P.generators)
    r2 = la.rank(D2.dense()) if D2.nnz() else 0
    r1 = la.rank(D1.dense()) if D1.nnz() else 0
    return g - r1 - r2


def b1_cover(P: GroupPresentation, n: int, field) -> int:
    """b_1 of the n-fold cyclic cover: t acts by the regular representation of Z_n."""
    if not P.surjective:
        raise PresentationError("nu is not surjective, so the cover is disconnected")
    C = fox_chain_complex(P)
    g, r = len(P.generators), len(P.relators)

    def block(poly, entries, bi, bj):
        for e, c in poly.items():
            for a in range(n):
                entries[(bi * n + (a + e) % n, bj * n + a)] = entries.get((bi * n + (a + e) % n, bj * n + a), 0) + c

    e2: dict = {}
    for j in range(g):
        for i in range(r):
            block(C.d2[j][i], e2, j, i)
    e1: dict = {}
    for j in range(g):
        block(C.d1[0][j], e1, 0, j)
    D2 = ExactMatrix(field, g * n, r * n, e2)
    D1 = ExactMatrix(field, n, g * n, e1)
    r2 = la.rank(D2.dense()) if D2.nnz() else 0
    r1 = la.rank(D1.dense()) if D1.nnz() else 0
    return g * n - r1 - r2


def b1_untwisted(P: GroupPresentation, field) -> int:
    """b_1 of the presentation complex itself (t -> 1)."""
    D2, D1 = fox_chain_complex(P).evaluate(field, field(1), field(1))
    return len(P.generators) - (la.rank(D2.dense()) if D2.nnz() else 0)


# ---------------------------------------------------------------- triangulation


def triangulate_presentation(P: GroupPresentation, N: int = 3):
    """Simplicial presentation complex with a circle map realizing nu.

    Generator x becomes a loop of max(3, N |nu(x)|) edges winding nu(x) times
    around S^1_N. Each relator disc is an annulus from its boundary word to a
    first ring, further rings whose integer heights are clamped step by step
    toward the center height, and a cone to the center. Every triangle then
    has lifted heights within 1 of each other.
    """
    vertices = ["o"]
    heights = {"o": 0}
    loops = []  # per generator: vertex sequence o, v1, ..., and lifted heights
    for j, x in enumerate(P.generators):
        w = P.weights[j]
        L = max(3, N * abs(w))
        names = ["o"] + [f"{x}.{k}" for k in range(1, L)]
        step = (w > 0) - (w < 0)
        lifts = [k * step if k <= N * abs(w) else 0 for k in range(L + 1)]
        for name, h in zip(names[1:], lifts[1:L]):
            vertices.append(name)
            heights[name] = h % N
        loops.append((names + ["o"], lifts))
    cells = []
    for names, _ in loops:
        cells += [(a, b) for a, b in zip(names, names[1:])]
    for i, rel in enumerate(P.relators):
        bnames, blifts = [], []
        base = 0
        for g, e in rel:
            names, lifts = loops[g]
            seq = list(zip(names, lifts))
            if e < 0:
                top = lifts[-1]
                seq = [(n, l - top) for n, l in reversed(seq)]
            for n, l in seq[:-1]:
                bnames.append(n)
                blifts.append(base + l)
            base += seq[-1][1]
        B = len(bnames)
        if B == 0:
            continue
        lo, hi = min(blifts), max(blifts)
        c = (lo + hi) // 2
        K = max(2, hi - c - 1, c - lo - 1)
        rings = [bnames]
        values = [blifts]
        for k in range(1, K + 1):
            spread = K - k + 1
            vals = [min(max(v, c - spread), c + spread) for v in values[-1]]
            names = [f"r{i}.{k}.{j}" for j in range(B)]
            for n, v in zip(names, vals):
                vertices.append(n)
                heights[n] = v % N
            rings.append(names)
            values.append(vals)
        center = f"r{i}.c"
        vertices.append(center)
        heights[center] = c % N
        for a, b in zip(rings, rings[1:]):
            for j in range(B):
                jn = (j + 1) % B
                cells.append((a[j], a[jn], b[j]))
                cells.append((a[jn], b[j], b[jn]))
        inner = rings[-1]
        for j in range(B):
            cells.append((inner[j], inner[(j + 1) % B], center))
    X = OrderedSimplicialComplex.from_cells(vertices, cells)
    order = compatible_order_search(X, heights, N)
    if order != list(X.vertices):
        X = X.reordered(order)
    cm = CircleMap(N, heights)
    validate_complex(X)
    validate_circle_map(X, cm)
    return X, cm


def generator_loops(P: GroupPresentation, N: int = 3) -> list[list]:
    """Vertex labels of each generator loop in :func:`triangulate_presentation` (closed implicitly)."""
    return [["o"] + [f"{x}.{k}" for k in range(1, max(3, N * abs(w)))] for x, w in zip(P.generators, P.weights)]


def class_of_homomorphism(P: GroupPresentation, X, ring, values, N: int = 3) -> list:
    """Coordinates in H^1(X) of the class taking value ``values[j]`` on generator j.

    The generator loops span H_1 of the presentation complex, so the class is
    determined by these pairings; raises if the values violate a relator.
    """
    from covhom.circle import loop_chain
    from covhom.simplicial import evaluate

    F = ring.field
    loops = [loop_chain(X, F, L) for L in generator_loops(P, N)]
    A = la.from_rows(F, [[evaluate(rep, z) for rep in ring.basis[1]] for z in loops], ring.betti[1])
    b = la.from_rows(F, [[F(v)] for v in values], 1)
    sol = la.solve(F, A, b)
    if sol is None:
        raise PresentationError("values do not define a homomorphism on the group")
    return la.column(sol, 0)


# ---------------------------------------------------------------- local-system bounds


@dataclass
class LocalSystemBounds:
    """Degree-1 local-system Betti number against its mod-p upper bounds."""

    p: int
    b1_local: int
    b1_char0: int
    b1_mod_p: int
    beta1: int
    no_p_torsion: bool
    massey_length: int  # largest nonvanishing length <= p on degree 1 (0 if none)
    b1_cover: int

    @property
    def general_rhs(self):
        return self.beta1 + Fraction(self.b1_mod_p - self.b1_char0, self.p - 1)

    @property
    def holds_general(self) -> bool:
        return self.b1_local <= self.general_rhs

    @property
    def holds_no_torsion(self) -> bool | None:
        return self.b1_local <= self.beta1 if self.no_p_torsion else None

    @property
    def strict_predicted(self) -> bool:
        return self.no_p_torsion and self.massey_length >= 3

    @property
    def strict(self) -> bool:
        return self.b1_local < self.beta1

    @property
    def character_sum_holds(self) -> bool:
        return self.b1_cover == self.b1_char0 + (self.p - 1) * self.b1_local

    @property
    def consistent(self) -> bool:
        ok = self.holds_general and self.character_sum_holds and self.holds_no_torsion is not False
        return ok and (self.strict or not self.strict_predicted)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "b1_local": self.b1_local,
            "b1_char0": self.b1_char0,
            "b1_mod_p": self.b1_mod_p,
            "beta1": self.beta1,
            "no_p_torsion": self.no_p_torsion,
            "massey_length": self.massey_length,
            "b1_cover": self.b1_cover,
            "general_rhs": str(self.general_rhs),
            "strict_predicted": self.strict_predicted,
            "strict": self.strict,
            "character_sum_holds": self.character_sum_holds,
        }


def local_system_bounds(P: GroupPresentation, p: int) -> LocalSystemBounds:
    """Gather both sides of the local-system inequalities for lambda of prime order p.

    b_1 over F_p and QQ come from the Fox complex; beta_1, torsion and Massey
    data from the triangulated model (degrees 0..2 of a 2-complex).
    """
    from covhom.algebra import PrimeField
    from covhom.arrangements import aomoto_betti
    from covhom.circle import class_of_eta, eta_from_circle_map
    from covhom.massey import massey_length
    from covhom.simplicial import betti_numbers, cohomology_ring

    if not P.surjective:
        raise PresentationError("nu is not surjective")
    Fp = PrimeField(p)
    X, cm = triangulate_presentation(P)
    ring = cohomology_ring(X, Fp)
    beta = aomoto_betti(ring, class_of_eta(X, cm, Fp, ring), Fp)
    eta = eta_from_circle_map(X, cm, Fp)
    length = massey_length(X, eta, 1, p - 1) if p > 2 else 0
    return LocalSystemBounds(
        p=p,
        b1_local=b1_local_system(P, LocalSystemSpec(p)),
        b1_char0=b1_untwisted(P, QQ),
        b1_mod_p=b1_untwisted(P, Fp),
        beta1=beta[1],
        no_p_torsion=betti_numbers(X, Fp) == betti_numbers(X, QQ),
        massey_length=length,
        b1_cover=b1_cover(P, p, QQ),
    )


def format_polynomial(poly, var: str = "t") -> str:
    coeffs = [int(c) if c.q == 1 else c for c in poly.coeffs()]
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return " ".join([head] + [f"{s} {b}" for s, b in terms[1:]])


# ---------------------------------------------------------------- corpus


def heisenberg() -> GroupPresentation:
    return GroupPresentation.parse(["x", "y", "z"], ["x y x^-1 y^-1 z^-1", "x z x^-1 z^-1", "y z y^-1 z^-1"], (1, 0, 0))


def trefoil() -> GroupPresentation:
    return GroupPresentation.parse(["x", "y"], ["x y x y^-1 x^-1 y^-1"], (1, 1))


def free_group(rank: int = 2) -> GroupPresentation:
    gens = [chr(ord("x") + i) if rank <= 3 else f"x{i}" for i in range(rank)]
    return GroupPresentation(gens, [], (1,) + (0,) * (rank - 1))


PRESENTATIONS = {"heisenberg": heisenberg, "trefoil": trefoil, "free2": free_group}
