"""Named invariants checked by ``covhom verify`` and the test-suite.

Each check returns a :class:`Check`; nothing here raises on a failed property.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from covhom.simplicial import (
    Chain,
    OrderedSimplicialComplex,
    boundary,
    boundary_matrices,
    cap,
    coboundary,
    coboundary_matrices,
    cup,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def square_zero(X: OrderedSimplicialComplex, field) -> Check:
    bd = boundary_matrices(X, field)
    cb = coboundary_matrices(X, field)
    ok = all((bd[k] @ bd[k + 1]).is_zero() for k in range(1, X.dim))
    ok = ok and all((cb[k + 1] @ cb[k]).is_zero() for k in range(X.dim - 1))
    return Check("square_zero", ok)


def twisted_square_zero(X, eta, m: int = 3) -> Check:
    from covhom.twisted import ConsistencyError, build_twisted_chain, build_twisted_cochain

    try:
        build_twisted_chain(X, eta, m)
        build_twisted_cochain(X, eta, m)
    except ConsistencyError as exc:
        return Check("twisted_square_zero", False, str(exc))
    return Check("twisted_square_zero", True)


def _random_chain(X, field, k, rng):
    from covhom.fuzz import random_cochain

    c = random_cochain(X, field, k, rng)
    return Chain(X, field, k, c.values)


def cup_cap_identities(X: OrderedSimplicialComplex, field, rng: random.Random, trials: int = 3) -> Check:
    """Cup Leibniz rule, cap Leibniz rule and (w n a) n b = w n (a u b) on random inputs."""
    from covhom.fuzz import random_cochain

    for _ in range(trials):
        for p in range(X.dim + 1):
            for q in range(X.dim + 1 - p):
                a, b = random_cochain(X, field, p, rng), random_cochain(X, field, q, rng)
                sign = -1 if p % 2 else 1
                if p + q + 1 <= X.dim:
                    lhs = coboundary(cup(a, b))
                    rhs = cup(coboundary(a), b) + cup(a, coboundary(b)).scale(sign)
                    if lhs != rhs:
                        return Check("cup_cap_identities", False, f"cup Leibniz fails for degrees {p}, {q}")
                w = _random_chain(X, field, p + q, rng)
                if cap(cap(w, a), b) != cap(w, cup(a, b)):
                    return Check("cup_cap_identities", False, f"cap-cup associativity fails for degrees {p}, {q}")
            for k in range(p + 1, X.dim + 1):
                a = random_cochain(X, field, p, rng)
                w = _random_chain(X, field, k, rng)
                sign = -1 if p % 2 else 1
                lhs = boundary(cap(w, a))
                rhs = cap(boundary(w), a).scale(sign)
                if p + 1 <= k:
                    rhs = rhs - cap(w, coboundary(a)).scale(sign)
                if lhs.values != rhs.values:
                    return Check("cup_cap_identities", False, f"cap Leibniz fails for chain degree {k}, cochain degree {p}")
    return Check("cup_cap_identities", True)


def prop_key(X, cm, pairs=((2, 1), (3, 1))) -> Check:
    from covhom.twisted import verify_prop_key

    for p, r in pairs:
        rep = verify_prop_key(X, cm, p, r)
        if not rep.passed:
            return Check("twisted_equals_cover", False, f"p={p} r={r}: twisted {rep.twisted} vs cover {rep.cover}")
    return Check("twisted_equals_cover", True)


def global_law(X, eta, k_max: int | None = None) -> Check:
    """max Jordan size = max nonzero d_k = max Massey length - 1."""
    from covhom.massey import massey_length_profile
    from covhom.spectral import degeneration, filtered_sequence
    from covhom.twisted import alexander_profile, working_modulus

    prof = alexander_profile(X, eta)
    seq = filtered_sequence(X, eta, working_modulus(X))
    dk = degeneration(seq).max_nonzero
    k_max = k_max or max(prof.max_jordan + 1, 2)
    massey = max(massey_length_profile(X, eta, k_max), default=0)
    ok = prof.max_jordan == dk == max(massey - 1, 0)
    return Check("jordan_page_massey_law", ok, f"jordan={prof.max_jordan} d_k={dk} massey={massey}")


def massey_dk(X, eta, m: int | None = None) -> Check:
    from covhom.massey import compare_with_dk

    rep = compare_with_dk(X, eta, m)
    bad = [(r.k, r.degree) for r in rep.rows if not (r.matches and r.indeterminacy_matches)]
    return Check("massey_equals_dk", not bad, f"mismatch at {bad}" if bad else "")
