"""Strong deformation retractions of cochain complexes onto their cohomology.

For a complex ``d_k: V_k -> V_{k+1}`` over a field we split every ``V_k`` as
``H_k + B_k + W_k`` where ``W_k`` is spanned by the unit vectors at the pivot
columns of ``d_k``, ``B_k = d_{k-1}(W_{k-1})`` and ``H_k`` extends ``B_k`` to
the cocycles. This gives inclusion ``iota``, projection ``pi`` and a homotopy
``h`` with ``1 - iota pi = d h + h d`` and the side conditions
``h iota = 0``, ``pi h = 0``, ``h h = 0``.

A perturbation ``d + s theta`` with ``theta`` of the same degree transfers to
a differential on cohomology, ``sum_j (-1)^j s^(j+1) pi theta (h theta)^j iota``,
which is a filtered homotopy equivalence of the s-adically filtered complexes.
"""

from __future__ import annotations

from dataclasses import dataclass

from covhom.algebra import linalg as la


@dataclass
class DegreeData:
    dim: int
    betti: int
    iota: object  # dim x betti, cocycle representatives
    pi: object  # betti x dim
    h: object  # V_k -> V_{k-1}
    pivots: list  # columns of d_k spanning W_k


class Retraction:
    """SDR data for a cochain complex given by backend matrices ``d[k]: V_k -> V_{k+1}``."""

    def __init__(self, field, dims: list[int], d: list):
        self.field = field
        self.dims = list(dims)
        self.d = list(d)
        top = len(dims)
        pivots = []
        for k in range(top):
            if dims[k] == 0 or d[k].nrows() == 0:
                pivots.append([])
            else:
                pivots.append(la.rref(d[k])[1])
        self.degrees: list[DegreeData] = []
        for k in range(top):
            n = dims[k]
            if k > 0 and pivots[k - 1]:
                B = la.submatrix(field, d[k - 1], range(n), pivots[k - 1])
            else:
                B = field.matrix(n, 0)
            Z = la.nullspace(field, d[k]) if d[k].nrows() else la.identity(field, n)
            hcols = la.extending_columns(field, B, Z)
            H = la.submatrix(field, Z, range(n), hcols)
            b, nb, nw = H.ncols(), B.ncols(), len(pivots[k])
            if b + nb + nw != n:
                raise ArithmeticError("inconsistent splitting; d is not a differential")
            W = field.matrix(n, nw)
            for c, j in enumerate(pivots[k]):
                W[j, c] = 1
            P = la.hstack(field, H, B, W) if n else field.matrix(0, 0)
            Pinv = P.inv() if n else P
            pi = la.submatrix(field, Pinv, range(b), range(n)) if n else field.matrix(0, 0)
            if k > 0:
                prev = dims[k - 1]
                h = field.matrix(prev, n)
                rows = Pinv.tolist() if n else []
                for c, j in enumerate(pivots[k - 1]):
                    for col, x in enumerate(rows[b + c]):
                        if x != 0:
                            h[j, col] = x
            else:
                h = field.matrix(0, n)
            self.degrees.append(DegreeData(n, b, H, pi, h, pivots[k]))

    @property
    def betti(self) -> list[int]:
        return [g.betti for g in self.degrees]

    def project(self, k: int, vec: list) -> list:
        """Cohomology coordinates of a cocycle given as a list."""
        g = self.degrees[k]
        if g.betti == 0:
            return []
        v = la.from_columns(self.field, [vec], g.dim)
        return la.column(g.pi * v, 0)

    def representative(self, k: int, coords: list) -> list:
        g = self.degrees[k]
        if g.betti == 0:
            return [self.field.zero] * g.dim
        v = la.from_columns(self.field, [coords], g.betti)
        return la.column(g.iota * v, 0)

    def transfer(self, theta: list, m: int, k: int) -> list:
        """Coefficient matrices c_1..c_{m-1} (betti_{k+1} x betti_k) of the transferred
        perturbation from degree k, c_j multiplying s^j."""
        field = self.field
        if k + 1 >= len(self.degrees):
            return []
        src, tgt = self.degrees[k], self.degrees[k + 1]
        out = []
        if src.betti == 0 or tgt.dim == 0:
            return [field.matrix(tgt.betti, src.betti) for _ in range(1, m)]
        Y = theta[k] * src.iota
        step = theta[k] * tgt.h if tgt.dim and src.dim else None
        sign = 1
        for j in range(1, m):
            if la.is_zero(Y):
                out.extend(field.matrix(tgt.betti, src.betti) for _ in range(j, m))
                break
            c = tgt.pi * Y
            out.append(c if sign > 0 else -c)
            Y = step * Y
            sign = -sign
        return out
