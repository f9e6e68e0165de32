"""Characteristic complex of a central hyperplane arrangement over Q.

C^{S,j} = wedge^j H_S with H_S the common kernel of the normals in S, and
differentials the exterior powers of orthogonal projections H_S -> H_{S+e}.
All arithmetic uses Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

from .cohomology import epsilon, subsets_of_size
from .exactlin import IntMatrix, RATIONAL, rank_over_field
from .matroid import Matroid, from_matrix
from .quasirep import QuasiRep, RepresentationError, canonical_from_matrix, saturated_from_matrix
from .report import Verdict


@dataclass(frozen=True)
class Arrangement:
    dim: int
    normals: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, dim: int, normals: Sequence[Sequence[int]]) -> "Arrangement":
        normals = tuple(tuple(int(x) for x in v) for v in normals)
        for v in normals:
            if len(v) != dim:
                raise ValueError(f"normal {v} does not live in dimension {dim}")
        return cls(dim, normals)

    @property
    def n(self) -> int:
        return len(self.normals)

    def matrix(self) -> IntMatrix:
        """Normals as columns."""
        if not self.normals:
            return IntMatrix.zeros(self.dim, 0)
        return IntMatrix.from_columns(self.normals, nrows=self.dim)

    def matroid(self) -> Matroid:
        return from_matrix(self.matrix())

    def to_json(self) -> dict:
        return {"dim": self.dim, "normals": [list(v) for v in self.normals]}


def boolean_arrangement(n: int) -> Arrangement:
    return Arrangement.build(n, [[int(i == k) for i in range(n)] for k in range(n)])


def graphic_arrangement(g, essential: bool = True) -> Arrangement:
    """Hyperplanes x_u = x_v; the essential version drops vertex 0's coordinate."""
    if essential:
        dim = g.vertices - 1

        def coord(v):
            return [int(k == v - 1) for k in range(dim)]
    else:
        dim = g.vertices

        def coord(v):
            return [int(k == v) for k in range(dim)]

    return Arrangement.build(dim, [[a - b for a, b in zip(coord(u), coord(v))] for u, v in g.edges])


def essentialization(a: Arrangement) -> Arrangement:
    """Normals written in a basis of their rational span."""
    A = a.matrix()
    # coordinates of each normal against a basis of the span of the normals
    r = rank_over_field(A, RATIONAL) if A.cols else 0
    basis = _lattice_row_basis(A)
    coords = []
    for v in a.normals:
        coords.append(_solve_rational(basis, [Fraction(x) for x in v]))
    den = lcm(*(c.denominator for vec in coords for c in vec)) if coords and r else 1
    return Arrangement.build(r, [[int(c * den) for c in vec] for vec in coords])


def _lattice_row_basis(A: IntMatrix) -> list[list[Fraction]]:
    """Columns spanning the column space of A, as a list of rational vectors."""
    chosen: list[list[Fraction]] = []
    for c in A.columns():
        cand = chosen + [[Fraction(x) for x in c]]
        if _rank_frac(cand) == len(cand):
            chosen = cand
    return chosen


def _solve_rational(basis: list[list[Fraction]], v: list[Fraction]) -> list[Fraction]:
    k = len(basis)
    if k == 0:
        return []
    G = [[sum(a * b for a, b in zip(basis[r], basis[c])) for c in range(k)] for r in range(k)]
    rhs = [sum(a * b for a, b in zip(basis[r], v)) for r in range(k)]
    return _solve_square(G, rhs)


# --------------------------------------------------------------------------
# rational linear algebra


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((k for k in range(r, len(M)) if M[k][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for k in range(len(M)):
            if k != r and M[k][c] != 0:
                f = M[k][c]
                M[k] = [a - f * b for a, b in zip(M[k], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def _rank_frac(vectors: list[list[Fraction]]) -> int:
    if not vectors:
        return 0
    return len(rref(vectors)[1])


def kernel_basis(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : R x = 0} from the reduced echelon form (one vector per free column)."""
    if not rows:
        return [[Fraction(int(i == k)) for i in range(ncols)] for k in range(ncols)]
    R, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -R[r][f]
        out.append(v)
    return out


def _solve_square(G: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    k = len(G)
    M = [list(G[r]) + [rhs[r]] for r in range(k)]
    R, piv = rref(M)
    if piv != list(range(k)):
        raise ValueError("singular Gram matrix")
    return [R[r][k] for r in range(k)]


def _det_frac(M: list[list[Fraction]]) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [list(r) for r in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


# --------------------------------------------------------------------------
# the complex


class ArrangementComplex:
    def __init__(self, a: Arrangement):
        self.a = a
        self.n = a.n
        self.r = a.dim
        self._basis: dict[int, list[list[Fraction]]] = {}
        self._proj: dict[tuple[int, int], list[list[Fraction]]] = {}
        self._diff: dict[tuple[int, int], dict] = {}

    @property
    def j_max(self) -> int:
        return self.r

    def basis(self, S: int) -> list[list[Fraction]]:
        """Reduced-echelon kernel basis of H_S (list of vectors in Q^r)."""
        b = self._basis.get(S)
        if b is None:
            rows = [[Fraction(x) for x in self.a.normals[k]] for k in range(self.n) if S >> k & 1]
            b = kernel_basis(rows, self.r)
            self._basis[S] = b
        return b

    def dim_h(self, S: int) -> int:
        return len(self.basis(S))

    def projection(self, S: int, T: int) -> list[list[Fraction]]:
        """Matrix (dim H_T x dim H_S) of the orthogonal projection in the chosen bases."""
        key = (S, T)
        P = self._proj.get(key)
        if P is None:
            BS, BT = self.basis(S), self.basis(T)
            k = len(BT)
            G = [[sum(x * y for x, y in zip(BT[r], BT[c])) for c in range(k)] for r in range(k)]
            cols = []
            for v in BS:
                rhs = [sum(x * y for x, y in zip(BT[r], v)) for r in range(k)]
                cols.append(_solve_square(G, rhs) if k else [])
            P = [[cols[c][r] for c in range(len(BS))] for r in range(k)]
            self._proj[key] = P
        return P

    def cell(self, i: int, j: int) -> list[tuple[int, tuple[int, ...]]]:
        if not 0 <= i <= self.n:
            return []
        return [(S, J) for S in subsets_of_size(self.n, i) for J in combinations(range(self.dim_h(S)), j)]

    def differential(self, i: int, j: int) -> dict[int, dict[int, Fraction]]:
        key = (i, j)
        d = self._diff.get(key)
        if d is not None:
            return d
        src = self.cell(i, j)
        dst = self.cell(i + 1, j)
        index = {b: k for k, b in enumerate(dst)}
        d = {}
        for c, (S, J) in enumerate(src):
            for b in range(self.n):
                if S >> b & 1:
                    continue
                T = S | 1 << b
                P = self.projection(S, T)
                eps = epsilon(S, b + 1)
                for I in combinations(range(self.dim_h(T)), j):
                    v = _det_frac([[P[x][y] for y in J] for x in I]) if j else Fraction(1)
                    if v:
                        row = d.setdefault(index[(T, I)], {})
                        row[c] = row.get(c, 0) + eps * v
        self._diff[key] = d
        return d

    def check_d_squared(self) -> tuple | None:
        for j in range(self.j_max + 1):
            for i in range(self.n - 1):
                d1 = self.differential(i, j)
                d2 = self.differential(i + 1, j)
                for r, row in d2.items():
                    acc: dict[int, Fraction] = {}
                    for k, a in row.items():
                        for c, b in d1.get(k, {}).items():
                            acc[c] = acc.get(c, 0) + a * b
                    if any(acc.values()):
                        return (i, j, r)
        return None

    def rank_over_q(self, i: int, j: int) -> int:
        dim = len(self.cell(i, j))
        if not dim:
            return 0
        d_out = self.differential(i, j) if i < self.n else {}
        d_in = self.differential(i - 1, j) if i > 0 else {}
        return dim - _frac_rank(d_out) - _frac_rank(d_in)

    def table(self) -> dict[tuple[int, int], int]:
        return {(i, j): self.rank_over_q(i, j) for i in range(self.n + 1) for j in range(self.j_max + 1)}


def _frac_rank(sp: dict[int, dict[int, Fraction]]) -> int:
    """Rank after clearing denominators row by row (row scaling keeps the rank)."""
    rows = []
    for row in sp.values():
        if not row:
            continue
        den = lcm(*(Fraction(v).denominator for v in row.values()))
        rows.append({c: int(v * den) for c, v in row.items() if v})
    return rank_over_field(rows, RATIONAL)


def arr_complex(a: Arrangement) -> ArrangementComplex:
    return ArrangementComplex(a)


def arrangement_quasirep(a: Arrangement) -> QuasiRep:
    """rho(S) = span of the normals in S; the saturated span if the integer one is unusable."""
    m = a.matroid()
    try:
        return canonical_from_matrix(m, a.matrix())
    except RepresentationError:
        return saturated_from_matrix(m, a.matrix())


def compare(a: Arrangement) -> Verdict:
    from .cohomology import build_complex

    ac = ArrangementComplex(a)
    bad = ac.check_d_squared()
    if bad is not None:
        return Verdict.fail("arrangement d^2 = 0", bad)
    left = ac.table()
    c = build_complex(arrangement_quasirep(a), j_max=a.dim)
    for (i, j), dim in sorted(left.items()):
        right = c.rank_over(i, j, RATIONAL)
        if dim != right:
            return Verdict.fail("arrangement comparison", {"cell": [i, j], "arrangement": dim, "matroid": right})
    return Verdict.ok("arrangement comparison", detail=f"{len(left)} cells")


def essentialization_les_check(a: Arrangement) -> Verdict:
    """Rank consistency of ... -> H^{i,j-1}(ess) -> H^{i,j}(A) -> H^{i,j}(ess) -> H^{i+1,j-1}(ess) -> ..."""
    from .chromatic import exact_sequence_consistent

    M = a.matrix()
    center = a.dim - (rank_over_field(M, RATIONAL) if M.cols else 0)
    if center != 1:
        return Verdict.fail("one-dimensional center", center, f"center has dimension {center}", kind="hypothesis")
    ess = ArrangementComplex(essentialization(a))
    full = ArrangementComplex(a)
    for j in range(1, a.dim + 1):
        dims = []
        for i in range(a.n + 1):
            dims.append(ess.rank_over_q(i, j - 1))
            dims.append(full.rank_over_q(i, j))
            dims.append(ess.rank_over_q(i, j))
        ok, pos = exact_sequence_consistent(dims)
        if not ok:
            return Verdict.fail("essentialization LES ranks", {"j": j, "position": pos, "dims": dims})
    return Verdict.ok("essentialization LES ranks")
