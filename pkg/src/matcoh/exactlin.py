"""Exact integer linear algebra for finitely presented abelian groups.

Everything here works with Python integers, so there is no overflow and no
floating point.  Matrices are small dense objects (`IntMatrix`); the heavy
loops convert them to lists of rows and back.

A finitely generated abelian group is carried as a `PresentedModule`: a number
of generators together with a relation matrix whose *columns* are relations.
Maps between presented modules (`ModuleMap`) carry an integer lift on
generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "PresentedModule",
    "ModuleMap",
    "FgaClass",
    "snf",
    "smith_diagonal",
    "elementary_divisors",
    "hermite_basis",
    "column_echelon",
    "lattice_contains",
    "lattice_equal",
    "solve_in_lattice",
    "preimage_lattice",
    "cokernel_class",
    "exterior_power",
    "exterior_map",
    "compound_matrix",
    "determinant",
    "cohomology_at",
    "free_cohomology",
    "rank_over_field",
    "RATIONAL",
]

#: marker for the rational field in `rank_over_field`
RATIONAL = 0


# --------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        columns = [list(c) for c in columns]
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(nrows)], ncols=len(columns)
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for k, d in enumerate(diag):
            out[k][k] = d
        return cls.from_rows(out, ncols=cols)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.entries[r * self.cols + c]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[r * c:(r + 1) * c]) for r in range(self.rows)]

    def column(self, k: int) -> list[int]:
        return [self.entries[r * self.cols + k] for r in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [self.column(k) for k in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.columns(), ncols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix.from_rows(_matmul(self.to_rows(), other.to_rows(), other.cols), ncols=other.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        mats = (self,) + others
        for m in mats:
            if m.rows != self.rows:
                raise ValueError("row count mismatch in hstack")
        rows = self.to_rows()
        for m in others:
            for r, extra in zip(rows, m.to_rows()):
                r.extend(extra)
        return IntMatrix.from_rows(rows, ncols=sum(m.cols for m in mats))

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        rows = self.to_rows()
        for m in others:
            if m.cols != self.cols:
                raise ValueError("column count mismatch in vstack")
            rows.extend(m.to_rows())
        return IntMatrix.from_rows(rows, ncols=self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows([[self[r, c] for c in cols] for r in rows], ncols=len(cols))

    def select_columns(self, cols: Sequence[int]) -> "IntMatrix":
        return self.submatrix(range(self.rows), cols)

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})"


def _matmul(a: list[list[int]], b: list[list[int]], bcols: int) -> list[list[int]]:
    out = []
    for row in a:
        acc = [0] * bcols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(bcols):
                    if bk[j]:
                        acc[j] += x * bk[j]
        out.append(acc)
    return out


def block_diagonal(blocks: Iterable[IntMatrix]) -> IntMatrix:
    blocks = list(blocks)
    nr = sum(b.rows for b in blocks)
    nc = sum(b.cols for b in blocks)
    out = [[0] * nc for _ in range(nr)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.to_rows()):
            out[r0 + i][c0:c0 + b.cols] = row
        r0 += b.rows
        c0 += b.cols
    return IntMatrix.from_rows(out, ncols=nc)


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with U, V unimodular and D in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[k, k] for k in range(min(self.D.rows, self.D.cols))]


def _smith_in_place(M: list[list[int]], m: int, n: int, U: list[list[int]] | None, V: list[list[int]] | None) -> list[int]:
    """Reduce M to Smith form in place; row ops mirrored on U, column ops on V."""

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        if U is not None:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in M:
            row[j], row[k] = row[k], row[j]
        if V is not None:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rs, rd = M[src], M[dst]
        for c in range(n):
            if rs[c]:
                rd[c] += q * rs[c]
        if U is not None:
            us, ud = U[src], U[dst]
            for c in range(len(us)):
                if us[c]:
                    ud[c] += q * us[c]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in M:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            if M[t][t] < 0:
                M[t] = [-x for x in M[t]]
                if U is not None:
                    U[t] = [-x for x in U[t]]
            p = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
            # a nonzero remainder is smaller than the pivot: promote it
            cand = None
            for i in range(t + 1, m):
                if M[i][t] and (cand is None or abs(M[i][t]) < cand[0]):
                    cand = (abs(M[i][t]), i, None)
            for j in range(t + 1, n):
                if M[t][j] and (cand is None or abs(M[t][j]) < cand[0]):
                    cand = (abs(M[t][j]), None, j)
            if cand is not None:
                if cand[1] is not None:
                    swap_rows(cand[1], t)
                else:
                    swap_cols(cand[2], t)
                continue
            bad = None
            if p != 1:
                for i in range(t + 1, m):
                    row = M[i]
                    for j in range(t + 1, n):
                        if row[j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            add_row(t, bad, 1)
        diag.append(M[t][t])
        t += 1
    return diag


def snf(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, ``U @ A @ V == D``."""
    m, n = A.shape
    M = A.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    _smith_in_place(M, m, n, U, V)
    return SmithDecomposition(
        IntMatrix.from_rows(U, ncols=m),
        IntMatrix.from_rows(M, ncols=n),
        IntMatrix.from_rows(V, ncols=n),
    )


def smith_diagonal(A: IntMatrix) -> list[int]:
    """Nonzero invariant factors of A (no transforms tracked)."""
    M = A.to_rows()
    return [d for d in _smith_in_place(M, A.rows, A.cols, None, None) if d]


def _sparse_rows(rows: list[list[int]]) -> list[dict[int, int]]:
    return [{j: x for j, x in enumerate(r) if x} for r in rows]


def elementary_divisors(A: IntMatrix | list[dict[int, int]], ncols: int | None = None) -> tuple[int, list[int]]:
    """Rank and non-unit invariant factors of an integer matrix.

    Unit pivots are eliminated on a sparse copy first (this does not change
    the invariant factors); the small leftover block goes through a dense
    Smith reduction.
    """
    if isinstance(A, IntMatrix):
        rows = _sparse_rows(A.to_rows())
    else:
        rows = [dict(r) for r in A]
    rows = [r for r in rows if r]
    colidx: dict[int, set[int]] = {}
    for ri, r in enumerate(rows):
        for c in r:
            colidx.setdefault(c, set()).add(ri)
    alive = set(range(len(rows)))
    units = 0
    progress = True
    while progress:
        progress = False
        for ri in sorted(alive, key=lambda k: len(rows[k])):
            r = rows[ri]
            piv = None
            for c, x in r.items():
                if x == 1 or x == -1:
                    cnt = len(colidx[c])
                    if piv is None or cnt < piv[1]:
                        piv = (c, cnt)
            if piv is None:
                continue
            c = piv[0]
            x = r[c]
            for other in list(colidx[c]):
                if other == ri:
                    continue
                ro = rows[other]
                q = ro[c] * x  # x = +-1, so ro[c]/x == ro[c]*x
                for cc, v in r.items():
                    nv = ro.get(cc, 0) - q * v
                    if nv:
                        if cc not in ro:
                            colidx.setdefault(cc, set()).add(other)
                        ro[cc] = nv
                    elif cc in ro:
                        del ro[cc]
                        colidx[cc].discard(other)
                if not ro:
                    alive.discard(other)
            for cc in r:
                colidx[cc].discard(ri)
            alive.discard(ri)
            rows[ri] = {}
            units += 1
            progress = True
            break
    rest = [rows[k] for k in sorted(alive) if rows[k]]
    if not rest:
        return units, []
    cols = sorted({c for r in rest for c in r})
    pos = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, r in enumerate(rest):
        for c, x in r.items():
            dense[i][pos[c]] = x
    diag = [d for d in _smith_in_place(dense, len(rest), len(cols), None, None) if d]
    return units + len(diag), [d for d in diag if d != 1]


# --------------------------------------------------------------------------
# lattices (column spans) via Hermite reduction


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def column_echelon(A: IntMatrix, transform: bool = False):
    """Column Hermite normal form.

    Returns ``(H, V, pivots)`` with ``A @ V == H`` when ``transform`` is set
    (V is None otherwise).  The first ``len(pivots)`` columns of H form a
    reduced column echelon basis of the column lattice of A: column t has
    its positive leading entry in row ``pivots[t]``, zeros above it, and the
    entries to the left of each pivot are reduced into ``[0, pivot)``.
    The remaining columns of H are zero, so the matching columns of V span
    the integer kernel of A.
    """
    m, n = A.shape
    cols = A.columns()  # work column-wise
    Vc = [[int(i == j) for i in range(n)] for j in range(n)] if transform else None
    pivots: list[int] = []
    t = 0
    for p in range(m):
        if t == n:
            break
        # gcd-combine all entries of row p (cols t..) into column t
        for k in range(t + 1, n):
            b = cols[k][p]
            if not b:
                continue
            a = cols[t][p]
            if a == 0:
                cols[t], cols[k] = cols[k], cols[t]
                if Vc is not None:
                    Vc[t], Vc[k] = Vc[k], Vc[t]
                continue
            if b % a == 0:
                q = b // a
                ct, ck = cols[t], cols[k]
                cols[k] = [y - q * x for x, y in zip(ct, ck)]
                if Vc is not None:
                    vt, vk = Vc[t], Vc[k]
                    Vc[k] = [y - q * x for x, y in zip(vt, vk)]
                continue
            g, x, y = _egcd(a, b)
            ag, bg = a // g, b // g
            ct, ck = cols[t], cols[k]
            cols[t] = [x * u + y * v for u, v in zip(ct, ck)]
            cols[k] = [ag * v - bg * u for u, v in zip(ct, ck)]
            if Vc is not None:
                vt, vk = Vc[t], Vc[k]
                Vc[t] = [x * u + y * v for u, v in zip(vt, vk)]
                Vc[k] = [ag * v - bg * u for u, v in zip(vt, vk)]
        piv = cols[t][p]
        if piv == 0:
            continue
        if piv < 0:
            cols[t] = [-x for x in cols[t]]
            if Vc is not None:
                Vc[t] = [-x for x in Vc[t]]
            piv = -piv
        for s in range(t):
            q = cols[s][p] // piv
            if q:
                cs, ct = cols[s], cols[t]
                cols[s] = [u - q * v for u, v in zip(cs, ct)]
                if Vc is not None:
                    vs, vt = Vc[s], Vc[t]
                    Vc[s] = [u - q * v for u, v in zip(vs, vt)]
        pivots.append(p)
        t += 1
    H = IntMatrix.from_columns(cols, nrows=m) if n else IntMatrix.zeros(m, 0)
    V = (IntMatrix.from_columns(Vc, nrows=n) if n else IntMatrix.zeros(0, 0)) if transform else None
    return H, V, pivots


def hermite_basis(A: IntMatrix) -> IntMatrix:
    """Canonical basis (reduced column echelon form) of the column lattice."""
    H, _, piv = column_echelon(A)
    return H.select_columns(range(len(piv)))


def solve_in_lattice(B: IntMatrix, pivots: Sequence[int], v: Sequence[int]) -> list[int] | None:
    """Coefficients c with ``B @ c == v`` for an echelon basis B, else None."""
    r = list(v)
    coeffs = []
    for t, p in enumerate(pivots):
        piv = B[p, t]
        x = r[p]
        if x % piv:
            return None
        q = x // piv
        coeffs.append(q)
        if q:
            for i in range(p, B.rows):
                b = B[i, t]
                if b:
                    r[i] -= q * b
    if any(r):
        return None
    return coeffs


def lattice_contains(L: IntMatrix, vectors: IntMatrix) -> int | None:
    """Index of the first column of ``vectors`` outside the column lattice of L, or None."""
    H, _, piv = column_echelon(L)
    B = H.select_columns(range(len(piv)))
    for k in range(vectors.cols):
        if solve_in_lattice(B, piv, vectors.column(k)) is None:
            return k
    return None


def lattice_equal(A: IntMatrix, B: IntMatrix) -> bool:
    if A.rows != B.rows:
        raise ValueError("lattices live in different ambient ranks")
    return hermite_basis(A) == hermite_basis(B)


def integer_kernel(A: IntMatrix) -> IntMatrix:
    """Lattice basis of ``{x : A x = 0}``."""
    _, V, piv = column_echelon(A, transform=True)
    return V.select_columns(range(len(piv), A.cols))


def preimage_lattice(F: IntMatrix, L: IntMatrix) -> IntMatrix:
    """Basis of ``{x : F x in colspan_Z(L)}``; every integer solution is included."""
    if F.rows != L.rows:
        raise ValueError("F and L must have the same number of rows")
    a = F.cols
    if a == 0:
        return IntMatrix.zeros(0, 0)
    S = F.hstack(L) if L.cols else F
    K = integer_kernel(S)
    if K.cols == 0:
        return IntMatrix.zeros(a, 0)
    proj = K.submatrix(range(a), range(K.cols))
    return hermite_basis(proj)


# --------------------------------------------------------------------------
# presented modules


@dataclass(frozen=True)
class FgaClass:
    """Isomorphism class of a finitely generated abelian group."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for k, d in enumerate(t):
            if d < 2:
                raise ValueError(f"torsion factor {d} must be >= 2")
            if k and d % t[k - 1]:
                raise ValueError(f"torsion {t} is not a divisibility chain")

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "FgaClass":
        """Class of the direct sum of Z/d over ``factors`` (0 means Z).

        Factors need not form a chain; they are recombined into invariant
        factors.
        """
        factors = [abs(int(d)) for d in factors]
        free = sum(1 for d in factors if d == 0)
        tors = [d for d in factors if d > 1]
        return cls(free, tuple(_invariant_factors(tors)))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order_p_rank(self, p: int) -> int:
        """Number of cyclic torsion summands whose order p divides."""
        return sum(1 for d in self.torsion if d % p == 0)

    def dim_mod(self, p: int) -> int:
        """dim over Z/p of this group tensored with Z/p."""
        return self.free_rank + self.order_p_rank(p)

    def direct_sum(self, other: "FgaClass") -> "FgaClass":
        return FgaClass.from_factors([0] * (self.free_rank + other.free_rank) + list(self.torsion) + list(other.torsion))

    def tensor(self, other: "FgaClass") -> "FgaClass":
        a = [0] * self.free_rank + list(self.torsion)
        b = [0] * other.free_rank + list(other.torsion)
        return FgaClass.from_factors(gcd(x, y) for x in a for y in b)

    def to_json(self) -> dict:
        return {"free": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj: dict) -> "FgaClass":
        return cls(int(obj["free"]), tuple(int(d) for d in obj["torsion"]))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def _invariant_factors(tors: list[int]) -> list[int]:
    """Recombine arbitrary cyclic orders (all >= 2) into a divisibility chain."""
    if not tors:
        return []
    M = [[d if i == k else 0 for k in range(len(tors))] for i, d in enumerate(tors)]
    diag = _smith_in_place(M, len(tors), len(tors), None, None)
    return [d for d in diag if d > 1]


@dataclass(frozen=True)
class PresentedModule:
    """coker(relations): ``gens`` generators, one relation per column."""

    gens: int
    relations: IntMatrix = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", IntMatrix.zeros(self.gens, 0))
        if self.relations.rows != self.gens:
            raise ValueError(
                f"relation matrix has {self.relations.rows} rows for {self.gens} generators"
            )

    @classmethod
    def free(cls, n: int) -> "PresentedModule":
        return cls(n, IntMatrix.zeros(n, 0))

    @classmethod
    def cyclic_sum(cls, orders: Sequence[int]) -> "PresentedModule":
        """Z/d_1 + ... + Z/d_k presented on k generators (0 means Z)."""
        cols = []
        for k, d in enumerate(orders):
            if d:
                col = [0] * len(orders)
                col[k] = d
                cols.append(col)
        return cls(len(orders), IntMatrix.from_columns(cols, nrows=len(orders)))

    def quotient(self, extra: IntMatrix) -> "PresentedModule":
        """Quotient by the submodule generated by the columns of ``extra``."""
        return PresentedModule(self.gens, self.relations.hstack(extra))

    def direct_sum(self, other: "PresentedModule") -> "PresentedModule":
        return PresentedModule(self.gens + other.gens, block_diagonal([self.relations, other.relations]))

    def contains(self, vectors: IntMatrix) -> int | None:
        """First column of ``vectors`` that is nonzero in the module, or None."""
        return lattice_contains(self.relations, vectors)

    def iso_class(self) -> FgaClass:
        return cokernel_class(self)


@dataclass(frozen=True)
class ModuleMap:
    """Homomorphism of presented modules given by a lift on generators."""

    source: PresentedModule
    target: PresentedModule
    lift: IntMatrix

    def __post_init__(self):
        if self.lift.shape != (self.target.gens, self.source.gens):
            raise ValueError(
                f"lift shape {self.lift.shape} does not match "
                f"{self.target.gens} x {self.source.gens}"
            )

    def ill_defined_relation(self) -> int | None:
        """Index of a source relation not sent into the target relations, or None."""
        if self.source.relations.cols == 0:
            return None
        return self.target.contains(self.lift @ self.source.relations)

    def is_well_defined(self) -> bool:
        return self.ill_defined_relation() is None

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """self o first"""
        return ModuleMap(first.source, self.target, self.lift @ first.lift)

    def is_zero(self) -> bool:
        return self.target.contains(self.lift) is None

    def is_isomorphism(self) -> bool:
        """Bijective as a map of presented modules (assumes well-defined)."""
        T = self.target.relations
        onto = self.lift.hstack(T) if T.cols else self.lift
        if not lattice_equal(onto, IntMatrix.identity(self.target.gens)):
            return False
        kernel = preimage_lattice(self.lift, T)
        return lattice_contains(self.source.relations, kernel) is None


def cokernel_class(P: PresentedModule) -> FgaClass:
    """Invariant factors of coker(P.relations)."""
    n = P.gens
    if n == 0:
        return FgaClass()
    rank, tors = elementary_divisors(P.relations)
    return FgaClass(n - rank, tuple(sorted(tors)))


# --------------------------------------------------------------------------
# exterior algebra


def subsets(n: int, j: int) -> list[tuple[int, ...]]:
    """Strictly increasing j-subsets of range(n) in lexicographic order."""
    return list(combinations(range(n), j))


def wedge_insert(J: Sequence[int], k: int) -> tuple[int, tuple[int, ...]] | None:
    """g_k ^ g_J as (sign, sorted index), or None when k is already in J."""
    pos = 0
    for x in J:
        if x == k:
            return None
        if x < k:
            pos += 1
    out = list(J)
    out.insert(pos, k)
    return (-1 if pos % 2 else 1), tuple(out)


def exterior_power(P: PresentedModule, j: int) -> PresentedModule:
    """j-th exterior power of a presented module.

    Generators are the j-subsets J of the generators (lexicographic); each
    relation r of P and each (j-1)-subset J' contributes ``r ^ g_J'``.
    """
    if j < 0:
        raise ValueError("negative degree")
    g = P.gens
    if j == 0:
        return PresentedModule.free(1)
    basis = subsets(g, j)
    if not basis:
        return PresentedModule.free(0)
    index = {J: k for k, J in enumerate(basis)}
    cols = []
    seen = set()
    for r in P.relations.columns():
        support = [(k, x) for k, x in enumerate(r) if x]
        if not support:
            continue
        for Jp in subsets(g, j - 1):
            col = [0] * len(basis)
            for k, x in support:
                ins = wedge_insert(Jp, k)
                if ins is not None:
                    s, J = ins
                    col[index[J]] += s * x
            if any(col):
                key = tuple(col)
                if key not in seen:
                    seen.add(key)
                    cols.append(col)
    return PresentedModule(len(basis), IntMatrix.from_columns(cols, nrows=len(basis)))


def determinant(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(rows)
    if n == 0:
        return 1
    M = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for jj in range(k + 1, n):
                M[i][jj] = (M[i][jj] * M[k][k] - M[i][k] * M[k][jj]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def compound_matrix(A: IntMatrix, j: int) -> IntMatrix:
    """j-th compound: entry (J', J) is the minor on rows J', columns J."""
    if j == 0:
        return IntMatrix.identity(1)
    R = subsets(A.rows, j)
    C = subsets(A.cols, j)
    rows = A.to_rows()
    out = []
    for Jp in R:
        sub = [rows[r] for r in Jp]
        out.append([determinant([[s[c] for c in J] for s in sub]) for J in C])
    return IntMatrix.from_rows(out, ncols=len(C))


def exterior_map(f: ModuleMap, j: int) -> ModuleMap:
    """The map induced on j-th exterior powers."""
    bad = f.ill_defined_relation()
    if bad is not None:
        raise ValueError(f"map is not well defined: relation column {bad} escapes the target relations")
    return ModuleMap(exterior_power(f.source, j), exterior_power(f.target, j), compound_matrix(f.lift, j))


# --------------------------------------------------------------------------
# cohomology


class ComplexError(ValueError):
    """d o d does not vanish on the presented modules."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def free_cohomology(d_in: IntMatrix | None, d_out: IntMatrix | None, dim: int) -> FgaClass:
    """Cohomology at a free module Z^dim between integer differentials."""
    r_out = elementary_divisors(d_out)[0] if d_out is not None and d_out.rows and dim else 0
    if d_in is not None and d_in.cols and dim:
        r_in, tors = elementary_divisors(d_in)
    else:
        r_in, tors = 0, []
    return FgaClass(dim - r_out - r_in, tuple(sorted(tors)))


def cohomology_at(f_in: ModuleMap | None, f_out: ModuleMap | None, middle: PresentedModule | None = None) -> FgaClass:
    """Class of ker(f_out) / im(f_in) at the middle presented module.

    Either map may be None (zero map from/to the zero module); then
    ``middle`` must be given if both are None.
    """
    B = middle or (f_out.source if f_out is not None else f_in.target)
    if f_in is not None and f_in.target != B:
        raise ValueError("f_in does not land in the middle module")
    if f_out is not None and f_out.source != B:
        raise ValueError("f_out does not start at the middle module")
    if f_in is not None and f_out is not None:
        comp = f_out.lift @ f_in.lift
        bad = f_out.target.contains(comp)
        if bad is not None:
            raise ComplexError("composite of differentials is nonzero", witness=bad)
    free = (
        B.relations.cols == 0
        and (f_out is None or f_out.target.relations.cols == 0)
    )
    if free:
        return free_cohomology(
            f_in.lift if f_in is not None else None,
            f_out.lift if f_out is not None else None,
            B.gens,
        )
    b = B.gens
    if b == 0:
        return FgaClass()
    if f_out is not None:
        K = preimage_lattice(f_out.lift, f_out.target.relations)
    else:
        K = IntMatrix.identity(b)
    if K.cols == 0:
        return FgaClass()
    H, _, piv = column_echelon(K)
    K = H.select_columns(range(len(piv)))
    gens = []
    if f_in is not None:
        gens.extend(f_in.lift.columns())
    gens.extend(B.relations.columns())
    coords = []
    for v in gens:
        c = solve_in_lattice(K, piv, v)
        if c is None:
            raise ComplexError("image of incoming differential leaves the kernel")
        coords.append(c)
    Q = IntMatrix.from_columns(coords, nrows=K.cols)
    return cokernel_class(PresentedModule(K.cols, Q))


# --------------------------------------------------------------------------
# ranks over fields


def rank_over_field(A: IntMatrix | list[dict[int, int]], p: int = RATIONAL) -> int:
    """Rank over Z/p (p prime) or over Q (p = RATIONAL) by sparse elimination."""
    rows = _sparse_rows(A.to_rows()) if isinstance(A, IntMatrix) else [dict(r) for r in A]
    if p:
        rows = [{c: x % p for c, x in r.items() if x % p} for r in rows]
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        rows.sort(key=len)
        piv_row = rows.pop(0)
        c = min(piv_row, key=lambda k: (abs(piv_row[k]) != 1, k))
        a = piv_row[c]
        rank += 1
        new_rows = []
        for r in rows:
            b = r.get(c)
            if not b:
                new_rows.append(r)
                continue
            if p:
                q = b * pow(a, -1, p) % p
                for k, x in piv_row.items():
                    nv = (r.get(k, 0) - q * x) % p
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
            else:
                # fraction-free: r <- a*r - b*piv, then strip the content
                g = gcd(a, b)
                ca, cb = a // g, b // g
                nr = {k: ca * x for k, x in r.items()}
                for k, x in piv_row.items():
                    nv = nr.get(k, 0) - cb * x
                    if nv:
                        nr[k] = nv
                    else:
                        nr.pop(k, None)
                cont = 0
                for x in nr.values():
                    cont = gcd(cont, x)
                    if cont == 1:
                        break
                r = {k: x // cont for k, x in nr.items()} if cont > 1 else nr
            if r:
                new_rows.append(r)
        rows = new_rows
    return rank


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
