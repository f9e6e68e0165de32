"""The bigraded complex C^{i,j} = sum over |S| = i of wedge^j N/rho(S).

Two views of the same complex are available.

* Raw: every block is the exterior power of the presentation of N/rho(S) on
  the generators of N, and every differential block is a signed identity on
  multi-indices.  This is the literal construction; it is used for the
  chain-level checks.
* Reduced: each quotient N/rho(F) (F a flat) is diagonalized once by Smith
  form, so wedge^j becomes a sum of cyclic groups Z/gcd(d_J).  Multi-indices
  with a unit gcd are dropped and differential blocks become compound
  matrices of the change of basis.  Cohomology tables are computed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd

from .exactlin import (
    ComplexError,
    FgaClass,
    IntMatrix,
    ModuleMap,
    PresentedModule,
    RATIONAL,
    block_diagonal,
    cokernel_class,
    column_echelon,
    determinant,
    elementary_divisors,
    exterior_power,
    preimage_lattice,
    rank_over_field,
    snf,
    solve_in_lattice,
)
from .matroid import Matroid, popcount
from .poly import IntPoly, format_poly
from .quasirep import QuasiRep, validate

GradedPoly = IntPoly

Sparse = dict[int, dict[int, int]]  # row -> {col: value}


def epsilon(S: int, e: int) -> int:
    """-1 when an odd number of elements of S precede e (e is 1-based)."""
    return -1 if popcount(S & ((1 << (e - 1)) - 1)) & 1 else 1


def subsets_of_size(n: int, i: int) -> list[int]:
    return sorted(sum(1 << k for k in c) for c in combinations(range(n), i))


def _inverse_unimodular(U: IntMatrix) -> IntMatrix:
    n = U.rows
    rows = [[x for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(U.to_rows())]
    # integer Gauss-Jordan; U is unimodular so pivots can be made +-1
    for c in range(n):
        # Euclid on column c below row c
        while True:
            nz = [r for r in range(c, n) if rows[r][c]]
            if not nz:
                raise ValueError("matrix is singular")
            p = min(nz, key=lambda r: abs(rows[r][c]))
            rows[c], rows[p] = rows[p], rows[c]
            done = True
            for r in range(c + 1, n):
                if rows[r][c]:
                    q = rows[r][c] // rows[c][c]
                    rows[r] = [a - q * b for a, b in zip(rows[r], rows[c])]
                    if rows[r][c]:
                        done = False
            if done:
                break
        if abs(rows[c][c]) != 1:
            raise ValueError("matrix is not unimodular")
        if rows[c][c] < 0:
            rows[c] = [-a for a in rows[c]]
    for c in range(n - 1, -1, -1):
        for r in range(c):
            if rows[r][c]:
                q = rows[r][c]
                rows[r] = [a - q * b for a, b in zip(rows[r], rows[c])]
    return IntMatrix.from_rows([r[n:] for r in rows], ncols=n)


@dataclass
class FlatData:
    U: IntMatrix
    Uinv: IntMatrix
    diag: list[int]  # one entry per generator; 0 means a free summand


@dataclass(frozen=True)
class Cell:
    """Basis bookkeeping of a reduced chain group C^{i,j}."""

    i: int
    j: int
    blocks: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]  # (S, kept J's)
    orders: tuple[int, ...]  # Z/order per basis vector; 0 is free
    offsets: dict = field(hash=False, compare=False, default=None)

    @property
    def size(self) -> int:
        return len(self.orders)

    def index(self) -> dict[tuple[int, tuple[int, ...]], int]:
        out = {}
        k = 0
        for S, Js in self.blocks:
            for J in Js:
                out[(S, J)] = k
                k += 1
        return out


class BigradedComplex:
    def __init__(self, q: QuasiRep, j_max: int | None = None, raw: bool = False):
        if not raw:
            v = validate(q)
            if not v.passed:
                raise ValueError(f"invalid quasi-representation: {v.property} fails at {v.witness}")
        self.q = q
        self.m: Matroid = q.matroid
        self.n = q.n
        self.g = q.gens
        self.j_max = self.g if j_max is None else j_max
        self._flat: dict[int, FlatData] = {}
        self._kept: dict[tuple[int, int], tuple[tuple[tuple[int, ...], int], ...]] = {}
        self._blockmat: dict[tuple[int, int, int], dict] = {}
        self._cells: dict[tuple[int, int], Cell] = {}
        self._diff: dict[tuple[int, int], Sparse] = {}

    # -- reduced data

    def flat_data(self, F: int) -> FlatData:
        fd = self._flat.get(F)
        if fd is None:
            rel = self.q.ambient.relations.hstack(self.q.rho(F))
            g = self.g
            if rel.cols == 0:
                fd = FlatData(IntMatrix.identity(g), IntMatrix.identity(g), [0] * g)
            else:
                dec = snf(rel)
                diag = dec.diagonal + [0] * (g - min(g, rel.cols))
                fd = FlatData(dec.U, _inverse_unimodular(dec.U), diag[:g])
            self._flat[F] = fd
        return fd

    def kept(self, S: int, j: int) -> tuple[tuple[tuple[int, ...], int], ...]:
        """Multi-indices J (in Smith coordinates) with gcd(d_J) != 1, and their orders."""
        F = self.q.key(S)
        key = (F, j)
        out = self._kept.get(key)
        if out is None:
            d = self.flat_data(F).diag
            live = [k for k in range(self.g) if d[k] != 1]
            res = []
            for J in combinations(live, j):
                o = 0
                for k in J:
                    o = gcd(o, d[k])
                if o != 1:
                    res.append((J, o))
            out = tuple(res)
            self._kept[key] = out
        return out

    def cell(self, i: int, j: int) -> Cell:
        c = self._cells.get((i, j))
        if c is None:
            blocks = []
            orders = []
            if 0 <= i <= self.n and 0 <= j:
                for S in subsets_of_size(self.n, i):
                    kj = self.kept(S, j)
                    if kj:
                        blocks.append((S, tuple(J for J, _ in kj)))
                        orders.extend(o for _, o in kj)
            c = Cell(i, j, tuple(blocks), tuple(orders))
            self._cells[(i, j)] = c
        return c

    def _block(self, S: int, T: int, j: int) -> dict[tuple[int, int], int]:
        """Reduced block wedge^j(N/rho(S)) -> wedge^j(N/rho(T)) as {(row, col): value}."""
        FS, FT = self.q.key(S), self.q.key(T)
        key = (FS, FT, j)
        out = self._blockmat.get(key)
        if out is None:
            A = (self.flat_data(FT).U @ self.flat_data(FS).Uinv).to_rows()
            src = self.kept(S, j)
            dst = self.kept(T, j)
            out = {}
            for c, (J, _) in enumerate(src):
                for r, (I, o) in enumerate(dst):
                    val = determinant([[A[a][b] for b in J] for a in I]) if j else 1
                    if o:
                        val %= o
                        if val > o // 2:
                            val -= o
                    if val:
                        out[(r, c)] = val
            self._blockmat[key] = out
        return out

    def differential(self, i: int, j: int) -> Sparse:
        """Reduced d^{i,j} as sparse rows (row index -> {column index: value})."""
        key = (i, j)
        d = self._diff.get(key)
        if d is not None:
            return d
        src = self.cell(i, j)
        dst = self.cell(i + 1, j)
        start = {}
        k = 0
        for S, Js in dst.blocks:
            start[S] = k
            k += len(Js)
        d = {}
        col0 = 0
        for S, Js in src.blocks:
            for b in range(self.n):
                e = b + 1
                if S >> b & 1:
                    continue
                T = S | (1 << b)
                if T not in start:
                    continue
                sign = epsilon(S, e)
                r0 = start[T]
                for (r, c), v in self._block(S, T, j).items():
                    row = d.setdefault(r0 + r, {})
                    row[col0 + c] = row.get(col0 + c, 0) + sign * v
            col0 += len(Js)
        self._diff[key] = d
        return d

    # -- raw data

    def raw_block(self, S: int, j: int) -> PresentedModule:
        return exterior_power(self.q.quotient(S), j)

    def raw_chain_group(self, i: int, j: int) -> PresentedModule:
        blocks = [self.raw_block(S, j) for S in subsets_of_size(self.n, i)] if 0 <= i <= self.n else []
        if not blocks:
            return PresentedModule.free(0)
        return PresentedModule(sum(b.gens for b in blocks), block_diagonal([b.relations for b in blocks]))

    def raw_differential(self, i: int, j: int) -> ModuleMap:
        src = self.raw_chain_group(i, j)
        dst = self.raw_chain_group(i + 1, j)
        w = comb(self.g, j)
        rows = [[0] * src.gens for _ in range(dst.gens)]
        if 0 <= i < self.n:
            tpos = {T: k * w for k, T in enumerate(subsets_of_size(self.n, i + 1))}
            for k, S in enumerate(subsets_of_size(self.n, i)):
                for b in range(self.n):
                    if S >> b & 1:
                        continue
                    T = S | (1 << b)
                    s = epsilon(S, b + 1)
                    for t in range(w):
                        rows[tpos[T] + t][k * w + t] = s
        return ModuleMap(src, dst, IntMatrix.from_rows(rows, ncols=src.gens))

    # -- checks

    def check_d_squared(self) -> tuple | None:
        """First (i, j, row) where d o d is nonzero on the reduced complex, else None."""
        for j in range(self.j_max + 1):
            for i in range(self.n - 1):
                d1 = self.differential(i, j)
                d2 = self.differential(i + 1, j)
                orders = self.cell(i + 2, j).orders
                comp = _sparse_product(d2, d1)
                for r, row in comp.items():
                    o = orders[r]
                    for c, v in row.items():
                        if (v % o if o else v) != 0:
                            return (i, j, r, c)
        return None

    def check_raw_d_squared(self) -> tuple | None:
        for j in range(self.j_max + 1):
            for i in range(self.n - 1):
                d1 = self.raw_differential(i, j)
                d2 = self.raw_differential(i + 1, j)
                bad = d2.target.contains(d2.lift @ d1.lift)
                if bad is not None:
                    return (i, j, bad)
        return None

    # -- cohomology

    def cohomology(self, i: int, j: int) -> FgaClass:
        mid = self.cell(i, j)
        if mid.size == 0:
            return FgaClass()
        d_out = self.differential(i, j) if i < self.n else {}
        d_in = self.differential(i - 1, j) if i > 0 else {}
        tgt = self.cell(i + 1, j)
        src = self.cell(i - 1, j)
        if not any(mid.orders) and not any(tgt.orders):
            return _free_cohomology(d_in, d_out, mid.size, src.size)
        return _general_cohomology(d_in, d_out, mid, tgt, src.size)

    def rank_over(self, i: int, j: int, p: int = RATIONAL) -> int:
        """dim of H^{i,j} of the complex tensored with Q (p = 0) or Z/p."""
        mid = self.cell(i, j)
        keep_mid = [k for k, o in enumerate(mid.orders) if (o == 0 if p == RATIONAL else o % p == 0)]
        if not keep_mid:
            return 0
        tgt = self.cell(i + 1, j)
        keep_tgt = {k for k, o in enumerate(tgt.orders) if (o == 0 if p == RATIONAL else o % p == 0)}
        src = self.cell(i - 1, j)
        keep_src = {k for k, o in enumerate(src.orders) if (o == 0 if p == RATIONAL else o % p == 0)}
        km = set(keep_mid)
        d_out = self.differential(i, j) if i < self.n else {}
        d_in = self.differential(i - 1, j) if i > 0 else {}
        out_rows = [{c: v for c, v in row.items() if c in km} for r, row in d_out.items() if r in keep_tgt]
        in_rows = [{c: v for c, v in row.items() if c in keep_src} for r, row in d_in.items() if r in km]
        r_out = rank_over_field([r for r in out_rows if r], p)
        r_in = rank_over_field([r for r in in_rows if r], p)
        return len(keep_mid) - r_out - r_in


def _sparse_product(A: Sparse, B: Sparse) -> Sparse:
    out: Sparse = {}
    for r, row in A.items():
        acc: dict[int, int] = {}
        for k, a in row.items():
            brow_cols = B.get(k)
            if brow_cols is None:
                continue
            for c, b in brow_cols.items():
                acc[c] = acc.get(c, 0) + a * b
        acc = {c: v for c, v in acc.items() if v}
        if acc:
            out[r] = acc
    return out


def _free_cohomology(d_in: Sparse, d_out: Sparse, dim: int, src_size: int) -> FgaClass:
    out_rows = [row for row in d_out.values() if row]
    r_out = elementary_divisors(out_rows)[0] if out_rows else 0
    in_rows = [row for row in d_in.values() if row]
    if in_rows:
        r_in, tors = elementary_divisors(in_rows)
    else:
        r_in, tors = 0, []
    return FgaClass(dim - r_out - r_in, tuple(sorted(tors)))


def _dense(sp: Sparse, nrows: int, ncols: int) -> IntMatrix:
    rows = [[0] * ncols for _ in range(nrows)]
    for r, row in sp.items():
        for c, v in row.items():
            rows[r][c] = v
    return IntMatrix.from_rows(rows, ncols=ncols)


def _diag_relations(orders) -> IntMatrix:
    cols = []
    n = len(orders)
    for k, o in enumerate(orders):
        if o:
            col = [0] * n
            col[k] = o
            cols.append(col)
    return IntMatrix.from_columns(cols, nrows=n) if cols else IntMatrix.zeros(n, 0)


def _general_cohomology(d_in: Sparse, d_out: Sparse, mid: Cell, tgt: Cell, src_size: int) -> FgaClass:
    a = mid.size
    if tgt.size:
        F = _dense(d_out, tgt.size, a)
        K = preimage_lattice(F, _diag_relations(tgt.orders))
    else:
        K = IntMatrix.identity(a)
    if K.cols == 0:
        return FgaClass()
    H, _, piv = column_echelon(K)
    K = H.select_columns(range(len(piv)))
    gens = []
    if src_size:
        D = _dense(d_in, a, src_size)
        gens.extend(D.columns())
    gens.extend(_diag_relations(mid.orders).columns())
    coords = []
    for v in gens:
        c = solve_in_lattice(K, piv, v)
        if c is None:
            raise ComplexError("image of the incoming differential leaves the kernel")
        coords.append(c)
    Q = IntMatrix.from_columns(coords, nrows=K.cols) if coords else IntMatrix.zeros(K.cols, 0)
    return cokernel_class(PresentedModule(K.cols, Q))


# --------------------------------------------------------------------------
# tables


@dataclass
class CohomologyTable:
    n: int
    j_max: int
    cells: dict[tuple[int, int], FgaClass]
    euler: IntPoly
    meta: dict = field(default_factory=dict)

    def __getitem__(self, ij: tuple[int, int]) -> FgaClass:
        return self.cells.get(ij, FgaClass())

    def nonzero(self) -> dict[tuple[int, int], FgaClass]:
        return {k: v for k, v in sorted(self.cells.items()) if not v.is_zero}

    def ranks(self) -> dict[tuple[int, int], int]:
        return {k: v.free_rank for k, v in self.cells.items()}

    def cohomology_euler(self) -> IntPoly:
        coeffs = [0] * (self.j_max + 1)
        for (i, j), c in self.cells.items():
            coeffs[j] += (-1) ** i * c.free_rank
        return IntPoly(tuple(coeffs))

    def same_groups(self, other: "CohomologyTable") -> bool:
        return self.nonzero() == other.nonzero()

    def to_json(self) -> dict:
        cells = [
            {"i": i, "j": j, "free": c.free_rank, "torsion": list(c.torsion)}
            for (i, j), c in sorted(self.cells.items())
        ]
        return {"cells": cells, "euler": self.euler.to_list(), "meta": self.meta}

    @classmethod
    def from_json(cls, obj: dict) -> "CohomologyTable":
        cells = {}
        n = 0
        j_max = 0
        for c in obj["cells"]:
            i, j = int(c["i"]), int(c["j"])
            cells[(i, j)] = FgaClass(int(c["free"]), tuple(int(d) for d in c["torsion"]))
            n = max(n, i)
            j_max = max(j_max, j)
        meta = dict(obj.get("meta", {}))
        n = int(meta.get("n", n))
        j_max = int(meta.get("j_max", j_max))
        return cls(n, j_max, cells, IntPoly(tuple(obj.get("euler", ()))), meta)

    def render(self) -> str:
        header = ["i\\j"] + [str(j) for j in range(self.j_max + 1)]
        rows = [header]
        for i in range(self.n + 1):
            rows.append([str(i)] + [str(self[(i, j)]) for j in range(self.j_max + 1)])
        widths = [max(len(r[k]) for r in rows) for k in range(len(header))]
        lines = ["  ".join(x.rjust(w) for x, w in zip(r, widths)) for r in rows]
        lines.append("euler: " + format_poly(self.euler.coeffs, "q"))
        return "\n".join(lines)


def build_complex(q: QuasiRep, j_max: int | None = None, raw: bool = False) -> BigradedComplex:
    return BigradedComplex(q, j_max, raw)


def graded_euler(c: BigradedComplex) -> IntPoly:
    coeffs = [0] * (c.j_max + 1)
    for i in range(c.n + 1):
        sign = -1 if i & 1 else 1
        for j in range(c.j_max + 1):
            free = sum(1 for o in c.cell(i, j).orders if o == 0)
            coeffs[j] += sign * free
    return IntPoly(tuple(coeffs))


def cohomology_table(c: BigradedComplex, check: bool = True) -> CohomologyTable:
    if check:
        bad = c.check_d_squared()
        if bad is not None:
            raise ComplexError("d o d is nonzero", witness=bad)
    cells = {}
    for i in range(c.n + 1):
        for j in range(c.j_max + 1):
            cells[(i, j)] = c.cohomology(i, j)
    meta = {
        "n": c.n,
        "j_max": c.j_max,
        "rank": c.m.rank,
        "quasirep": c.q.label,
        "generators": c.g,
    }
    return CohomologyTable(c.n, c.j_max, cells, graded_euler(c), meta)


def field_table(c: BigradedComplex, p: int = RATIONAL) -> dict[tuple[int, int], int]:
    return {(i, j): c.rank_over(i, j, p) for i in range(c.n + 1) for j in range(c.j_max + 1)}


def compute(q: QuasiRep, j_max: int | None = None, raw: bool = False) -> CohomologyTable:
    return cohomology_table(build_complex(q, j_max, raw))


def raw_cohomology_table(c: BigradedComplex) -> dict[tuple[int, int], FgaClass]:
    """Cohomology straight from the raw presentations (small inputs only)."""
    from .exactlin import cohomology_at

    out = {}
    for j in range(c.j_max + 1):
        groups = [c.raw_chain_group(i, j) for i in range(c.n + 1)]
        maps = [c.raw_differential(i, j) for i in range(c.n)]
        for i in range(c.n + 1):
            f_in = maps[i - 1] if i > 0 else None
            f_out = maps[i] if i < c.n else None
            out[(i, j)] = cohomology_at(f_in, f_out, groups[i])
    return out
