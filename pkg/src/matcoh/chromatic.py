"""Chromatic cohomology of graphs and its comparison with the graphic matroid.

Enhanced states (S, X): S an edge subset, X the set of components colored x,
each component named by its minimal vertex.  Basis order is (S bitmask,
sorted X).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .cohomology import (
    BigradedComplex,
    CohomologyTable,
    Sparse,
    _free_cohomology,
    _sparse_product,
    epsilon,
    subsets_of_size,
)
from .exactlin import (
    FgaClass,
    IntMatrix,
    ModuleMap,
    PresentedModule,
    RATIONAL,
    lattice_equal,
    lattice_contains,
    preimage_lattice,
    rank_over_field,
)
from .graph import Graph
from .poly import IntPoly
from .quasirep import graphic_quasirep, graphic_vertex_index
from .report import Verdict


def _perm_sign(seq) -> int:
    s = 1
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                s = -s
    return s


class ChromaticComplex:
    def __init__(self, g: Graph):
        self.g = g
        self.m = g.m
        self._labels: dict[int, list[int]] = {}
        self._cells: dict[tuple[int, int], list[tuple[int, tuple[int, ...]]]] = {}
        self._index: dict[tuple[int, int], dict] = {}
        self._diff: dict[tuple[int, int], Sparse] = {}

    def labels(self, S: int) -> list[int]:
        lab = self._labels.get(S)
        if lab is None:
            lab = self.g.components(S)
            self._labels[S] = lab
        return lab

    def components(self, S: int) -> list[int]:
        return sorted(set(self.labels(S)))

    def states(self, i: int, j: int) -> list[tuple[int, tuple[int, ...]]]:
        st = self._cells.get((i, j))
        if st is None:
            st = []
            if 0 <= i <= self.m:
                for S in subsets_of_size(self.m, i):
                    st.extend((S, X) for X in combinations(self.components(S), j))
            self._cells[(i, j)] = st
            self._index[(i, j)] = {s: k for k, s in enumerate(st)}
        return st

    def index(self, i: int, j: int) -> dict:
        self.states(i, j)
        return self._index[(i, j)]

    @property
    def j_max(self) -> int:
        return self.g.vertices

    def rank(self, i: int, j: int) -> int:
        return len(self.states(i, j))

    def apply_edge(self, S: int, X: tuple[int, ...], b: int) -> tuple[int, ...] | None:
        """Coloring of S + edge b; None when two x-components merge."""
        u, v = self.g.edges[b]
        lab = self.labels(S)
        lu, lv = lab[u], lab[v]
        if lu == lv:
            return X
        xs = set(X)
        if lu in xs and lv in xs:
            return None
        if lu in xs or lv in xs:
            xs.discard(lu)
            xs.discard(lv)
            xs.add(min(lu, lv))
        return tuple(sorted(xs))

    def differential(self, i: int, j: int) -> Sparse:
        key = (i, j)
        d = self._diff.get(key)
        if d is not None:
            return d
        d = {}
        tgt = self.index(i + 1, j) if i < self.m else {}
        for c, (S, X) in enumerate(self.states(i, j)):
            for b in range(self.m):
                if S >> b & 1:
                    continue
                X2 = self.apply_edge(S, X, b)
                if X2 is None:
                    continue
                r = tgt[(S | 1 << b, X2)]
                row = d.setdefault(r, {})
                row[c] = row.get(c, 0) + epsilon(S, b + 1)
        d = {r: {c: v for c, v in row.items() if v} for r, row in d.items()}
        self._diff[key] = {r: row for r, row in d.items() if row}
        return self._diff[key]

    def check_d_squared(self) -> tuple | None:
        for j in range(self.j_max + 1):
            for i in range(self.m - 1):
                comp = _sparse_product(self.differential(i + 1, j), self.differential(i, j))
                if comp:
                    r = next(iter(comp))
                    return (i, j, r)
        return None

    def cohomology(self, i: int, j: int) -> FgaClass:
        dim = self.rank(i, j)
        if not dim:
            return FgaClass()
        d_out = self.differential(i, j) if i < self.m else {}
        d_in = self.differential(i - 1, j) if i > 0 else {}
        return _free_cohomology(d_in, d_out, dim, self.rank(i - 1, j))

    def rank_over(self, i: int, j: int, p: int = RATIONAL) -> int:
        dim = self.rank(i, j)
        if not dim:
            return 0
        d_out = list(self.differential(i, j).values()) if i < self.m else []
        d_in = list(self.differential(i - 1, j).values()) if i > 0 else []
        return dim - rank_over_field(d_out, p) - rank_over_field(d_in, p)


def chromatic_complex(g: Graph) -> ChromaticComplex:
    return ChromaticComplex(g)


def chromatic_cohomology(g: Graph) -> CohomologyTable:
    c = ChromaticComplex(g)
    cells = {(i, j): c.cohomology(i, j) for i in range(c.m + 1) for j in range(c.j_max + 1)}
    coeffs = [0] * (c.j_max + 1)
    for (i, j), _ in cells.items():
        coeffs[j] += (-1) ** i * c.rank(i, j)
    meta = {"n": c.m, "j_max": c.j_max, "graph": g.to_json()}
    return CohomologyTable(c.m, c.j_max, cells, IntPoly(tuple(coeffs)), meta)


# --------------------------------------------------------------------------
# comparison maps


@dataclass
class GraphComparison:
    """Chromatic complex next to the graphic matroid complex, block by block in S."""

    g: Graph
    order: str = "vertex"  # how x-components are ordered in the wedge: "vertex" or "edge"

    def __post_init__(self):
        self.chrom = ChromaticComplex(self.g)
        self.q = graphic_quasirep(self.g)
        self.mat = BigradedComplex(self.q, j_max=self.g.vertices)
        self.pos = graphic_vertex_index(self.g)
        self.w = self.q.gens

    def _wedge_order(self, S: int, X: tuple[int, ...]) -> list[int]:
        if self.order == "vertex":
            return list(X)
        first_edge = {}
        for b, (u, v) in enumerate(self.g.edges):
            if S >> b & 1:
                lab = self.chrom.labels(S)[u]
                first_edge.setdefault(lab, b)
        # components without edges go last, by vertex
        return sorted(X, key=lambda F: (first_edge.get(F, self.g.m), F))

    def block_source(self, S: int, j: int) -> list[tuple[int, ...]]:
        return [X for X in combinations(self.chrom.components(S), j)]

    def block_target(self, S: int, j: int) -> PresentedModule:
        return self.mat.raw_block(S, j)

    def theta_column(self, S: int, X: tuple[int, ...]) -> dict[tuple[int, ...], int]:
        """theta(S, X) in the raw basis of wedge^j N/rho(S): {J: coefficient}."""
        seq = self._wedge_order(S, X)
        if any(F not in self.pos for F in seq):
            return {}
        idx = [self.pos[F] for F in seq]
        return {tuple(sorted(idx)): _perm_sign(idx)}

    def tau_column(self, S: int, J: tuple[int, ...]) -> dict[tuple[int, ...], int]:
        """tau(e_{S,J}) as {X: coefficient}, J a raw multi-index of generators."""
        inv = {k: v for v, k in self.pos.items()}
        lab = self.chrom.labels(S)
        comps = [lab[inv[k]] for k in J]
        minimal = min(self.chrom.components(S))
        if minimal in comps or len(set(comps)) < len(comps):
            return {}
        # express the wedge in the component order used by theta, then put
        # the minimal component in front
        X = tuple(sorted(comps + [minimal]))
        seq = self._wedge_order(S, tuple(sorted(comps)))
        sign = _perm_sign(comps) * _perm_sign(seq)
        return {X: sign}

    # -- block matrices

    def theta_block(self, S: int, j: int) -> ModuleMap:
        src = self.block_source(S, j)
        tgt = self.block_target(S, j)
        basis = {J: k for k, J in enumerate(combinations(range(self.w), j))}
        rows = [[0] * len(src) for _ in range(tgt.gens)]
        for c, X in enumerate(src):
            for J, v in self.theta_column(S, X).items():
                rows[basis[J]][c] += v
        return ModuleMap(PresentedModule.free(len(src)), tgt, IntMatrix.from_rows(rows, ncols=len(src)))

    def tau_block(self, S: int, j: int) -> ModuleMap:
        """tau from wedge^{j-1} N/rho(S) to the states of S with j x-components."""
        src = self.block_target(S, j - 1)
        tgt = self.block_source(S, j)
        tindex = {X: k for k, X in enumerate(tgt)}
        Js = list(combinations(range(self.w), j - 1))
        rows = [[0] * len(Js) for _ in range(len(tgt))]
        for c, J in enumerate(Js):
            for X, v in self.tau_column(S, J).items():
                rows[tindex[X]][c] += v
        return ModuleMap(src, PresentedModule.free(len(tgt)), IntMatrix.from_rows(rows, ncols=len(Js)))

    # -- checks

    def theta_chain_defect(self, p: int = 0) -> tuple | None:
        """First (S, X, edge) where theta o d_G and d_M o theta differ, or None.

        Over Z when p = 0; otherwise modulo the prime p.
        """
        for i in range(self.g.m):
            for j in range(self.g.vertices + 1):
                for S in subsets_of_size(self.g.m, i):
                    for X in self.block_source(S, j):
                        base = self.theta_column(S, X)
                        for b in range(self.g.m):
                            if S >> b & 1:
                                continue
                            T = S | 1 << b
                            eps = epsilon(S, b + 1)
                            lhs: dict = {}
                            X2 = self.chrom.apply_edge(S, X, b)
                            if X2 is not None:
                                for J, v in self.theta_column(T, X2).items():
                                    lhs[J] = lhs.get(J, 0) + eps * v
                            rhs = {J: eps * v for J, v in base.items()}
                            if not self._equal_in_block(T, j, lhs, rhs, p):
                                return (i, j, S, X, b + 1)
        return None

    def _equal_in_block(self, T: int, j: int, a: dict, b: dict, p: int) -> bool:
        keys = sorted(set(a) | set(b))
        if not keys:
            return True
        diff = {J: a.get(J, 0) - b.get(J, 0) for J in keys}
        if not any(diff.values()):
            return True
        block = self.block_target(T, j)
        basis = {J: k for k, J in enumerate(combinations(range(self.w), j))}
        vec = [0] * block.gens
        for J, v in diff.items():
            vec[basis[J]] = v
        rel = block.relations
        if p:
            rel = rel.hstack(IntMatrix.identity(block.gens).scale(p))
        return lattice_contains(rel, IntMatrix.from_columns([vec], nrows=block.gens)) is None

    def tau_chain_defect(self, p: int = 0) -> tuple | None:
        """First (S, J, edge) where d_G o tau and tau o d_M differ, or None."""
        for i in range(self.g.m):
            for j in range(1, self.g.vertices + 1):
                for S in subsets_of_size(self.g.m, i):
                    for J in combinations(range(self.w), j - 1):
                        acc: dict = {}
                        for X, v in self.tau_column(S, J).items():
                            for b in range(self.g.m):
                                if S >> b & 1:
                                    continue
                                X2 = self.chrom.apply_edge(S, X, b)
                                if X2 is None:
                                    continue
                                key = (b, X2)
                                acc[key] = acc.get(key, 0) + epsilon(S, b + 1) * v
                        for b in range(self.g.m):
                            if S >> b & 1:
                                continue
                            T = S | 1 << b
                            for X, v in self.tau_column(T, J).items():
                                key = (b, X)
                                acc[key] = acc.get(key, 0) - epsilon(S, b + 1) * v
                        for key, v in acc.items():
                            if (v % p if p else v) != 0:
                                return (i, j, S, J, key[0] + 1)
        return None

    def ses_defect(self) -> tuple | None:
        """Exactness of 0 -> wedge^{j-1} -> states -> wedge^j -> 0 on every S-block."""
        for S in range(1 << self.g.m):
            for j in range(0, self.g.vertices + 1):
                th = self.theta_block(S, j)
                T = th.target
                # theta onto
                onto = th.lift.hstack(T.relations) if T.relations.cols else th.lift
                if not lattice_equal(onto, IntMatrix.identity(T.gens)):
                    return ("theta not onto", S, j)
                ker = preimage_lattice(th.lift, T.relations)
                if j == 0:
                    if ker.cols:
                        return ("theta not injective in degree 0", S, j)
                    continue
                ta = self.tau_block(S, j)
                if not ta.is_well_defined():
                    return ("tau not well defined", S, j)
                img = ta.lift
                if not lattice_equal(ker if ker.cols else IntMatrix.zeros(th.source.gens, 0), img):
                    return ("ker theta != im tau", S, j)
                inj = preimage_lattice(ta.lift, IntMatrix.zeros(ta.target.gens, 0))
                if lattice_contains(ta.source.relations, inj) is not None:
                    return ("tau not injective", S, j)
        return None

    def sign_twist(self) -> tuple[bool, tuple | None]:
        """Can theta become a chain map over Z after flipping signs of states?

        Each commuting square forces a relation sigma(S, X) = +-sigma(T, X2)
        between state signs; the relations are solved as a parity union-find.
        Returns (True, None) when a consistent choice exists, otherwise False
        and the first (S, X, edge) that closes an odd cycle.
        """
        parent: dict = {}

        def find(x):
            par = 0
            while parent.get(x, (x, 0))[0] != x:
                x, b = parent[x]
                par ^= b
            return x, par

        def union(a, b, c) -> bool:
            ra, pa = find(a)
            rb, pb = find(b)
            if ra == rb:
                return pa ^ pb == c
            parent[ra] = (rb, pa ^ pb ^ c)
            return True

        def is_zero(T, j, col) -> bool:
            return self._equal_in_block(T, j, col, {}, 0)

        for i in range(self.g.m):
            for j in range(self.g.vertices + 1):
                for S in subsets_of_size(self.g.m, i):
                    for X in self.block_source(S, j):
                        base = self.theta_column(S, X)
                        for b in range(self.g.m):
                            if S >> b & 1:
                                continue
                            T = S | 1 << b
                            X2 = self.chrom.apply_edge(S, X, b)
                            if X2 is None:
                                if not is_zero(T, j, base):
                                    return False, (S, X, b + 1)
                                continue
                            top = self.theta_column(T, X2)
                            if is_zero(T, j, top) and is_zero(T, j, base):
                                continue
                            if self._equal_in_block(T, j, top, base, 0):
                                c = 0
                            elif self._equal_in_block(T, j, top, {J: -v for J, v in base.items()}, 0):
                                c = 1
                            else:
                                return False, (S, X, b + 1)
                            if not union((S, X), (T, X2), c):
                                return False, (S, X, b + 1)
        return True, None

    # -- long exact sequence

    def les_dimensions(self, p: int = RATIONAL) -> dict[int, list[int]]:
        """Per j, the dims of H^{i,j-1}(M), H^{i,j}(G), H^{i,j}(M) for i = 0, 1, ..."""
        out = {}
        for j in range(1, self.g.vertices + 1):
            seq = []
            for i in range(self.g.m + 1):
                seq.append(self.mat.rank_over(i, j - 1, p))
                seq.append(self.chrom.rank_over(i, j, p))
                seq.append(self.mat.rank_over(i, j, p))
            out[j] = seq
        return out


def exact_sequence_consistent(dims: list[int]) -> tuple[bool, int | None]:
    """Can a long exact sequence 0 -> V_0 -> V_1 -> ... -> 0 have these dims?

    Returns (ok, first bad position).
    """
    k = 0
    for t, a in enumerate(dims):
        k = a - k
        if k < 0:
            return False, t
    return k == 0, (None if k == 0 else len(dims) - 1)


def les_rank_check(g: Graph) -> Verdict:
    if not g.is_connected():
        raise ValueError("the long exact sequence needs a connected graph")
    cmp = GraphComparison(g)
    for j, dims in cmp.les_dimensions().items():
        ok, pos = exact_sequence_consistent(dims)
        if not ok:
            return Verdict.fail("chromatic LES ranks", {"j": j, "position": pos, "dims": dims})
    return Verdict.ok("chromatic LES ranks", detail=f"shift range {shift_iso_range(cmp.mat)}")


def shift_iso_range(c: BigradedComplex) -> int:
    """Largest s such that H^{i,j} = H^{i+1,j-1} for every i + j <= s (j >= 1).

    Returns -1 when it already fails at i + j = 0.
    """
    from .cohomology import cohomology_table

    t = cohomology_table(c)
    best = -1
    for s in range(0, c.n + c.j_max + 1):
        for i in range(0, s + 1):
            j = s - i
            if j < 1 or j > c.j_max or i > c.n:
                continue
            if t[(i, j)] != t[(i + 1, j - 1)]:
                return best
        best = s
    return best
