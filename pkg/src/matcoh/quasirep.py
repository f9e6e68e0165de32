"""Quasi-representations: submodules rho(S) of an ambient presented module N.

Values are stored on flats and looked up through the closure; an assignment
may also carry entries for non-flat subsets, which then override the closure
lookup (useful for reproducing ill-behaved examples).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .exactlin import (
    FgaClass,
    IntMatrix,
    ModuleMap,
    PresentedModule,
    RATIONAL,
    cokernel_class,
    column_echelon,
    hermite_basis,
    integer_kernel,
    lattice_contains,
    rank_over_field,
    solve_in_lattice,
)
from .graph import Graph
from .matroid import Matroid, elements_of, from_graph, from_matrix, from_uniform
from .report import Verdict

__all__ = [
    "QuasiRep",
    "Graph",
    "canonical_from_matrix",
    "free_default",
    "uniform_canonical",
    "saturated_from_matrix",
    "scaled_default",
    "diagonal_u22",
    "remark_u22",
    "graphic_quasirep",
    "validate",
    "delete_q",
    "contract_q",
    "direct_sum_q",
    "relax_q",
    "permute_q",
    "submodule_presentation",
    "coloop_hypotheses",
]


def _rank_q(A: IntMatrix) -> int:
    return rank_over_field(A, RATIONAL) if A.cols and A.rows else 0


@dataclass(frozen=True)
class QuasiRep:
    matroid: Matroid
    ambient: PresentedModule
    assignment: Mapping[int, IntMatrix]
    label: str = ""

    def __post_init__(self):
        g = self.ambient.gens
        for mask, G in self.assignment.items():
            if G.rows != g:
                raise ValueError(f"generators for subset {elements_of(mask)} have {G.rows} rows, ambient has {g}")
        for F in self.matroid.flats():
            if F not in self.assignment:
                raise ValueError(f"no value assigned to the flat {elements_of(F)}")

    @property
    def n(self) -> int:
        return self.matroid.n

    @property
    def gens(self) -> int:
        return self.ambient.gens

    def key(self, mask: int) -> int:
        """Which stored entry answers for ``mask``."""
        return mask if mask in self.assignment else self.matroid.closure(mask)

    def rho(self, mask: int) -> IntMatrix:
        return self.assignment[self.key(mask)]

    def quotient(self, mask: int) -> PresentedModule:
        """N / rho(S), with the generators of N."""
        return self.ambient.quotient(self.rho(mask))

    def rank_of_value(self, mask: int) -> int:
        rel = self.ambient.relations
        G = self.rho(mask)
        return _rank_q(rel.hstack(G)) - _rank_q(rel)

    def contains(self, small: int, big: int) -> bool:
        """rho(small) is contained in rho(big)."""
        L = self.rho(big).hstack(self.ambient.relations)
        return lattice_contains(L, self.rho(small)) is None

    def equal_values(self, a: int, b: int) -> bool:
        return self.contains(a, b) and self.contains(b, a)


def _reduce(G: IntMatrix) -> IntMatrix:
    return hermite_basis(G) if G.cols else G


def _from_function(m: Matroid, ambient: PresentedModule, value: Callable[[int], IntMatrix], label: str) -> QuasiRep:
    return QuasiRep(m, ambient, {F: _reduce(value(F)) for F in m.flats()}, label)


# -- constructors


class RepresentationError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def canonical_from_matrix(m: Matroid, A: IntMatrix) -> QuasiRep:
    """rho(S) = integer span of the columns in S, inside N = rho(E)."""
    if A.cols != m.n:
        raise RepresentationError(f"matrix has {A.cols} columns for {m.n} elements")
    mm = from_matrix(A)
    for s in range(1 << m.n):
        if mm.rank_table[s] != m.rank_table[s]:
            raise RepresentationError(
                f"column rank {mm.rank_table[s]} differs from matroid rank {m.rank_table[s]}",
                witness=elements_of(s),
            )
    H, _, piv = column_echelon(A)
    B = H.select_columns(range(len(piv)))
    coords = [solve_in_lattice(B, piv, c) for c in A.columns()]
    C = IntMatrix.from_columns(coords, nrows=len(piv))
    k = len(piv)

    def span(s: int) -> IntMatrix:
        cols = [C.column(e - 1) for e in elements_of(s)]
        return IntMatrix.from_columns(cols, nrows=k) if cols else IntMatrix.zeros(k, 0)

    # integer spans need not be closure-stable for arbitrary matrices
    for s in range(1 << m.n):
        cl = m.closure(s)
        if cl != s and lattice_contains(span(s), span(cl)) is not None:
            raise RepresentationError(
                "integer span is not determined by the closure; the matrix is not a canonical representation",
                witness=(elements_of(s), elements_of(cl)),
            )
    return _from_function(m, PresentedModule.free(k), span, "canonical")


def _saturate(G: IntMatrix) -> IntMatrix:
    """Rational span of the columns of G intersected with the integer lattice."""
    if G.cols == 0:
        return IntMatrix.zeros(G.rows, 0)
    K = integer_kernel(G.T)
    if K.cols == 0:
        return IntMatrix.identity(G.rows)
    return hermite_basis(integer_kernel(K.T))


def saturated_from_matrix(m: Matroid, A: IntMatrix) -> QuasiRep:
    """rho(S) = saturation of the span of the columns in S; always closure-stable."""
    if A.cols != m.n or from_matrix(A).rank_table != m.rank_table:
        raise RepresentationError("matrix does not represent the matroid over Q")
    full = _saturate(A)
    H, _, piv = column_echelon(full)
    B = H.select_columns(range(len(piv)))
    k = len(piv)

    def value(s: int) -> IntMatrix:
        cols = [A.column(e - 1) for e in elements_of(s)]
        if not cols:
            return IntMatrix.zeros(k, 0)
        sat = _saturate(IntMatrix.from_columns(cols, nrows=A.rows))
        return IntMatrix.from_columns([solve_in_lattice(B, piv, c) for c in sat.columns()], nrows=k)

    return _from_function(m, PresentedModule.free(k), value, "saturated")


def uniform_canonical(k: int, n: int) -> QuasiRep:
    """Canonical quasi-representation of a regular uniform matroid.

    Columns e_1..e_k followed by the all-ones vector, which is totally
    unimodular exactly when k <= 1 or k >= n - 1.
    """
    if not (k <= 1 or k >= n - 1):
        raise RepresentationError(f"U_{{{k},{n}}} is not regular")
    rows = [[1 if (c == i or c >= k) else 0 for c in range(n)] for i in range(k)]
    A = IntMatrix.from_rows(rows, ncols=n) if k else IntMatrix.zeros(0, n)
    return canonical_from_matrix(from_uniform(k, n), A)


def free_default(m: Matroid) -> QuasiRep:
    r = m.rank

    def value(F: int) -> IntMatrix:
        k = m.rank_table[F]
        return IntMatrix.from_columns([[int(i == c) for i in range(r)] for c in range(k)], nrows=r)

    return _from_function(m, PresentedModule.free(r), value, "free_default")


def scaled_default(m: Matroid, a: int) -> QuasiRep:
    """Like free_default, but proper flats use a*e_1 in place of e_1."""
    if a == 0:
        raise ValueError("scale must be nonzero")
    r = m.rank
    full = m.full

    def value(F: int) -> IntMatrix:
        k = m.rank_table[F]
        cols = []
        for c in range(k):
            col = [int(i == c) for i in range(r)]
            if c == 0 and F != full:
                col[0] = a
            cols.append(col)
        return IntMatrix.from_columns(cols, nrows=r)

    return _from_function(m, PresentedModule.free(r), value, f"scaled_default({a})")


def diagonal_u22(a: int, b: int) -> QuasiRep:
    if a == 0 or b == 0:
        raise ValueError("diagonal_u22 needs nonzero parameters")
    m = from_uniform(2, 2)
    values = {
        0b00: IntMatrix.zeros(2, 0),
        0b01: IntMatrix.from_columns([[a, 0]]),
        0b10: IntMatrix.from_columns([[0, b]]),
        0b11: IntMatrix.identity(2),
    }
    return QuasiRep(m, PresentedModule.free(2), {k: _reduce(v) for k, v in values.items()}, f"u22_diagonal({a},{b})")


def remark_u22(full_is_ambient: bool = True) -> QuasiRep:
    """Both singletons of U_{2,2} sent to <e_1> in Z^2.

    With ``full_is_ambient`` the whole ground set goes to N; otherwise it
    goes to the span of the two singleton values.
    """
    m = from_uniform(2, 2)
    e1 = IntMatrix.from_columns([[1, 0]])
    values = {
        0b00: IntMatrix.zeros(2, 0),
        0b01: e1,
        0b10: e1,
        0b11: IntMatrix.identity(2) if full_is_ambient else e1,
    }
    return QuasiRep(m, PresentedModule.free(2), values, "remark_rho2" if full_is_ambient else "remark_rho2_span")


def graphic_quasirep(g: Graph) -> QuasiRep:
    """rho(S) = (span of endpoint differences + I_G) / I_G inside N = Z^V / I_G.

    I_G is spanned by the minimal vertex of each component, so N is free on
    the remaining vertices (in vertex order) and a minimal vertex maps to 0.
    """
    if g.vertices == 0:
        raise ValueError("graph has no vertices")
    m = from_graph(g)
    pos = graphic_vertex_index(g)
    k = len(pos)

    def image(v: int) -> list[int]:
        col = [0] * k
        if v in pos:
            col[pos[v]] = 1
        return col

    def value(F: int) -> IntMatrix:
        cols = []
        for e in elements_of(F):
            u, v = g.edges[e - 1]
            a, b = image(u), image(v)
            c = [x - y for x, y in zip(a, b)]
            if any(c):
                cols.append(c)
        return IntMatrix.from_columns(cols, nrows=k) if cols else IntMatrix.zeros(k, 0)

    return _from_function(m, PresentedModule.free(k), value, "graphic")


def graphic_vertex_index(g: Graph) -> dict[int, int]:
    """Generator position of each non-minimal vertex in the graphic ambient."""
    labels = g.components((1 << g.m) - 1)
    free_vertices = [v for v in range(g.vertices) if labels[v] != v]
    return {v: k for k, v in enumerate(free_vertices)}


# -- validation


def validate(q: QuasiRep) -> Verdict:
    m = q.matroid
    n = m.n
    full = m.full
    N = q.ambient
    if lattice_contains(N.relations.hstack(q.rho(full)), IntMatrix.identity(N.gens)) is not None:
        return Verdict.fail("rho(E) = N", elements_of(full), "rho(E) is a proper submodule of N")
    if q.rho(0).cols and N.contains(q.rho(0)) is not None:
        return Verdict.fail("rho(empty) = 0", [], "rho of the empty set is nonzero")
    ranks: dict[int, int] = {}
    for s in range(1 << n):
        k = q.key(s)
        if k not in ranks:
            ranks[k] = q.rank_of_value(s)
        if ranks[k] != m.rank_table[s]:
            return Verdict.fail(
                "rank axiom",
                elements_of(s),
                f"rank of rho(S) is {ranks[k]}, matroid rank is {m.rank_table[s]}",
            )
    seen: set[tuple[int, int]] = set()
    for s in range(1 << n):
        for b in range(n):
            bit = 1 << b
            if s & bit:
                continue
            t = s | bit
            pair = (q.key(s), q.key(t))
            if pair in seen or pair[0] == pair[1]:
                continue
            seen.add(pair)
            if not q.contains(s, t):
                return Verdict.fail("monotonicity", (elements_of(s), elements_of(t)), "rho(S) not inside rho(S+e)")
            if m.rank_table[s] == m.rank_table[t] and not q.contains(t, s):
                return Verdict.fail(
                    "equal rank gives equal values",
                    (elements_of(s), elements_of(t)),
                    "values differ on nested subsets of equal rank",
                )
    return Verdict.ok("quasi-representation axioms")


# -- operations


def _expand(mask: int, e: int) -> int:
    """Insert a zero bit at position e-1."""
    low = mask & ((1 << (e - 1)) - 1)
    high = mask >> (e - 1)
    return low | (high << e)


def submodule_presentation(N: PresentedModule, G: IntMatrix) -> tuple[PresentedModule, IntMatrix]:
    """Present the submodule of N generated by the columns of G.

    Returns (L, B): B is a lattice basis (in N's coordinates) of the preimage
    of the submodule, and L presents it on those basis vectors.
    """
    rel = N.relations
    span = G.hstack(rel) if rel.cols else G
    if span.cols == 0:
        return PresentedModule.free(0), IntMatrix.zeros(N.gens, 0)
    H, _, piv = column_echelon(span)
    B = H.select_columns(range(len(piv)))
    coords = [solve_in_lattice(B, piv, c) for c in rel.columns()]
    L = PresentedModule(len(piv), IntMatrix.from_columns(coords, nrows=len(piv)))
    return L, B


def express(B: IntMatrix, v: IntMatrix) -> IntMatrix:
    """Coordinates of the columns of v in the echelon basis B."""
    H, _, piv = column_echelon(B)
    if H != B:
        raise ValueError("basis must be in echelon form")
    cols = []
    for c in v.columns():
        x = solve_in_lattice(B, piv, c)
        if x is None:
            raise ValueError("vector outside the lattice")
        cols.append(x)
    return IntMatrix.from_columns(cols, nrows=B.cols) if cols else IntMatrix.zeros(B.cols, 0)


def delete_q(q: QuasiRep, e: int) -> QuasiRep:
    m = q.matroid
    m._check(e)
    md = m.delete(e)
    rest = m.full & ~(1 << (e - 1))
    N = q.ambient
    if q.equal_values(rest, m.full):
        return _from_function(md, N, lambda F: q.rho(_expand(F, e)), q.label)
    L, B = submodule_presentation(N, q.rho(rest))

    def value(F: int) -> IntMatrix:
        return express(B, q.rho(_expand(F, e)))

    return _from_function(md, L, value, q.label)


def contract_q(q: QuasiRep, e: int) -> QuasiRep:
    m = q.matroid
    m._check(e)
    mc = m.contract(e)
    bit = 1 << (e - 1)
    N = q.ambient.quotient(q.rho(bit))
    return _from_function(mc, N, lambda F: q.rho(_expand(F, e) | bit), q.label)


def direct_sum_q(q1: QuasiRep, q2: QuasiRep) -> QuasiRep:
    m = q1.matroid.direct_sum(q2.matroid)
    N = q1.ambient.direct_sum(q2.ambient)
    n1 = q1.n
    lo = (1 << n1) - 1
    g1, g2 = q1.gens, q2.gens

    def value(F: int) -> IntMatrix:
        A = q1.rho(F & lo)
        B = q2.rho(F >> n1)
        top = A.hstack(IntMatrix.zeros(g1, B.cols))
        bottom = IntMatrix.zeros(g2, A.cols).hstack(B)
        return top.vstack(bottom)

    label = f"{q1.label}+{q2.label}" if q1.label or q2.label else ""
    return _from_function(m, N, value, label)


def relax_q(q: QuasiRep, s0: int) -> QuasiRep:
    mr = q.matroid.relax(s0)
    full = q.matroid.full

    def value(F: int) -> IntMatrix:
        return q.rho(full) if F == s0 else q.rho(F)

    vals = {F: _reduce(value(F)) for F in mr.flats()}
    vals[s0] = _reduce(q.rho(full))
    return QuasiRep(mr, q.ambient, vals, q.label)


def permute_q(q: QuasiRep, order) -> QuasiRep:
    """Reorder the ground set: new element k is old element order[k-1]."""
    mp = q.matroid.permute(order)

    def old_mask(s: int) -> int:
        t = 0
        for k, e in enumerate(order):
            if s >> k & 1:
                t |= 1 << (e - 1)
        return t

    return _from_function(mp, q.ambient, lambda F: q.rho(old_mask(F)), q.label)


# -- coloop hypotheses


def coloop_hypotheses(q: QuasiRep, e: int) -> Verdict:
    """The conditions needed for the coloop sequence at e.

    rho(E-e) must be saturated in N (N / rho(E-e) torsion free), rho(e) must
    be free of rank one, and N must be the internal direct sum of the two.
    """
    m = q.matroid
    if not m.is_coloop(e):
        return Verdict.fail("coloop", e, "element is not a coloop", kind="hypothesis")
    bit = 1 << (e - 1)
    rest = m.full & ~bit
    N = q.ambient
    Qrest = cokernel_class(q.quotient(rest))
    if Qrest.torsion:
        return Verdict.fail("saturation", elements_of(rest), f"N / rho(E-e) = {Qrest} has torsion", kind="hypothesis")
    Le, Be = submodule_presentation(N, q.rho(bit))
    if cokernel_class(Le) != FgaClass(1):
        return Verdict.fail("rho(e) free of rank one", [e], f"rho(e) = {cokernel_class(Le)}", kind="hypothesis")
    Lr, Br = submodule_presentation(N, q.rho(rest))
    both = ModuleMap(Lr.direct_sum(Le), N, Br.hstack(Be))
    if not both.is_isomorphism():
        return Verdict.fail("rho(E) = rho(E-e) + rho(e) direct", elements_of(m.full), "sum is not direct or not all of N", kind="hypothesis")
    return Verdict.ok("coloop hypotheses")
