"""Matroids given by full rank tables over subsets of an ordered ground set.

Elements are numbered 1..n in the ambient order; subsets are bitmasks with
element k at bit k-1.  Every operation returns a new matroid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Sequence

from .exactlin import IntMatrix, RATIONAL, rank_over_field
from .graph import Graph
from .poly import IntPoly
from .report import Verdict

MAX_ELEMENTS = 20

CharPoly = IntPoly

PAPPUS_LINES = ("123", "148", "159", "247", "269", "357", "368", "456", "789")


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Matroid:
    n: int
    rank_table: tuple[int, ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.n > MAX_ELEMENTS:
            raise ValueError(f"ground sets above {MAX_ELEMENTS} elements are not supported")
        if len(self.rank_table) != 1 << self.n:
            raise ValueError(f"rank table needs {1 << self.n} entries, got {len(self.rank_table)}")
        if not self.names:
            object.__setattr__(self, "names", tuple(str(k) for k in range(1, self.n + 1)))

    # -- basic queries

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def rank(self) -> int:
        return self.rank_table[self.full]

    def r(self, mask: int) -> int:
        return self.rank_table[mask]

    def rank_of(self, elements: Iterable[int]) -> int:
        return self.rank_table[mask_of(elements)]

    def corank(self, mask: int) -> int:
        return self.rank - self.rank_table[mask]

    def _check(self, e: int):
        if not 1 <= e <= self.n:
            raise ValueError(f"element {e} is not in the ground set 1..{self.n}")

    def name_of(self, mask: int) -> list[str]:
        return [self.names[e - 1] for e in elements_of(mask)]

    def closure(self, mask: int) -> int:
        r = self.rank_table[mask]
        out = mask
        for k in range(self.n):
            b = 1 << k
            if not mask & b and self.rank_table[mask | b] == r:
                out |= b
        return out

    def is_flat(self, mask: int) -> bool:
        return self.closure(mask) == mask

    def flats(self) -> list[int]:
        return [s for s in range(1 << self.n) if self.is_flat(s)]

    def is_loop(self, e: int) -> bool:
        self._check(e)
        return self.rank_table[1 << (e - 1)] == 0

    def is_coloop(self, e: int) -> bool:
        self._check(e)
        return self.corank(self.full & ~(1 << (e - 1))) == 1

    def classify_element(self, e: int) -> str:
        if self.is_loop(e):
            return "loop"
        if self.is_coloop(e):
            return "coloop"
        return "ordinary"

    def parallel_pairs(self) -> set[tuple[int, int]]:
        out = set()
        for a in range(1, self.n + 1):
            for b in range(a + 1, self.n + 1):
                if not self.is_loop(a) and not self.is_loop(b) and self.rank_of((a, b)) == 1:
                    out.add((a, b))
        return out

    def loops(self) -> list[int]:
        return [e for e in range(1, self.n + 1) if self.is_loop(e)]

    def coloops(self) -> list[int]:
        return [e for e in range(1, self.n + 1) if self.is_coloop(e)]

    # -- constructions

    def delete(self, e: int) -> "Matroid":
        self._check(e)
        return self._restrict_to(self.full & ~(1 << (e - 1)), lambda s: self.rank_table[s])

    def contract(self, e: int) -> "Matroid":
        self._check(e)
        b = 1 << (e - 1)
        re = self.rank_table[b]
        return self._restrict_to(self.full & ~b, lambda s: self.rank_table[s | b] - re)

    def _restrict_to(self, keep: int, rank) -> "Matroid":
        kept = elements_of(keep)
        table = []
        for sub in range(1 << len(kept)):
            s = 0
            for idx, e in enumerate(kept):
                if sub >> idx & 1:
                    s |= 1 << (e - 1)
            table.append(rank(s))
        return Matroid(len(kept), tuple(table), tuple(self.names[e - 1] for e in kept))

    def direct_sum(self, other: "Matroid") -> "Matroid":
        n1 = self.n
        lo = (1 << n1) - 1
        table = tuple(
            self.rank_table[s & lo] + other.rank_table[s >> n1]
            for s in range(1 << (n1 + other.n))
        )
        return Matroid(n1 + other.n, table, _sum_names(self.names, other.names))

    def circuit_hyperplanes(self) -> set[int]:
        rk = self.rank
        out = set()
        for s in range(1 << self.n):
            size = popcount(s)
            if self.rank_table[s] != rk - 1 or size - 1 != rk - 1:
                continue
            ok = True
            for k in range(self.n):
                b = 1 << k
                if s & b:
                    if self.rank_table[s & ~b] != rk - 1:
                        ok = False
                        break
                elif self.rank_table[s | b] - 1 != rk - 1:
                    ok = False
                    break
            if ok:
                out.add(s)
        return out

    def relax(self, s0: int) -> "Matroid":
        if s0 not in self.circuit_hyperplanes():
            raise ValueError(f"{elements_of(s0)} is not a circuit-hyperplane")
        table = list(self.rank_table)
        table[s0] = self.rank
        return Matroid(self.n, tuple(table), self.names)

    def permute(self, order: Sequence[int]) -> "Matroid":
        """Matroid whose k-th element is element ``order[k-1]`` of self."""
        if sorted(order) != list(range(1, self.n + 1)):
            raise ValueError("not a permutation of the ground set")
        table = []
        for s in range(1 << self.n):
            t = 0
            for k, e in enumerate(order):
                if s >> k & 1:
                    t |= 1 << (e - 1)
            table.append(self.rank_table[t])
        return Matroid(self.n, tuple(table), tuple(self.names[e - 1] for e in order))

    def char_poly(self) -> IntPoly:
        rk = self.rank
        coeffs = [0] * (rk + 1)
        for s in range(1 << self.n):
            coeffs[rk - self.rank_table[s]] += -1 if popcount(s) & 1 else 1
        return IntPoly(tuple(coeffs))

    def to_json(self) -> dict:
        return {"type": "rank_table", "n": self.n, "ranks": list(self.rank_table)}


def _sum_names(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if set(a) & set(b):
        return tuple(f"a{x}" for x in a) + tuple(f"b{x}" for x in b)
    return a + b


# -- constructors


def from_rank_table(n: int, ranks: Sequence[int]) -> Matroid:
    return Matroid(n, tuple(int(x) for x in ranks))


def from_rank_function(n: int, rank) -> Matroid:
    return Matroid(n, tuple(rank(s) for s in range(1 << n)))


def from_uniform(k: int, n: int) -> Matroid:
    if not 0 <= k <= n:
        raise ValueError(f"U_{{{k},{n}}} needs 0 <= k <= n")
    return from_rank_function(n, lambda s: min(k, popcount(s)))


def from_graph(g: Graph) -> Matroid:
    v = g.vertices
    return from_rank_function(g.m, lambda s: v - g.component_count(s))


def from_matrix(A: IntMatrix) -> Matroid:
    """Column matroid over Q."""
    cols = A.columns()
    n = A.cols

    def rank(s: int) -> int:
        rows = [cols[k] for k in range(n) if s >> k & 1]
        return rank_over_field([dict((i, x) for i, x in enumerate(c) if x) for c in rows], RATIONAL)

    return from_rank_function(n, rank)


def pappus() -> Matroid:
    lines = {mask_of(int(c) for c in line) for line in PAPPUS_LINES}

    def rank(s: int) -> int:
        size = popcount(s)
        if size <= 2:
            return size
        return 2 if s in lines else 3

    return from_rank_function(9, rank)


def non_pappus() -> Matroid:
    return pappus().relax(mask_of((4, 5, 6)))


# -- validation


def validate_axioms(m: Matroid) -> Verdict:
    """Check boundedness, monotonicity and submodularity.

    Monotonicity is tested on single-element extensions and submodularity in
    its local form r(S+a) + r(S+b) >= r(S+a+b) + r(S); both are equivalent
    to the global axioms, so the check is exact for every n.
    """
    t = m.rank_table
    n = m.n
    if t[0] != 0:
        return Verdict.fail("axiom 1", [], "rank of the empty set is nonzero")
    for s in range(1 << n):
        if not 0 <= t[s] <= popcount(s):
            return Verdict.fail("axiom 1", elements_of(s), f"rank {t[s]} outside [0, {popcount(s)}]")
    for s in range(1 << n):
        for k in range(n):
            b = 1 << k
            if not s & b and t[s | b] < t[s]:
                return Verdict.fail("axiom 2", (elements_of(s), elements_of(s | b)), "rank decreases under inclusion")
    for s in range(1 << n):
        for a in range(n):
            ba = 1 << a
            if s & ba:
                continue
            for c in range(a + 1, n):
                bc = 1 << c
                if s & bc:
                    continue
                if t[s | ba] + t[s | bc] < t[s | ba | bc] + t[s]:
                    return Verdict.fail(
                        "axiom 3",
                        (elements_of(s | ba), elements_of(s | bc)),
                        "submodularity fails",
                    )
    return Verdict.ok("matroid axioms")


def is_isomorphic(m1: Matroid, m2: Matroid, limit: int = 8) -> bool:
    if m1.n != m2.n:
        return False
    if m1.rank_table == m2.rank_table:
        return True
    if m1.n > limit:
        raise ValueError(f"isomorphism search is limited to n <= {limit}")
    if sorted(m1.rank_table) != sorted(m2.rank_table):
        return False
    for perm in permutations(range(1, m1.n + 1)):
        if m1.permute(perm).rank_table == m2.rank_table:
            return True
    return False
