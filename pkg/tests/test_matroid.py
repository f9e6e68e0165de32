import random
from itertools import combinations

import pytest

from matcoh.exactlin import IntMatrix
from matcoh.graph import Graph, chromatic_polynomial, complete_graph, count_colorings, cycle_graph, path_graph
from matcoh.matroid import (
    MAX_ELEMENTS,
    from_graph,
    from_matrix,
    from_rank_function,
    from_rank_table,
    from_uniform,
    is_isomorphic,
    mask_of,
    non_pappus,
    pappus,
    popcount,
    validate_axioms,
)
from matcoh.poly import IntPoly
from oracles import brute_colorings, interpolate_chromatic, rank_fraction, uniform_char_poly


def _random_graph(rng, v):
    return Graph.build(v, [e for e in combinations(range(v), 2) if rng.random() < 0.5])


def test_poly_arithmetic():
    p = IntPoly.of([1, 2])  # 1 + 2q
    assert (p * p).to_list() == [1, 4, 4]
    assert (p - p).to_list() == []
    assert p(3) == 7
    assert IntPoly.of([0, 0, 1]).shift_one().to_list() == [1, 2, 1]
    assert IntPoly.of([1, 0, 0]).degree == 0


@pytest.mark.parametrize("seed", range(8))
def test_chromatic_polynomial_against_brute_force(seed):
    rng = random.Random(seed)
    g = _random_graph(rng, rng.randint(1, 5))
    P = chromatic_polynomial(g)
    assert P.to_list() == interpolate_chromatic(g.vertices, g.edges)
    for k in range(4):
        assert count_colorings(g, k) == brute_colorings(g.vertices, g.edges, k) == P(k)


def test_named_graphs():
    assert chromatic_polynomial(complete_graph(3)).to_list() == [0, 2, -3, 1]
    assert chromatic_polynomial(cycle_graph(4)).to_list() == [0, -3, 6, -4, 1]
    assert chromatic_polynomial(path_graph(3)).to_list() == [0, 1, -2, 1]
    g = Graph.build(3, [(2, 0), (1, 0)])
    assert g.edges == ((0, 1), (0, 2))
    with pytest.raises(ValueError):
        Graph.build(2, [(0, 5)])


@pytest.mark.parametrize("k,n", [(0, 0), (0, 3), (1, 1), (1, 4), (2, 3), (2, 4), (3, 5), (4, 4)])
def test_uniform(k, n):
    m = from_uniform(k, n)
    assert validate_axioms(m).passed
    assert m.rank == k
    assert m.char_poly().to_list() == uniform_char_poly(k, n)
    for s in range(1 << n):
        assert m.r(s) == min(k, popcount(s))


def test_axiom_failures_have_witnesses():
    bad = from_rank_table(2, [0, 1, 1, 3])
    v = validate_axioms(bad)
    assert not v.passed and v.property == "axiom 1" and v.witness == [1, 2]
    v = validate_axioms(from_rank_table(2, [0, 1, 1, 0]))
    assert v.property == "axiom 2"
    v = validate_axioms(from_rank_table(3, [0, 1, 1, 1, 1, 1, 1, 2]))
    assert not v.passed and v.property == "axiom 3"
    assert validate_axioms(from_rank_table(3, [0, 1, 1, 2, 1, 2, 2, 2])).passed
    v = validate_axioms(from_rank_table(3, [0, 0, 0, 1, 0, 1, 1, 1]))
    assert not v.passed and v.property == "axiom 3"


@pytest.mark.parametrize("seed", range(6))
def test_graphic_and_matrix_ranks(seed):
    rng = random.Random(seed)
    g = _random_graph(rng, rng.randint(2, 5))
    m = from_graph(g)
    assert validate_axioms(m).passed
    rows = [[0] * g.m for _ in range(g.vertices)]
    for k, (u, v) in enumerate(g.edges):
        rows[u][k] += 1
        rows[v][k] -= 1
    mm = from_matrix(IntMatrix.from_rows(rows, ncols=g.m)) if g.m else from_uniform(0, 0)
    assert mm.rank_table == m.rank_table
    for s in range(1 << g.m):
        cols = [k for k in range(g.m) if s >> k & 1]
        sub = [[r[k] for k in cols] for r in rows] if cols else []
        assert m.r(s) == (rank_fraction(sub) if cols else 0)


def test_delete_contract_and_classify():
    m = from_graph(Graph.build(3, [(0, 1), (1, 2), (1, 2), (2, 2)]))
    assert m.classify_element(4) == "loop"
    assert m.classify_element(1) == "coloop"
    assert m.classify_element(2) == "ordinary"
    assert m.parallel_pairs() == {(2, 3)}
    d = m.delete(2)
    assert d.n == 3 and d.rank == 2
    c = m.contract(2)
    assert c.rank == 1
    assert c.classify_element(2) == "loop"  # the parallel edge becomes a loop
    # deletion-contraction for the characteristic polynomial
    assert (m.delete(2).char_poly() - m.contract(2).char_poly()).to_list() == m.char_poly().to_list()


def test_flats_and_closure():
    m = from_uniform(2, 3)
    assert sorted(m.flats()) == [0, 1, 2, 4, 7]
    assert m.closure(0b011) == 0b111


def test_pappus_and_relaxation():
    p = pappus()
    assert validate_axioms(p).passed
    assert p.rank == 3 and p.n == 9
    assert len(p.circuit_hyperplanes()) == 9
    np_ = non_pappus()
    assert validate_axioms(np_).passed
    assert len(np_.circuit_hyperplanes()) == 8
    assert np_.rank_of((4, 5, 6)) == 3
    # relaxation adds exactly one basis, so the linear coefficient rises by one
    diff = (np_.char_poly() - p.char_poly()).to_list()
    assert diff == [-1, 1]
    with pytest.raises(ValueError):
        p.relax(mask_of((1, 2, 4)))


def test_k4_triangle_relaxation():
    m = from_graph(complete_graph(4))
    tri = sorted(m.circuit_hyperplanes())
    assert len(tri) == 4
    r = m.relax(tri[0])
    assert validate_axioms(r).passed
    assert not is_isomorphic(m, r)


def test_direct_sum_and_permute():
    a, b = from_uniform(1, 2), from_uniform(2, 3)
    s = a.direct_sum(b)
    assert s.char_poly().to_list() == (a.char_poly() * b.char_poly()).to_list()
    perm = s.permute([5, 4, 3, 2, 1])
    assert is_isomorphic(s, perm)
    assert from_rank_function(2, lambda x: popcount(x)).rank == 2


def test_size_limit():
    with pytest.raises(ValueError):
        from_uniform(1, MAX_ELEMENTS + 1)
