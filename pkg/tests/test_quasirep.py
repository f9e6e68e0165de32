import random

import pytest

from matcoh.exactlin import FgaClass, IntMatrix, cokernel_class, lattice_equal
from matcoh.graph import Graph, complete_graph, cycle_graph
from matcoh.matroid import from_graph, from_matrix, from_uniform, mask_of, pappus
from matcoh.quasirep import (
    RepresentationError,
    canonical_from_matrix,
    coloop_hypotheses,
    contract_q,
    delete_q,
    diagonal_u22,
    direct_sum_q,
    free_default,
    graphic_quasirep,
    permute_q,
    relax_q,
    remark_u22,
    saturated_from_matrix,
    scaled_default,
    uniform_canonical,
    validate,
)
from matcoh.verify import random_graph, random_pair


def test_canonical_identity():
    q = canonical_from_matrix(from_uniform(2, 2), IntMatrix.identity(2))
    assert validate(q).passed
    assert lattice_equal(q.rho(0b01), IntMatrix.from_columns([[1, 0]]))
    assert lattice_equal(q.rho(0b10), IntMatrix.from_columns([[0, 1]]))


def test_canonical_rejects_wrong_matrix():
    with pytest.raises(RepresentationError):
        canonical_from_matrix(from_uniform(2, 3), IntMatrix.from_rows([[1, 0, 1], [0, 1, 0]]))


def test_canonical_k3_and_loops():
    A = IntMatrix.from_rows([[1, 1, 0, 0], [-1, 0, 1, 0], [0, -1, -1, 0]])
    m = from_matrix(A)
    q = canonical_from_matrix(m, A)
    assert validate(q).passed
    assert q.rho(0b1000).cols == 0 or q.rho(0b1000).is_zero()
    assert cokernel_class(q.ambient) == FgaClass(2)


def test_free_default_always_valid():
    rng = random.Random(7)
    for _ in range(15):
        q = free_default(random_pair(rng, 5).matroid)
        assert validate(q).passed
    q = free_default(from_uniform(0, 3))
    assert q.gens == 0 and validate(q).passed


def test_diagonal_u22():
    q = diagonal_u22(2, 3)
    assert validate(q).passed
    assert cokernel_class(q.quotient(0b01)) == FgaClass(1, (2,))
    assert cokernel_class(q.quotient(0b10)) == FgaClass(1, (3,))
    with pytest.raises(ValueError):
        diagonal_u22(0, 1)


def test_remark_variants():
    # singletons sharing a line: valid while rho(E) is all of N
    assert validate(remark_u22(True)).passed
    v = validate(remark_u22(False))
    assert not v.passed and v.witness == [1, 2]


def test_validate_catches_rank_failure():
    q = scaled_default(from_uniform(2, 3), 2)
    assert validate(q).passed
    A = IntMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    q = canonical_from_matrix(from_uniform(2, 3), A)
    broken = type(q)(q.matroid, q.ambient, {**q.assignment, 0b011: IntMatrix.from_columns([[1, 0]])}, "broken")
    assert not validate(broken).passed


def test_graphic_quasirep():
    q = graphic_quasirep(complete_graph(3))
    assert validate(q).passed
    assert cokernel_class(q.ambient) == FgaClass(2)
    q = graphic_quasirep(Graph.build(2, [(0, 1)]))
    assert cokernel_class(q.ambient) == FgaClass(1) and q.contains(0, 1) and q.equal_values(1, 1)
    q = graphic_quasirep(Graph.build(4, [(0, 1), (2, 3)]))
    assert cokernel_class(q.ambient) == FgaClass(2)
    for seed in range(5):
        assert validate(graphic_quasirep(random_graph(random.Random(seed), 5))).passed


def test_minors_stay_valid():
    q = graphic_quasirep(cycle_graph(4))
    for e in range(1, 5):
        assert validate(delete_q(q, e)).passed
        assert validate(contract_q(q, e)).passed
    c = contract_q(canonical_from_matrix(from_uniform(2, 2), IntMatrix.identity(2)), 1)
    assert cokernel_class(c.ambient) == FgaClass(1)
    assert cokernel_class(c.quotient(0b1)) == FgaClass()
    d = delete_q(free_default(from_uniform(2, 3)), 3)
    assert d.matroid.rank_table == from_uniform(2, 2).rank_table


def test_direct_sum_permute_relax():
    s = direct_sum_q(diagonal_u22(2, 3), free_default(from_uniform(1, 2)))
    assert validate(s).passed and s.n == 4
    assert validate(permute_q(s, [4, 3, 2, 1])).passed
    k4 = from_graph(complete_graph(4))
    tri = sorted(k4.circuit_hyperplanes())[0]
    r = relax_q(free_default(k4), tri)
    assert validate(r).passed
    assert r.equal_values(tri, r.matroid.full)
    p = free_default(pappus())
    rp = relax_q(p, mask_of((4, 5, 6)))
    assert validate(rp).passed


def test_saturated_and_uniform_canonical():
    A = IntMatrix.from_rows([[2, 0, 1], [0, 1, 1]])
    m = from_matrix(A)
    q = saturated_from_matrix(m, A)
    assert validate(q).passed and q.label == "saturated"
    for k, n in [(0, 0), (0, 3), (1, 4), (3, 4), (4, 4), (5, 6)]:
        assert validate(uniform_canonical(k, n)).passed
    with pytest.raises(RepresentationError):
        uniform_canonical(2, 4)


def test_coloop_hypotheses():
    assert coloop_hypotheses(uniform_canonical(3, 3), 2).passed
    v = coloop_hypotheses(diagonal_u22(2, 1), 2)
    assert not v.passed and v.kind == "hypothesis" and v.property == "saturation"
    v = coloop_hypotheses(free_default(from_uniform(2, 3)), 1)
    assert not v.passed and v.property == "coloop"
