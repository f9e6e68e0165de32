import random

import pytest

from matcoh.arrangement import (
    Arrangement,
    ArrangementComplex,
    boolean_arrangement,
    compare,
    essentialization,
    essentialization_les_check,
    graphic_arrangement,
    kernel_basis,
)
from matcoh.cohomology import build_complex, field_table
from matcoh.graph import complete_graph, cycle_graph
from matcoh.matroid import from_uniform
from matcoh.quasirep import uniform_canonical
from fractions import Fraction
from oracles import rank_fraction


def test_kernel_basis():
    rows = [[Fraction(1), Fraction(1), Fraction(0)]]
    K = kernel_basis(rows, 3)
    assert len(K) == 2
    for v in K:
        assert sum(a * b for a, b in zip(rows[0], v)) == 0


def test_boolean_two_null_spaces():
    c = ArrangementComplex(boolean_arrangement(2))
    assert c.dim_h(0b11) == 0 and c.dim_h(0b01) == 1 and c.dim_h(0) == 2
    expected = field_table(build_complex(uniform_canonical(2, 2)))
    assert c.table() == expected


def test_empty_arrangement():
    a = Arrangement.build(1, [])
    c = ArrangementComplex(a)
    assert c.table() == {(0, 0): 1, (0, 1): 1}


def test_k3_matches_u23():
    a = graphic_arrangement(complete_graph(3))
    assert a.matroid().rank_table == from_uniform(2, 3).rank_table
    assert ArrangementComplex(a).table() == field_table(build_complex(uniform_canonical(2, 3)))


@pytest.mark.parametrize("a", [
    boolean_arrangement(1),
    boolean_arrangement(3),
    graphic_arrangement(complete_graph(3)),
    graphic_arrangement(cycle_graph(4)),
    Arrangement.build(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]]),
], ids=["B1", "B3", "K3", "C4", "rank3"])
def test_compare(a):
    assert ArrangementComplex(a).check_d_squared() is None
    v = compare(a)
    assert v.passed, v


def test_random_rank_three():
    rng = random.Random(5)
    normals = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(5)]
    while rank_fraction([list(c) for c in zip(*normals)]) < 3:
        normals = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(5)]
    assert compare(Arrangement.build(3, normals)).passed


def test_essentialization():
    a = graphic_arrangement(complete_graph(3), essential=False)
    assert a.dim == 3
    e = essentialization(a)
    assert e.dim == 2 and e.matroid().rank_table == a.matroid().rank_table
    assert essentialization_les_check(a).passed
    assert essentialization_les_check(graphic_arrangement(cycle_graph(4), essential=False)).passed
    v = essentialization_les_check(boolean_arrangement(2))
    assert not v.passed and v.kind == "hypothesis"
