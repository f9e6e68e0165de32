import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matcoh.exactlin import (
    ComplexError,
    FgaClass,
    IntMatrix,
    ModuleMap,
    PresentedModule,
    RATIONAL,
    cohomology_at,
    cokernel_class,
    column_echelon,
    compound_matrix,
    determinant,
    elementary_divisors,
    exterior_power,
    hermite_basis,
    integer_kernel,
    lattice_contains,
    lattice_equal,
    preimage_lattice,
    rank_over_field,
    smith_diagonal,
    snf,
    wedge_insert,
)
from oracles import determinantal_divisors, leibniz_det, rank_fraction

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_matches_determinantal_divisors(rows):
    A = IntMatrix.from_rows(rows)
    dec = snf(A)
    assert dec.U @ A @ dec.V == dec.D
    assert abs(determinant(dec.U.to_rows())) == 1
    assert abs(determinant(dec.V.to_rows())) == 1
    diag = [d for d in dec.diagonal if d]
    assert diag == determinantal_divisors(rows)
    for k in range(dec.D.rows):
        for c in range(dec.D.cols):
            if k != c:
                assert dec.D[k, c] == 0


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_elementary_divisors_sparse_path(rows):
    A = IntMatrix.from_rows(rows)
    rank, tors = elementary_divisors(A)
    divs = determinantal_divisors(rows)
    assert rank == len(divs)
    assert sorted(tors) == sorted(d for d in divs if d > 1)
    sparse = [{c: v for c, v in enumerate(r) if v} for r in rows]
    assert elementary_divisors(sparse) == (rank, tors)


@settings(max_examples=100, deadline=None)
@given(matrices(5, 5))
def test_determinant_bareiss(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    assert determinant(sq) == leibniz_det(sq)


@settings(max_examples=100, deadline=None)
@given(matrices(5, 5), st.sampled_from([0, 2, 3, 5]))
def test_rank_over_field(rows, p):
    assert rank_over_field(IntMatrix.from_rows(rows), p) == rank_fraction(rows, p)


@settings(max_examples=100, deadline=None)
@given(matrices(4, 5))
def test_column_echelon_and_kernel(rows):
    A = IntMatrix.from_rows(rows)
    H, V, piv = column_echelon(A, transform=True)
    assert A @ V == H
    assert abs(determinant(V.to_rows())) == 1
    assert lattice_equal(A, H)
    K = integer_kernel(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - rank_fraction(rows)
    # kernel is saturated: no vector outside it has a multiple inside
    if K.cols:
        assert cokernel_class(PresentedModule(A.cols, K)).torsion == ()


def test_hermite_basis_is_canonical():
    A = IntMatrix.from_columns([[2, 4], [6, 8], [4, 4]])
    B = IntMatrix.from_columns([[4, 4], [2, 4], [0, 4]])
    assert lattice_equal(A, B)
    assert hermite_basis(A) == hermite_basis(B)
    assert lattice_contains(A, IntMatrix.from_columns([[2, 0]])) is None
    assert lattice_contains(A, IntMatrix.from_columns([[1, 0]])) == 0


def test_preimage_lattice():
    F = IntMatrix.from_rows([[2, 0], [0, 3]])
    L = IntMatrix.from_columns([[6, 0], [0, 6]])
    P = preimage_lattice(F, L)
    assert lattice_equal(P, IntMatrix.from_columns([[3, 0], [0, 2]]))


def test_fga_class_rules():
    assert str(FgaClass(2, (2,))) == "Z^2 + Z/2"
    assert str(FgaClass()) == "0"
    assert FgaClass.from_factors([4, 6, 0]) == FgaClass(1, (2, 12))
    assert FgaClass.from_factors([2, 3]) == FgaClass(0, (6,))
    with pytest.raises(ValueError):
        FgaClass(0, (4, 6))
    with pytest.raises(ValueError):
        FgaClass(0, (1,))
    a = FgaClass(1, (2,))
    assert a.tensor(FgaClass(0, (4,))) == FgaClass(0, (2, 4))
    assert a.dim_mod(2) == 2 and a.dim_mod(3) == 1
    assert FgaClass.from_json(a.to_json()) == a


def test_cokernel_class():
    P = PresentedModule(3, IntMatrix.from_columns([[2, 0, 0], [0, 4, 0]]))
    assert cokernel_class(P) == FgaClass(1, (2, 4))


def test_wedge_insert_signs():
    assert wedge_insert((0, 2), 1) == (-1, (0, 1, 2))
    assert wedge_insert((1, 2), 0) == (1, (0, 1, 2))
    assert wedge_insert((0, 1), 1) is None


@pytest.mark.parametrize("orders,j,expected", [
    ([0, 0, 0], 2, FgaClass(3)),
    ([2, 0], 1, FgaClass(1, (2,))),
    ([2, 3], 2, FgaClass()),
    ([4, 6], 2, FgaClass(0, (2,))),
    ([2, 2, 0], 2, FgaClass(0, (2, 2, 2))),
])
def test_exterior_power_of_cyclic_sums(orders, j, expected):
    # wedge^j of a sum of cyclics is the sum over J of Z/gcd(d_J)
    assert cokernel_class(exterior_power(PresentedModule.cyclic_sum(orders), j)) == expected


def test_compound_matrix_multiplicative():
    rng = random.Random(3)
    for _ in range(20):
        A = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)])
        B = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)])
        for j in range(5):
            assert compound_matrix(A @ B, j) == compound_matrix(A, j) @ compound_matrix(B, j)


def test_cohomology_at_simple_complex():
    # Z --2--> Z --0--> Z: ker = Z, im = 2Z
    Z = PresentedModule.free(1)
    f_in = ModuleMap(Z, Z, IntMatrix.from_rows([[2]]))
    f_out = ModuleMap(Z, Z, IntMatrix.from_rows([[0]]))
    assert cohomology_at(f_in, f_out, Z) == FgaClass(0, (2,))
    assert cohomology_at(None, f_in, Z) == FgaClass()
    Z4 = PresentedModule.cyclic_sum([4])
    g = ModuleMap(Z4, Z4, IntMatrix.from_rows([[2]]))
    assert cohomology_at(g, g, Z4) == FgaClass()
    with pytest.raises(ComplexError):
        h = ModuleMap(Z, Z, IntMatrix.from_rows([[1]]))
        cohomology_at(h, h, Z)


def test_module_map_isomorphism():
    Z6 = PresentedModule.cyclic_sum([6])
    Z23 = PresentedModule.cyclic_sum([2, 3])
    f = ModuleMap(Z23, Z6, IntMatrix.from_rows([[3, 2]]))
    assert f.is_well_defined() and f.is_isomorphism()
    g = ModuleMap(Z23, Z6, IntMatrix.from_rows([[3, 0]]))
    assert g.is_well_defined() and not g.is_isomorphism()
    bad = ModuleMap(Z23, Z6, IntMatrix.from_rows([[1, 0]]))
    assert not bad.is_well_defined()


def test_smith_diagonal_helper():
    assert smith_diagonal(IntMatrix.from_rows([[2, 4], [6, 8]])) == [2, 4]
    assert rank_over_field([], RATIONAL) == 0
