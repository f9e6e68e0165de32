import random

import pytest

import matcoh.verify as verify
from matcoh.cohomology import CohomologyTable, build_complex, compute
from matcoh.chromatic import ChromaticComplex, chromatic_cohomology
from matcoh.exactlin import FgaClass
from matcoh.graph import Graph, complete_graph, cycle_graph
from matcoh.matroid import from_graph, from_uniform
from matcoh.quasirep import diagonal_u22, free_default, graphic_quasirep, uniform_canonical
from matcoh.verify import (
    les_sequences,
    random_graph,
    random_loop_bearing,
    random_pair,
    random_parallel_bearing,
    raw_field_check,
    uct_check,
    verify_coloop,
    verify_euler,
    verify_identities,
    verify_kunneth,
    verify_les_ranks,
    verify_ses,
)


@pytest.mark.parametrize("e", [1, 2, 3])
def test_ses_u23(e):
    assert verify_ses(uniform_canonical(2, 3), e).passed


def test_ses_k4_and_random_graphs():
    q = graphic_quasirep(complete_graph(4))
    assert verify_ses(q, 1).passed and verify_ses(q, 6).passed
    rng = random.Random(2)
    for _ in range(4):
        q = graphic_quasirep(random_graph(rng, 4, connected=True))
        for e in range(1, q.n + 1):
            if not q.matroid.is_coloop(e):
                assert verify_ses(q, e).passed


def test_ses_rejects_coloop():
    with pytest.raises(ValueError):
        verify_ses(uniform_canonical(2, 2), 1)


def test_ses_negative_control(monkeypatch):
    # dropping the sign on alpha must break the chain-map check
    monkeypatch.setattr(verify, "_alpha_sign", lambda S, e: verify.epsilon(verify._expand(S, e), e))
    v = verify_ses(uniform_canonical(2, 3), 3)
    assert not v.passed and "alpha" in v.detail


@pytest.mark.parametrize("n", [1, 2, 3])
def test_coloop_uniform(n):
    for e in range(1, n + 1):
        assert verify_coloop(uniform_canonical(n, n), e).passed


def test_coloop_bridge_and_hypothesis_failure():
    g = Graph.build(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
    assert verify_coloop(graphic_quasirep(g), 4).passed
    v = verify_coloop(diagonal_u22(2, 1), 2)
    assert not v.passed and v.kind == "hypothesis"


def test_les_ranks():
    assert verify_les_ranks(uniform_canonical(2, 3), 1).passed
    assert verify_les_ranks(graphic_quasirep(cycle_graph(4)), 2).passed
    seqs = les_sequences(uniform_canonical(2, 3), 1)
    assert all(len(s) > 0 for s in seqs.values())


def test_identities_and_euler():
    v = verify_identities(graphic_quasirep(complete_graph(4)))
    assert v.passed, v
    assert verify_identities(free_default(from_uniform(1, 3))).passed
    rng = random.Random(4)
    for _ in range(3):
        assert verify_identities(random_loop_bearing(rng, 5)).passed
        assert verify_identities(random_parallel_bearing(rng, 5)).passed


def test_euler_negative_control():
    q = uniform_canonical(2, 3)
    t = compute(q)
    bad = CohomologyTable(t.n, t.j_max, {**t.cells, (0, 2): FgaClass(2)}, t.euler, t.meta)
    assert not verify_euler(q, bad).passed


def test_kunneth():
    assert verify_kunneth(uniform_canonical(2, 3), diagonal_u22(2, 3)).passed
    rng = random.Random(8)
    for _ in range(3):
        assert verify_kunneth(random_pair(rng, 3), random_pair(rng, 3)).passed


@pytest.mark.parametrize("q", [diagonal_u22(4, 6), diagonal_u22(5, 5), uniform_canonical(3, 4),
                               graphic_quasirep(complete_graph(4))], ids=["d46", "d55", "U34", "K4"])
def test_uct(q):
    c = build_complex(q)
    assert uct_check(c, compute(q)).passed
    assert raw_field_check(c).passed


def test_uct_chromatic():
    g = cycle_graph(3)
    assert uct_check(ChromaticComplex(g), chromatic_cohomology(g)).passed


def test_uct_negative_control():
    q = diagonal_u22(2, 3)
    t = compute(q)
    bad = CohomologyTable(t.n, t.j_max, {**t.cells, (1, 1): FgaClass(0, (6, 6))}, t.euler, t.meta)
    v = uct_check(build_complex(q), bad)
    assert not v.passed and v.witness["p"] in (2, 3)


def test_random_generators_deterministic():
    a = [random_pair(random.Random(s)).label for s in range(5)]
    b = [random_pair(random.Random(s)).label for s in range(5)]
    assert a == b
    q = random_loop_bearing(random.Random(1))
    assert q.matroid.loops()
    q = random_parallel_bearing(random.Random(1))
    assert q.matroid.parallel_pairs()
    assert from_graph(random_graph(random.Random(3), 5, connected=True)).n >= 0
