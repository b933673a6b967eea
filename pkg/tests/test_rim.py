import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rs_list_decoding.codes import vandermonde_row
from rs_list_decoding.errors import DegenerateHypergraph, DimensionError, NoSubmatrix
from rs_list_decoding.finite_field import FieldSpec, get_field, make_rng, sample_distinct_points
from rs_list_decoding.hypergraph import Hypergraph, is_weakly_partition_connected
from rs_list_decoding.rim import (
    PartialAssignment,
    RimRow,
    SymbolicEntry,
    SymbolicRankTester,
    SymbolicRIM,
    build_rim,
    build_type_map,
    delete_rows,
    evaluate,
    is_full_column_rank_symbolic,
    is_type_ordered,
    rank_concrete,
    smallest_nonsingular_submatrix,
    symbolic_determinant,
    type_id,
    type_order,
)

GF7 = FieldSpec.prime(7)
GF13 = FieldSpec.prime(13)


def test_build_rim_block_structure():
    H = Hypergraph(7, ({1, 2, 4}, {5, 6}, {7}))
    M = build_rim(H, 2)
    print(M.to_dict())
    assert M.columns == 12
    assert M.rows == (RimRow(1, 1, 2), RimRow(1, 1, 4), RimRow(2, 5, 6))
    assert M.entry(0, 0) == SymbolicEntry(1, 0, False)
    assert M.entry(0, 3) == SymbolicEntry(1, 1, True)
    assert M.entry(0, 4) is None
    assert M.entry(2, 9) == SymbolicEntry(2, 1, False)
    single = build_rim(Hypergraph(2, ({1, 2},)), 3)
    assert single.rows == (RimRow(1, 1, None),)
    with pytest.raises(DegenerateHypergraph):
        build_rim(Hypergraph(1, ({1},)), 2)


def test_type_order():
    H = Hypergraph(3, ({2}, {1, 3}, {1}))
    ordered, types, permutation = type_order(H)
    assert ordered.edges == ({1}, {2}, {1, 3})
    assert permutation == (2, 3, 1)
    assert types.types == (type_id({1}, 3), type_id({2}, 3), type_id({1, 3}, 3))
    assert is_type_ordered(ordered) and not is_type_ordered(H)
    already = Hypergraph(3, ({1}, {1, 2}, {1, 2}))
    assert type_order(already)[2] == (1, 2, 3)
    swapped = Hypergraph(2, ({1, 2}, {1}))
    assert type_order(swapped)[2] == (2, 1)


def test_type_ids_enumerate_subsets_in_order():
    t = 3
    subsets = [set(), {1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}]
    assert [type_id(s, t) for s in subsets] == list(range(1, 2**t + 1))
    types = build_type_map(Hypergraph(3, ({1, 2}, {1}, {1, 2})))
    assert types.of_type(type_id({1, 2}, 3)) == (1, 3)
    assert types.of_type(type_id({3}, 3)) == ()


def test_delete_rows():
    M = build_rim(Hypergraph(3, ({1, 2}, {2, 3}, {1, 2, 3})), 2)
    assert delete_rows(M, []) == M
    assert len(delete_rows(M, [1, 2, 3])) == 0
    assert [row.edge_index for row in delete_rows(M, [3]).rows] == [1, 2]


def test_evaluate():
    M = build_rim(Hypergraph(2, ({1, 2},) * 3), 2)
    assert evaluate(M, PartialAssignment((2, 3, 5)), GF7) == [[1, 2], [1, 3], [1, 5]]
    partial = evaluate(M, PartialAssignment((2,)), GF7)
    assert partial[0] == [1, 2]
    assert partial[1] == [SymbolicEntry(2, 0, False), SymbolicEntry(2, 1, False)]
    assert evaluate(M, PartialAssignment(), GF7)[2] == [SymbolicEntry(3, 0, False), SymbolicEntry(3, 1, False)]
    minus = evaluate(build_rim(Hypergraph(3, ({1, 2},)), 2), PartialAssignment((3,)), GF7)
    assert minus == [[1, 3, 6, 4]]
    with pytest.raises(DimensionError):
        evaluate(M, PartialAssignment((1, 2, 3, 4)), GF7)
    with pytest.raises(DimensionError):
        rank_concrete(partial, GF7)


def test_rank_concrete():
    assert rank_concrete([[0, 0], [0, 0]], GF7) == 0
    rows = [vandermonde_row(GF13, a, 4) for a in (1, 5, 7, 11)]
    assert rank_concrete(rows, GF13) == 4


def test_symbolic_determinant():
    field = get_field(GF7)
    M = build_rim(Hypergraph(2, ({1, 2}, {1, 2})), 2)
    det = symbolic_determinant(M, GF7)
    print(det)
    assert det == {((2, 1),): 1, ((1, 1),): field.neg(1)}
    assert symbolic_determinant(M, GF7, PartialAssignment((3,))) == {((2, 1),): 1, (): field.neg(3)}
    assert symbolic_determinant(M, GF7, PartialAssignment((3, 3))) == {}
    with pytest.raises(DimensionError):
        symbolic_determinant(build_rim(Hypergraph(2, ({1, 2},)), 2), GF7)


def test_full_column_rank_cases():
    vandermonde = build_rim(Hypergraph(2, ({1, 2},) * 5), 3)
    assert is_full_column_rank_symbolic(vandermonde, GF13)
    assert not is_full_column_rank_symbolic(build_rim(Hypergraph(2, ({1, 2},) * 2), 3), GF13)
    parallel = build_rim(Hypergraph(3, ({1, 2},) * 8), 2)
    assert not is_full_column_rank_symbolic(parallel, GF13)
    triangle = build_rim(Hypergraph(3, ({1, 2}, {2, 3}, {1, 3}) * 2), 2)
    assert is_full_column_rank_symbolic(triangle, GF13)
    assert is_full_column_rank_symbolic(triangle, GF13, PartialAssignment((1, 2, 3)))
    # one shared point for every variable collapses each edge type to a single row
    same = PartialAssignment((5,) * 6)
    assert rank_concrete(evaluate(triangle, same, GF13), GF13) < triangle.columns


def test_pit_plan():
    tester = SymbolicRankTester(GF13)
    assert tester.plan(0) == (1, 1)
    assert tester.plan(4) == (1, 24)
    assert SymbolicRankTester(FieldSpec.prime(5)).plan(10) == (19, 1)
    assert SymbolicRankTester(FieldSpec.parse("2^16")).plan(2) == (1, 3)


def test_extension_domain_decides_rank_over_tiny_fields():
    # q = 3 is smaller than the degree bound, so the test runs over an extension
    tester = SymbolicRankTester(FieldSpec.prime(3), seed=1)
    M = build_rim(Hypergraph(2, ({1, 2},) * 4), 4)
    assert tester.plan(tester.degree_bound(M, PartialAssignment()))[0] > 1
    assert tester.full_column_rank(M)
    assert tester.symbolic_rank(M) == 4


def test_smallest_nonsingular_submatrix():
    M = build_rim(Hypergraph(2, ({1, 2},) * 5), 3)
    assert smallest_nonsingular_submatrix(M, GF13) == (0, 1, 2)
    duplicated = SymbolicRIM(M.t, M.k, M.n, (M.rows[0],) + M.rows)
    assert smallest_nonsingular_submatrix(duplicated, GF13) == (0, 2, 3)
    with pytest.raises(NoSubmatrix):
        smallest_nonsingular_submatrix(build_rim(Hypergraph(3, ({1, 2},) * 8), 2), GF13)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 4).flatmap(
        lambda t: st.tuples(
            st.just(t),
            st.lists(st.frozensets(st.integers(1, t), min_size=1), min_size=1, max_size=8),
            st.integers(1, 3),
            st.integers(0, 2**16),
        )
    )
)
def test_evaluation_never_exceeds_symbolic_rank(case):
    t, edges, k, seed = case
    spec = FieldSpec.prime(101)
    H = Hypergraph(t, tuple(edges))
    M = build_rim(H, k)
    tester = SymbolicRankTester(spec, seed)
    alphas = sample_distinct_points(spec, H.n, seed)
    concrete = rank_concrete(evaluate(M, PartialAssignment(tuple(alphas)), spec), spec)
    symbolic = tester.symbolic_rank(M)
    assert concrete <= symbolic <= min(len(M), M.columns)
    if is_weakly_partition_connected(H, k):
        assert symbolic == M.columns


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**16))
def test_square_determinant_agrees_with_pit(seed):
    rng = make_rng(seed)
    edges = [frozenset(int(v) + 1 for v in rng.choice(3, size=int(rng.integers(2, 4)), replace=False)) for _ in range(6)]
    M = build_rim(Hypergraph(3, tuple(edges)), 2)
    if len(M) < M.columns:
        return
    square = M.select(range(M.columns))
    tester = SymbolicRankTester(GF13, seed)
    assert bool(symbolic_determinant(square, GF13)) == (tester.symbolic_rank(square) == square.columns)
