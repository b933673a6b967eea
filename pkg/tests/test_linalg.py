from hypothesis import given, settings
from hypothesis import strategies as st

from rs_list_decoding import linalg
from rs_list_decoding.finite_field import FieldSpec, get_field

GF7 = get_field(FieldSpec.prime(7))


def test_rank_and_determinant():
    assert linalg.rank([[1, 2], [2, 4]], GF7) == 1
    assert linalg.rank([], GF7) == 0
    assert linalg.determinant([[1, 2], [3, 4]], GF7) == 5
    assert linalg.determinant([[0, 1], [1, 0]], GF7) == 6
    assert linalg.determinant([[1, 2], [2, 4]], GF7) == 0


def test_nullspace():
    basis = linalg.nullspace([[1, 2]], 2, GF7)
    assert basis == [[5, 1]]
    assert linalg.matmul([[1, 2]], linalg.transpose(basis), GF7) == [[0]]
    assert linalg.nullspace(linalg.identity(3, GF7), 3, GF7) == []


def test_echelon_basis():
    basis = linalg.EchelonBasis(GF7)
    assert basis.add([1, 2, 0])
    assert not basis.add([2, 4, 0])
    assert basis.add([0, 1, 1])
    assert len(basis) == 2
    assert basis.reduce([1, 3, 1]) == [0, 0, 0]


@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(0, 6), min_size=4, max_size=4), min_size=4, max_size=4))
def test_determinant_vanishes_exactly_below_full_rank(rows):
    rank = linalg.rank(rows, GF7)
    assert (linalg.determinant(rows, GF7) != 0) == (rank == 4)
    reduced, pivots = linalg.row_reduce(rows, GF7)
    assert len(pivots) == rank
    assert all(reduced[i][p] == 1 for i, p in enumerate(pivots))
