from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rs_list_decoding.certify import (
    Bottom,
    Certificate,
    CertificateEngine,
    certificate_budget,
    descent_count,
    get_certificate,
    get_matrix_sequence,
    hypergraph_count_bound,
    theorem_field_size,
)
from rs_list_decoding.errors import DimensionError, InvalidParameters
from rs_list_decoding.finite_field import FieldSpec, sample_distinct_points
from rs_list_decoding.hypergraph import Hypergraph
from rs_list_decoding.rim import (
    PartialAssignment,
    build_rim,
    evaluate,
    rank_concrete,
    symbolic_determinant,
    type_order,
)

GF7 = FieldSpec.prime(7)
GF13 = FieldSpec.prime(13)
GF31 = FieldSpec.prime(31)

# square 6x6 intersection matrix: k=3, t=3, every edge type twice
SQUARE = Hypergraph(3, ({1, 2}, {1, 2}, {1, 3}, {1, 3}, {2, 3}, {2, 3}))
# three edge types, six copies each; stays 2-wpc after any ten deletions
ROOMY = type_order(Hypergraph(3, ({1, 2}, {1, 3}, {2, 3}) * 6))[0]


def test_engine_validation():
    with pytest.raises(InvalidParameters):
        CertificateEngine(SQUARE, 3, 0, GF13)
    with pytest.raises(InvalidParameters):
        CertificateEngine(Hypergraph(3, ({2, 3}, {1, 2})), 1, 1, GF13)
    engine = CertificateEngine(SQUARE, 3, 1, GF13)
    with pytest.raises(DimensionError):
        engine.get_matrix_sequence([7])
    with pytest.raises(DimensionError):
        engine.run([1, 2, 3])


def test_bank_is_empty_below_two_to_the_t():
    engine = CertificateEngine(SQUARE, 3, 7, GF13)
    bank, matrix = engine.refresh([])
    assert engine.quota == 0
    assert bank.indices() == frozenset()
    assert len(matrix) == matrix.columns == 6


def test_first_matrix_is_smallest_nonsingular_submatrix():
    trace = get_matrix_sequence(ROOMY, 1, 8, [], GF31)
    assert len(trace) == 1 and trace.refresh_indices == [1]
    bank = trace.steps[0].bank
    assert bank.quota == 1
    # the largest index of each type is reserved
    assert bank.indices() == frozenset({6, 12, 18})
    M = trace.matrices[0]
    assert not set(M.variables()) & bank.indices()
    # with k = 1 every row is constant, so the scan keeps the first edge of the first two types
    assert M.variables() == [1, 7]
    assert len(M) == M.columns == 2


def test_substitution_uses_the_bank():
    engine = CertificateEngine(ROOMY, 1, 8, GF31)
    first = engine.get_matrix_sequence([]).matrices[0]
    i = first.variables()[0]
    trace = engine.get_matrix_sequence([i])
    print(trace.to_dict())
    step = trace.steps[1]
    assert not step.refresh
    tau = engine.types.type_of(i)
    assert step.substitution == (i, engine.types.of_type(tau)[-1])
    assert i not in step.matrix.variables()
    assert engine.get_matrix_sequence([i]) == trace


def test_descent_count():
    assert descent_count(Certificate((1, 4, 9))) == 0
    assert descent_count((3, 1, 2)) == 1
    assert descent_count(()) == 0


@pytest.mark.parametrize("seed", range(12))
def test_certificate_exactly_at_the_first_singular_prefix(seed):
    alphas = sample_distinct_points(GF13, SQUARE.n, seed)
    outcome = get_certificate(SQUARE, 3, 1, alphas, GF13, seed)
    M = build_rim(SQUARE, 3)
    full_rank = rank_concrete(evaluate(M, PartialAssignment(tuple(alphas)), GF13), GF13) == M.columns
    print(alphas, outcome)
    assert (outcome is Bottom.bottom) == full_rank
    if outcome is not Bottom.bottom:
        (i,) = outcome.indices
        assert symbolic_determinant(M, GF13, PartialAssignment(tuple(alphas[:i]))) == {}
        assert symbolic_determinant(M, GF13, PartialAssignment(tuple(alphas[: i - 1]))) != {}


def square_rank_cases(spec):
    """Every distinct point tuple for SQUARE, and whether the evaluated matrix has full column rank."""
    M = build_rim(SQUARE, 3)
    for alphas in permutations(range(spec.order), SQUARE.n):
        yield alphas, rank_concrete(evaluate(M, PartialAssignment(alphas), spec), spec) == M.columns


def test_certificate_on_every_rank_deficient_assignment():
    engine = CertificateEngine(SQUARE, 3, 1, GF7)
    deficient = [alphas for alphas, full in square_rank_cases(GF7) if not full]
    print(len(deficient))
    assert deficient
    for alphas in deficient:
        assert engine.run(alphas).outcome is not Bottom.bottom, alphas


@pytest.mark.slow
def test_bottom_exactly_on_full_rank_assignments():
    engine = CertificateEngine(SQUARE, 3, 1, GF7)
    for alphas, full in square_rank_cases(GF7):
        assert (engine.run(alphas).outcome is Bottom.bottom) == full, alphas


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**20))
def test_certificate_structure(seed):
    engine = CertificateEngine(ROOMY, 2, 8, GF31, seed=0)
    run = engine.run(sample_distinct_points(GF31, ROOMY.n, seed))
    if run.is_bottom:
        M = build_rim(ROOMY, 2)
        alphas = sample_distinct_points(GF31, ROOMY.n, seed)
        assert rank_concrete(evaluate(M, PartialAssignment(tuple(alphas)), GF31), GF31) == M.columns
        return
    assert len(run.outcome) == 8
    assert run.outcome.is_distinct()
    assert run.descents <= 2**ROOMY.t
    refreshes = run.refreshes
    assert refreshes[0] == 1
    assert all(b - a >= engine.r // 2**ROOMY.t for a, b in zip(refreshes, refreshes[1:]))
    assert sum(run.failures) == 8


def test_certificate_budget_small_cases():
    empty = certificate_budget(3, 2, 11, 5, 0, 2)
    assert empty.count_bound == 1 and empty.per_cert_bound == 1
    assert certificate_budget(2, 1, 7, 5, 3, 1).per_cert_bound == Fraction(1, 8)
    assert certificate_budget(2, 1, 7, 5, 3, 1).count_bound == 10 * 2**6
    with pytest.raises(InvalidParameters):
        certificate_budget(2, 1, 5, 5, 1, 1)
    with pytest.raises(InvalidParameters):
        certificate_budget(2, 1, 9, 5, -1, 1)


def test_union_bound_is_vacuous_at_desk_scale():
    budget = certificate_budget(3, 3, 257, 12, 1, 2)
    print(budget.to_dict())
    assert budget.vacuous
    assert budget.to_dict()["vacuous"] is True


@pytest.mark.parametrize(
    "n, k, L, r",
    [(20, 5, 2, 5), (40, 10, 2, 10), (16, 4, 3, 4), (12, 3, 2, 3)],
)
def test_union_bound_at_theorem_field_size(n, k, L, r):
    eps = Fraction(1, 2)
    q = theorem_field_size(n, k, L, eps)
    assert q == n + k * 2 ** (20 * L)
    budget = certificate_budget(L + 1, k, q, n, r, L)
    assert budget.union_bound <= Fraction(1, 2 ** (L * n))
    assert budget.log2_union_bound < -L * n


def test_theorem_field_size_needs_integer_exponent():
    with pytest.raises(InvalidParameters):
        theorem_field_size(10, 2, 2, Fraction(3, 10))


def test_hypergraph_count_bound():
    count, reference = hypergraph_count_bound(3, 2)
    assert count == 2**6 + 2**9
    assert reference == 2**12
    assert count <= reference
