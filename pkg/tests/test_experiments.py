import pytest

from rs_list_decoding.codes import RSCode
from rs_list_decoding.errors import InvalidParameters
from rs_list_decoding.finite_field import FieldSpec, make_rng
from rs_list_decoding.harness.config import BadList, build_config
from rs_list_decoding.harness.experiments import (
    certificate_trials,
    clopper_pearson,
    edge_types,
    enumerate_wpc_hypergraphs,
    full_rank_sweep,
    full_rank_via_gzp,
    gmmds_witness_search,
    monte_carlo_puncture,
    random_wpc_hypergraph,
    robustness_trials,
    run_parallel,
    validate_pipeline,
    verify_gmmds_witness,
)
from rs_list_decoding.hypergraph import Hypergraph, ZeroPattern, is_weakly_partition_connected
from rs_list_decoding.rim import is_type_ordered, type_order

GF7 = FieldSpec.prime(7)
GF11 = FieldSpec.prime(11)
GF13 = FieldSpec.prime(13)
GF257 = FieldSpec.prime(257)

DOUBLE_TRIANGLE = Hypergraph(3, ({1, 2}, {2, 3}, {1, 3}) * 2)


def _square(x, y):
    return x * y


def test_run_parallel_keeps_item_order():
    items = [(i, i) for i in range(6)]
    seen = []
    assert run_parallel(_square, items, on_result=seen.append) == [0, 1, 4, 9, 16, 25]
    assert seen == [0, 1, 4, 9, 16, 25]
    assert run_parallel(_square, items, workers=2) == [0, 1, 4, 9, 16, 25]


def test_clopper_pearson():
    assert clopper_pearson(0, 0) == (0.0, 1.0)
    low, high = clopper_pearson(0, 10)
    assert low == 0.0
    assert high == pytest.approx(1 - 0.025**0.1, abs=1e-6)
    low, high = clopper_pearson(10, 10)
    assert high == 1.0
    assert low == pytest.approx(0.025**0.1, abs=1e-6)
    low, high = clopper_pearson(5, 10)
    print(low, high)
    assert low < 0.5 < high
    assert low == pytest.approx(1 - high, abs=1e-6)
    assert low == pytest.approx(0.187, abs=1e-3)


@pytest.mark.parametrize("spec, n, k", [(GF11, 6, 2), (GF13, 6, 3), (GF13, 5, 3)], ids=str)
def test_validate_pipeline_on_grid_points(spec, n, k):
    code = RSCode.random(spec, n, k, seed=0)
    report = validate_pipeline(code, 2)
    print(report.model_dump())
    assert report.filtered == 0
    assert report.bad_lists == report.extracted == report.weakly_partition_connected == report.rank_deficient
    assert sum(report.subset_sizes.values()) == report.extracted
    assert all(size >= 2 for size in report.subset_sizes)


def test_validate_pipeline_filters_lists_outside_the_radius():
    code = RSCode.random(GF11, 6, 2, seed=0)
    far = BadList(y=[0] * 6, codewords=[0, 1, 2], total_distance=12)
    repeated = BadList(y=[0] * 6, codewords=[0, 0, 1], total_distance=6)
    report = validate_pipeline(code, 2, [far, repeated])
    assert report.bad_lists == 2
    assert report.filtered == 2
    assert report.extracted == 0


def test_monte_carlo_puncture_when_n_equals_k():
    cfg = build_config(field="5", n=4, k=4, L=1, eps=0.5, trials=3)
    report = monte_carlo_puncture(cfg)
    assert report.counts == {"decodable": 3, "bad_list_found": 0, "rank_deficiency_found": 0}
    assert report.failure_rate == 0.0
    assert report.confidence_interval[0] == 0.0
    assert report.derived["r"] == 1


def test_monte_carlo_puncture_checks_the_rank_of_flagged_trials():
    # every 6 points of GF(7) carry three quadratics agreeing pairwise on disjoint point pairs,
    # e.g. 0, (x)(x-4) and 6(x-1)(x-5) on {0, ..., 5}
    cfg = build_config(field="7", n=6, k=3, L=2, eps=0.5, trials=3, seed=1)
    report = monte_carlo_puncture(cfg)
    print(report.counts)
    assert report.counts["rank_deficiency_found"] == 3
    assert all(t.rank_deficient is True for t in report.trials)
    decodable = monte_carlo_puncture(build_config(field="11", n=6, k=2, L=2, eps=0.5, trials=2))
    assert all(t.outcome == "decodable" and t.rank_deficient is None for t in decodable.trials)


def test_monte_carlo_puncture_is_deterministic():
    cfg = build_config(field="11", n=6, k=2, L=2, eps=0.5, trials=4, seed=3)
    seen = []
    first = monte_carlo_puncture(cfg, on_trial=seen.append)
    second = monte_carlo_puncture(cfg)
    assert sum(first.counts.values()) == cfg.trials == len(seen)
    assert [t.trial for t in first.trials] == list(range(cfg.trials))
    assert [(t.outcome, t.min_total_distance, t.alphas) for t in first.trials] == [
        (t.outcome, t.min_total_distance, t.alphas) for t in second.trials
    ]
    assert first.config["field"] == "11"
    assert first.to_json_dict()["schema"] == 1


def test_build_config_rejects_bad_parameters():
    with pytest.raises(InvalidParameters):
        build_config(field="11", n=4, k=5, L=1, eps=0.5)
    with pytest.raises(InvalidParameters):
        build_config(field="5", n=5, k=2, L=1, eps=0.5)
    with pytest.raises(InvalidParameters):
        build_config(field="11", n=6, k=2, L=1, eps=0.1)


def test_gmmds_witness_for_the_empty_pattern():
    zp = ZeroPattern(4, 2, ())
    witness = gmmds_witness_search(zp, GF7)
    assert witness is not None and witness.attempts == 1
    assert witness.M == [[1, 0], [0, 1]]
    assert verify_gmmds_witness(zp, GF7, witness)


def test_gmmds_witness_places_the_zeros():
    zp = ZeroPattern(4, 2, (({1}, 1), ({2}, 1)))
    witness = gmmds_witness_search(zp, GF7, seed=5)
    print(witness.model_dump())
    assert witness is not None
    assert witness.product[0][0] == 0 and witness.product[1][1] == 0
    assert verify_gmmds_witness(zp, GF7, witness)
    tampered = witness.model_copy(update={"M": [[0, 0], [0, 0]]})
    assert not verify_gmmds_witness(zp, GF7, tampered)


def test_gmmds_witness_validation():
    with pytest.raises(InvalidParameters):
        gmmds_witness_search(ZeroPattern(4, 2, (({1}, 2),)), GF7)
    with pytest.raises(InvalidParameters):
        gmmds_witness_search(ZeroPattern(4, 1, ()), FieldSpec.prime(5))


def test_edge_types():
    assert edge_types(3) == [{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}]
    assert len(edge_types(4)) == 2**4 - 4 - 1


def test_enumerate_minimal_wpc_hypergraphs():
    assert [H.edges for H in enumerate_wpc_hypergraphs(2, 3, 2)] == [({1, 2}, {1, 2})]
    trees = list(enumerate_wpc_hypergraphs(3, 3, 1))
    print([H.edges for H in trees])
    assert len(trees) == 4
    assert Hypergraph(3, ({1, 2, 3},)) in trees
    for H in enumerate_wpc_hypergraphs(3, 4, 2):
        assert is_type_ordered(H)
        assert is_weakly_partition_connected(H, 2)
    with pytest.raises(InvalidParameters):
        list(enumerate_wpc_hypergraphs(1, 3, 1))


def test_full_rank_sweep():
    report = full_rank_sweep(3, 4, 2, GF13)
    print(report.by_size)
    assert report.checked > 0
    assert report.full_rank == report.checked
    assert report.failures == []
    assert sum(report.by_size.values()) == report.checked
    assert report.by_size["t=3,k=1"] == 4


def test_random_wpc_hypergraph():
    rng = make_rng(2)
    for _ in range(5):
        assert is_weakly_partition_connected(random_wpc_hypergraph(4, 2, rng), 2)


def test_robustness_trials():
    report = robustness_trials(3, 2, 0.5, 6, GF13, seed=1)
    assert report.lam == "1/2"
    assert report.full_rank == report.trials == 6
    assert all(0 <= d <= 1 for d in report.deletions)


def test_full_rank_via_gzp():
    result = full_rank_via_gzp(DOUBLE_TRIANGLE, 2, GF13, seed=1)
    print(result)
    assert result["generic"] is True
    assert result["witness"] is not None
    assert result["full_rank"] is True and result["rank"] == result["columns"] == 4
    padded = Hypergraph(3, DOUBLE_TRIANGLE.edges + (frozenset(),))
    assert len(full_rank_via_gzp(padded, 2, GF13, seed=1)["hypergraph"]["edges"]) == 6
    assert full_rank_via_gzp(Hypergraph(3, ({1, 2}, {2, 3}, {1, 3})), 2, GF13)["full_rank"] is False


ROBUST = type_order(Hypergraph(3, ({1, 2}, {1, 3}, {2, 3}, {1, 2, 3}) * 4))[0]


def test_certificate_trials():
    report = certificate_trials(ROBUST, 4, 2, GF257, trials=12, seed=0)
    print(report.model_dump(exclude={"records"}))
    assert report.bottoms + report.certificates == 12
    assert report.distinct
    assert report.per_step_bound == pytest.approx(8 / 241)
    assert len(report.exposures) == len(report.failures) == 2
    assert all(f <= e for e, f in zip(report.exposures, report.failures))
    assert [rec["trial"] for rec in report.records] == list(range(12))
    assert all(rec["bottom_certified"] for rec in report.records if rec["certificate"] == "bottom")
    with pytest.raises(InvalidParameters):
        certificate_trials(ROBUST, 4, 2, GF13, trials=1)


def test_certificate_trials_do_not_depend_on_workers():
    one = certificate_trials(ROBUST, 4, 2, GF257, trials=6, seed=2)
    two = certificate_trials(ROBUST, 4, 2, GF257, trials=6, seed=2, workers=2)
    assert one.records == two.records


@pytest.mark.slow
def test_certificate_failure_rate_stays_under_the_step_bound():
    report = certificate_trials(ROBUST, 4, 1, GF257, trials=10**4, seed=0, workers=4)
    rate = report.failures[0] / max(1, report.exposures[0])
    print(rate, report.per_step_bound)
    assert rate <= report.per_step_bound
