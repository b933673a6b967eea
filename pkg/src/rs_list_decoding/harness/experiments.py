import math
import multiprocessing
import time
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from fractions import Fraction
from itertools import combinations
from logging import getLogger
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .. import linalg
from ..certify import CertificateEngine, certificate_budget
from ..codes import RSCode, hamming_distance
from ..errors import InvalidParameters, InvariantViolation
from ..finite_field import FieldSpec, get_field, make_rng, sample_distinct_points
from ..hypergraph import (
    MAX_PARTITION_VERTICES,
    Hypergraph,
    ZeroPattern,
    agreement_hypergraph,
    extract_minimal_subset,
    find_orientation,
    gzp_from_orientation,
    is_weakly_partition_connected,
    verify_gzp,
)
from ..rim import (
    PartialAssignment,
    SymbolicRankTester,
    build_rim,
    delete_rows,
    evaluate,
    rank_concrete,
    type_key,
)
from .config import (
    BadList,
    CertificateTrialsReport,
    ExperimentConfig,
    GmmdsWitness,
    OracleMode,
    RobustnessReport,
    SweepReport,
    TrialOutcome,
    TrialRecord,
    TrialReport,
    ValidationReport,
    as_fraction,
)
from .oracle import EXHAUSTIVE_MESSAGE_LIMIT, bad_list_oracle

logger = getLogger("rs_list_decoding.experiments")


def make_executor(workers: int) -> Executor:
    """Process pool on the fork context, or a thread pool where fork is unavailable."""
    try:
        ctx = multiprocessing.get_context("fork")
        return ProcessPoolExecutor(max_workers=workers, mp_context=ctx)
    except Exception as e:
        logger.warning(f"process pool unavailable, using threads, reason: {e.__class__.__name__} {e}")
        return ThreadPoolExecutor(max_workers=workers)


def run_parallel(
    func: Callable[..., Any],
    items: Sequence[Tuple[Any, ...]],
    workers: int = 1,
    on_result: Optional[Callable[[Any], None]] = None,
) -> List[Any]:
    """``func(*item)`` for every item; results come back in item order for any worker count."""
    results: List[Any] = [None] * len(items)
    if workers <= 1 or len(items) <= 1:
        for index, item in enumerate(items):
            results[index] = func(*item)
            if on_result:
                on_result(results[index])
        return results
    with make_executor(workers) as executor:
        futures = {executor.submit(func, *item): index for index, item in enumerate(items)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
            if on_result:
                on_result(results[futures[future]])
    return results


def _binomial_cdf(x: int, n: int, p: float) -> float:
    if p <= 0:
        return 1.0
    if p >= 1:
        return 1.0 if x >= n else 0.0
    log_p, log_q = math.log(p), math.log1p(-p)
    terms = [
        math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1) + i * log_p + (n - i) * log_q
        for i in range(x + 1)
    ]
    top = max(terms)
    return min(1.0, math.exp(top) * sum(math.exp(t - top) for t in terms))


def clopper_pearson(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Exact binomial confidence interval by bisection on the tails."""
    if trials <= 0:
        return 0.0, 1.0
    alpha = (1 - confidence) / 2

    def solve(predicate: Callable[[float], bool]) -> float:
        lo, hi = 0.0, 1.0
        for _ in range(100):
            mid = (lo + hi) / 2
            if predicate(mid):
                hi = mid
            else:
                lo = mid
        return (lo + hi) / 2

    low = 0.0 if successes == 0 else solve(lambda p: 1 - _binomial_cdf(successes - 1, trials, p) >= alpha)
    high = 1.0 if successes == trials else solve(lambda p: _binomial_cdf(successes, trials, p) <= alpha)
    return low, high


def validate_pipeline(
    code: RSCode,
    L: int,
    bad_lists: Optional[Sequence[BadList]] = None,
) -> ValidationReport:
    """Check every bad list: a dense subset J exists, its agreement hypergraph is k-wpc, and
    the intersection matrix evaluated at the code's points is rank-deficient.

    Args:
        code (RSCode): The code.
        L (int): List size.
        bad_lists (Sequence[BadList], optional): Lists to check. Defaults to the exhaustive oracle's output.

    Returns:
        ValidationReport: Counts per check; lists above the L(n-k) bound are counted as filtered.
    """
    n, k, spec = code.n, code.k, code.spec
    if bad_lists is None:
        bad_lists = bad_list_oracle(code, L).bad_lists
    report = ValidationReport(field=str(spec), n=n, k=k, L=L, alphas=list(code.alphas))
    assignment = PartialAssignment(code.alphas)
    sizes: Dict[int, int] = {}
    for bad in bad_lists:
        report.bad_lists += 1
        words = [list(code.encode(code.message(i))) for i in bad.codewords]
        total = sum(hamming_distance(bad.y, c) for c in words)
        dump = {"code": code.to_dict(), "L": L, "y": bad.y, "codewords": bad.codewords, "total_distance": total}
        if len({tuple(c) for c in words}) != len(words) or total > L * (n - k):
            report.filtered += 1
            continue
        J = extract_minimal_subset(bad.y, words, k)
        if J is None or len(J) < 2:
            logger.error(f"validate_pipeline: no dense subset for {bad.codewords}")
            raise InvariantViolation("bad list without a dense subset of codewords", dump)
        report.extracted += 1
        sizes[len(J)] = sizes.get(len(J), 0) + 1
        H = agreement_hypergraph(bad.y, words).restrict(J)
        if not is_weakly_partition_connected(H, k):
            logger.error(f"validate_pipeline: restricted hypergraph on {J} is not {k}-wpc")
            raise InvariantViolation("agreement hypergraph of J is not weakly partition connected", {**dump, "J": J})
        report.weakly_partition_connected += 1
        M = build_rim(H, k)
        rank = rank_concrete(evaluate(M, assignment, spec), spec)
        if rank >= M.columns:
            logger.error(f"validate_pipeline: evaluated matrix on {J} has full column rank {rank}")
            raise InvariantViolation("evaluated intersection matrix has full column rank", {**dump, "J": J})
        report.rank_deficient += 1
    report.subset_sizes = sizes
    logger.info(f"validate_pipeline(field={spec!s}, {n=}, {k=}, {L=}) checked {report.bad_lists} lists")
    return report


def _puncture_trial(cfg: ExperimentConfig, trial: int) -> TrialRecord:
    started = time.perf_counter()
    code = RSCode.random(cfg.field, cfg.n, cfg.k, cfg.seed, stream=(trial,))
    mode = cfg.mode
    if mode is OracleMode.exhaustive and code.message_count > EXHAUSTIVE_MESSAGE_LIMIT:
        logger.warning(f"trial {trial}: q^k = {code.message_count} is over the exhaustive limit, sampling")
        mode = OracleMode.sampled
    report = bad_list_oracle(
        code,
        cfg.L,
        mode,
        max_distance=cfg.singleton_distance,
        samples=cfg.samples,
        seed=cfg.seed,
        limit=1,
        stream=(trial,),
    )
    distance = report.min_total_distance
    if distance is not None and distance <= cfg.capacity_distance:
        outcome = TrialOutcome.bad_list_found
    elif distance is not None and distance <= cfg.singleton_distance:
        outcome = TrialOutcome.rank_deficiency_found
    else:
        outcome = TrialOutcome.decodable
    rank_deficient = None
    if report.bad_lists:
        # raises InvariantViolation unless the flagged list has a rank-deficient matrix
        rank_deficient = validate_pipeline(code, cfg.L, report.bad_lists).rank_deficient == 1
    return TrialRecord(
        trial=trial,
        outcome=outcome.name,
        min_total_distance=distance,
        rank_deficient=rank_deficient,
        alphas=list(code.alphas),
        seconds=time.perf_counter() - started,
    )


def monte_carlo_puncture(
    cfg: ExperimentConfig, on_trial: Optional[Callable[[TrialRecord], None]] = None
) -> TrialReport:
    """Sample random puncturings and classify each by the best list the oracle finds.

    A trial is ``bad_list_found`` when some L+1 codewords fit the capacity radius,
    ``rank_deficiency_found`` when they only fit the generalized Singleton radius, and
    ``decodable`` otherwise. For every flagged trial the first list found goes through
    :func:`validate_pipeline`, and ``rank_deficient`` records that its evaluated
    intersection matrix lost rank.
    """
    started = time.perf_counter()
    logger.info(f"monte_carlo_puncture(field={cfg.field!s}, n={cfg.n}, k={cfg.k}, L={cfg.L}, trials={cfg.trials})")
    records = run_parallel(_puncture_trial, [(cfg, trial) for trial in range(cfg.trials)], cfg.workers, on_trial)
    counts = {outcome.name: 0 for outcome in TrialOutcome}
    for record in records:
        counts[record.outcome] += 1
    failures = counts[TrialOutcome.bad_list_found.name]
    budget = certificate_budget(cfg.L + 1, cfg.k, cfg.q, cfg.n, cfg.r, cfg.L)
    if budget.vacuous:
        logger.warning(f"union bound {float(budget.union_bound):.3g} is vacuous at these parameters")
    return TrialReport(
        config=cfg.model_dump(mode="json"),
        derived=cfg.derived(),
        trials=records,
        counts=counts,
        failure_rate=failures / cfg.trials,
        confidence_interval=clopper_pearson(failures, cfg.trials),
        union_bound=budget.to_dict(),
        vacuous=budget.vacuous,
        seconds=time.perf_counter() - started,
    )


def _pattern_rows(zp: ZeroPattern) -> List[frozenset]:
    sets = zp.expanded()
    return sets + [frozenset()] * (zp.n - zp.k - len(sets))


def gmmds_witness_search(
    zp: ZeroPattern, spec: FieldSpec, budget: int = 100, seed: int = 0
) -> Optional[GmmdsWitness]:
    """Distinct points and an invertible M such that M times the parity-check matrix vanishes on the pattern.

    Row l of M is a random vector of the space annihilating the columns in S_l; the attempt
    succeeds when these rows are independent. Rows beyond the pattern's size are unconstrained.

    Args:
        zp (ZeroPattern): A generic zero pattern.
        spec (FieldSpec): Field with q >= 2n - k - 1.
        budget (int, optional): Attempts with fresh points. Defaults to 100.
        seed (int, optional): Seed of the attempt streams. Defaults to 0.

    Returns:
        GmmdsWitness | None: None when the budget runs out, which disproves nothing.
    """
    n, k = zp.n, zp.k
    if not verify_gzp(zp):
        raise InvalidParameters("the zero pattern is not generic")
    if spec.order < 2 * n - k - 1 or spec.order < n:
        raise InvalidParameters(f"need q >= 2n-k-1 = {2 * n - k - 1}, got q={spec.order}")
    field = get_field(spec)
    rows = _pattern_rows(zp)
    size = n - k
    for attempt in range(1, budget + 1):
        rng = make_rng(seed, 3, attempt)
        alphas = sample_distinct_points(spec, n, rng)
        H = RSCode(spec, tuple(alphas), k).parity_check_matrix
        if all(not S for S in rows):
            M = linalg.identity(size, field)
        else:
            M = []
            for S in rows:
                constraints = [[H[row][i - 1] for row in range(size)] for i in sorted(S)]
                basis = linalg.nullspace(constraints, size, field)
                if not basis:
                    break
                vector = [field.zero] * size
                for b in basis:
                    c = field.random_element(rng)
                    vector = [field.add(x, field.mul(c, y)) for x, y in zip(vector, b)]
                M.append(vector)
            if len(M) < size or linalg.determinant(M, field) == field.zero:
                logger.debug(f"gmmds_witness_search: attempt {attempt} failed")
                continue
        product = linalg.matmul(M, H, field) if size else []
        logger.info(f"gmmds_witness_search(n={n}, k={k}, field={spec!s}) found a witness at attempt {attempt}")
        return GmmdsWitness(
            alphas=alphas, M=M, product=product, sets=[sorted(S) for S in rows], attempts=attempt
        )
    logger.warning(f"gmmds_witness_search(n={n}, k={k}, field={spec!s}) gave up after {budget} attempts")
    return None


def verify_gmmds_witness(zp: ZeroPattern, spec: FieldSpec, witness: GmmdsWitness) -> bool:
    """Recompute M times the parity-check matrix and check invertibility and every prescribed zero."""
    field = get_field(spec)
    n, k = zp.n, zp.k
    size = n - k
    if len(set(witness.alphas)) != n or len(witness.M) != size:
        return False
    if any(len(row) != size for row in witness.M):
        return False
    if size == 0:
        return True
    if linalg.determinant(witness.M, field) == field.zero:
        return False
    product = linalg.matmul(witness.M, RSCode(spec, tuple(witness.alphas), k).parity_check_matrix, field)
    if product != witness.product:
        return False
    return all(product[row][i - 1] == field.zero for row, S in enumerate(_pattern_rows(zp)) for i in S)


def edge_types(t: int) -> List[frozenset]:
    """Subsets of [t] with at least two members, in type order."""
    out = [frozenset(c) for size in range(2, t + 1) for c in combinations(range(1, t + 1), size)]
    return sorted(out, key=type_key)


def enumerate_wpc_hypergraphs(
    t: int, max_edges: int, k: int, minimal_only: bool = True
) -> Iterator[Hypergraph]:
    """k-wpc edge multisets over edges of size >= 2, each listed once in type order.

    With ``minimal_only`` only inclusion-minimal ones are produced; full column rank is
    preserved by adding rows, so these suffice for rank sweeps.
    """
    if not 2 <= t <= MAX_PARTITION_VERTICES:
        raise InvalidParameters(f"need 2 <= t <= {MAX_PARTITION_VERTICES}, got {t=}")
    types = edge_types(t)
    need = (t - 1) * k

    def connected(edges: Sequence[frozenset]) -> bool:
        return bool(is_weakly_partition_connected(Hypergraph(t, tuple(edges)), k))

    def minimal(edges: List[frozenset]) -> bool:
        return all(not connected(edges[:i] + edges[i + 1 :]) for i in range(len(edges)) if i == 0 or edges[i] != edges[i - 1])

    def walk(start: int, edges: List[frozenset], weight: int) -> Iterator[Hypergraph]:
        if edges and weight >= need and connected(edges):
            if not minimal_only or minimal(edges):
                yield Hypergraph(t, tuple(edges))
            if minimal_only:
                return
        if len(edges) == max_edges or weight + (max_edges - len(edges)) * (t - 1) < need:
            return
        for index in range(start, len(types)):
            e = types[index]
            yield from walk(index, edges + [e], weight + len(e) - 1)

    yield from walk(0, [], 0)


def full_rank_sweep(
    t_max: int,
    max_edges: int,
    k_max: int,
    spec: FieldSpec,
    seed: int = 0,
    minimal_only: bool = True,
) -> SweepReport:
    """Symbolic full column rank of the intersection matrix of every enumerated k-wpc hypergraph."""
    tester = SymbolicRankTester(spec, seed, stream=(6,))
    report = SweepReport(
        field=str(spec), t_max=t_max, k_max=k_max, max_edges=max_edges, minimal_only=minimal_only, checked=0, full_rank=0
    )
    for t in range(2, t_max + 1):
        for k in range(1, k_max + 1):
            count = 0
            for H in enumerate_wpc_hypergraphs(t, max_edges, k, minimal_only):
                count += 1
                report.checked += 1
                if tester.full_column_rank(build_rim(H, k)):
                    report.full_rank += 1
                else:
                    logger.error(f"full_rank_sweep: {H.to_dict()} with {k=} is rank-deficient")
                    report.failures.append({"k": k, **H.to_dict()})
            report.by_size[f"t={t},k={k}"] = count
    logger.info(f"full_rank_sweep checked {report.checked} hypergraphs, {len(report.failures)} failures")
    return report


def random_wpc_hypergraph(t: int, k: int, rng: np.random.Generator, singleton_rate: float = 0.1) -> Hypergraph:
    """Add random edges (some singletons) until the hypergraph is k-wpc."""
    if not 2 <= t <= MAX_PARTITION_VERTICES:
        raise InvalidParameters(f"need 2 <= t <= {MAX_PARTITION_VERTICES}, got {t=}")
    edges: List[frozenset] = []
    while True:
        if rng.random() < singleton_rate:
            edges.append(frozenset([int(rng.integers(1, t + 1))]))
            continue
        size = int(rng.integers(2, t + 1))
        edges.append(frozenset(int(v) + 1 for v in rng.choice(t, size=size, replace=False)))
        H = Hypergraph(t, tuple(edges))
        if is_weakly_partition_connected(H, k):
            return H


def robustness_trials(
    t: int, k: int, lam: Union[float, str, Fraction], trials: int, spec: FieldSpec, seed: int = 0
) -> RobustnessReport:
    """Delete the rows of up to floor(lam*k) random variables from (k + floor(lam*k))-wpc instances and
    check that full column rank survives."""
    extra = math.floor(as_fraction(lam) * k)
    tester = SymbolicRankTester(spec, seed, stream=(7,))
    report = RobustnessReport(field=str(spec), t=t, k=k, lam=str(as_fraction(lam)), trials=trials, full_rank=0)
    for trial in range(trials):
        rng = make_rng(seed, 4, trial)
        H = random_wpc_hypergraph(t, k + extra, rng)
        count = int(rng.integers(0, min(extra, H.n) + 1))
        B = sorted(int(i) + 1 for i in rng.choice(H.n, size=count, replace=False))
        report.deletions.append(count)
        if tester.full_column_rank(delete_rows(build_rim(H, k), B)):
            report.full_rank += 1
        else:
            logger.error(f"robustness_trials: deleting {B} from {H.to_dict()} lost full rank")
            report.failures.append({"deleted": B, **H.to_dict()})
    return report


def full_rank_via_gzp(
    H: Hypergraph, k: int, spec: FieldSpec, budget: int = 100, seed: int = 0
) -> Dict[str, Any]:
    """Orientation, generic zero pattern and GM-MDS witness for a k-wpc H, then the rank of the
    intersection matrix at the witness points. Empty edges carry no rows and are dropped first."""
    kept = H.without_edges(i for i, e in enumerate(H.edges, start=1) if not e)
    result: Dict[str, Any] = {"hypergraph": kept.to_dict(), "k": k, "field": str(spec)}
    orientation = find_orientation(kept, k)
    result["orientation"] = orientation.to_dict() if orientation else None
    if orientation is None:
        result["full_rank"] = False
        return result
    zp = gzp_from_orientation(kept, orientation, k)
    result["zero_pattern"] = zp.to_dict()
    result["generic"] = verify_gzp(zp)
    witness = gmmds_witness_search(zp, spec, budget, seed)
    result["witness"] = witness.to_json_dict() if witness else None
    if witness is None:
        result["full_rank"] = None
        return result
    M = build_rim(kept, k)
    rank = rank_concrete(evaluate(M, PartialAssignment(tuple(witness.alphas)), spec), spec)
    result["rank"] = rank
    result["columns"] = M.columns
    result["full_rank"] = rank == M.columns
    return result


def _certificate_chunk(
    H: Hypergraph, k: int, r: int, spec: FieldSpec, seed: int, trials: Sequence[int]
) -> List[Dict[str, Any]]:
    engine = CertificateEngine(H, k, r, spec, seed)
    full = build_rim(H, k)
    records = []
    for trial in trials:
        alphas = sample_distinct_points(spec, H.n, seed, stream=(5, trial))
        run = engine.run(alphas)
        record = {"trial": trial, **run.to_dict(), "exposures": run.exposures, "failures": run.failures}
        if run.is_bottom:
            rank = rank_concrete(evaluate(full, PartialAssignment(tuple(alphas)), spec), spec)
            record["bottom_certified"] = rank == full.columns
        records.append(record)
    return records


def certificate_trials(
    H: Hypergraph,
    k: int,
    r: int,
    spec: FieldSpec,
    trials: int,
    seed: int = 0,
    workers: int = 1,
    on_trial: Optional[Callable[[Dict[str, Any]], None]] = None,
) -> CertificateTrialsReport:
    """Run the certificate scan on independent random distinct points and aggregate its structure."""
    if spec.order <= H.n:
        raise InvalidParameters(f"need q > n, got q={spec.order} and n={H.n}")
    chunks = max(1, workers)
    items = [(H, k, r, spec, seed, list(range(w, trials, chunks))) for w in range(chunks)]
    records = [rec for chunk in run_parallel(_certificate_chunk, items, workers) for rec in chunk]
    records.sort(key=lambda rec: rec["trial"])
    if on_trial:
        for rec in records:
            on_trial(rec)
    exposures = [0] * r
    failures = [0] * r
    gaps: List[int] = []
    for rec in records:
        for step, (e, f) in enumerate(zip(rec["exposures"], rec["failures"])):
            exposures[step] += e
            failures[step] += f
        refreshes = rec["refreshes"]
        gaps.extend(b - a for a, b in zip(refreshes, refreshes[1:]))
    certificates = [rec["certificate"] for rec in records if rec["certificate"] != "bottom"]
    return CertificateTrialsReport(
        field=str(spec),
        k=k,
        r=r,
        t=H.t,
        trials=trials,
        bottoms=len(records) - len(certificates),
        certificates=len(certificates),
        distinct=all(len(set(c)) == len(c) for c in certificates),
        max_descents=max((rec["descents"] for rec in records), default=0),
        min_refresh_gap=min(gaps) if gaps else None,
        exposures=exposures,
        failures=failures,
        per_step_bound=(H.t - 1) * k / (spec.order - H.n),
        records=records,
    )


__all__ = [
    "make_executor",
    "run_parallel",
    "clopper_pearson",
    "validate_pipeline",
    "monte_carlo_puncture",
    "gmmds_witness_search",
    "verify_gmmds_witness",
    "edge_types",
    "enumerate_wpc_hypergraphs",
    "full_rank_sweep",
    "random_wpc_hypergraph",
    "robustness_trials",
    "full_rank_via_gzp",
    "certificate_trials",
]
