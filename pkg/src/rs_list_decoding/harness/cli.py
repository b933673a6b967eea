import argparse
import json
import logging
import math
import sys
from fractions import Fraction
from logging import getLogger
from typing import Any, Callable, Dict, List, Optional, Sequence

from ..__about__ import __version__
from ..certify import (
    CertificateEngine,
    certificate_budget,
    hypergraph_count_bound,
    theorem_field_size,
)
from ..codes import RSCode
from ..errors import InvalidParameters, InvariantViolation, ListDecodingError
from ..finite_field import FieldSpec
from ..hypergraph import (
    Hypergraph,
    ZeroPattern,
    find_orientation,
    gzp_from_orientation,
    is_weakly_partition_connected,
    verify_gzp,
)
from ..rim import PartialAssignment, SymbolicRankTester, build_rim, type_order
from .command import Command
from .config import SCHEMA_VERSION, BadList, OracleMode, Report, as_fraction, build_config
from .experiments import (
    certificate_trials,
    full_rank_sweep,
    gmmds_witness_search,
    monte_carlo_puncture,
    robustness_trials,
    validate_pipeline,
)
from .oracle import bad_list_oracle, full_length_blowup_search

logger = getLogger("rs_list_decoding.cli")

OnTrial = Optional[Callable[[Any], None]]


def _read_json(path: Optional[str]) -> Any:
    if path is None or path == "-":
        return json.loads(sys.stdin.read())
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _parse_ints(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise InvalidParameters(f"expected comma-separated integers, got {text!r}, reason: {e}")


def _build_code(field: str, n: Optional[int], k: int, seed: int, alphas: Optional[str]) -> RSCode:
    spec = FieldSpec.parse(field)
    points = _parse_ints(alphas)
    if points is not None:
        if n is not None and n != len(points):
            raise InvalidParameters(f"--n={n} disagrees with {len(points)} points in --alphas")
        return RSCode(spec, tuple(points), k)
    if n is None:
        raise InvalidParameters("either --n or --alphas is required")
    return RSCode.random(spec, n, k, seed)


def wpc_check(input: Optional[str], k: int) -> Dict[str, Any]:
    H = Hypergraph.from_dict(_read_json(input))
    result = is_weakly_partition_connected(H, k)
    witness = result.witness.to_dict() if result.witness else None
    return {**H.to_dict(), "k": k, "weakly_partition_connected": result.connected, "violating_partition": witness}


def orient(input: Optional[str], k: int) -> Dict[str, Any]:
    H = Hypergraph.from_dict(_read_json(input))
    orientation = find_orientation(H, k)
    return {**H.to_dict(), "k": k, "orientation": orientation.to_dict() if orientation else None}


def gzp(input: Optional[str], k: int) -> Dict[str, Any]:
    H = Hypergraph.from_dict(_read_json(input))
    orientation = find_orientation(H, k)
    if orientation is None:
        raise InvalidParameters(f"the hypergraph is not {k}-weakly partition connected")
    zp = gzp_from_orientation(H, orientation, k)
    return {
        **H.to_dict(),
        "k": k,
        "orientation": orientation.to_dict(),
        "zero_pattern": zp.to_dict(),
        "generic": verify_gzp(zp),
    }


def rim_rank(input: Optional[str], k: int, field: str, assign: Optional[str], seed: int) -> Dict[str, Any]:
    H = Hypergraph.from_dict(_read_json(input))
    spec = FieldSpec.parse(field)
    M = build_rim(H, k)
    a = PartialAssignment(tuple(_parse_ints(assign) or ()))
    rank = SymbolicRankTester(spec, seed).symbolic_rank(M, a)
    return {"rank": rank, "full_column_rank": rank == M.columns, "columns": M.columns, "rows": len(M), "assigned": a.prefix}


def certify(
    input: Optional[str],
    k: int,
    r: int,
    field: str,
    seed: int,
    trials: int,
    workers: int,
    alphas: Optional[str],
    on_trial: OnTrial = None,
) -> Any:
    H, types, permutation = type_order(Hypergraph.from_dict(_read_json(input)))
    spec = FieldSpec.parse(field)
    if spec.order <= H.n:
        raise InvalidParameters(f"need q > n, got q={spec.order} and n={H.n}")
    points = _parse_ints(alphas)
    if points is not None:
        if len(points) != H.n:
            raise InvalidParameters(f"need {H.n} points in --alphas, got {len(points)}")
        # relabel the given points to the type-ordered edge order
        ordered = [0] * H.n
        for old, new in enumerate(permutation, start=1):
            ordered[new - 1] = points[old - 1]
        run = CertificateEngine(H, k, r, spec, seed).run(ordered)
        return {**run.to_dict(), "permutation": list(permutation), "alphas": ordered}
    report = certificate_trials(H, k, r, spec, trials, seed, workers, on_trial)
    doc = report.to_json_dict()
    doc["permutation"] = list(permutation)
    doc["types"] = {str(tau): list(members) for tau, members in sorted(types.indices.items())}
    return doc


def bad_list(
    field: str,
    n: Optional[int],
    k: int,
    L: int,
    seed: int,
    mode: str,
    samples: int,
    alphas: Optional[str],
    max_distance: Optional[int],
    limit: Optional[int],
) -> Report:
    code = _build_code(field, n, k, seed, alphas)
    return bad_list_oracle(code, L, mode, max_distance=max_distance, samples=samples, seed=seed, limit=limit)


def validate(field: str, n: Optional[int], k: int, L: int, seed: int, alphas: Optional[str], input: Optional[str]) -> Report:
    code = _build_code(field, n, k, seed, alphas)
    lists = None
    if input is not None:
        lists = [BadList(**item) for item in _read_json(input)["bad_lists"]]
    report = validate_pipeline(code, L, lists)
    if not report.passed:
        raise InvariantViolation("pipeline counts disagree", report.to_json_dict())
    return report


def mc_puncture(
    field: str,
    n: int,
    k: int,
    L: int,
    eps: float,
    seed: int,
    trials: int,
    workers: int,
    mode: str,
    samples: int,
    on_trial: OnTrial = None,
) -> Report:
    cfg = build_config(
        field=field, n=n, k=k, L=L, eps=eps, seed=seed, trials=trials, workers=workers, mode=mode, samples=samples
    )
    return monte_carlo_puncture(cfg, on_trial)


def blowup(field: str, k: int, agreement: int, samples: int, seed: int) -> Report:
    return full_length_blowup_search(FieldSpec.parse(field), k, agreement, samples, seed)


def gmmds(input: Optional[str], field: str, budget: int, seed: int) -> Dict[str, Any]:
    zp = ZeroPattern.from_dict(_read_json(input))
    witness = gmmds_witness_search(zp, FieldSpec.parse(field), budget, seed)
    return {"zero_pattern": zp.to_dict(), "found": witness is not None, "witness": witness.to_json_dict() if witness else None}


def full_rank_sweep_command(t: int, k: int, max_edges: int, field: str, seed: int, minimal_only: bool) -> Report:
    return full_rank_sweep(t, max_edges, k, FieldSpec.parse(field), seed, minimal_only)


def robustness(t: int, k: int, lam: str, trials: int, field: str, seed: int) -> Report:
    return robustness_trials(t, k, as_fraction(lam), trials, FieldSpec.parse(field), seed)


def budget(n: int, k: int, L: int, eps: str, q: Optional[int], r: Optional[int], t: Optional[int]) -> Dict[str, Any]:
    eps_value = as_fraction(eps)
    if not 0 < eps_value < 1:
        raise InvalidParameters(f"need 0 < eps < 1, got {eps}")
    field_size = q if q is not None else theorem_field_size(n, k, L, eps_value)
    if r is None:
        r = math.floor(eps_value * n / 2)
    count, reference = hypergraph_count_bound(n, L)
    result = certificate_budget(t if t is not None else L + 1, k, field_size, n, r, L)
    return {
        "n": n,
        "k": k,
        "L": L,
        "eps": str(eps_value),
        "q": str(field_size),
        "r": r,
        "budget": result.to_dict(),
        "below_target": result.union_bound <= Fraction(1, 2 ** (L * n)),
        "hypergraph_count": str(count),
        "hypergraph_count_reference": str(reference),
    }


def _int(description: str, default: Any = None) -> Dict[str, Any]:
    return {"type": "integer", "description": description, "default": default}


def _str(description: str, default: Any = None) -> Dict[str, Any]:
    return {"type": "string", "description": description, "default": default}


INPUT = _str("JSON file, stdin when omitted or '-'")
FIELD = _str("field: 'p' or 'p^m' or 'p^m/c_m..c_0'")
SEED = _int("random seed", 0)
ALPHAS = _str("comma-separated evaluation points overriding random puncturing")
MODE = {"type": "string", "description": "oracle mode", "enum": [m.name for m in OracleMode], "default": "exhaustive"}


def _declare(name: str, description: str, required: Sequence[str], **properties: Dict[str, Any]) -> dict:
    return {
        "name": name,
        "description": description,
        "parameters": {"type": "object", "properties": properties, "required": list(required)},
    }


COMMANDS = [
    Command(
        wpc_check,
        _declare("wpc-check", "test k-weak partition connectivity", ["k"], input=INPUT, k=_int("connectivity parameter")),
    ),
    Command(orient, _declare("orient", "find a k-weak orientation", ["k"], input=INPUT, k=_int("connectivity parameter"))),
    Command(gzp, _declare("gzp", "generic zero pattern of a k-wpc hypergraph", ["k"], input=INPUT, k=_int("code dimension"))),
    Command(
        rim_rank,
        _declare(
            "rim-rank",
            "rank of the reduced intersection matrix under a partial assignment",
            ["k", "field"],
            input=INPUT,
            k=_int("code dimension"),
            field=FIELD,
            assign=_str("comma-separated values of X_1, X_2, ..."),
            seed=SEED,
        ),
    ),
    Command(
        certify,
        _declare(
            "certify",
            "certificates of random distinct assignments",
            ["k", "r", "field"],
            input=INPUT,
            k=_int("code dimension"),
            r=_int("certificate length"),
            field=FIELD,
            seed=SEED,
            trials=_int("number of trials", 1),
            workers=_int("worker processes", 1),
            alphas=_str("run once at these comma-separated points"),
        ),
        streams=True,
    ),
    Command(
        bad_list,
        _declare(
            "bad-list",
            "brute-force search for bad lists of L+1 codewords",
            ["field", "k", "L"],
            field=FIELD,
            n=_int("block length"),
            k=_int("code dimension"),
            L=_int("list size"),
            seed=SEED,
            mode=MODE,
            samples=_int("subsets drawn in sampled mode", 20000),
            alphas=ALPHAS,
            max_distance=_int("flag threshold on the total distance, default L(n-k)"),
            limit=_int("bad lists kept in the report"),
        ),
    ),
    Command(
        validate,
        _declare(
            "validate",
            "check dense subsets, connectivity and rank deficiency of every bad list",
            ["field", "k", "L"],
            field=FIELD,
            n=_int("block length"),
            k=_int("code dimension"),
            L=_int("list size"),
            seed=SEED,
            alphas=ALPHAS,
            input=_str("bad-list report to check instead of running the oracle"),
        ),
    ),
    Command(
        mc_puncture,
        _declare(
            "mc-puncture",
            "Monte Carlo trials over random puncturings",
            ["field", "n", "k", "L", "eps"],
            field=FIELD,
            n=_int("block length"),
            k=_int("code dimension"),
            L=_int("list size"),
            eps={"type": "number", "description": "gap to capacity"},
            seed=SEED,
            trials=_int("number of trials", 100),
            workers=_int("worker processes", 1),
            mode=MODE,
            samples=_int("subsets drawn in sampled mode", 20000),
        ),
        streams=True,
    ),
    Command(
        blowup,
        _declare(
            "blowup",
            "list size of the full-length code at a given agreement",
            ["field", "k", "agreement"],
            field=FIELD,
            k=_int("code dimension"),
            agreement=_int("required agreement"),
            samples=_int("random words in sampled mode", 20000),
            seed=SEED,
        ),
    ),
    Command(
        gmmds,
        _declare(
            "gmmds",
            "search a GM-MDS witness for a zero pattern",
            ["field"],
            input=INPUT,
            field=FIELD,
            budget=_int("attempts with fresh points", 100),
            seed=SEED,
        ),
    ),
    Command(
        full_rank_sweep_command,
        _declare(
            "full-rank-sweep",
            "full column rank of every small k-wpc hypergraph",
            ["field"],
            t=_int("largest vertex count", 3),
            k=_int("largest dimension", 2),
            max_edges=_int("largest edge count", 6),
            field=FIELD,
            seed=SEED,
            minimal_only={"type": "boolean", "description": "inclusion-minimal hypergraphs only", "default": True},
        ),
    ),
    Command(
        robustness,
        _declare(
            "robustness",
            "full column rank after deleting rows of a few variables",
            ["field", "t", "k"],
            t=_int("vertex count"),
            k=_int("code dimension"),
            lam=_str("deletion rate lambda", "1/2"),
            trials=_int("number of trials", 200),
            field=FIELD,
            seed=SEED,
        ),
    ),
    Command(
        budget,
        _declare(
            "budget",
            "exact certificate union bound",
            ["n", "k", "L", "eps"],
            n=_int("block length"),
            k=_int("code dimension"),
            L=_int("list size"),
            eps=_str("gap to capacity, e.g. 1/2"),
            q=_int("field size, default n + k*2^(10L/eps)"),
            r=_int("certificate length, default floor(eps*n/2)"),
            t=_int("vertex count, default L+1"),
        ),
    ),
]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default=None, help="output file; '-' streams per-trial JSON lines to stdout")
    common.add_argument(
        "--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="stderr log level"
    )
    parser = argparse.ArgumentParser(prog="rs-list-decoding", description="List-decoding experiments for punctured Reed-Solomon codes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for command in COMMANDS:
        command.add_parser(subparsers, parents=[common])
    return parser


def _document(result: Any) -> Dict[str, Any]:
    if isinstance(result, Report):
        return result.to_json_dict()
    return {"schema": SCHEMA_VERSION, **result}


def _write_line(doc: Any) -> None:
    if isinstance(doc, Report):
        doc = doc.to_json_dict()
    sys.stdout.write(json.dumps(doc) + "\n")
    sys.stdout.flush()


def _error(e: Exception) -> None:
    doc: Dict[str, Any] = {"schema": SCHEMA_VERSION, "error": e.__class__.__name__, "message": str(e)}
    if isinstance(e, InvariantViolation):
        doc["dump"] = e.dump
    sys.stderr.write(json.dumps(doc, default=str) + "\n")


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one subcommand and write its JSON document.

    Returns:
        int: 0 on success, 1 for library errors, 2 for usage errors and malformed JSON.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else (0 if e.code is None else 2)
    logging.basicConfig(level=args.log_level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    command: Command = args.command
    kwargs = command.arguments(args)
    streaming = args.output == "-"
    if command.streams:
        kwargs["on_trial"] = _write_line if streaming else None
    logger.info(f"run_cli({command.name}, {kwargs=})")
    try:
        doc = _document(command.invoke(**kwargs))
    except (json.JSONDecodeError, OSError) as e:
        logger.error(f"unreadable input, reason: {e.__class__.__name__} {e}")
        _error(e)
        return 2
    except ListDecodingError as e:
        logger.error(f"{command.name} failed, reason: {e.__class__.__name__} {e}")
        _error(e)
        return 1
    if args.output is None:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    elif streaming:
        _write_line(doc)
    else:
        with open(args.output, "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")
    return 0


def main() -> None:
    sys.exit(run_cli())


__all__ = ["COMMANDS", "build_parser", "run_cli", "main"]
