"""
Brute-force average-radius oracles for small Reed–Solomon codes.

For L+1 codewords the best received word is coordinatewise: taking a plurality symbol
at every coordinate gives ``min_y sum_j d(y, c_j) = sum_i (L+1 - plurality_i)``. The
exhaustive oracle scans subsets containing the zero codeword only, since the total
distance is invariant under translating y and the whole list by one codeword.
"""

import math
from itertools import combinations
from logging import getLogger
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..codes import RSCode
from ..errors import InvalidParameters, SearchSpaceTooLarge
from ..finite_field import FieldSpec, get_field, make_rng
from .config import BadList, BlowupReport, OracleMode, OracleReport, parse_enum

EXHAUSTIVE_MESSAGE_LIMIT = 2**16
BLOWUP_EXHAUSTIVE_LIMIT = 2**22
BLOWUP_LINE_LIMIT = 2**24
BLOWUP_BATCH_CELLS = 2**24

BLOWUP_NOTE = (
    "Desk-scale search for list-size growth of full-length codes. The subspace-polynomial "
    "construction is replaced by exhaustive search over coset representatives or, for k = 2, "
    "over canonical zero sets of lines (exact), or "
    "by planted random received words (sampled)."
)

logger = getLogger("rs_list_decoding.oracle")


def plurality_word(codewords: np.ndarray) -> Tuple[List[int], int]:
    """A received word minimizing the total distance to the rows, and that distance.

    Ties pick the smallest symbol.
    """
    rows = np.asarray(codewords, dtype=np.int64)
    m, n = rows.shape
    y, total = [], 0
    for i in range(n):
        values, counts = np.unique(rows[:, i], return_counts=True)
        best = int(np.argmax(counts))
        y.append(int(values[best]))
        total += m - int(counts[best])
    return y, total


def min_total_distance(codewords: Sequence[Sequence[int]]) -> Tuple[List[int], int]:
    """min over y of sum_j d(y, c_j) for pairwise-distinct codewords."""
    if len({tuple(c) for c in codewords}) != len(codewords):
        raise InvalidParameters("codewords must be pairwise distinct")
    return plurality_word(np.asarray(codewords, dtype=np.int64))


def _pluralities(prefix: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """sum_i plurality_i of prefix + each candidate row; prefix is (m, n), candidates (c, n)."""
    matches = (candidates[:, None, :] == prefix[None, :, :]).sum(axis=1)
    own = (prefix[:, None, :] == prefix[None, :, :]).sum(axis=1).max(axis=0)
    return np.maximum(own[None, :], matches + 1).sum(axis=1)


def _encode_messages(code: RSCode, messages: np.ndarray) -> np.ndarray:
    field = code.field
    points = np.array(code.alphas, dtype=np.int64)[None, :]
    words = np.zeros((messages.shape[0], code.n), dtype=np.int64)
    for power in range(code.k - 1, -1, -1):
        words = field.add_array(field.mul_array(words, points), messages[:, power : power + 1])
    return words


def bad_list_oracle(
    code: RSCode,
    L: int,
    mode: Union[OracleMode, str] = OracleMode.exhaustive,
    max_distance: Optional[int] = None,
    samples: int = 20000,
    seed: int = 0,
    reduce_translations: bool = True,
    limit: Optional[int] = None,
    stream: Sequence[int] = (),
) -> OracleReport:
    """Find (L+1)-subsets of codewords whose best received word is within ``max_distance`` in total.

    Args:
        code (RSCode): The code.
        L (int): List size; subsets have L+1 codewords.
        mode (OracleMode | str, optional): exhaustive (q^k <= 2^16) or sampled. Defaults to exhaustive.
        max_distance (int, optional): Flag threshold on sum_j d(y, c_j). Defaults to L(n-k).
        samples (int, optional): Subsets drawn in sampled mode. Defaults to 20000.
        seed (int, optional): Seed of the sampling stream. Defaults to 0.
        reduce_translations (bool, optional): Scan only subsets containing the zero codeword. Defaults to True.
        limit (int, optional): Keep at most this many bad lists in the report. Defaults to None (all).
        stream (Sequence[int], optional): Stream id of the sampling generator under ``seed``. Defaults to ().

    Returns:
        OracleReport: Flagged lists with their optimal received words, named by message index.
    """
    mode = parse_enum(OracleMode, mode)
    if L < 1:
        raise InvalidParameters(f"list size must be positive, got {L=}")
    n, k = code.n, code.k
    threshold = L * (n - k) if max_distance is None else max_distance
    target = (L + 1) * n - threshold
    m = code.message_count
    if m < L + 1:
        raise InvalidParameters(f"the code has {m} codewords, fewer than L+1={L + 1}")
    bad: List[BadList] = []
    flagged = 0
    best: Optional[int] = None

    def record(indices: Sequence[int], words: np.ndarray) -> None:
        nonlocal flagged
        flagged += 1
        if limit is None or len(bad) < limit:
            y, total = plurality_word(words)
            bad.append(BadList(y=y, codewords=[int(i) for i in indices], total_distance=total))

    if mode is OracleMode.exhaustive:
        if m > EXHAUSTIVE_MESSAGE_LIMIT:
            raise SearchSpaceTooLarge(f"q^k = {m} exceeds the exhaustive limit {EXHAUSTIVE_MESSAGE_LIMIT}")
        W = code.codeword_matrix()
        logger.info(f"bad_list_oracle(exhaustive, field={code.spec!s}, {n=}, {k=}, {L=}, {threshold=})")
        heads = range(1, m) if reduce_translations else range(m)
        fixed: Tuple[int, ...] = (0,) if reduce_translations else ()
        free = L if reduce_translations else L + 1
        checked = 0
        for prefix_tail in combinations(heads, free - 1):
            prefix = fixed + prefix_tail
            start = (prefix[-1] + 1) if prefix else 0
            if start >= m:
                continue
            candidates = W[start:]
            totals = _pluralities(W[list(prefix)], candidates)
            checked += len(candidates)
            distances = (L + 1) * n - totals
            low = int(distances.min())
            best = low if best is None else min(best, low)
            for offset in np.nonzero(totals >= target)[0]:
                last = start + int(offset)
                record(prefix + (last,), W[list(prefix) + [last]])
        flagged_total = m * flagged // (L + 1) if reduce_translations else flagged
        coverage = 1.0
    else:
        rng = make_rng(seed, 1, *stream)
        logger.info(f"bad_list_oracle(sampled, field={code.spec!s}, {n=}, {k=}, {L=}, {samples=})")
        checked = 0
        for _ in range(samples):
            if m <= 2**62:
                indices = sorted(int(i) for i in rng.choice(m, size=L + 1, replace=False))
                q = code.q
                messages = np.array([[(i // q**p) % q for p in range(k)] for i in indices], dtype=np.int64)
            else:
                messages = rng.integers(0, code.q, size=(L + 1, k), dtype=np.int64)
                if len({tuple(row) for row in messages.tolist()}) < L + 1:
                    continue
                indices = [sum(int(c) * code.q**p for p, c in enumerate(row)) for row in messages.tolist()]
            words = _encode_messages(code, messages)
            _, distance = plurality_word(words)
            checked += 1
            best = distance if best is None else min(best, distance)
            if distance <= threshold:
                record(indices, words)
        total_subsets = math.comb(m, L + 1)
        flagged_total = flagged
        coverage = checked / total_subsets if total_subsets else 1.0
        reduce_translations = False
    return OracleReport(
        mode=mode.name,
        field=str(code.spec),
        n=n,
        k=k,
        L=L,
        max_distance=threshold,
        subsets_checked=checked,
        coverage=coverage,
        translation_reduced=reduce_translations,
        flagged=flagged,
        flagged_total=flagged_total,
        min_total_distance=best,
        bad_lists=bad,
    )


def _list_sizes(Y: np.ndarray, W: np.ndarray, agreement: int) -> np.ndarray:
    agree = (Y[:, None, :] == W[None, :, :]).sum(axis=2)
    return (agree >= agreement).sum(axis=1)


def _affine_maps(spec: FieldSpec) -> np.ndarray:
    """Rows are the permutations x -> u*x + v of the field, u != 0."""
    field = get_field(spec)
    xs = np.arange(spec.order, dtype=np.int64)
    units = np.arange(1, spec.order, dtype=np.int64)
    scaled = field.mul_array(units[:, None], xs[None, :])
    shifts = np.arange(spec.order, dtype=np.int64)
    return field.add_array(scaled[:, None, :], shifts[None, :, None]).reshape(-1, spec.order)


def _zero_set_orbits(maps: np.ndarray, size: int) -> List[Tuple[int, ...]]:
    """One representative per orbit of ``size``-subsets of the field under the affine maps."""
    seen = set()
    reps = []
    for subset in combinations(range(maps.shape[1]), size):
        if subset in seen:
            continue
        reps.append(subset)
        seen.update(map(tuple, np.sort(maps[:, list(subset)], axis=1).tolist()))
    return reps


def _line_blowup(spec: FieldSpec, W: np.ndarray, agreement: int) -> Tuple[int, List[int], int]:
    """Exact search for k = 2, where the codewords are the lines y = a + b*x.

    Some line c agrees with y on >= agreement points. Translating y by c, precomposing with
    an affine map of the field and scaling y are bijections on lines, so y may be taken with
    a canonical zero set Z of size >= agreement and value 1 at the first point outside Z.
    """
    q = spec.order
    n_maps = q * (q - 1)
    sizes = range(agreement, q + 1)

    def words_per_set(z: int) -> int:
        return (q - 1) ** (q - z - 1) if z < q else 1

    estimate = sum(-(-math.comb(q, z) // n_maps) * words_per_set(z) for z in sizes)
    subsets = sum(math.comb(q, z) for z in sizes)
    if estimate > BLOWUP_LINE_LIMIT or subsets > BLOWUP_LINE_LIMIT:
        raise SearchSpaceTooLarge(
            f"line search over field {spec!s} at agreement {agreement} needs about {estimate} words"
        )
    maps = _affine_maps(spec)
    orbits = {z: _zero_set_orbits(maps, z) for z in sizes}
    total = sum(len(reps) * words_per_set(z) for z, reps in orbits.items())
    if total > BLOWUP_LINE_LIMIT:
        raise SearchSpaceTooLarge(f"line search over field {spec!s} needs {total} words")
    W = W.astype(np.uint8)
    batch = max(1, BLOWUP_BATCH_CELLS // (W.shape[0] * q))
    best_size, best_y = -1, [0] * q
    for z, reps in orbits.items():
        count = words_per_set(z)
        for zeros in reps:
            rest = [x for x in range(q) if x not in zeros]
            for start in range(0, count, batch):
                index = np.arange(start, min(start + batch, count), dtype=np.int64)
                Y = np.zeros((len(index), q), dtype=np.uint8)
                if rest:
                    Y[:, rest[0]] = 1
                for p, x in enumerate(rest[1:]):
                    Y[:, x] = 1 + (index // (q - 1) ** p) % (q - 1)
                found = _list_sizes(Y, W, agreement)
                top = int(np.argmax(found))
                if int(found[top]) > best_size:
                    best_size, best_y = int(found[top]), Y[top].astype(int).tolist()
    return best_size, best_y, total


def full_length_blowup_search(
    spec: FieldSpec,
    k: int,
    agreement: int,
    samples: int = 20000,
    seed: int = 0,
) -> BlowupReport:
    """Largest number of codewords of the full-length code agreeing with one y on >= ``agreement`` positions.

    Exact for k = 1 (closed form), for k = 2 (search over canonical zero sets, raising
    SearchSpaceTooLarge past its budget) and for larger k when the q^(q-k) coset
    representatives fit the exhaustive budget; otherwise planted random words give a lower bound.
    """
    q = spec.order
    if not 1 <= k <= q:
        raise InvalidParameters(f"need 1 <= k <= q, got {k=} and {q=}")
    if not 0 <= agreement <= q:
        raise InvalidParameters(f"agreement must lie in [0, {q}], got {agreement}")
    if q**k > EXHAUSTIVE_MESSAGE_LIMIT:
        raise SearchSpaceTooLarge(f"q^k = {q ** k} exceeds {EXHAUSTIVE_MESSAGE_LIMIT}")
    code = RSCode.full_length(spec, k)
    header = dict(note=BLOWUP_NOTE, field=str(spec), k=k, agreement=agreement)
    if agreement == 0:
        return BlowupReport(**header, method="closed_form", searched=0, best_y=[0] * q, list_size=q**k)
    if k == 1:
        size = min(q, q // agreement)
        y = [min(i // agreement, size - 1) for i in range(q)]
        return BlowupReport(**header, method="closed_form", searched=0, best_y=y, list_size=size)
    W = code.codeword_matrix()
    if k == 2:
        best_size, best_y, searched = _line_blowup(spec, W, agreement)
        logger.info(f"full_length_blowup_search(lines, field={spec!s}, {agreement=}) -> {best_size} over {searched} words")
        return BlowupReport(**header, method="exhaustive", searched=searched, best_y=best_y, list_size=best_size)
    m = W.shape[0]
    free = q - k
    if q**free <= BLOWUP_EXHAUSTIVE_LIMIT:
        # every coset of the code has one representative vanishing on the first k points
        total = q**free
        batch = max(1, BLOWUP_BATCH_CELLS // (m * q))
        best_size, best_y = -1, None
        for start in range(0, total, batch):
            index = np.arange(start, min(start + batch, total), dtype=np.int64)
            Y = np.zeros((len(index), q), dtype=np.int64)
            for p in range(free):
                Y[:, k + p] = (index // q**p) % q
            sizes = _list_sizes(Y, W, agreement)
            top = int(np.argmax(sizes))
            if int(sizes[top]) > best_size:
                best_size, best_y = int(sizes[top]), Y[top].tolist()
        logger.info(f"full_length_blowup_search(exhaustive, field={spec!s}, {k=}, {agreement=}) -> {best_size}")
        return BlowupReport(**header, method="exhaustive", searched=total, best_y=best_y, list_size=best_size)
    rng = make_rng(seed, 2)
    per_word = max(1, q // agreement)
    best_size, best_y = -1, None
    for _ in range(samples):
        order = rng.permutation(q)
        chosen = rng.choice(m, size=min(per_word, m), replace=False)
        y = rng.integers(0, q, size=q, dtype=np.int64)
        for block, c in enumerate(chosen):
            positions = order[block * agreement : (block + 1) * agreement]
            y[positions] = W[c, positions]
        size = int(_list_sizes(y[None, :], W, agreement)[0])
        if size > best_size:
            best_size, best_y = size, y.tolist()
    logger.warning(f"full_length_blowup_search sampled {samples} words; the list size is a lower bound")
    return BlowupReport(**header, method="sampled", searched=samples, best_y=best_y, list_size=best_size)


__all__ = [
    "EXHAUSTIVE_MESSAGE_LIMIT",
    "BLOWUP_EXHAUSTIVE_LIMIT",
    "BLOWUP_LINE_LIMIT",
    "BLOWUP_NOTE",
    "plurality_word",
    "min_total_distance",
    "bad_list_oracle",
    "full_length_blowup_search",
]
