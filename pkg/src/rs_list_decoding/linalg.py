"""Exact linear algebra over any field object (see :mod:`rs_list_decoding.polynomials`)."""

from typing import Any, List, Optional, Sequence, Tuple

Matrix = List[List[Any]]


def transpose(matrix: Sequence[Sequence[Any]]) -> Matrix:
    return [list(col) for col in zip(*matrix)]


def identity(size: int, field) -> Matrix:
    return [[field.one if i == j else field.zero for j in range(size)] for i in range(size)]


def matmul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]], field) -> Matrix:
    columns = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in columns:
            acc = field.zero
            for x, y in zip(row, col):
                if x != field.zero and y != field.zero:
                    acc = field.add(acc, field.mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def row_reduce(matrix: Sequence[Sequence[Any]], field) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in matrix]
    if not rows:
        return rows, []
    n_cols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != field.zero), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != field.zero:
                factor = rows[i][c]
                rows[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix: Sequence[Sequence[Any]], field) -> int:
    """Rank by forward elimination; every step is exact in the field."""
    rows = [list(r) for r in matrix if r]
    if not rows:
        return 0
    n_cols = len(rows[0])
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != field.zero), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        for i in range(r + 1, len(rows)):
            if rows[i][c] != field.zero:
                factor = field.mul(rows[i][c], inv)
                rows[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def determinant(matrix: Sequence[Sequence[Any]], field) -> Any:
    rows = [list(r) for r in matrix]
    size = len(rows)
    det = field.one
    for c in range(size):
        pivot = next((i for i in range(c, size) if rows[i][c] != field.zero), None)
        if pivot is None:
            return field.zero
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = field.neg(det)
        det = field.mul(det, rows[c][c])
        inv = field.inv(rows[c][c])
        for i in range(c + 1, size):
            if rows[i][c] != field.zero:
                factor = field.mul(rows[i][c], inv)
                rows[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(rows[i], rows[c])]
    return det


def nullspace(matrix: Sequence[Sequence[Any]], n_cols: int, field) -> Matrix:
    """Basis of {v : matrix @ v = 0} for a matrix with ``n_cols`` columns."""
    reduced, pivots = row_reduce(matrix, field)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * n_cols
        v[f] = field.one
        for row, p in zip(reduced, pivots):
            v[p] = field.neg(row[f])
        basis.append(v)
    return basis


class EchelonBasis:
    """Incrementally grown row space; :meth:`add` reports whether a row is independent."""

    def __init__(self, field) -> None:
        self.field = field
        self.rows: List[Tuple[int, List[Any]]] = []

    def reduce(self, row: Sequence[Any]) -> List[Any]:
        field = self.field
        v = list(row)
        for pivot, basis_row in self.rows:
            c = v[pivot]
            if c != field.zero:
                v = [field.sub(x, field.mul(c, y)) for x, y in zip(v, basis_row)]
        return v

    def add(self, row: Sequence[Any]) -> bool:
        field = self.field
        v = self.reduce(row)
        pivot: Optional[int] = next((i for i, x in enumerate(v) if x != field.zero), None)
        if pivot is None:
            return False
        inv = field.inv(v[pivot])
        self.rows.append((pivot, [field.mul(x, inv) for x in v]))
        return True

    def __len__(self) -> int:
        return len(self.rows)


__all__ = [
    "Matrix",
    "transpose",
    "identity",
    "matmul",
    "row_reduce",
    "rank",
    "determinant",
    "nullspace",
    "EchelonBasis",
]
