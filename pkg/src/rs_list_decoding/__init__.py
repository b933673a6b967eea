# SPDX-FileCopyrightText: 2025-present Keisuke Magara <197999578+keimag-maru@users.noreply.github.com>
#
# SPDX-License-Identifier: MIT
from .__about__ import __version__
from .certify import (
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
from .codes import Codeword, Polynomial, RSCode, encode, generator_matrix, hamming_distance, parity_check_matrix
from .errors import InvariantViolation, ListDecodingError
from .finite_field import FieldSpec, GaloisField, field_arith, get_field, make_rng, sample_distinct_points
from .hypergraph import (
    Hypergraph,
    Orientation,
    ZeroPattern,
    agreement_hypergraph,
    dense_subset,
    extract_minimal_subset,
    find_orientation,
    gzp_from_orientation,
    is_weakly_partition_connected,
    verify_gzp,
    verify_orientation,
)
from .rim import (
    PartialAssignment,
    SymbolicRIM,
    build_rim,
    delete_rows,
    evaluate,
    is_full_column_rank_symbolic,
    smallest_nonsingular_submatrix,
    type_order,
)

__all__ = [
    "__version__",
    "Bottom",
    "Certificate",
    "CertificateEngine",
    "certificate_budget",
    "descent_count",
    "get_certificate",
    "get_matrix_sequence",
    "hypergraph_count_bound",
    "theorem_field_size",
    "Codeword",
    "Polynomial",
    "RSCode",
    "encode",
    "generator_matrix",
    "hamming_distance",
    "parity_check_matrix",
    "InvariantViolation",
    "ListDecodingError",
    "FieldSpec",
    "GaloisField",
    "field_arith",
    "get_field",
    "make_rng",
    "sample_distinct_points",
    "Hypergraph",
    "Orientation",
    "ZeroPattern",
    "agreement_hypergraph",
    "dense_subset",
    "extract_minimal_subset",
    "find_orientation",
    "gzp_from_orientation",
    "is_weakly_partition_connected",
    "verify_gzp",
    "verify_orientation",
    "PartialAssignment",
    "SymbolicRIM",
    "build_rim",
    "delete_rows",
    "evaluate",
    "is_full_column_rank_symbolic",
    "smallest_nonsingular_submatrix",
    "type_order",
]
