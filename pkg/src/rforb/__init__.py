"""Forbidden configurations in r-matrices: containment, extremal constructions,
closed-form values and an exact branch-and-bound solver."""

__version__ = "0.1.0"

from .containment import Witness, avoids, contains, contains_with_column, witness  # noqa: E402
from .formulas import FormulaError, FormulaQuery, ForbValue, Status, evaluate  # noqa: E402
from .matrix import (  # noqa: E402
    MatrixError,
    ParseError,
    RMatrix,
    TwoRowSpec,
    build_block,
    build_F,
    build_identity,
    build_Kk,
    build_Kks,
    multiply,
    parse_matrix,
    read_matrix,
    restrict,
    write_matrix,
)
from .solver import SearchBudget, enumerate_optima, forb_exact, lower_bound_greedy  # noqa: E402

__all__ = [
    "FormulaError", "FormulaQuery", "ForbValue", "MatrixError", "ParseError", "RMatrix", "SearchBudget",
    "Status", "TwoRowSpec", "Witness", "avoids", "build_F", "build_Kk", "build_Kks", "build_block",
    "build_identity", "contains", "contains_with_column", "enumerate_optima", "evaluate", "forb_exact",
    "lower_bound_greedy", "multiply", "parse_matrix", "read_matrix", "restrict", "witness", "write_matrix",
]
