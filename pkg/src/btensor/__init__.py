"""Classification, constructive decomposition and positive-definiteness
certification for dense real tensors in the diagonal-dominance hierarchy,
with an independent sphere-minimization oracle."""

__version__ = "0.1.0"

from .core import (
    Tensor,
    apply,
    form_value,
    form_values,
    is_diagonal_index,
    is_symmetric,
    linear_combine,
    make_tensor,
    partially_all_one,
    symmetrize,
    unit_tensor,
)
from .classify import (
    ClassReport,
    InternalConsistencyError,
    PairStats,
    RowStats,
    Verdict,
    Witness,
    all_row_stats,
    b_tensor_formulations,
    classify_all,
    is_b_tensor,
    is_double_b_tensor,
    is_dsdd,
    is_qdsdd,
    is_quasi_double_b0_tensor,
    is_quasi_double_b_tensor,
    is_z_tensor,
    pair_stats,
    product_inequality,
    row_stats,
)
from .decompose import (
    INCONCLUSIVE,
    NOT_POSITIVE_DEFINITE,
    POSITIVE_DEFINITE,
    Certificate,
    Decomposition,
    DecompositionError,
    HEigenReport,
    PreconditionError,
    decompose,
    h_eigen_positivity_check,
    pd_certify,
)
from .oracle import (
    OracleResult,
    SearchCandidate,
    SearchReport,
    conjecture_search,
    lambda_min_estimate,
    sphere_minimize,
)
from .io import load_tensor, save_tensor

__all__ = [
    "__version__",
    "Tensor",
    "make_tensor",
    "unit_tensor",
    "partially_all_one",
    "is_symmetric",
    "symmetrize",
    "form_value",
    "form_values",
    "apply",
    "linear_combine",
    "is_diagonal_index",
    "RowStats",
    "PairStats",
    "Witness",
    "Verdict",
    "ClassReport",
    "InternalConsistencyError",
    "row_stats",
    "pair_stats",
    "all_row_stats",
    "b_tensor_formulations",
    "is_b_tensor",
    "product_inequality",
    "is_double_b_tensor",
    "is_quasi_double_b_tensor",
    "is_quasi_double_b0_tensor",
    "is_z_tensor",
    "is_dsdd",
    "is_qdsdd",
    "classify_all",
    "Decomposition",
    "Certificate",
    "HEigenReport",
    "PreconditionError",
    "DecompositionError",
    "decompose",
    "pd_certify",
    "h_eigen_positivity_check",
    "POSITIVE_DEFINITE",
    "NOT_POSITIVE_DEFINITE",
    "INCONCLUSIVE",
    "OracleResult",
    "SearchCandidate",
    "SearchReport",
    "sphere_minimize",
    "lambda_min_estimate",
    "conjecture_search",
    "load_tensor",
    "save_tensor",
]
