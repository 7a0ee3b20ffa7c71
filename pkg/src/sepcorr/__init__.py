"""Relative-entropy correlation measures for two-qubit separable states.

Computes total correlation T, dissonance Q, classical correlation C and the
gap L for separable two-qubit states, verifies the additivity identity
T = Q + C - L at any dephasing basis, and certifies the superadditive
relation T <= Q + C by construction and by Monte-Carlo sweep.
"""

__version__ = "0.1.0"

from .correlations import (
    ClassicalState,
    CorrelationReport,
    MeasurementAxis,
    analyze,
    classical_correlation,
    classical_objective,
    closest_classical,
    dephase,
    l_quantity,
    marginal_product,
    mutual_information,
)
from .matcore import (
    DensityMatrix,
    Spectrum,
    eig_hermitian,
    kron,
    partial_trace,
    partial_transpose,
    rel_entropy,
    trace_distance,
    vn_entropy,
)
from .states import (
    Ket,
    MixtureTerm,
    ProductMixtureSpec,
    PptResult,
    bell_diagonal,
    counterexample_spec,
    counterexample_state,
    from_product_mixture,
    ket0,
    ket1,
    ket_h,
    load_state,
    parse_state,
    ppt_check,
    random_separable,
    serialize_state,
)
from .sweep import SweepConfig, SweepRecord, SweepSummary, run_sweep, write_csv

__all__ = [
    "ClassicalState",
    "CorrelationReport",
    "DensityMatrix",
    "Ket",
    "MeasurementAxis",
    "MixtureTerm",
    "PptResult",
    "ProductMixtureSpec",
    "Spectrum",
    "SweepConfig",
    "SweepRecord",
    "SweepSummary",
    "analyze",
    "bell_diagonal",
    "classical_correlation",
    "classical_objective",
    "closest_classical",
    "counterexample_spec",
    "counterexample_state",
    "dephase",
    "eig_hermitian",
    "from_product_mixture",
    "ket0",
    "ket1",
    "ket_h",
    "kron",
    "l_quantity",
    "load_state",
    "marginal_product",
    "mutual_information",
    "parse_state",
    "partial_trace",
    "partial_transpose",
    "ppt_check",
    "random_separable",
    "rel_entropy",
    "run_sweep",
    "serialize_state",
    "trace_distance",
    "vn_entropy",
    "write_csv",
]
