"""Separability of multipartite pure states from coherence-vector norms."""

from .basis import (
    CoherenceVector,
    CorrelationTensor,
    GeneratorBasis,
    Normalization,
    coherence_vector,
    correlation_tensor,
    local_coherence_vector,
    make_basis,
    norm_squared,
)
from .errors import (
    BadDimensionError,
    BadIndexError,
    BadPermutationError,
    BadSpecError,
    BadSubsetError,
    CriterionDisagreementError,
    DimMismatchError,
    NotSeparableError,
    PureSepError,
    ZeroStateError,
)
from .measures import MeasureReport, measure
from .oracle import Kind, RandomSpec, SchmidtData, bell, generate, ghz, purity_oracle, schmidt, w_state
from .separability import (
    DEFAULT_TOL,
    Factorization,
    SeparabilityReport,
    amplitude_tolerance,
    bipartition_separable,
    check,
    check_minor_criterion,
    check_norm_criterion,
    factorize,
)
from .state import (
    DensityMatrix,
    PureState,
    density_of,
    fidelity,
    normalize,
    partial_trace,
    permute_subsystems,
    product_state,
)

__version__ = "0.1.0"
