"""Spectral toolkit for absolutely norm-attaining operators.

Decide AN membership of finitely presented operator spectra, compute the
canonical ``K - F + alpha*I`` (and phase-carrying ``K - F + alpha*V``)
decompositions with their square, square-root and inverse transforms, and
verify everything numerically on finite matrix realizations.
"""

from .errors import (
    AlphaZeroError,
    AnopError,
    DimTooLargeError,
    DimTooSmallError,
    MalformedModelError,
    NegativeValueError,
    NoConvergenceError,
    NotANError,
    NotHermitianError,
    NotInjectiveError,
    NotPartialIsometryError,
    NotPSDError,
    ParseError,
    ShapeMismatchError,
    SingularError,
    WrongKindError,
)
from .sequences import DecaySequence, MATERIALIZE_DEPTH, merge_sequences
from .model import (
    ABOVE,
    BELOW,
    ANVerdict,
    Cluster,
    EigenvalueEntry,
    INF,
    KINDS,
    MERGE_TOL,
    ModuliReport,
    NORMAL,
    POSITIVE,
    SELF_ADJOINT,
    SpectrumModel,
    VIOLATION_ORDER,
    classify,
    is_finite_dimensional,
    materialize,
    moduli_report,
    modulus_spectrum,
    normalize_model,
    total_multiplicity,
)
from .decompose import (
    AMForm,
    Block,
    ClusterBlock,
    FredholmReport,
    PositiveTriple,
    StructuredDecomposition,
    adjoint_spectrum,
    decompose_positive,
    fredholm_report,
    gram_spectrum,
    imaginary_shift,
    invert_triple,
    recompose,
    square_triple,
    sqrt_triple,
    structure_normal,
    structure_selfadjoint,
)
from .matrix import (
    BlockForm,
    EigenDecomposition,
    MAX_DIM,
    PolarPair,
    RealizedOperator,
    VerificationReport,
    WitnessReport,
    block_form,
    converse_witness,
    hermitian_eigen,
    inverse_via_blocks,
    normal_eigen,
    polar_decompose,
    positive_sqrt,
    realize_matrix,
    seeded_unitary,
    verify_structure,
)
from .oracle import (
    FAMILIES,
    GeneratorProfile,
    OracleFailure,
    OracleReport,
    PerturbationReport,
    TruncationProfile,
    VIOLATION_CODES,
    attainment_oracle,
    generate_model,
    generate_violator,
    mixed_model,
    rank_perturbation_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
