"""qpool: pooling independent observers' quantum states of knowledge.

Each observer measures the same system, learns an outcome, and holds a
density matrix summarizing what they know.  This package computes the
state held by someone who has all the records, checks it against a
first-principles sequential-measurement oracle, and exposes the qubit
closed form in Bloch coordinates.
"""

from .errors import (
    BadRankError,
    BadTraceError,
    BlochTooLongError,
    DimMismatchError,
    DomainError,
    IncompatibleStatesError,
    LengthMismatchError,
    NotCompleteError,
    NotHermitianError,
    NotPositiveError,
    NotUnitaryError,
    QpoolError,
    SingularSumError,
    TooFewStatesError,
    TooManyStatesError,
    ZeroEffectError,
    ZeroProbabilityError,
)
from .harness import (
    Scenario,
    VerificationReport,
    oracle_pool,
    random_density,
    random_povm,
    run_scenario,
    verify_commuting_reduction,
    verify_three_observer,
    verify_two_observer,
)
from .linalg import (
    bloch_to_density,
    density_to_bloch,
    frobenius_distance,
    hermitian_sqrt,
    hermitianize,
    maximally_mixed,
    trace_product,
    validate_density,
)
from .measurement import (
    EfficientKraus,
    Povm,
    bare_update,
    efficient_update,
    outcome_probabilities,
    posterior_from_outcome,
    sample_outcome,
    validate_povm,
)
from .pooling import (
    PoolReport,
    classical_pool,
    compatibility,
    pool_ordered,
    pool_ordered_multi,
    pool_symmetric,
    pool_symmetric_multi,
)
from .qubit import BlochWeights, bloch_weights, certainty_weight, pool_bloch, weight_factor

__version__ = "0.1.0"

__all__ = [
    "BadRankError",
    "BadTraceError",
    "BlochTooLongError",
    "BlochWeights",
    "DimMismatchError",
    "DomainError",
    "EfficientKraus",
    "IncompatibleStatesError",
    "LengthMismatchError",
    "NotCompleteError",
    "NotHermitianError",
    "NotPositiveError",
    "NotUnitaryError",
    "PoolReport",
    "Povm",
    "QpoolError",
    "Scenario",
    "SingularSumError",
    "TooFewStatesError",
    "TooManyStatesError",
    "VerificationReport",
    "ZeroEffectError",
    "ZeroProbabilityError",
    "bare_update",
    "bloch_to_density",
    "bloch_weights",
    "certainty_weight",
    "classical_pool",
    "compatibility",
    "density_to_bloch",
    "efficient_update",
    "frobenius_distance",
    "hermitian_sqrt",
    "hermitianize",
    "maximally_mixed",
    "oracle_pool",
    "outcome_probabilities",
    "pool_bloch",
    "pool_ordered",
    "pool_ordered_multi",
    "pool_symmetric",
    "pool_symmetric_multi",
    "posterior_from_outcome",
    "random_density",
    "random_povm",
    "run_scenario",
    "sample_outcome",
    "trace_product",
    "validate_density",
    "validate_povm",
    "verify_commuting_reduction",
    "verify_three_observer",
    "verify_two_observer",
    "weight_factor",
]
