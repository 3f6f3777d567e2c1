"""Zip shifts: two-alphabet Bernoulli shifts, their metric and folding
entropies, brute-force checks of the cylinder-partition identities, and an
n-to-1 baker map realization."""
from .baker import (
    BakerSystem,
    BoundaryPoint,
    Point,
    baker_apply,
    baker_preimages,
    empirical_block_entropy,
    empirical_folding_entropy,
    encode,
)
from .folding import (
    FormulaMismatch,
    disintegration_check,
    fiber_entropy,
    folding_entropy,
    quotient_measure_check,
)
from .partition import (
    Window,
    WindowPartition,
    correfine,
    cylinder_partition,
    cylinders_partition,
    dynamical_correfinement,
    ks_entropy,
    partition_entropy,
    pullback_partition,
    range_partition_entropy,
    verify_correfinement_lemma,
)
from .spec import (
    Side,
    Symbol,
    ZipShiftSpec,
    bernoulli_spec,
    derive_measures,
    random_spec,
    two_to_one_baker_spec,
    uneven_three_symbol_spec,
    validate_spec,
)
from .symbolic import (
    GeneralizedCylinder,
    IndexConstraint,
    cylinder_measure,
    measure_preservation_check,
    shift_pullback,
    shift_pushforward,
)

__version__ = "0.1.0"
