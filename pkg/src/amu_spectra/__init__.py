"""Synthetic spectra and approximately macroscopically unique states.

Numerics for n-tuples of Hermitian matrices: ordered bump products and
their acceptance scans, AMU state search via localization operators and
approximate joint diagonalization, superpositions aimed at convex targets,
and essential-spectrum estimates through tail compressions.
"""
from .constants import GRID_POINT_CAP, TOL, Tolerances
from .errors import (
    DimensionMismatch,
    GridCapExceeded,
    HullDistanceError,
    NearDependence,
    NumericalError,
    SpectraError,
    TupleFormatError,
)
from .linalg import (
    EigenDecomposition,
    HermitianMatrix,
    eig_hermitian,
    gram_schmidt,
    operator_norm,
)
from .observables import (
    AmuCertificate,
    MeasurementReport,
    OperatorTuple,
    VectorState,
    amu_check,
    commutator_profile,
    expectation,
    measure,
    variance_sd,
)
from .calculus import (
    Bump,
    BumpFactorCache,
    ThetaProduct,
    apply_function,
    bump_eval,
    bump_values,
    theta_product,
    witness_test,
)
from .spectrum import (
    GridSpec,
    SyntheticSpectrumResult,
    build_grid,
    grid_step_count,
    hausdorff,
    is_refinement,
    scan,
)
from .search import (
    DigitalDecomposition,
    LocalizationOperator,
    SuperpositionPlan,
    amu_at,
    ground_state,
    joint_diagonalize,
    localization_operator,
    project_simplex,
    solve_simplex_lsq,
    superpose,
)
from .essential import (
    EssentialLevel,
    EssentialSpectrumEstimate,
    TailCompression,
    amu_sequence,
    boundary_block_norm,
    escape_window,
    essential_spectrum_estimate,
    tail_commutator_decay,
    tail_compression,
)
from .models import (
    FAMILIES,
    ModelSpec,
    generate,
    load_tuple,
    save_tuple,
    splitmix64,
    uniform_doubles,
    write_accepted_csv,
)

__version__ = "0.1.0"
