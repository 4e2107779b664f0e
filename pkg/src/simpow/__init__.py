"""simpow: similarity of matrix powers and 2x2 matrix word equations."""

__version__ = "0.1.0"

from .equation2x2 import (
    ClassifyResult,
    NormalizedPair,
    SolutionFamily,
    StResidual,
    TriangularPair,
    WordShape,
    check_necessary_conditions,
    classify,
    construct_solution,
    is_simultaneously_triangularizable,
    normalize_determinants,
    st_residual_system,
    symmetrize_pair,
    verify_word,
)
from .matrixcore import (
    DEFAULT_TOL,
    ToleranceConfig,
    find_invertible_in_span,
    fit_polynomial_in,
    kernel_basis,
    mat_int_pow,
    mat_mul,
    matrix_from_json,
    matrix_to_json,
    span_residual,
    sylvester_kernel,
    weyr_characteristic,
)
from .scalar import (
    ExponentPair,
    Residue,
    RootOfUnity,
    mod_inverse,
    phi_k,
    rou_mul,
    rou_pow,
    rou_to_complex,
    snap_to_root_of_unity,
)
from .similarity import (
    FailureReason,
    JordanEntry,
    JordanSpec,
    SimilarityVerdict,
    matrix_from_spec,
    powers_similar_general,
    powers_similar_invertible,
    powers_similar_numeric,
    spec_from_matrix,
)
from .solvers import (
    CycleInstance,
    SingleEigSolution,
    build_cycle_conjugator,
    build_cycle_instance,
    commutes_with_n,
    enumerate_valid_k1,
    nilpotent_from_blocks,
    realize_conjugate_c,
    solve_single_eigenvalue,
)
from .spectra import (
    Orbit,
    OrbitDecomposition,
    SpectrumMultiset,
    multiset_power,
    orbit_decomposition,
    order_bound,
    powers_equal,
    successor,
)

__all__ = [name for name in dir() if not name.startswith("_")]
