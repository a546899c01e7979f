"""Work statistics of slowly driven one- and two-qubit systems under the
discrete two-point-measurement protocol: exact enumeration, closed-form
cross-checks, entanglement negativity, and seeded Monte Carlo validation."""

from .entanglement import NegativityResult, negativity, negativity_cartan_basis
from .errors import (
    ContractViolationError,
    NumericFailureError,
    UnsupportedDimensionError,
    ValidationError,
    WorkFdrError,
)
from .linalg import (
    dagger,
    hermitian_eigenvalues,
    identity,
    is_density,
    is_unitary,
    kron,
    partial_transpose_A,
)
from .model import (
    CartanCoefficients,
    QubitHamiltonian,
    SeparableXZXParams,
    cartan_entangler,
    gibbs_state,
    rotation_x,
    rotation_z,
    rxx,
    separable_xzx,
)
from .sampler import ProtocolConfig, SampleStats, estimate, run_protocol, sample_step
from .work_stats import (
    QReport,
    WorkDistribution,
    closed_form_distribution_cartan,
    closed_form_distribution_separable,
    convolve_n,
    distribution_distance,
    f_beta,
    g_beta,
    jarzynski_check,
    moments,
    q_bipartite_smallangle_cartan,
    q_bipartite_smallangle_rxx,
    q_correction,
    q_separable_smallangle,
    q_single_exact,
    q_single_smallangle,
    step_distribution_bipartite,
    step_distribution_single,
)

__version__ = "0.1.0"

__all__ = [
    "CartanCoefficients",
    "ContractViolationError",
    "NegativityResult",
    "NumericFailureError",
    "ProtocolConfig",
    "QReport",
    "QubitHamiltonian",
    "SampleStats",
    "SeparableXZXParams",
    "UnsupportedDimensionError",
    "ValidationError",
    "WorkDistribution",
    "WorkFdrError",
    "cartan_entangler",
    "closed_form_distribution_cartan",
    "closed_form_distribution_separable",
    "convolve_n",
    "dagger",
    "distribution_distance",
    "estimate",
    "f_beta",
    "g_beta",
    "gibbs_state",
    "hermitian_eigenvalues",
    "identity",
    "is_density",
    "is_unitary",
    "jarzynski_check",
    "kron",
    "moments",
    "negativity",
    "negativity_cartan_basis",
    "partial_transpose_A",
    "q_bipartite_smallangle_cartan",
    "q_bipartite_smallangle_rxx",
    "q_correction",
    "q_separable_smallangle",
    "q_single_exact",
    "q_single_smallangle",
    "rotation_x",
    "rotation_z",
    "run_protocol",
    "rxx",
    "sample_step",
    "separable_xzx",
    "step_distribution_bipartite",
    "step_distribution_single",
    "__version__",
]
