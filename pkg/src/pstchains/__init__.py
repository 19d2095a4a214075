"""Para-Krawtchouk polynomials on a bi-lattice and XX chains with perfect state transfer."""

from .bilattice import (
    BiLatticeSpec,
    PSTAdmissibility,
    closed_form_weights,
    make_spectrum,
    pst_admissibility,
    pst_weights,
)
from .dynamics import (
    JacobiMatrix,
    PSTCertificate,
    certify_pst,
    max_fidelity,
    transfer_amplitude,
)
from .hahn import AlgebraRealization, casimir_check, commutator_residuals, realize
from .inverse import (
    ReconstructionError,
    christoffel_at,
    christoffel_coefficient_map,
    mirror_residual,
    reconstruct_euclidean,
    reconstruct_stieltjes,
)
from .orthopoly import (
    DiscreteMeasure,
    PolynomialTable,
    RecurrenceCoefficients,
    check_orthogonality,
    evaluate_polynomials,
    hyp_terminating,
    pochhammer,
)
from .parakrawtchouk import (
    CBIParams,
    characteristic_factorization,
    difference_operator,
    odd_chain_coefficients,
    para_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraRealization",
    "BiLatticeSpec",
    "CBIParams",
    "DiscreteMeasure",
    "JacobiMatrix",
    "PSTAdmissibility",
    "PSTCertificate",
    "PolynomialTable",
    "ReconstructionError",
    "RecurrenceCoefficients",
    "casimir_check",
    "certify_pst",
    "characteristic_factorization",
    "check_orthogonality",
    "christoffel_at",
    "christoffel_coefficient_map",
    "closed_form_weights",
    "commutator_residuals",
    "difference_operator",
    "evaluate_polynomials",
    "hyp_terminating",
    "make_spectrum",
    "max_fidelity",
    "mirror_residual",
    "odd_chain_coefficients",
    "para_coefficients",
    "pochhammer",
    "pst_admissibility",
    "pst_weights",
    "realize",
    "reconstruct_euclidean",
    "reconstruct_stieltjes",
    "transfer_amplitude",
]
