"""Entropic EPR-steering witnesses for discrete and Gaussian bipartite states."""

from .cvgauss import (GaussianState, conditional_variance, gaussian_differential_entropy,
                      steering_conditional_cv, steering_symmetric_binned, steering_symmetric_cv, tmsv)
from .infotheory import (BinningSpec, JointDistribution, bin_bivariate_gaussian, conditional_entropy,
                         joint_entropy, mutual_information, shannon_entropy)
from .lhs import (LhsEnsemble, lhs_criterion_check, lhs_joint_distribution, random_lhs_search,
                  saturating_ensemble, steering_sum)
from .qstate import (DensityOperator, ObservableBasis, computational_basis, fourier_basis,
                     joint_distribution, marginal_distribution, partial_trace, pauli_basis,
                     validate_density, von_neumann_entropy)
from .witness import (WitnessReport, berta_check, maassen_uffink_check, naive_substitution_demo,
                      overlap_omega, steering_conditional_discrete, steering_symmetric_discrete)

__version__ = "0.1.0"
