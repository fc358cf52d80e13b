"""Spectral analysis of finite sections of multiplication operators.

Chebyshev-basis sections split into Toeplitz plus Hankel parts; their
Frobenius-optimal circulant approximations expose the symbol on the Fourier
grid, which lets the multiplier be reconstructed from the matrix alone.
"""

from .circulant import optimal_circulant, optimal_circulant_general, optimal_circulant_toeplitz, strang_circulant
from .errors import ConditioningError, DegenerateWeightError, DomainError, ResourceError, UnsupportedError
from .expr import parse_multiplier, parse_symbol, parse_test_function, parse_weight
from .reconstruction import (
    ReconstructionResult,
    algorithm1,
    algorithm2,
    divide_out_weight,
    reconstruct_block,
    recover_toeplitz,
)
from .sections import FiniteSection, basis_change_matrix, section_cheb1, section_cheb2, section_general, untransform
from .spectral import (
    SpectralSample,
    attraction_order,
    cluster_outliers,
    distribution_compare,
    range_membership,
    schatten_norm,
    sigma_mean,
    svd_threshold_split,
)
from .structured import (
    CirculantMatrix,
    HankelMatrix,
    ToeplitzMatrix,
    circulant_eigenvalues,
    circulant_from_first_column,
    dense,
    eigen_decompose,
    hankel_from_coeffs,
    matvec,
    singular_values,
    toeplitz_from_coeffs,
)
from .symbols import (
    CHEBYSHEV1,
    CHEBYSHEV2,
    FourierCoeffTable,
    MultiplierSpec,
    SymbolSpec,
    WeightSpec,
    cesaro_sum_eval,
    fourier_coefficients,
    fourier_sum_eval,
    pullback_multiplier,
)

__version__ = "0.1.0"
