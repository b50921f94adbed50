"""Random matrix ensembles, spectral statistics, orthogonal-polynomial kernels,
Fredholm determinants, Dyson Brownian motion and RSK combinatorics.

Hot kernels are compiled with numba; set ``RMTLAB_DISABLE_NUMBA=1`` before
import to run the pure-numpy fallbacks instead.
"""

from ._kernels import BACKEND
from .determinantal import (
    QuadratureRule,
    correlation_fn,
    fredholm_det,
    fredholm_det_trace_series,
    gap_probabilities,
    joint_density_unnormalized,
    tracy_widom_cdf,
    tracy_widom_table,
    verify_mehta_reduction,
)
from .dyson import DysonState, dyson_simulate, dyson_step, ou_entry_process_step
from .ensembles import (
    EntryDistribution,
    sample_beta_tridiagonal,
    sample_goe,
    sample_gue,
    sample_spectrum,
    sample_wigner,
    sample_wishart,
)
from .limit_laws import MarchenkoPasturLaw, SemicircleLaw, mp_cdf, mp_density, semicircle_cdf, semicircle_density
from .linalg import (
    Convention,
    HermitianMatrix,
    SpectralSample,
    SymmetricMatrix,
    TridiagonalSymmetric,
    hermitian_eigenvalues,
    resolvent,
    symmetric_eigenvalues,
)
from .moments import DyckPath, catalan, enumerate_dyck_paths, exact_trace_moment
from .orthopoly import Kernel, airy, airy_kernel, cd_kernel, hermite_function, hermite_poly, sine_kernel
from .rng import RngState
from .rsk import lis_length, lpp_grid, rsk, rsk_generalized, rsk_inverse
from .spectral_stats import (
    EnsembleSpec,
    empirical_measure,
    histogram,
    moment_variance_experiment,
    stieltjes_invert,
    stieltjes_transform,
)

__version__ = "0.1.0"
