"""Phase synchronization: measurement models, the generalized power method,
spectral estimators and SDP optimality certificates."""
from ._backend import BACKEND
from .certificate import CertificateReport, build_certificate, verify_optimality
from .errors import ConvergenceError, PhaseSyncError, RecordParseError, ValidationError
from .gpm import GPMConfig, GPMTrace, phase_project, run_auxiliary, run_gpm
from .linalg import (
    EigPair,
    dense_eig_oracle,
    leading_eigpair,
    second_smallest_eigenvalue,
    smallest_eigpair,
    spectral_norm,
)
from .metrics import align_phase, aligned_linf, d2, dinf
from .model import (
    MeasurementModel,
    NoiseMatrix,
    assemble,
    leave_one_out,
    sample_model,
    sample_noise,
    sample_signal,
)
from .spectral import davis_kahan_check, eigenvector_estimator, projected_estimator

__version__ = "0.1.0"
