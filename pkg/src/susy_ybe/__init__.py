"""Yang-Baxter R-matrices from supersymmetry realized with symmetric inverse semigroups."""
from .baxterizer import (
    RMatrixFun,
    SpectralProfile,
    baxterize_nilpotent,
    baxterize_permutation,
    baxterize_projector,
    baxterize_two_param,
    bell_matrix,
)
from .charge_catalog import ChargeOperator, ChargeSpec, build, catalog_list, synthesize_charge
from .sis_susy import SisElement, compose, represent, supercharge, susy_suite
from .slocc_lab import SloccLabel, apply_r, classify, three_tangle
from .tensor_core import DenseOperator, StateVector, embed, kron
from .verifier import VerificationReport, gybe_residual, relation_residual, verify_charge

__version__ = "0.1.0"
