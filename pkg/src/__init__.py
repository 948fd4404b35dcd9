"""Quaternion Factor - structured factorizations of quaternion matrices."""

from src.embedding import apply_T, chi, chi_inv, classify, dual
from src.factor_quaternionic import (
    diagonalize_commuting_normal,
    operator_norm,
    polar_quaternionic,
    qr_quaternionic,
    right_eigenvalues,
    schur_commuting,
    svd_quaternionic,
)
from src.factor_selfdual import (
    diagonalize_hermitian_selfdual,
    polar_selfdual,
    polar_symmetric,
    schur_selfdual_commuting,
    verify_tensor_transpose,
)
from src.jordan import chain_heads, generalized_eigenspace, jordan_quaternionic
from src.quaternion import Quaternion, QuatMatrix

__all__ = [
    "Quaternion",
    "QuatMatrix",
    "chi",
    "chi_inv",
    "dual",
    "apply_T",
    "classify",
    "schur_commuting",
    "diagonalize_commuting_normal",
    "right_eigenvalues",
    "operator_norm",
    "polar_quaternionic",
    "svd_quaternionic",
    "qr_quaternionic",
    "schur_selfdual_commuting",
    "diagonalize_hermitian_selfdual",
    "polar_symmetric",
    "polar_selfdual",
    "verify_tensor_transpose",
    "generalized_eigenspace",
    "chain_heads",
    "jordan_quaternionic",
]
