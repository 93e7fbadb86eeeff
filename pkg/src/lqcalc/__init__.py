"""Exact calculus for (l,q)-deformed R-matrices and lattice Grassmann/boson fields."""
from .coeff import L, ONE, Q, ZERO, CoeffPoly, ParamUniverse
from .rmatrix import (
    TensorOp,
    Variant,
    VerificationReport,
    build_big_projectors,
    build_big_r,
    build_diag_ops,
    build_projectors_small,
    build_q_matrix,
    build_small_r,
    verify_hecke,
    verify_projector_identities,
    verify_small_projectors,
    verify_ybe,
)
from .fieldalg import (
    AlgebraElement,
    FieldSpec,
    GeneratorId,
    Kind,
    apply_d,
    apply_d_operator,
    apply_derivative,
    check_local_confluence,
    multiply,
    normal_form,
    swap_pair,
)
from .berezin import QuadraticForm, berezin_integrate, epsilon, gaussian_integral, pfaffian
from .covariance import derive_rtt_relations, qdet
from .exprio import format_element, parse, parse_coeff, parse_element, run_cli

__version__ = "0.1.0"
