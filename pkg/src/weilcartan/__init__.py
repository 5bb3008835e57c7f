"""Exact computations with operations of Lie algebras on graded-commutative algebras:
Weil and Cartan models, Kalkman's conjugation, algebraic connections,
Chern-Weil maps, transgression and reduction to quotient groups."""

from .connections import (ConnectionSpec, Transgression, check_connection, chern_weil_map, covariant_derivative,
                          curvature, horizontal_projection, transgress, transgress_taylor,
                          transgression_identity_check)
from .equivariant import (Kalkman, cartan_cohomology, cartan_complex, cartan_identity_check, kalkman_conjugation_check,
                          kalkman_corrected_check, weil_basic_cohomology, weil_model)
from .graded_algebra import AlgebraMismatch, Element, GradedAlgebra, ParseError, parse_element, render
from .lie import IdealSpec, LieAlgebraData, validate_ideal, validate_lie
from .model_file import ModelError, load_model
from .operation import OperationSpec, check_axioms, cohomology_dims, subspace_basis, tensor_product
from .operators import Derivation, LinearOperator, exp_nilpotent, supercommutator
from .reduction import (ReductionSetup, T0_map, cartan_theorem_check, char_class, equivariant_curvature,
                        moment_map, build_xi, reduce_cartan_rep)
from .weil import build_weil, koszul_check

__version__ = "0.1.0"

__all__ = [
    "AlgebraMismatch", "ConnectionSpec", "Derivation", "Element", "GradedAlgebra", "IdealSpec", "Kalkman",
    "LieAlgebraData", "LinearOperator", "ModelError", "OperationSpec", "ParseError", "ReductionSetup", "T0_map",
    "Transgression", "build_weil", "build_xi", "cartan_cohomology", "cartan_complex", "cartan_identity_check",
    "cartan_theorem_check", "char_class", "check_axioms", "check_connection", "chern_weil_map", "cohomology_dims",
    "covariant_derivative", "curvature", "equivariant_curvature", "exp_nilpotent", "horizontal_projection",
    "kalkman_conjugation_check", "kalkman_corrected_check", "koszul_check", "load_model", "moment_map",
    "parse_element", "reduce_cartan_rep", "render", "subspace_basis", "supercommutator", "tensor_product",
    "transgress", "transgress_taylor", "transgression_identity_check", "validate_ideal", "validate_lie",
    "weil_basic_cohomology", "weil_model",
]
