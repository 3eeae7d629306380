"""Superoperators, their Choi operators, positivity tests and Schmidt measures."""
from .channels import KrausChannel, choi_map, identity_map, kraus_map, make_map, transpose_map
from .duality import (
    ChoiOperator,
    SuperOperator,
    TwistedChoiOperator,
    jamiolkowski,
    jamiolkowski_inverse,
    twisted_jamiolkowski,
    twisted_jamiolkowski_inverse,
)
from .operator_core import ComputationError, ShapeError, norm
from .positivity import choi_theorem_harness, is_completely_positive, preserves_hermiticity, preserves_positivity
from .schmidt import BipartiteVector, schmidt_measure, schmidt_rank_state, schmidt_rank_vector

__all__ = [
    "BipartiteVector", "ChoiOperator", "ComputationError", "KrausChannel", "ShapeError",
    "SuperOperator", "TwistedChoiOperator", "choi_map", "choi_theorem_harness", "identity_map",
    "is_completely_positive", "jamiolkowski", "jamiolkowski_inverse", "kraus_map", "make_map",
    "norm", "preserves_hermiticity", "preserves_positivity", "schmidt_measure",
    "schmidt_rank_state", "schmidt_rank_vector", "transpose_map", "twisted_jamiolkowski",
    "twisted_jamiolkowski_inverse",
]
