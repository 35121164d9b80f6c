"""Quantum integrable model of a weighted hyperplane arrangement.

Exact circuit operators and geometric Hamiltonians on the top flag space,
critical points of the master function with their special vectors, and
the sl2 / gl2 Gaudin model attached to discriminantal arrangements.
"""

from .arrangement import (ArrangementFamily, Circuit, FiberClassification, classify_fiber,
                          enumerate_circuits, euler_characteristic, intersection_poset)
from .critical import (CriticalPoint, MasterEval, RegionCell, ResiduePairing, algebra_correspondence,
                       enumerate_bounded_regions, master_eval, solve_critical_points, special_vector,
                       verify_hessian_norm_and_orthogonality)
from .flags import FlagSpace, SingBasis, contravariant_pair, degenerate_subspaces, sing_basis
from .hamiltonians import HamiltonianFamily, TangentDirection, VerificationError, circuit_operator

__all__ = [
    "ArrangementFamily", "Circuit", "FiberClassification", "classify_fiber", "enumerate_circuits",
    "euler_characteristic", "intersection_poset", "CriticalPoint", "MasterEval", "RegionCell",
    "ResiduePairing", "algebra_correspondence", "enumerate_bounded_regions", "master_eval",
    "solve_critical_points", "special_vector", "verify_hessian_norm_and_orthogonality", "FlagSpace",
    "SingBasis", "contravariant_pair", "degenerate_subspaces", "sing_basis", "HamiltonianFamily",
    "TangentDirection", "VerificationError", "circuit_operator",
]

__version__ = "0.1.0"
