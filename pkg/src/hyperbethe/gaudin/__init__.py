"""Gaudin models on tensor products of sl2 / gl2 modules and their discriminantal arrangements."""

from .bethe import (BetheVector, dphi_and_gl2_bethe, dphi_coefficients, geometric_vs_gaudin_spectra,
                    gl2_operators, solve_discriminantal, weight_function, weight_function_and_bethe)
from .data import GaudinData
from .discriminantal import (DiscriminantalArrangement, antisymmetrizer, build_discriminantal, sk_action,
                             sk_elements, x_hamiltonian)
from .modules import TensorModule, check_gaudin, gaudin_hamiltonians, module_for

__all__ = [
    "BetheVector", "dphi_and_gl2_bethe", "dphi_coefficients", "geometric_vs_gaudin_spectra", "gl2_operators",
    "solve_discriminantal", "weight_function", "weight_function_and_bethe", "GaudinData",
    "DiscriminantalArrangement", "antisymmetrizer", "build_discriminantal", "sk_action", "sk_elements",
    "x_hamiltonian", "TensorModule", "check_gaudin", "gaudin_hamiltonians", "module_for",
]
