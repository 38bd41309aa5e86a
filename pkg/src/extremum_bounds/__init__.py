"""Heisenberg-like uncertainty bounds from entropy- and information-extremizing densities.

Submodules
----------
numerics   special functions, adaptive quadrature and bounded minimization
densities  MaxEnt, MinInf and MaxTent extremizer densities with closed-form functionals
bounds     semiclassical constants and the bound families built on the densities
atoms      near-Hartree-Fock datasets and validation of bounds against them
tables     regeneration of the reference coefficient tables
cli        command-line interface
"""

from .bounds import (BoundChain, ProductSpec, ScalingLaw, chain_r2_pinv, compare_bounds,
                     dt_bound_from_density, kd_constant, maxent_bound, maxtent_lower_bound,
                     maxtent_upper_bound, mininf_bound, optimize_tsallis_t)
from .densities import (Constraint, Family, SystemSpec, build_maxent, build_maxtent_compact,
                        build_maxtent_subcritical, build_mininf, entropic_moment)
from .errors import (DivergentMoment, DomainError, GammaDomainError, InvalidBracket,
                     MixedDirection, NonConvergence, ParseError, SchemaError)

__version__ = "0.1.0"

__all__ = [
    "BoundChain", "ProductSpec", "ScalingLaw", "chain_r2_pinv", "compare_bounds",
    "dt_bound_from_density", "kd_constant", "maxent_bound", "maxtent_lower_bound",
    "maxtent_upper_bound", "mininf_bound", "optimize_tsallis_t",
    "Constraint", "Family", "SystemSpec", "build_maxent", "build_maxtent_compact",
    "build_maxtent_subcritical", "build_mininf", "entropic_moment",
    "DivergentMoment", "DomainError", "GammaDomainError", "InvalidBracket", "MixedDirection",
    "NonConvergence", "ParseError", "SchemaError",
]
