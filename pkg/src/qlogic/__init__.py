"""Topos-style quantum logic over context posets of finite matrix algebras."""
from .contexts import Context, ContextPoset, Sieve, SpectrumPoint, bottom_context, context_from_commuting
from .daseinise import (
    daseinise_proj_inner,
    daseinise_proj_outer,
    daseinise_sa_inner,
    daseinise_sa_outer,
)
from .dynamics import StarHom, hadamard, transform_truth
from .errors import QLogicError
from .linalg import BorelSet, spectral_leq
from .logic import Subobject, Variant, elementary_prop, heyting_impl, heyting_join, heyting_meet, heyting_neg
from .states import State, truth_sieve, valuation
from .tolerances import Tolerances, set_tolerances

__version__ = "0.1.0"

__all__ = [
    "BorelSet", "Context", "ContextPoset", "QLogicError", "Sieve", "SpectrumPoint", "StarHom", "State",
    "Subobject", "Tolerances", "Variant", "bottom_context", "context_from_commuting",
    "daseinise_proj_inner", "daseinise_proj_outer", "daseinise_sa_inner", "daseinise_sa_outer",
    "elementary_prop", "hadamard", "heyting_impl", "heyting_join", "heyting_meet", "heyting_neg",
    "set_tolerances", "spectral_leq", "transform_truth", "truth_sieve", "valuation",
]
