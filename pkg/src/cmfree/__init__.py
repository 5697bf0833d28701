"""Gorenstein-projective census over basic algebras on prime fields, with
relative Auslander algebras and their homological invariants."""

__version__ = "0.1.0"

from .exactfield import PrimeField, DEFAULT_CHARACTERISTIC
from .algebra import Algebra, nakayama_algebra, path_algebra, dual_numbers, from_structure_constants
from .modules import Module, ModuleMap, hom, hom_dim, projective, injective, simple, decompose, syzygy, ext
from .gorenstein import is_gp, gp_survey, gp_oracle
from .auslander import aus, cm_free_refutation
from .invariants import classify, global_dimension, injective_dimension, is_gorenstein, verify_dif

__all__ = [
    "__version__",
    "PrimeField",
    "DEFAULT_CHARACTERISTIC",
    "Algebra",
    "nakayama_algebra",
    "path_algebra",
    "dual_numbers",
    "from_structure_constants",
    "Module",
    "ModuleMap",
    "hom",
    "hom_dim",
    "projective",
    "injective",
    "simple",
    "decompose",
    "syzygy",
    "ext",
    "is_gp",
    "gp_survey",
    "gp_oracle",
    "aus",
    "cm_free_refutation",
    "classify",
    "global_dimension",
    "injective_dimension",
    "is_gorenstein",
    "verify_dif",
]
