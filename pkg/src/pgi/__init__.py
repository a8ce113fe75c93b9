"""Finite p-groups as Cayley tables: families, subgroup lattices and normalizer-index invariants."""

from .core import Group, Permutation, closure_group, direct_product, group_from_permutations, group_from_table, quotient
from .errors import (
    DedekindError,
    ExtensionError,
    HypothesisError,
    LatticeTooLargeError,
    PGIError,
    SizeLimitError,
    SpecError,
    VerificationError,
)
from .families import FamilySpec, build_group, construct_f1, construct_f2, construct_sharpness_example, named_spec
from .invariants import invariants, mci_star, mni, mni_star
from .lattice import Subgroup, SubgroupLattice, all_subgroups, r_of_g
from .report import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "Group", "Permutation", "closure_group", "direct_product", "group_from_permutations", "group_from_table",
    "quotient", "DedekindError", "ExtensionError", "HypothesisError", "LatticeTooLargeError", "PGIError",
    "SizeLimitError", "SpecError", "VerificationError", "FamilySpec", "build_group", "construct_f1",
    "construct_f2", "construct_sharpness_example", "named_spec", "invariants", "mci_star", "mni", "mni_star",
    "Subgroup", "SubgroupLattice", "all_subgroups", "r_of_g", "VerificationReport",
]
