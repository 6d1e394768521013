"""Exact computer algebra for two-term complexes over polynomial rings.

Koszul and Eagon–Northcott complexes, derived symmetric/exterior/divided
powers, degeneracy-locus classicality criteria, simplicial models and the
pushforward identities for projectivizations, all checked degree by degree
over QQ or GF(p).
"""

from .arith import QQ, Field, Polynomial, PolynomialRing
from .errors import ContextError, InternalConsistencyError, ParseError, PreconditionError
from .groebner import Ideal, groebner_basis, hilbert_series, ideal_codim, minors_ideal
from .homalg import ChainComplex, GradedFreeModule, GradedMap, HomologyTable, homology_dims
from .koszul import TwoTermData, eagon_northcott, koszul_S, koszul_wedge, two_term
from .criteria import classicality_report, degeneracy_profile, sym_classicality
from .serre import generalized_serre_check, serre_bundle_pushforward

__version__ = "0.1.0"

__all__ = [
    "QQ", "Field", "Polynomial", "PolynomialRing", "ContextError", "InternalConsistencyError", "ParseError",
    "PreconditionError", "Ideal", "groebner_basis", "hilbert_series", "ideal_codim", "minors_ideal",
    "ChainComplex", "GradedFreeModule", "GradedMap", "HomologyTable", "homology_dims", "TwoTermData",
    "eagon_northcott", "koszul_S", "koszul_wedge", "two_term", "classicality_report", "degeneracy_profile",
    "sym_classicality", "generalized_serre_check", "serre_bundle_pushforward",
]
