"""Executable finite-scale algebra for constant-size circuit classes.

Regular languages and their syntactic monoids, profinite identities, circuit
families over commutative gate bases, the position-class transduction with
block-product languages, and bounded separation experiments.
"""
from .regular import Dfa, FreeMorphism, builtin_language, combine, minimize
from .monoid import FiniteMonoid, MonoidMorphism, omega_power, syntactic_morphism, transition_monoid
from .identities import Identity, parse_identity, parse_term
from .partition import PartitionSpec
from .circuits import GateType, GeneralCircuitFamily, LayeredCircuitFamily, gate_type
from .transduction import PresentedBlockLang, RawBlockLang, bounded_equivalence
from .separation import Candidate, LanguageOracle, PositionPair

__all__ = [
    "Dfa", "FreeMorphism", "builtin_language", "combine", "minimize",
    "FiniteMonoid", "MonoidMorphism", "omega_power", "syntactic_morphism", "transition_monoid",
    "Identity", "parse_identity", "parse_term", "PartitionSpec",
    "GateType", "GeneralCircuitFamily", "LayeredCircuitFamily", "gate_type",
    "PresentedBlockLang", "RawBlockLang", "bounded_equivalence",
    "Candidate", "LanguageOracle", "PositionPair",
]
