"""Divisor-lattice model of the log structures and their composition maps."""
from .gamma import LOG, VLOG, Tags, classify, gamma_log, gamma_vlog, oracle_class, pullback_class, unit_vlog
from .morphisms import DF, VIRTUAL, LogMorphism, compose_morphisms, identity, legality_df, legality_virtual
from .structures import Structure, product, structure_K, structure_T, universal_class

__all__ = [
    "DF", "LOG", "VIRTUAL", "VLOG", "LogMorphism", "Structure", "Tags", "classify", "compose_morphisms",
    "gamma_log", "gamma_vlog", "identity", "legality_df", "legality_virtual", "oracle_class", "product",
    "pullback_class", "structure_K", "structure_T", "unit_vlog", "universal_class",
]
