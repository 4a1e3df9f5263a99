"""Localized entropy for Z^d actions on finite measured distributive lattices."""
from .actions import FolnerBox, GroupAction, orbit_join
from .entropy import (EntropyConfig, Estimate, folner_entropy, h_hat, h_mdl, h_star,
                      h_w, palm_global_entropy)
from .functors import FactorMap, FiniteProbSystem, FiniteTopSystem, m_psp, m_top
from .lattice import FiniteDistributiveLattice, GroundSet, cover_join, refines
from .measured import MeasuredLattice, NonemptyIndicator, PointMeasure
from .shifts import ShiftSystem, shift_entropy_table, window

__all__ = [
    "EntropyConfig", "Estimate", "FactorMap", "FiniteDistributiveLattice", "FiniteProbSystem",
    "FiniteTopSystem", "FolnerBox", "GroundSet", "GroupAction", "MeasuredLattice",
    "NonemptyIndicator", "PointMeasure", "ShiftSystem", "cover_join", "folner_entropy",
    "h_hat", "h_mdl", "h_star", "h_w", "m_psp", "m_top", "orbit_join", "palm_global_entropy",
    "refines", "shift_entropy_table", "window",
]
