"""Finite categories, model structures and integral model structures on
Grothendieck constructions, with exhaustive checkers."""

from __future__ import annotations

from .adjunction import Adjunction, check_adjunction, find_adjoint, from_functors
from .dsl import DSLError, Workspace, emit_object, emit_workspace, parse_spec
from .fincat import FinCat, FinFunctor, build_poset, chain, validate_category, validate_functor
from .grothendieck import AdjCatFunctor, GrothCat, integrate_cat, relative_colimit, straighten_cat
from .integral import (
    IntegralError,
    IntegralStructure,
    ModCatFunctor,
    QuillenTransformation,
    base_change,
    build_integral,
    check_proper,
    check_relative,
    fubini,
    integrate_quillen_transformation,
)
from .modelfib import FibrationCandidate, check_model_fibration, straighten_modelfib
from .modelstruct import ModelCat, PreModel, check_model, enumerate_model_structures, make_model, trivial_model
from .report import Check, Report

__all__ = [
    "AdjCatFunctor", "Adjunction", "Check", "DSLError", "FibrationCandidate", "FinCat", "FinFunctor",
    "GrothCat", "IntegralError", "IntegralStructure", "ModCatFunctor", "ModelCat", "PreModel",
    "QuillenTransformation", "Report", "Workspace", "base_change", "build_integral", "build_poset", "chain",
    "check_adjunction", "check_model", "check_model_fibration", "check_proper", "check_relative",
    "emit_object", "emit_workspace", "enumerate_model_structures", "find_adjoint", "from_functors", "fubini",
    "integrate_cat", "integrate_quillen_transformation", "make_model", "parse_spec", "relative_colimit",
    "straighten_cat", "straighten_modelfib", "trivial_model", "validate_category", "validate_functor",
]
