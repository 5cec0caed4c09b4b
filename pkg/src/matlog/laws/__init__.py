"""Generators, verifiers and falsification searches for the matrix log law."""
from .falsify import FalsifyReport, Target, falsify_theorem
from .generators import (
    Item3Instance,
    gen_commuting_arg_pair,
    gen_commuting_hermitian_pd,
    gen_item3_pair,
    joint_triangularize,
    trial_rng,
)
from .prop1 import Prop1Classification, classify_prop1
from .prop3 import Prop3Instance, Prop3Result, random_prop3_instance, verify_prop3
from .prop4 import Prop4Result, verify_prop4_structure
from .report import LawReport, Verdict, log_law_report, normalized_commutator

__all__ = [
    "FalsifyReport", "Target", "falsify_theorem",
    "Item3Instance", "gen_commuting_arg_pair", "gen_commuting_hermitian_pd",
    "gen_item3_pair", "joint_triangularize", "trial_rng",
    "Prop1Classification", "classify_prop1",
    "Prop3Instance", "Prop3Result", "random_prop3_instance", "verify_prop3",
    "Prop4Result", "verify_prop4_structure",
    "LawReport", "Verdict", "log_law_report", "normalized_commutator",
]
