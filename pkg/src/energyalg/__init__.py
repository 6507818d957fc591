"""Reachability and Büchi acceptance for energy automata via the algebra of
energy functions."""

from .automaton import Analysis, EnergyAutomaton, buchi_via_cycle, buchi_via_omega, normalize, reach
from .funcalg import (
    BOT,
    INF,
    EnergyFunction,
    affine,
    bbot,
    compose,
    g_minus,
    g_plus,
    identity,
    identity_crossing,
    integer_update,
    join,
    leq,
    star,
    threshold_function,
    ttop,
)
from .multidim import MultiDimAutomaton, coverable
from .textio import format_automaton, format_function, parse_automaton, parse_function
from .vmod import NEVER, Threshold, act, join_pred, omega

__all__ = [
    "Analysis",
    "BOT",
    "EnergyAutomaton",
    "EnergyFunction",
    "INF",
    "MultiDimAutomaton",
    "NEVER",
    "Threshold",
    "act",
    "affine",
    "bbot",
    "buchi_via_cycle",
    "buchi_via_omega",
    "compose",
    "coverable",
    "format_automaton",
    "format_function",
    "g_minus",
    "g_plus",
    "identity",
    "identity_crossing",
    "integer_update",
    "join",
    "join_pred",
    "leq",
    "normalize",
    "omega",
    "parse_automaton",
    "parse_function",
    "reach",
    "star",
    "threshold_function",
    "ttop",
]
