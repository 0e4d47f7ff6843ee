"""Reproducible scenario generation and brute-force reference oracles."""
from .generate import (
    BASE_TS,
    Archetype,
    BENIGN_ARCHETYPES,
    REFERENCE_NAMES,
    SCAM_ARCHETYPES,
    Scenario,
    ScenarioProject,
    generate,
    parse_counts_spec,
    write_scenario,
)
from .oracles import (
    oracle_drawdown,
    oracle_features,
    oracle_levenshtein,
    oracle_recovery,
    oracle_wash_pairs,
)
from .prng import SplitMix64

__all__ = [
    "Archetype",
    "BASE_TS",
    "BENIGN_ARCHETYPES",
    "REFERENCE_NAMES",
    "SCAM_ARCHETYPES",
    "Scenario",
    "ScenarioProject",
    "SplitMix64",
    "generate",
    "oracle_drawdown",
    "oracle_features",
    "oracle_levenshtein",
    "oracle_recovery",
    "oracle_wash_pairs",
    "parse_counts_spec",
    "write_scenario",
]
