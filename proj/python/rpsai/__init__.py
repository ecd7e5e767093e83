"""Markov-ensemble rock-paper-scissors engine (Python bindings)."""

from ._rpsai import (
    ENGINE_VERSION,
    MAX_ORDER,
    Ensemble,
    MarkovPredictor,
    Rng,
    Session,
    beats,
    judge,
    parse_strategy,
    replay,
    reward,
    run_match,
    select_dominant,
    simulate,
    summarize,
    sweep,
)

__all__ = [
    "ENGINE_VERSION",
    "MAX_ORDER",
    "Ensemble",
    "MarkovPredictor",
    "Rng",
    "Session",
    "beats",
    "judge",
    "parse_strategy",
    "replay",
    "reward",
    "run_match",
    "select_dominant",
    "simulate",
    "summarize",
    "sweep",
]
