"""Scenario-driven football environment."""

import json as _json

from ._kickoff import (
    ACTION_COUNT,
    ACTION_NAMES,
    OBS_SHAPE,
    BadActionCode,
    Env,
    EpisodeDone,
    Error,
    LexError,
    NoEpisode,
    ParseError,
    Scenario,
    TraceHash,
    Unsatisfiable,
    ValidationError,
    compile_scenario,
    decode_obs,
    encode_obs,
    load_scenario,
)
from . import _kickoff


def sample(scenario, seed, n=1):
    """Scenes ``0..n-1`` of ``seed`` as dicts."""
    return [_json.loads(s) for s in _kickoff.sample_json(scenario, seed, n)]


def run_episodes(scenario, policy, episodes, seed=0):
    """EvalStats of ``policy`` ("random", "bot" or "scenic") as a dict."""
    return _json.loads(_kickoff.run_episodes_json(scenario, policy, episodes, seed))


def report(train, test, policy="bot", episodes=200, seed=0):
    """Train/test comparison with a random baseline row on the test scenario."""
    return _json.loads(_kickoff.report_json(train, test, policy, episodes, seed))


def catalog(asset_dir):
    """Shipped scenario catalog entries."""
    return _json.loads(_kickoff.catalog_json(asset_dir))


__all__ = [
    "ACTION_COUNT",
    "ACTION_NAMES",
    "OBS_SHAPE",
    "BadActionCode",
    "Env",
    "EpisodeDone",
    "Error",
    "LexError",
    "NoEpisode",
    "ParseError",
    "Scenario",
    "TraceHash",
    "Unsatisfiable",
    "ValidationError",
    "catalog",
    "compile_scenario",
    "decode_obs",
    "encode_obs",
    "load_scenario",
    "report",
    "run_episodes",
    "sample",
]
