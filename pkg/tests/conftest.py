"""Shared fixtures: one cached generation per (rule, level) for the whole run.

Generating a level builds the entire chain below it, so the cache stores
only the deepest complex per rule and slices ancestors out of it.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from twotile import fixture, generate

ALL_RULES = ("lattes2x2", "barycentric", "z2m1", "grid:2:3", "grid:5:5")

# deepest level any test needs, per rule; conftest.levels() slices below
DEPTHS = {
    "lattes2x2": 5,
    "barycentric": 4,
    "z2m1": 8,
    "grid:2:3": 4,
    "grid:5:5": 3,
    "grid:3:3": 2,
    "grid:2:2": 3,
}

_rules: dict[str, object] = {}
_chains: dict[str, list] = {}


def rule_of(name: str):
    if name not in _rules:
        _rules[name] = fixture(name)
    return _rules[name]


def level_of(name: str, n: int):
    """The level-n complex of the named rule, cached across the session."""
    if name not in _chains:
        top = generate(rule_of(name), DEPTHS[name])
        chain = [top]
        while chain[-1].previous is not None:
            chain.append(chain[-1].previous)
        _chains[name] = chain[::-1]
    chain = _chains[name]
    assert n < len(chain), f"raise DEPTHS[{name!r}] above {n}"
    return chain[n]


@pytest.fixture(scope="session")
def levels():
    return level_of


@pytest.fixture(scope="session")
def rules():
    return rule_of


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return Path(__file__).parent / "golden"
