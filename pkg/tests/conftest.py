import json

import pytest

from selfevo.presets import (
    adaptation_scenario,
    canonical_catalogue,
    canonical_model,
    evolution_scenario,
    stakeholder_evolution_scenario,
)
from selfevo.scenario import parse_scenario


@pytest.fixture
def model():
    return canonical_model()


@pytest.fixture
def catalogue():
    return canonical_catalogue()


@pytest.fixture
def adaptation():
    return parse_scenario(adaptation_scenario())


@pytest.fixture
def evolution():
    return parse_scenario(evolution_scenario())


@pytest.fixture
def stakeholder_evolution():
    return parse_scenario(stakeholder_evolution_scenario())


@pytest.fixture
def scenario_file(tmp_path):
    """Write a scenario dict to disk and return its path."""

    def write(doc, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return path

    return write
