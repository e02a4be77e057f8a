"""Bundled fixture triangulations."""
from __future__ import annotations

from importlib import resources

from .triangulation import TautTriangulation, parse

# taut and veering
VEERING = ("fig8", "m003", "m016", "m119", "m203", "m367")
# taut but not veering
NOT_VEERING = ("fig8_typeswap_a", "fig8_typeswap_b", "m016_adjacent", "m203_partial")
# not taut, or outside the scope of the cusp machinery
BROKEN = ("bad_angle", "gieseking")
ALL = VEERING + NOT_VEERING + BROKEN


def fixture_path(name: str):
    return resources.files(__package__).joinpath("fixtures", f"{name}.vtri")


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def load_fixture(name: str) -> TautTriangulation:
    return parse(fixture_text(name))
