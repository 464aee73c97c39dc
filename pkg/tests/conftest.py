from pathlib import Path

import pytest

from vintagepd.dataio import parse_panel, parse_triangle

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def table1_text() -> str:
    return (DATA / "table1_triangle.csv").read_text()


@pytest.fixture(scope="session")
def panel_text() -> str:
    return (DATA / "portfolio_2008_2011.csv").read_text()


@pytest.fixture(scope="session")
def table1(table1_text):
    return parse_triangle(table1_text)


@pytest.fixture(scope="session")
def panels(panel_text):
    return parse_panel(panel_text)
