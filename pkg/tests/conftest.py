"""Shared fixtures: builtin code instances and the file-backed test codes."""

from __future__ import annotations

from pathlib import Path

import pytest

from qci import (
    StabilizerCode,
    color_code_488,
    complete_frame,
    parse_code_file,
    repetition_code,
    rotated_surface_code,
)

DATA_DIR = Path(__file__).parent / "data"


def load_code(name: str) -> StabilizerCode:
    path = DATA_DIR / name
    return parse_code_file(path.read_text(encoding="utf-8"), name=path.stem)


@pytest.fixture(scope="session")
def steane() -> StabilizerCode:
    return load_code("steane.txt")


@pytest.fixture(scope="session")
def toy_422() -> StabilizerCode:
    return load_code("code_422.txt")


@pytest.fixture(scope="session")
def rep3() -> StabilizerCode:
    return repetition_code(3)


@pytest.fixture(scope="session")
def rep3_frame(rep3):
    return complete_frame(rep3)


@pytest.fixture(scope="session")
def surface3() -> StabilizerCode:
    return rotated_surface_code(3)


@pytest.fixture(scope="session")
def color3() -> StabilizerCode:
    return color_code_488(3)
