from __future__ import annotations

from pathlib import Path

import pytest

from stpasec import MissionModel, load_model
from stpasec.corpus import corpus_path

GOLDEN_DIR = Path(__file__).parent / "golden"


def read_golden(name: str) -> str:
    return (GOLDEN_DIR / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def corpus_source() -> str:
    return corpus_path().read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def corpus(corpus_source: str) -> MissionModel:
    return load_model(corpus_source)
