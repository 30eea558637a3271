"""Shipped example corpus: the UAV reconnaissance mission."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

CORPUS_NAME = "uav_reconnaissance.mas"


def corpus_path() -> Path:
    """Filesystem path of the shipped UAV reconnaissance corpus."""
    return Path(resources.files(__package__).joinpath(CORPUS_NAME))


def corpus_text() -> str:
    return corpus_path().read_text(encoding="utf-8")
