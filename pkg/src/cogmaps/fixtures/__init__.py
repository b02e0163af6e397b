"""Bundled stakeholder fixtures (reconstructed from interview prose)."""

from importlib import resources


def read(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def path(name: str):
    return resources.files(__package__).joinpath(name)
