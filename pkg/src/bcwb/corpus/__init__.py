"""Bundled models, example tables and golden result documents."""

from __future__ import annotations

from importlib import resources

from ..dsl import parse_model
from ..exterior import LieModel

_ROOT = resources.files(__name__)


class UnknownCorpusEntry(KeyError):
    def __str__(self):
        return self.args[0]


def names() -> list[str]:
    return sorted(p.name[:-4] for p in _ROOT.iterdir() if p.name.endswith(".lie"))


def data_names() -> list[str]:
    return sorted(p.name[:-5] for p in _ROOT.joinpath("data").iterdir() if p.name.endswith(".json"))


def source(name: str) -> str:
    p = _ROOT.joinpath(f"{name}.lie")
    if not p.is_file():
        raise UnknownCorpusEntry(f"unknown model {name!r}; available: {', '.join(names())}")
    return p.read_text(encoding="utf-8")


def load(name: str) -> LieModel:
    return parse_model(source(name))


def data(name: str) -> str:
    p = _ROOT.joinpath("data", f"{name}.json")
    if not p.is_file():
        raise UnknownCorpusEntry(f"unknown data file {name!r}; available: {', '.join(data_names())}")
    return p.read_text(encoding="utf-8")


def golden(name: str) -> str:
    return _ROOT.joinpath("golden", f"{name}.json").read_text(encoding="utf-8")
