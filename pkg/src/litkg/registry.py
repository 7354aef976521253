"""Relation, event, and fine-type registries.

Registries are plain text files, one name per line, ``#`` starts a comment.
The graph refuses any assertion whose subtype is absent from the loaded
registry, so every stored subtype string is traceable to a registry line.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path


def parse_registry_text(text: str) -> frozenset[str]:
    names = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            names.append(line)
    return frozenset(names)


def load_registry_file(path: str | Path) -> frozenset[str]:
    return parse_registry_text(Path(path).read_text(encoding="utf-8"))


def _load_packaged(name: str) -> frozenset[str]:
    text = resources.files("litkg.data").joinpath(name).read_text(encoding="utf-8")
    return parse_registry_text(text)


@dataclass(frozen=True)
class Registries:
    relations: frozenset[str]
    events: frozenset[str]
    fine_types: frozenset[str]


def default_registries() -> Registries:
    return Registries(
        relations=_load_packaged("relations.txt"),
        events=_load_packaged("events.txt"),
        fine_types=_load_packaged("fine_types.txt"),
    )


def load_registries(directory: str | Path | None) -> Registries:
    """Load registries from a directory, falling back to packaged defaults.

    Recognized file names: relations.txt, events.txt, fine_types.txt.
    """
    defaults = default_registries()
    if directory is None:
        return defaults
    directory = Path(directory)
    if not directory.is_dir():
        return defaults
    relations = defaults.relations
    events = defaults.events
    fine_types = defaults.fine_types
    if (directory / "relations.txt").is_file():
        relations = load_registry_file(directory / "relations.txt")
    if (directory / "events.txt").is_file():
        events = load_registry_file(directory / "events.txt")
    if (directory / "fine_types.txt").is_file():
        fine_types = load_registry_file(directory / "fine_types.txt")
    return Registries(relations=relations, events=events, fine_types=fine_types)
