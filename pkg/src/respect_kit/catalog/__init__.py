"""Named algebras with source-tagged expectations.

Presentations live in ``data/*.alg``; ``data/registry.json`` maps each name
to its file, its source tag and a record of expected facts.  Every expected
value carries its own ``source`` tag.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .. import fileformat
from ..liealg import LieAlgebra

SOURCES = ("PAPER_TABLE_1", "PAPER_TABLE_2", "PAPER_EXAMPLE", "DEGRAAF_EXTERNAL")
FIELD_SOURCES = SOURCES + ("PAPER_PROOF",)


class UnknownAlgebra(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    file: str
    source: str
    aliases: tuple[str, ...] = ()
    note: str = ""
    expected: dict = field(default_factory=dict, compare=False, hash=False)

    def text(self) -> str:
        return _data().joinpath(self.file).read_text(encoding="utf-8")

    def algebra(self) -> LieAlgebra:
        return load(self.name)

    def value(self, key: str, default=None):
        rec = self.expected.get(key)
        return default if rec is None else rec["value"]


def _data():
    return resources.files(__package__).joinpath("data")


@lru_cache(maxsize=None)
def _registry() -> dict[str, CatalogEntry]:
    raw = json.loads(_data().joinpath("registry.json").read_text(encoding="utf-8"))
    return {
        name: CatalogEntry(
            name=name,
            file=rec["file"],
            source=rec["source"],
            aliases=tuple(rec.get("aliases", ())),
            note=rec.get("note", ""),
            expected=rec.get("expected", {}),
        )
        for name, rec in raw.items()
    }


@lru_cache(maxsize=None)
def _aliases() -> dict[str, str]:
    out = {}
    for e in _registry().values():
        for a in e.aliases:
            out[a] = e.name
    return out


def canonical_name(name: str) -> str:
    reg = _registry()
    if name in reg:
        return name
    alias = _aliases().get(name)
    if alias is None:
        raise UnknownAlgebra(name)
    return alias


def names() -> list[str]:
    return sorted(_registry())


def entry(name: str) -> CatalogEntry:
    return _registry()[canonical_name(name)]


@lru_cache(maxsize=None)
def load(name: str) -> LieAlgebra:
    return fileformat.loads(entry(name).text())


def expected(name: str) -> dict:
    """Expectation record ``{field: {"value": ..., "source": ...}}``."""
    return entry(name).expected


def _sort_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def six_dim_nilpotent() -> list[str]:
    """The 34 pairwise non-isomorphic 6-dimensional nilpotent entries."""
    out = [n for n in names() if n.startswith(("L4_", "L5_", "L6_")) and load(n).dim == 6]
    return sorted(out, key=_sort_key)


def nilpotent_up_to_dim5() -> list[str]:
    out = [n for n in names() if load(n).dim <= 5 and n.startswith(("L3_", "L4_", "L5_", "h", "f4"))]
    return sorted(out, key=_sort_key)


def with_field(key: str) -> list[str]:
    return sorted((n for n, e in _registry().items() if key in e.expected), key=_sort_key)


def table1() -> list[str]:
    return with_field("table1_V")


def table2() -> list[str]:
    return with_field("table2_H")
