"""Named two-site generator families and the chain extension rules."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterable

from .pauli import PauliError, PauliString, embed, parse

KIND_RANGE = {"a": 23, "b": 5, "c": 8}
CATALOG_VERSION = 1


class Topology(str, Enum):
    OPEN = "open"
    PERIODIC = "periodic"
    PERMUTATION = "permutation"


@dataclass(frozen=True, order=True)
class FamilyId:
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in KIND_RANGE:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if not 0 <= self.index < KIND_RANGE[self.kind]:
            raise ValueError(f"family index {self.index} out of range for {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "FamilyId":
        m = re.fullmatch(r"\s*([abc])(\d+)\s*", text)
        if not m:
            raise ValueError(f"bad family name {text!r}")
        return cls(m.group(1), int(m.group(2)))

    def __str__(self):
        return f"{self.kind}{self.index}"


def all_families(kinds: str = "abc") -> list[FamilyId]:
    return [FamilyId(k, i) for k in kinds for i in range(KIND_RANGE[k])]


@lru_cache(maxsize=1)
def _load() -> dict:
    raw = resources.files(__package__).joinpath("data/catalog.json").read_text()
    data = json.loads(raw)
    if data.get("version") != CATALOG_VERSION:
        raise RuntimeError(f"unsupported catalog version {data.get('version')}")
    return data["families"]


def catalog_generators(family: FamilyId | str) -> tuple[PauliString, ...]:
    """Minimal two-site generating set of a named family."""
    fid = FamilyId.parse(family) if isinstance(family, str) else family
    try:
        texts = _load()[str(fid)]
    except KeyError:
        raise ValueError(f"unknown family {fid}") from None
    return tuple(parse(t) for t in texts)


# Alternative generating sets of the same two-site algebras whose chain
# extensions have path or cycle frustration graphs.
FRUSTRATION_SETS = {
    "a1": ("XY",),
    "a2": ("XY", "YX"),
    "a4": ("XX", "YY"),
    "a8": ("XX", "IY"),
    "a14": ("XX", "ZI", "IZ"),
}


def frustration_generators(family: FamilyId | str) -> tuple[PauliString, ...] | None:
    """Path/cycle friendly generating set for ``family``, if one is registered."""
    texts = FRUSTRATION_SETS.get(str(family))
    return None if texts is None else tuple(parse(t) for t in texts)


def catalog_json() -> str:
    """Regenerate the shipped resource text from the loaded table."""
    return json.dumps({"version": CATALOG_VERSION, "families": _load()}, indent=1)


def _check2(gens2) -> list[PauliString]:
    gens = list(gens2)
    if any(g.n != 2 for g in gens):
        raise PauliError("extension rules take two-site strings")
    return gens


def _place(g: PauliString, i: int, j: int, n: int) -> PauliString:
    """A at site i, B at site j for g = AB (1-based, i != j)."""
    x = ((g.x & 1) << (i - 1)) | ((g.x >> 1) << (j - 1))
    z = ((g.z & 1) << (i - 1)) | ((g.z >> 1) << (j - 1))
    return PauliString(n, x, z)


def extend_open(gens2: Iterable[PauliString], n: int) -> frozenset:
    if n < 2:
        raise ValueError("open chain needs n >= 2")
    gens = _check2(gens2)
    return frozenset(embed(g, i, n) for g in gens for i in range(1, n))


def extend_periodic(gens2: Iterable[PauliString], n: int) -> frozenset:
    if n < 3:
        raise ValueError("periodic chain needs n >= 3")
    gens = _check2(gens2)
    wrap = {_place(g, n, 1, n) for g in gens}  # B_1 A_n
    return extend_open(gens, n) | wrap


def extend_permutation(gens2: Iterable[PauliString], n: int) -> frozenset:
    if n < 2:
        raise ValueError("permutation extension needs n >= 2")
    gens = _check2(gens2)
    return frozenset(_place(g, i, j, n) for g in gens
                     for i in range(1, n + 1) for j in range(1, n + 1) if i != j)


def extend(gens2: Iterable[PauliString], n: int, topology: Topology | str) -> frozenset:
    topo = Topology(topology)
    if topo is Topology.OPEN:
        return extend_open(gens2, n)
    if topo is Topology.PERIODIC:
        return extend_periodic(gens2, n)
    return extend_permutation(gens2, n)


@dataclass(frozen=True)
class ModelSpec:
    family: FamilyId
    n: int
    topology: Topology = Topology.OPEN

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("site count must be >= 2")
        object.__setattr__(self, "topology", Topology(self.topology))

    @property
    def two_site_generators(self) -> tuple[PauliString, ...]:
        return catalog_generators(self.family)

    def generators(self) -> frozenset:
        if self.n == 2 and self.topology is Topology.OPEN:
            return frozenset(self.two_site_generators)
        return extend(self.two_site_generators, self.n, self.topology)
