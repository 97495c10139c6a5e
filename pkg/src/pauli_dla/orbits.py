"""Two-site subalgebra inventory and its S3 x Z2 orbit structure.

The symmetry group relabels {X, Y, Z} simultaneously on both sites (S3) and
optionally swaps the two sites (Z2). At n=2 every string has a 4-bit key
``x | z << 2`` in 1..15, so a subalgebra is a 16-bit mask and closure runs on
machine integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable

from .catalog import FamilyId, all_families, catalog_generators
from .dla import close, is_closed
from .pauli import PauliError, PauliString, commutes, site_letter_map

GROUP_ORDER = 12
_KEYS = range(1, 16)


def _string(key: int) -> PauliString:
    return PauliString.from_key(key, 2)


def _letter_perms() -> list[dict]:
    return [dict(zip("XYZ", p)) for p in permutations("XYZ")]


def _swap_sites(p: PauliString) -> PauliString:
    sw = lambda v: ((v & 1) << 1) | (v >> 1)
    return PauliString(2, sw(p.x), sw(p.z))


@lru_cache(maxsize=1)
def group_elements() -> tuple[Callable[[PauliString], PauliString], ...]:
    """The 12 elements of S3 x Z2 acting on two-site strings."""
    out = []
    for perm in _letter_perms():
        relabel = site_letter_map([perm, perm])
        out.append(relabel)
        out.append(lambda p, f=relabel: _swap_sites(f(p)))
    return tuple(out)


def apply_element(g, strings: Iterable[PauliString]) -> frozenset:
    return frozenset(g(p) for p in strings)


def _sorted_key(strings: Iterable[PauliString]) -> tuple:
    return tuple(sorted(strings))


def invariants(basis: Iterable[PauliString]) -> tuple[int, int, int, int]:
    """(singles, single pairs, equal-letter doubles, different-letter doubles)."""
    items = set(basis)
    s = p = e = d = 0
    for a in items:
        if a.n != 2:
            raise PauliError("invariants are defined for two-site strings")
        l1, l2 = a.letter(1), a.letter(2)
        if l1 == "I" or l2 == "I":
            s += 1
            if l1 != "I" and PauliString(2, a.x << 1, a.z << 1) in items:
                p += 1  # A_I with its partner I_A
        elif l1 == l2:
            e += 1
        else:
            d += 1
    return s, p, e, d


@dataclass(frozen=True)
class OrbitRecord:
    canonical_basis: tuple[PauliString, ...]
    invariants: tuple[int, int, int, int]
    orbit_size: int
    stabilizer_order: int
    matched_family: FamilyId | None = None
    kind: str | None = None

    @property
    def dimension(self) -> int:
        return len(self.canonical_basis)

    def basis_text(self) -> str:
        return ",".join(str(p) for p in self.canonical_basis)


def canonicalize(basis: Iterable[PauliString], *, check_closed: bool = True) -> OrbitRecord:
    """Lexicographically smallest image of ``basis`` under the 12 symmetries."""
    items = frozenset(basis)
    if not items:
        raise PauliError("empty basis")
    if any(p.n != 2 for p in items):
        raise PauliError("canonicalize works on two-site strings")
    if check_closed and not is_closed(items):
        raise PauliError("basis is not commutator-closed")
    images = {_sorted_key(apply_element(g, items)) for g in group_elements()}
    rep = min(images)
    size = len(images)
    return OrbitRecord(rep, invariants(rep), size, GROUP_ORDER // size,
                       _family_lookup().get(rep))


@lru_cache(maxsize=1)
def _family_lookup() -> dict:
    out = {}
    for fid in all_families():
        b = close(catalog_generators(fid)).basis
        images = {_sorted_key(apply_element(g, b)) for g in group_elements()}
        out[min(images)] = fid
    return out


# -- power-set scan -----------------------------------------------------------

@lru_cache(maxsize=1)
def _anti_masks() -> tuple[int, ...]:
    out = [0] * 16
    for a in _KEYS:
        for b in _KEYS:
            if not commutes(_string(a), _string(b)):
                out[a] |= 1 << b
    return tuple(out)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def close_mask(mask: int) -> int:
    """Closure of a two-site string set given as a key bitmask."""
    anti = _anti_masks()
    todo = list(_bits(mask))
    while todo:
        a = todo.pop()
        for b in _bits(mask & anti[a]):
            c = 1 << (a ^ b)
            if not mask & c:
                mask |= c
                todo.append(a ^ b)
    return mask


def _mask_strings(mask: int) -> tuple[PauliString, ...]:
    return tuple(sorted(_string(k) for k in _bits(mask)))


_WEIGHT2 = sum(1 << k for k in _KEYS if _string(k).weight == 2)
_SITE1 = {k for k in _KEYS if _string(k).weight == 1 and _string(k).letter(2) == "I"}


def _generator_kind(gmask: int) -> str:
    """Type suggested by the shape of a generating set.

    'a' for weight-2 generators only, 'b' when every single-site generator A_I
    comes with its mirror I_A, 'c' otherwise.
    """
    if gmask & ~_WEIGHT2 == 0:
        return "a"
    for k in _SITE1:
        if bool(gmask >> k & 1) != bool(gmask >> (k << 1) & 1):
            return "c"
    return "b"


@dataclass
class Inventory:
    subalgebras: dict[int, str]            # closed mask -> type letter
    orbit_records: list[OrbitRecord]
    flagged: list[int] = field(default_factory=list)

    def count(self, kind: str) -> int:
        return sum(1 for t in self.subalgebras.values() if t == kind)

    @property
    def a_count(self) -> int:
        return self.count("a")

    @property
    def b_count(self) -> int:
        return self.count("b")

    @property
    def c_count(self) -> int:
        return self.count("c")

    @property
    def total(self) -> int:
        return len(self.subalgebras)

    def subalgebra_bases(self) -> list[tuple[PauliString, ...]]:
        return [_mask_strings(m) for m in sorted(self.subalgebras)]


_RANK = {"a": 0, "b": 1, "c": 2}


@lru_cache(maxsize=1)
def scan_power_sets() -> Inventory:
    """Close all 2**15 - 1 generating sets and group the results into orbits."""
    best: dict[int, str] = {}
    for gmask in range(2, 1 << 16, 2):   # bit 0 is the identity key
        sub = close_mask(gmask)
        kind = _generator_kind(gmask)
        prev = best.get(sub)
        if prev is None or _RANK[kind] < _RANK[prev]:
            best[sub] = kind
    records: dict[tuple, OrbitRecord] = {}
    flagged = []
    for sub, kind in best.items():
        rec = canonicalize(_mask_strings(sub), check_closed=False)
        old = records.get(rec.canonical_basis)
        if old is None:
            records[rec.canonical_basis] = OrbitRecord(
                rec.canonical_basis, rec.invariants, rec.orbit_size,
                rec.stabilizer_order, rec.matched_family, kind)
        elif old.kind != kind:
            flagged.append(sub)  # type must be constant on an orbit
    ordered = sorted(records.values(),
                     key=lambda r: (_RANK[r.kind], r.dimension,
                                    r.matched_family or FamilyId("c", 0),
                                    r.canonical_basis))
    return Inventory(best, ordered, flagged)


def orbit_of(strings: Iterable[PauliString]) -> OrbitRecord:
    """Orbit record of the subalgebra generated by ``strings``."""
    return canonicalize(close(list(strings)).basis, check_closed=False)
