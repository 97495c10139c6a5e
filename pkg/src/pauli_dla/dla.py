"""Lie closure of Pauli-string generator sets.

Commutators of Pauli strings are again Pauli strings (up to a scalar), so the
span closure reduces to a closure over strings and no real linear algebra is
needed. The worklist is the basis array itself: entries before ``head`` have
been swept against everything that existed when they were popped.
"""
from __future__ import annotations

import time
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .pauli import PauliError, PauliString

# numpy path handles packed keys up to 64 bits
_MAX_NUMPY_SITES = 32
# dense "seen" table up to 4**12 entries (16 MB)
_MAX_TABLE_SITES = 12
# rows x columns of one anticommutation sweep block
_BLOCK_CELLS = 1 << 21


class CapExceeded(RuntimeError):
    """Closure stopped because a time or element budget ran out."""


@dataclass(frozen=True)
class DlaBasis:
    n: int
    basis: tuple[PauliString, ...]
    generator_count: int
    _members: frozenset = field(default=frozenset(), repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def strings(self) -> list[str]:
        return [str(p) for p in self.basis]

    def as_set(self) -> frozenset:
        return self._members

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


def _validate(generators) -> tuple[int, list[PauliString]]:
    gens = list(generators)
    if not gens:
        raise PauliError("empty generator set")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise PauliError("generators have mixed lengths")
    if any(g.is_identity() for g in gens):
        raise PauliError("identity string among generators")
    return n, gens


def close(generators: Iterable[PauliString], *, max_elements: int | None = None,
          max_seconds: float | None = None) -> DlaBasis:
    """Smallest commutator-closed set of strings containing ``generators``.

    Stops early once all 4**n - 1 non-identity strings are present. Raises
    :class:`CapExceeded` when ``max_elements`` or ``max_seconds`` is exceeded.
    """
    n, gens = _validate(generators)
    keys = sorted({g.key for g in gens})
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    if n <= _MAX_NUMPY_SITES:
        out = _close_numpy(keys, n, max_elements, deadline)
    else:
        out = _close_python(keys, n, max_elements, deadline)
    basis = tuple(sorted(PauliString.from_key(int(k), n) for k in out))
    return DlaBasis(n, basis, len(gens), frozenset(basis))


def _cap_check(m, max_elements, deadline):
    if max_elements is not None and m > max_elements:
        raise CapExceeded(f"closure exceeded {max_elements} elements")
    if deadline is not None and time.monotonic() > deadline:
        raise CapExceeded("closure exceeded its time budget")


def _key_dtype(n: int) -> np.dtype:
    # narrow keys cut memory traffic in the sweep
    for dt in (np.uint16, np.uint32, np.uint64):
        if 2 * n <= np.iinfo(dt).bits:
            return np.dtype(dt)
    raise ValueError(n)


def _close_numpy(keys, n, max_elements, deadline):
    full = (1 << (2 * n)) - 1
    dt = _key_dtype(n)
    lo_mask = dt.type((1 << n) - 1)
    sh = dt.type(n)
    cap = max(64, 4 * len(keys))
    S = np.zeros(cap, dtype=dt)
    m = len(keys)
    S[:m] = keys
    if n <= _MAX_TABLE_SITES:
        seen = np.zeros(full + 1, dtype=bool)
        seen[S[:m]] = True
        seen_set = None
    else:
        seen = None
        seen_set = set(keys)
    head = 0
    while head < m and m < full:
        _cap_check(m, max_elements, deadline)
        rows = max(1, min(m - head, _BLOCK_CELLS // m))
        batch = S[head:head + rows]
        head += rows
        # swapping the x and z halves turns the symplectic form into a plain AND
        swapped = (batch >> sh) | ((batch & lo_mask) << sh)
        cols = S[None, :m]
        anti = (np.bitwise_count(swapped[:, None] & cols) & np.uint8(1)).view(bool)
        cand = batch[:, None] ^ cols
        if seen is not None:
            # filtering on the dense table first keeps the index arrays small
            cand = cand[anti & ~seen[cand]]
            if cand.size == 0:
                continue
            new = np.unique(cand)
            seen[new] = True
        else:
            new = np.array(sorted(set(np.unique(cand[anti]).tolist()) - seen_set),
                           dtype=dt)
            if new.size == 0:
                continue
            seen_set.update(new.tolist())
        if m + new.size > cap:
            cap = max(2 * cap, m + new.size)
            S = np.resize(S, cap)
        S[m:m + new.size] = new
        m += new.size
    _cap_check(m, max_elements, None)
    return S[:m].tolist()


def _close_python(keys, n, max_elements, deadline):
    full = (1 << (2 * n)) - 1
    lo = (1 << n) - 1
    S = list(keys)
    seen = set(keys)
    head = 0
    while head < len(S) and len(S) < full:
        _cap_check(len(S), max_elements, deadline)
        q = S[head]
        head += 1
        w = (q >> n) | ((q & lo) << n)
        for s in S[:]:
            if (w & s).bit_count() & 1:
                c = q ^ s
                if c not in seen:
                    seen.add(c)
                    S.append(c)
    _cap_check(len(S), max_elements, None)
    return S


def is_member(basis: DlaBasis, p: PauliString) -> bool:
    if p.n != basis.n:
        raise PauliError(f"length mismatch: {p.n} vs {basis.n}")
    i = bisect_left(basis.basis, p)
    return i < len(basis.basis) and basis.basis[i] == p


def is_closed(strings: Iterable[PauliString]) -> bool:
    """Direct pairwise check that commutators stay inside ``strings``."""
    items = list(strings)
    if not items:
        return True
    n = items[0].n
    if n <= _MAX_NUMPY_SITES:
        dt = _key_dtype(n)
        v = np.array([p.key for p in items], dtype=dt)
        lo = dt.type((1 << n) - 1)
        sw = (v >> dt.type(n)) | ((v & lo) << dt.type(n))
        if n <= _MAX_TABLE_SITES:
            table = np.zeros(1 << (2 * n), dtype=bool)
            table[v] = True
        else:
            members = np.sort(v)
        step = max(1, _BLOCK_CELLS // len(v))
        for i in range(0, len(v), step):
            anti = (np.bitwise_count(sw[i:i + step, None] & v[None, :]) & 1).view(bool)
            c = v[i:i + step, None] ^ v[None, :]
            if n <= _MAX_TABLE_SITES:
                if np.any(anti & ~table[c]):
                    return False
                continue
            c = c[anti]
            pos = np.searchsorted(members, c)
            pos[pos == len(members)] = 0
            if not np.all(members[pos] == c):
                return False
        return True
    keys = {p.key for p in items}
    lo = (1 << n) - 1
    for a in keys:
        w = (a >> n) | ((a & lo) << n)
        for b in keys:
            if (w & b).bit_count() & 1 and (a ^ b) not in keys:
                return False
    return True
