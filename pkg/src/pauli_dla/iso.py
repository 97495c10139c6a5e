"""Formal direct sums of compact Lie algebras: u1, su(N), so(N), sp(N)."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

KINDS = ("u1", "su", "so", "sp")


def term_dim(kind: str, N: int = 1) -> int:
    if kind == "u1":
        return 1
    if kind == "su":
        return N * N - 1
    if kind == "so":
        return N * (N - 1) // 2
    if kind == "sp":
        return N * (2 * N + 1)
    raise ValueError(f"unknown summand kind {kind!r}")


def _normalize(kind: str, N: int) -> list[tuple[str, int]]:
    if kind == "u1":
        return [("u1", 1)]
    if N < 1:
        raise ValueError(f"{kind}({N}) needs N >= 1")
    if term_dim(kind, N) == 0:
        return []
    if kind == "so" and N == 2:
        return [("u1", 1)]
    return [(kind, N)]


@dataclass(frozen=True)
class IsoExpression:
    """A multiset of summands kept in a canonical sorted order."""

    summands: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, terms: Iterable[tuple[str, int] | tuple[str, int, int]]) -> "IsoExpression":
        out = []
        for t in terms:
            kind, N = t[0], t[1]
            mult = t[2] if len(t) > 2 else 1
            if kind not in KINDS:
                raise ValueError(f"unknown summand kind {kind!r}")
            if mult < 0:
                raise ValueError("negative multiplicity")
            out.extend(_normalize(kind, N) * mult)
        return cls(tuple(sorted(out, key=lambda s: (-term_dim(*s), s))))

    @classmethod
    def parse(cls, text: str) -> "IsoExpression":
        """Parse ``"so(8)+su(4)^2+u1^3"``; ``0`` is the zero algebra."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return cls()
        terms = []
        for part in text.split("+"):
            m = re.fullmatch(r"(u1|u\(1\)|su|so|sp)(?:\((\d+)\))?(?:\^(\d+))?", part)
            if not m or (m.group(1) in KINDS[1:] and m.group(2) is None):
                raise ValueError(f"malformed summand {part!r}")
            kind = "u1" if m.group(1).startswith("u") else m.group(1)
            N = int(m.group(2)) if m.group(2) else 1
            terms.append((kind, N, int(m.group(3) or 1)))
        return cls.of(terms)

    def __add__(self, other: "IsoExpression") -> "IsoExpression":
        return IsoExpression.of(self.summands + other.summands)

    @property
    def dimension(self) -> int:
        return sum(term_dim(k, N) for k, N in self.summands)

    @property
    def u1_count(self) -> int:
        return sum(1 for k, _ in self.summands if k == "u1")

    def simple_dims(self) -> list[int]:
        """Dimensions of simple (or u1) factors; so(4) splits into two su(2)."""
        out = []
        for k, N in self.summands:
            if k == "so" and N == 4:
                out += [3, 3]
            else:
                out.append(term_dim(k, N))
        return out

    def __str__(self) -> str:
        if not self.summands:
            return "0"
        parts = []
        for (k, N), c in Counter(self.summands).items():
            name = "u1" if k == "u1" else f"{k}({N})"
            parts.append(name if c == 1 else f"{name}^{c}")
        return "+".join(parts)


def u1(mult: int = 1) -> IsoExpression:
    return IsoExpression.of([("u1", 1, mult)])


def su(N: int, mult: int = 1) -> IsoExpression:
    return IsoExpression.of([("su", N, mult)])


def so(N: int, mult: int = 1) -> IsoExpression:
    return IsoExpression.of([("so", N, mult)])


def sp(N: int, mult: int = 1) -> IsoExpression:
    return IsoExpression.of([("sp", N, mult)])


def partition_consistent(component_sizes: Iterable[int], summand_dims: Iterable[int]) -> bool:
    """Can the summands be grouped so that group sums equal the component sizes?

    Each summand lands in exactly one component and each component is filled
    exactly, so components may merge summands but never split one.
    """
    caps = sorted(component_sizes, reverse=True)
    items = sorted(summand_dims, reverse=True)
    if sum(caps) != sum(items):
        return False

    def place(i: int) -> bool:
        if i == len(items):
            return True
        tried = set()
        for j, c in enumerate(caps):
            if c >= items[i] and c not in tried:
                tried.add(c)
                caps[j] -= items[i]
                if place(i + 1):
                    return True
                caps[j] += items[i]
        return False

    return place(0)
