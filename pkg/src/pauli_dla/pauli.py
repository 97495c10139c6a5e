"""Phase-free Pauli strings in symplectic (x, z) bit form.

Site 1 is the leftmost character of the text form and the least significant
bit of both bit vectors. Python ints are used as bit vectors, so there is no
upper limit on the number of sites.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

LETTERS = "IXYZ"
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


class PauliError(ValueError):
    """Raised on malformed Pauli text or incompatible operands."""


@dataclass(frozen=True, order=True, slots=True)
class PauliString:
    """A length-n word over {I, X, Y, Z}.

    Ordering compares ``(n, x, z)`` so strings of equal length are ordered
    lexicographically on ``(x, z)`` as integers.
    """

    n: int
    x: int
    z: int

    def __post_init__(self):
        if self.n < 1:
            raise PauliError(f"site count must be positive, got {self.n}")
        lim = 1 << self.n
        if not (0 <= self.x < lim and 0 <= self.z < lim):
            raise PauliError("bit vectors exceed the site count")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @property
    def key(self) -> int:
        """Packed integer ``x | z << n``; unique per string for fixed n."""
        return self.x | (self.z << self.n)

    @classmethod
    def from_key(cls, key: int, n: int) -> "PauliString":
        mask = (1 << n) - 1
        return cls(n, key & mask, key >> n)

    def letter(self, site: int) -> str:
        """Letter at 1-based ``site``."""
        j = site - 1
        return _LETTER[((self.x >> j) & 1, (self.z >> j) & 1)]

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def __str__(self) -> str:
        return "".join(self.letter(j) for j in range(1, self.n + 1))

    def __repr__(self) -> str:
        return f"PauliString('{self}')"


@dataclass(frozen=True, slots=True)
class SignedPauli:
    """A Pauli string times ``i**phase``."""

    string: PauliString
    phase: int

    def __str__(self) -> str:
        return ("", "i", "-", "-i")[self.phase % 4] + str(self.string)


def parse(text: str) -> PauliString:
    """Parse ``"XZY"`` style text, site 1 leftmost."""
    if not isinstance(text, str):
        raise PauliError(f"expected text, got {type(text).__name__}")
    text = text.strip()
    if not text:
        raise PauliError("empty Pauli string")
    x = z = 0
    for j, ch in enumerate(text):
        try:
            bx, bz = _BITS[ch]
        except KeyError:
            raise PauliError(f"invalid Pauli letter {ch!r} in {text!r}") from None
        x |= bx << j
        z |= bz << j
    return PauliString(len(text), x, z)


def parse_list(text: str) -> list[PauliString]:
    """Parse a comma separated list such as ``"XY,YZ"``."""
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise PauliError(f"malformed generator list {text!r}")
    return [parse(p) for p in parts]


def to_str(a: PauliString) -> str:
    return str(a)


def _check(a: PauliString, b: PauliString):
    if a.n != b.n:
        raise PauliError(f"length mismatch: {a.n} vs {b.n}")


def commutes(a: PauliString, b: PauliString) -> bool:
    _check(a, b)
    return (((a.x & b.z) ^ (a.z & b.x)).bit_count() & 1) == 0


def product_phase(ax: int, az: int, bx: int, bz: int) -> int:
    """Exponent of i in the product of two strings given as bit vectors."""
    aX, aY, aZ = ax & ~az, ax & az, az & ~ax
    bX, bY, bZ = bx & ~bz, bx & bz, bz & ~bx
    plus = ((aX & bY) | (aY & bZ) | (aZ & bX)).bit_count()
    minus = ((aY & bX) | (aZ & bY) | (aX & bZ)).bit_count()
    return (plus - minus) % 4


def product(a: PauliString, b: PauliString) -> SignedPauli:
    _check(a, b)
    s = PauliString(a.n, a.x ^ b.x, a.z ^ b.z)
    return SignedPauli(s, product_phase(a.x, a.z, b.x, b.z))


def commutator_string(a: PauliString, b: PauliString) -> PauliString | None:
    """String of ``[a, b]``, or None when the two commute."""
    if commutes(a, b):
        return None
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z)


def transpose_sign(a: PauliString) -> int:
    return -1 if (a.x & a.z).bit_count() & 1 else 1


def embed(a: PauliString, offset: int, n_total: int) -> PauliString:
    """Place ``a`` so that its first site lands on 1-based ``offset``."""
    if offset < 1 or offset + a.n - 1 > n_total:
        raise PauliError(f"cannot embed {a.n} sites at offset {offset} in {n_total}")
    sh = offset - 1
    return PauliString(n_total, a.x << sh, a.z << sh)


def _rotl(v: int, k: int, n: int) -> int:
    mask = (1 << n) - 1
    return ((v >> k) | (v << (n - k))) & mask


def cyclic_shift(a: PauliString, k: int) -> PauliString:
    """Rotate letters left by ``k`` (``XYI`` -> ``YIX`` for k=1)."""
    k %= a.n
    if k == 0:
        return a
    return PauliString(a.n, _rotl(a.x, k, a.n), _rotl(a.z, k, a.n))


def from_sites(n: int, letters: Mapping[int, str]) -> PauliString:
    """Build a string from ``{site: letter}``; unspecified sites are I."""
    x = z = 0
    for site, ch in letters.items():
        if not 1 <= site <= n:
            raise PauliError(f"site {site} outside 1..{n}")
        bx, bz = _BITS[ch]
        x |= bx << (site - 1)
        z |= bz << (site - 1)
    return PauliString(n, x, z)


def pattern(motif: str, n: int) -> PauliString:
    """Repeat ``motif`` periodically and truncate to n sites (``P_XYZ`` etc.)."""
    return parse((motif * (n // len(motif) + 1))[:n])


# -- per-site letter permutations ------------------------------------------

LetterPerm = Mapping[str, str]

IDENTITY_PERM = {"X": "X", "Y": "Y", "Z": "Z"}
SWAP_XY = {"X": "Y", "Y": "X", "Z": "Z"}
SWAP_YZ = {"X": "X", "Y": "Z", "Z": "Y"}
CYCLE_XZY = {"X": "Z", "Z": "Y", "Y": "X"}


def _compose(p: LetterPerm, q: LetterPerm) -> dict:
    """Apply q first, then p."""
    return {c: p[q[c]] for c in "XYZ"}


def perm_power(p: LetterPerm, k: int) -> dict:
    out = dict(IDENTITY_PERM)
    for _ in range(k % 6):  # every element of S3 has order dividing 6
        out = _compose(p, out)
    return out


def _validate_perm(p: LetterPerm):
    if sorted(p) != ["X", "Y", "Z"] or sorted(p.values()) != ["X", "Y", "Z"]:
        raise PauliError(f"not a permutation of X, Y, Z: {dict(p)}")


def site_letter_map(rule: Callable[[int], LetterPerm] | Sequence[LetterPerm]
                    ) -> Callable[[PauliString], PauliString]:
    """Return a transformer applying a letter permutation at every site.

    ``rule`` is either a function of the 1-based site index or a sequence
    indexed from site 1. Signs are discarded.
    """
    if callable(rule):
        get = rule
    else:
        seq = list(rule)

        def get(site):
            return seq[site - 1]

    cache: dict[int, list[dict]] = {}

    def tables(n: int):
        if n not in cache:
            ts = []
            for site in range(1, n + 1):
                p = get(site)
                _validate_perm(p)
                ts.append({**p, "I": "I"})
            cache[n] = ts
        return cache[n]

    def apply(a: PauliString) -> PauliString:
        ts = tables(a.n)
        x = z = 0
        for j in range(a.n):
            bx, bz = _BITS[ts[j][_LETTER[((a.x >> j) & 1, (a.z >> j) & 1)]]]
            x |= bx << j
            z |= bz << j
        return PauliString(a.n, x, z)

    return apply


def psi_map() -> Callable[[PauliString], PauliString]:
    """Swap X and Y on even sites."""
    return site_letter_map(lambda s: SWAP_XY if s % 2 == 0 else IDENTITY_PERM)


def phi_map() -> Callable[[PauliString], PauliString]:
    """Swap Y and Z on even sites."""
    return site_letter_map(lambda s: SWAP_YZ if s % 2 == 0 else IDENTITY_PERM)


def gamma_map() -> Callable[[PauliString], PauliString]:
    """Apply the cycle X->Z->Y->X raised to the site index."""
    return site_letter_map(lambda s: perm_power(CYCLE_XZY, s))


def map_set(f: Callable[[PauliString], PauliString],
            strings: Iterable[PauliString]) -> frozenset:
    return frozenset(f(p) for p in strings)
