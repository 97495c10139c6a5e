"""Structural probes of closed Pauli-string algebras.

A string P is packed as the 2n-bit vector ``v = x | z << n``. With the
"swapped" packing ``w = z | x << n`` the symplectic form is the parity of
``popcount(v & w')``, so stabilizers are kernels of GF(2) matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import networkx as nx
import numpy as np

from .dla import DlaBasis, _key_dtype
from .iso import IsoExpression, partition_consistent, so
from .pauli import PauliError, PauliString, commutes, product, transpose_sign

# enumerate stabilizer elements only up to this group order
MAX_ENUMERATED = 1 << 16


def _swapped(p: PauliString) -> int:
    return p.z | (p.x << p.n)


def gf2_kernel(rows: Iterable[int], nbits: int) -> list[int]:
    """Basis of {v : popcount(v & r) even for every row r}."""
    pivots: dict[int, int] = {}          # pivot bit -> reduced row
    for r in rows:
        for b, pr in pivots.items():
            if r >> b & 1:
                r ^= pr
        if r == 0:
            continue
        b = r.bit_length() - 1
        for b2 in list(pivots):
            if pivots[b2] >> b & 1:
                pivots[b2] ^= r
        pivots[b] = r
    basis = []
    for f in range(nbits):
        if f in pivots:
            continue
        v = 1 << f
        for b, pr in pivots.items():
            if pr >> f & 1:
                v |= 1 << b
        basis.append(v)
    return basis


def _span(vectors: list[int]) -> list[int]:
    out = [0]
    for v in vectors:
        out += [u ^ v for u in out]
    return out


@dataclass(frozen=True)
class StabilizerSet:
    """Pauli strings commuting with a generator set, as a GF(2) subspace."""

    n: int
    generator_basis: tuple[PauliString, ...]
    elements: frozenset | None

    @property
    def rank(self) -> int:
        return len(self.generator_basis)

    @property
    def order(self) -> int:
        return 1 << self.rank

    def __contains__(self, p: PauliString) -> bool:
        if self.elements is not None:
            return p in self.elements
        # membership in a subspace: orthogonal to its annihilator
        perp = gf2_kernel((g.key for g in self.generator_basis), 2 * self.n)
        return all((p.key & u).bit_count() % 2 == 0 for u in perp)


def stabilizer(strings: Iterable[PauliString]) -> StabilizerSet:
    items = list(strings)
    if not items:
        raise PauliError("stabilizer of an empty set")
    n = items[0].n
    if any(p.n != n for p in items):
        raise PauliError("mixed lengths")
    ker = gf2_kernel((_swapped(p) for p in items), 2 * n)
    gens = tuple(sorted(PauliString.from_key(v, n) for v in ker))
    elements = None
    if (1 << len(ker)) <= MAX_ENUMERATED:
        elements = frozenset(PauliString.from_key(v, n) for v in _span(ker))
    return StabilizerSet(n, gens, elements)


def stabilizer_center(stab: StabilizerSet) -> StabilizerSet:
    """Elements of the stabilizer group that commute with the whole group."""
    g = stab.generator_basis
    k = len(g)
    # coefficient vectors c with sum_j c_j <g_j, g_i> = 0 for all i
    rows = []
    for i in range(k):
        r = 0
        for j in range(k):
            if not commutes(g[i], g[j]):
                r |= 1 << j
        rows.append(r)
    coeffs = gf2_kernel(rows, k)
    cen = []
    for c in coeffs:
        x = z = 0
        for j in range(k):
            if c >> j & 1:
                x ^= g[j].x
                z ^= g[j].z
        cen.append(PauliString(stab.n, x, z))
    cen = tuple(sorted(cen))
    elements = None
    if (1 << len(cen)) <= MAX_ENUMERATED:
        elements = frozenset(PauliString.from_key(v, stab.n)
                             for v in _span([p.key for p in cen]))
    return StabilizerSet(stab.n, cen, elements)


def center_strings(basis: DlaBasis | Iterable[PauliString]) -> tuple[PauliString, ...]:
    """Basis strings commuting with every basis string."""
    items = list(basis.basis if isinstance(basis, DlaBasis) else basis)
    if not items:
        return ()
    n = items[0].n
    if 2 * n > 64:
        return tuple(a for a in items if all(commutes(a, b) for b in items))
    v, w = _packed(items)
    # candidates shrink fast, so sweep the basis in blocks against survivors
    cand = np.arange(len(items))
    block = 256
    for i in range(0, len(items), block):
        if cand.size == 0:
            break
        anti = np.bitwise_count(w[cand][:, None] & v[None, i:i + block]) & 1
        cand = cand[~anti.any(axis=1)]
    return tuple(items[i] for i in cand.tolist())


def _packed(items: list[PauliString]):
    n = items[0].n
    dt = _key_dtype(n)
    v = np.array([p.key for p in items], dtype=dt)
    w = np.array([_swapped(p) for p in items], dtype=dt)
    return v, w


def centralizer_dimension(stab: StabilizerSet, center_of_stab: StabilizerSet | Iterable | None = None) -> int:
    """Dimension of the stabilizer's centralizer modulo its central strings.

    Strings commuting with all of St form a subspace of size 4**n / |St|; the
    identity and the nontrivial central elements of St are removed.
    """
    if center_of_stab is None:
        center_of_stab = stabilizer_center(stab)
    if isinstance(center_of_stab, StabilizerSet):
        zc = center_of_stab.order
    else:
        zc = len({p for p in center_of_stab} | {PauliString.identity(stab.n)})
    return (1 << (2 * stab.n - stab.rank)) - zc


def centralizer_space(stab: StabilizerSet) -> list[PauliString]:
    """Strings of the centralizer quotient: commute with St, not central in St."""
    n = stab.n
    ker = gf2_kernel((_swapped(g) for g in stab.generator_basis), 2 * n)
    keys = _span(ker)
    cen = stabilizer_center(stab)
    drop = {PauliString.identity(n)}
    if cen.elements is not None:
        drop |= cen.elements
    out = [PauliString.from_key(k, n) for k in keys]
    if cen.elements is None:
        return sorted(p for p in out if p not in drop and p not in cen)
    return sorted(p for p in out if p not in drop)


# -- involutions ---------------------------------------------------------------

@dataclass(frozen=True)
class Involution:
    """theta(g) = -Q g^T Q acting on Pauli strings."""

    q: PauliString

    def sign(self, p: PauliString) -> int:
        """theta(P) = sign * P."""
        sigma = 1 if commutes(self.q, p) else -1
        return -transpose_sign(p) * sigma

    def is_fixed(self, p: PauliString) -> bool:
        return self.sign(p) == 1


def involution_fixed_dimension(space: Iterable[PauliString], inv: Involution) -> int:
    return sum(1 for p in space if inv.is_fixed(p))


# -- frustration graphs and ideals -------------------------------------------------

def frustration_graph(generators: Iterable[PauliString]) -> nx.Graph:
    gens = sorted(set(generators))
    if gens and any(g.n != gens[0].n for g in gens):
        raise PauliError("mixed lengths")
    G = nx.Graph()
    G.add_nodes_from(gens)
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if not commutes(a, b):
                G.add_edge(a, b)
    return G


def _product_is_identity(strings: Iterable[PauliString]) -> bool:
    x = z = 0
    for p in strings:
        x ^= p.x
        z ^= p.z
    return x == 0 and z == 0


def recognize_path_or_cycle(graph: nx.Graph) -> IsoExpression | None:
    """so-type expression when every component is a simple path or cycle.

    A path on N vertices gives so(N + 1). A cycle on N >= 3 vertices gives
    so(N) + so(N), except when the product of its strings is proportional to
    the identity, in which case the two copies coincide and only so(N) remains.
    """
    out = IsoExpression()
    for comp in nx.connected_components(graph):
        sub = graph.subgraph(comp)
        N = sub.number_of_nodes()
        degs = [d for _, d in sub.degree()]
        if N == 1:
            out = out + so(2)
        elif sub.number_of_edges() == N - 1 and max(degs) <= 2:
            out = out + so(N + 1)
        elif N >= 3 and all(d == 2 for d in degs):
            out = out + (so(N) if _product_is_identity(comp) else so(N, 2))
        else:
            return None
    return out


def ideal_components(basis: DlaBasis | Iterable[PauliString]) -> list[tuple[PauliString, ...]]:
    """Connected components of the anticommutation graph on a closed basis."""
    items = list(basis.basis if isinstance(basis, DlaBasis) else basis)
    if not items:
        return []
    n = items[0].n
    if 2 * n > 64:
        G = frustration_graph(items)
        comps = [tuple(sorted(c)) for c in nx.connected_components(G)]
        return sorted(comps, key=lambda c: (-len(c), c))
    v, w = _packed(items)
    unvisited = np.ones(len(items), dtype=bool)
    comps = []
    while unvisited.any():
        start = int(np.argmax(unvisited))
        unvisited[start] = False
        members = [start]
        queue = [np.array([start])]
        while queue:
            idx = np.nonzero(unvisited)[0]
            if idx.size == 0:
                break
            rows = max(1, (1 << 20) // idx.size)
            head = queue.pop()
            f, rest = head[:rows], head[rows:]
            if rest.size:
                queue.append(rest)
            anti = np.bitwise_count(w[f][:, None] & v[idx][None, :]) & 1
            hit = idx[anti.any(axis=0)]
            if hit.size:
                unvisited[hit] = False
                members.extend(hit.tolist())
                queue.append(hit)
        comps.append(tuple(sorted(items[i] for i in members)))
    return sorted(comps, key=lambda c: (-len(c), c))


@dataclass(frozen=True)
class IsoReport:
    dim_ok: bool
    center_ok: bool
    component_consistent: bool
    computed_dim: int
    claimed_dim: int
    center_dim: int
    component_sizes: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.dim_ok and self.center_ok and self.component_consistent

    def as_dict(self) -> dict:
        return {"dim_ok": self.dim_ok, "center_ok": self.center_ok,
                "component_consistent": self.component_consistent,
                "status": "verified-necessary" if self.ok else "failed"}


def verify_iso(basis: DlaBasis, claim: IsoExpression | str,
               components: list | None = None, center: tuple | None = None) -> IsoReport:
    """Necessary checks that ``basis`` spans an algebra of the claimed shape."""
    if isinstance(claim, str):
        claim = IsoExpression.parse(claim)
    if center is None:
        center = center_strings(basis)
    if components is None:
        components = ideal_components(basis)
    sizes = tuple(len(c) for c in components)
    return IsoReport(
        dim_ok=claim.dimension == basis.dimension,
        center_ok=claim.u1_count == len(center),
        component_consistent=partition_consistent(sizes, claim.simple_dims()),
        computed_dim=basis.dimension,
        claimed_dim=claim.dimension,
        center_dim=len(center),
        component_sizes=sizes,
    )


def products_with(stab_elements: Iterable[PauliString],
                  strings: Iterable[PauliString]) -> frozenset:
    """Componentwise products S . P as a phase-free string set."""
    return frozenset(product(s, p).string for s in stab_elements for p in strings)
