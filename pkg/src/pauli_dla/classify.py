"""Predicted isomorphism classes for chains of every family, and the sweep
that checks them against computed closures.

Prediction rules are plain data: for each (family, topology) an optional
lower bound on n and a list of (residue condition, expression builder).
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from .catalog import FamilyId, ModelSpec, Topology, all_families
from .dla import CapExceeded, close
from .iso import IsoExpression, so, sp, su, u1
from .structure import center_strings, ideal_components, verify_iso


class OutOfRange(ValueError):
    """n is below the lower bound for which a prediction is stated."""


Expr = Callable[[int], IsoExpression]


def mod(m: int, *residues: int) -> Callable[[int], bool]:
    rs = {r % m for r in residues}
    return lambda n: n % m in rs


ODD = mod(2, 1)
EVEN = mod(2, 0)
ANY = None


@dataclass(frozen=True)
class Rule:
    cases: tuple[tuple[Callable[[int], bool] | None, Expr], ...]
    n_min: int = 3

    def __call__(self, n: int) -> IsoExpression:
        if n < self.n_min:
            raise OutOfRange(f"prediction stated for n >= {self.n_min}")
        for cond, expr in self.cases:
            if cond is None or cond(n):
                return expr(n)
        raise OutOfRange(f"no case covers n = {n}")


def rule(*cases, n_min: int = 3) -> Rule:
    if len(cases) == 1 and not isinstance(cases[0], tuple):
        cases = ((None, cases[0]),)
    return Rule(tuple(cases), n_min)


# recurring shapes
SU_FULL = rule(lambda n: su(2 ** n))
SU_HALF_2 = rule(lambda n: su(2 ** (n - 1), 2))
SO_FULL = rule(lambda n: so(2 ** n))
A3 = rule((mod(8, 0), lambda n: so(2 ** (n - 2), 4)),
          (mod(8, 1, -1), lambda n: so(2 ** (n - 1))),
          (mod(8, 2, -2), lambda n: su(2 ** (n - 2), 2)),
          (mod(8, 3, -3), lambda n: sp(2 ** (n - 2))),
          (mod(8, 4), lambda n: sp(2 ** (n - 3), 4)))
A5 = rule((mod(6, 0), lambda n: so(2 ** (n - 2), 4)),
          (mod(6, 1, -1), lambda n: so(2 ** (n - 1))),
          (mod(6, 2, -2), lambda n: su(2 ** (n - 2), 2)),
          (mod(6, 3), lambda n: sp(2 ** (n - 2))))
A7 = rule((ODD, lambda n: su(2 ** (n - 1))),
          (EVEN, lambda n: su(2 ** (n - 2), 4)))

OPEN = {
    "a0": rule(lambda n: u1(n - 1)),
    "a1": rule(lambda n: so(n)),
    "a2": rule(lambda n: so(n, 2)),
    "a3": A3,
    "a4": rule(lambda n: so(n, 2)),
    "a5": A5,
    "a6": A7, "a7": A7, "a10": A7,
    "a8": rule(lambda n: so(2 * n - 1)),
    "a9": rule(lambda n: sp(2 ** (n - 2))),
    "a11": rule(lambda n: so(2 ** n), n_min=4),
    "a16": rule(lambda n: so(2 ** n), n_min=4),
    "a13": SU_HALF_2, "a15": SU_HALF_2, "a20": SU_HALF_2,
    "a14": rule(lambda n: so(2 * n)),
    "b0": rule(lambda n: u1(n)),
    "b1": rule(lambda n: u1(2 * n - 1)),
    "b2": rule(lambda n: sp(2 ** (n - 2)) + u1()),
    "b3": rule(lambda n: su(2, n)),
    "b4": rule(lambda n: su(2 ** (n - 1), 2) + u1()),
}
for _k in (12, 17, 18, 19, 21, 22):
    OPEN[f"a{_k}"] = rule(lambda n: su(2 ** n), n_min=4)

PERIODIC = {
    "a0": rule(lambda n: u1(n)),
    "a1": rule(lambda n: so(n, 2)),
    "a2": rule(lambda n: so(n, 4)),
    "a3": rule((ODD, lambda n: su(2 ** (n - 1), 2)),
               (mod(8, 0), lambda n: so(2 ** (n - 2), 4)),
               (mod(8, 4), lambda n: sp(2 ** (n - 3), 4)),
               (mod(4, 2), lambda n: su(2 ** (n - 2), 4))),
    "a4": rule((ODD, lambda n: so(2 * n)), (EVEN, lambda n: so(n, 4))),
    "a5": rule((mod(3, 1, -1), lambda n: so(2 ** n)),
               (mod(6, 0), lambda n: so(2 ** (n - 2), 4)),
               (mod(6, 3), lambda n: sp(2 ** (n - 2)))),
    "a6": rule((ODD, lambda n: su(2 ** (n - 1), 2)),
               (EVEN, lambda n: su(2 ** (n - 2), 4))),
    "a7": A7,
    "a8": rule(lambda n: so(2 * n, 2)),
    "a9": rule(lambda n: so(2 ** n), n_min=4),
    "a10": rule((mod(3, 1, -1), lambda n: su(2 ** n)),
                (mod(6, 0), lambda n: su(2 ** (n - 2), 4)),
                (mod(6, 3), lambda n: su(2 ** (n - 1)))),
    "a11": rule(lambda n: so(2 ** n), n_min=4),
    "a13": SU_HALF_2,
    "a14": rule(lambda n: so(2 * n, 2)),
    "a16": rule(lambda n: so(2 ** n), n_min=4),
    "a20": SU_HALF_2,
    "b0": rule(lambda n: u1(n)),
    "b1": rule(lambda n: u1(2 * n)),
    "b2": rule(lambda n: so(2 ** n), n_min=4),
    "b3": rule(lambda n: su(2, n)),
    "b4": SU_FULL,
}
for _k in (12, 15, 17, 18, 19, 21, 22):
    PERIODIC[f"a{_k}"] = SU_FULL

PERMUTATION = {
    "a0": rule(lambda n: u1(n * (n - 1) // 2)),
    "a4": A7, "a7": A7,
    "b0": rule(lambda n: u1(n)),
    "b1": rule(lambda n: u1(n * (n + 1) // 2)),
    "b3": rule(lambda n: su(2, n)),
}
for _f in ("a1", "a2"):
    PERMUTATION[_f] = rule(lambda n: so(2 ** (n - 1), 2))
for _f in ("a3", "a6", "a8", "a13", "a14", "a20"):
    PERMUTATION[_f] = SU_HALF_2
for _f in ("a5", "a9", "a11", "a16", "b2"):
    PERMUTATION[_f] = SO_FULL
for _f in ("a10", "a12", "a15", "a17", "a18", "a19", "a21", "a22", "b4"):
    PERMUTATION[_f] = SU_FULL

RULES = {Topology.OPEN: OPEN, Topology.PERIODIC: PERIODIC,
         Topology.PERMUTATION: PERMUTATION}

CHAIN_FAMILIES = all_families("ab")


def predict(family: FamilyId | str, topology: Topology | str, n: int) -> IsoExpression:
    fid = FamilyId.parse(family) if isinstance(family, str) else family
    topo = Topology(topology)
    try:
        r = RULES[topo][str(fid)]
    except KeyError:
        raise OutOfRange(f"no prediction for {fid} ({topo.value})") from None
    return r(n)


def has_prediction(family: FamilyId | str, topology: Topology | str) -> bool:
    return str(family) in RULES[Topology(topology)]


# -- scaling class -------------------------------------------------------------

def scaling_class_of(family: FamilyId | str, topology: Topology | str) -> str:
    """Growth class read off the predicted dimension formula.

    The formula is evaluated far from any residue boundary effects; polynomial
    growth of degree at most two is detected by exact finite differences.
    """
    base = 60
    dims = [predict(family, topology, n).dimension for n in range(base, base + 9)]
    if dims[-1] > 100 * dims[0]:  # a quadratic grows by < 2x over 8 steps here
        return "exponential"
    d1 = [b - a for a, b in zip(dims, dims[1:])]
    d2 = [b - a for a, b in zip(d1, d1[1:])]
    d3 = [b - a for a, b in zip(d2, d2[1:])]
    if any(d3):
        raise ValueError(f"dimension of {family} is not polynomial of degree <= 2")
    return "quadratic" if any(d2) else "linear"


def scaling_class(rows: Sequence["ClassificationRow"]) -> str:
    if not rows:
        raise ValueError("no rows")
    keys = {(r.family, r.topology) for r in rows}
    if len(keys) != 1:
        raise ValueError("rows mix families or topologies")
    ns = sorted(r.n for r in rows)
    if len(ns) < 3 or ns != list(range(ns[0], ns[0] + len(ns))):
        raise ValueError("need at least three consecutive n values")
    fam, topo = keys.pop()
    return scaling_class_of(fam, topo)


# -- classification ----------------------------------------------------------------

@dataclass
class ClassificationRow:
    family: str
    topology: str
    n: int
    computed_dim: int | None
    predicted_dim: int | None
    predicted: str | None
    center_dim: int | None
    component_sizes: list[int] = field(default_factory=list)
    verdict: str = "mismatch"
    iso_checks: dict | None = None
    seconds: float = 0.0
    note: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _compress(sizes: Iterable[int]) -> list[int]:
    return sorted(sizes, reverse=True)


def classify_one(spec: ModelSpec, *, max_seconds: float | None = None,
                 max_elements: int | None = None) -> ClassificationRow:
    t0 = time.monotonic()
    fam, topo = str(spec.family), spec.topology.value
    try:
        claim = predict(spec.family, spec.topology, spec.n)
    except OutOfRange as exc:
        claim, note = None, str(exc)
    else:
        note = ""
    try:
        basis = close(spec.generators(), max_seconds=max_seconds, max_elements=max_elements)
    except CapExceeded as exc:
        return ClassificationRow(fam, topo, spec.n, None,
                                 claim.dimension if claim else None,
                                 str(claim) if claim else None, None, [], "capped",
                                 None, time.monotonic() - t0, str(exc))
    cen = center_strings(basis)
    comps = ideal_components(basis)
    sizes = _compress(len(c) for c in comps)
    if claim is None:
        return ClassificationRow(fam, topo, spec.n, basis.dimension, None, None, len(cen),
                                 sizes, "out_of_range", None, time.monotonic() - t0, note)
    report = verify_iso(basis, claim, components=comps, center=cen)
    verdict = "match" if report.dim_ok and report.center_ok else "mismatch"
    checks = report.as_dict()
    return ClassificationRow(fam, topo, spec.n, basis.dimension, claim.dimension, str(claim),
                             len(cen), sizes, verdict, checks, time.monotonic() - t0, note)


def _run(args):
    spec, caps = args
    return classify_one(spec, **caps)


def sweep_specs(n_min: int, n_max: int, topologies: Iterable[Topology | str] | None = None,
                families: Iterable[FamilyId | str] | None = None) -> list[ModelSpec]:
    if n_min < 3:
        raise ValueError("chain sweeps start at n >= 3")
    if n_max < n_min:
        raise ValueError("empty n range")
    topos = [Topology(t) for t in (topologies or list(Topology))]
    fams = [FamilyId.parse(f) if isinstance(f, str) else f for f in (families or CHAIN_FAMILIES)]
    specs = []
    for topo in topos:
        for fid in fams:
            if not has_prediction(fid, topo):
                continue
            for n in range(n_min, n_max + 1):
                specs.append(ModelSpec(fid, n, topo))
    return specs


def classify_sweep(n_min: int, n_max: int, topologies=None, families=None, *,
                   max_seconds: float | None = None, max_elements: int | None = None,
                   workers: int = 1) -> list[ClassificationRow]:
    specs = sweep_specs(n_min, n_max, topologies, families)
    caps = {"max_seconds": max_seconds, "max_elements": max_elements}
    jobs = [(s, caps) for s in specs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_run, jobs))
    else:
        rows = [_run(j) for j in jobs]
    order = {t.value: i for i, t in enumerate(Topology)}
    rows.sort(key=lambda r: (order[r.topology], FamilyId.parse(r.family), r.n))
    return rows


def summarize(rows: Iterable[ClassificationRow]) -> dict:
    out = {"match": 0, "mismatch": 0, "out_of_range": 0, "capped": 0}
    for r in rows:
        out[r.verdict] += 1
    return out
