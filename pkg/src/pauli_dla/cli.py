"""Command line entry point: close, structure, scan, classify.

Exit codes: 0 ok, 1 classification mismatch, 2 usage or parse error,
3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from importlib import resources

from . import __version__
from .catalog import (FamilyId, Topology, catalog_generators, extend,
                      frustration_generators)
from .classify import (OutOfRange, classify_sweep, predict, scaling_class_of,
                       summarize)
from .dla import CapExceeded, close
from .orbits import orbit_of, scan_power_sets
from .pauli import PauliError, parse_list
from .structure import (center_strings, frustration_graph, ideal_components,
                        recognize_path_or_cycle, stabilizer, verify_iso)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
THREADS_ENV = "PAULI_DLA_THREADS"
DEFAULT_N_MAX = 8
SCHEMA_VERSION = 1


def load_schema(command: str) -> dict:
    """JSON schema shipped for ``command``'s ``--format json`` output."""
    name = f"data/schemas/{command}.v{SCHEMA_VERSION}.json"
    return json.loads(resources.files(__package__).joinpath(name).read_text())


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, model: bool = True):
    if model:
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--generators", help='comma separated strings, e.g. "XY,YZ"')
        src.add_argument("--family", help="catalog family a0..a22, b0..b4, c0..c7")
        p.add_argument("--n", type=int, help="number of sites")
        p.add_argument("--topology", default="open", choices=[t.value for t in Topology])
    p.add_argument("--format", default="text", choices=["json", "csv", "text"])
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--max-seconds", type=float)
    p.add_argument("--max-elements", type=int)
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get(THREADS_ENV, "1") or 1))
    p.add_argument("--max-listing", type=int, default=4096,
                   help="text output lists bases up to this size in full")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pauli-dla", description="Dynamical Lie algebras of Pauli strings")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("close", help="close a generator set"))
    _common(sub.add_parser("structure", help="stabilizer, center, ideals, frustration"))
    sc = sub.add_parser("scan", help="two-site subalgebra inventory")
    _common(sc, model=False)
    sc.add_argument("--orbit-of", help="report only the orbit of this generator set")
    cl = sub.add_parser("classify", help="check predicted classes over a range of n")
    _common(cl, model=False)
    cl.add_argument("--n", default="3..8", help='"N", "A..B" or "A.."')
    cl.add_argument("--topology", action="append",
                    choices=[t.value for t in Topology])
    cl.add_argument("--family", action="append")
    return p


def _n_range(text: str) -> tuple[int, int]:
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo = int(lo)
            hi = int(hi) if hi else max(lo, DEFAULT_N_MAX)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad n range {text!r}") from None
    if lo < 3:
        raise UsageError("classification needs n >= 3")
    if hi < lo:
        raise UsageError(f"empty n range {text!r}")
    return lo, hi


def _model(args):
    """Resolve --generators/--family/--n/--topology into (generators, family)."""
    fam = None
    if args.family:
        try:
            fam = FamilyId.parse(args.family)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        gens2 = catalog_generators(fam)
    else:
        gens2 = parse_list(args.generators)
    lengths = {g.n for g in gens2}
    if len(lengths) != 1:
        raise UsageError("generators have mixed lengths")
    glen = lengths.pop()
    n = args.n if args.n is not None else glen
    if n == glen and (args.topology == "open" or glen != 2):
        gens = list(gens2)
    elif glen == 2:
        try:
            gens = sorted(extend(gens2, n, args.topology))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError(f"{glen}-site generators cannot be extended to n={n}")
    if any(g.is_identity() for g in gens):
        raise UsageError("identity string among generators")
    return gens, gens2, fam, n


def _emit(args, payload, text: str, rows: list[dict] | None = None):
    if args.format == "json":
        out = json.dumps(payload, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        rows = rows if rows is not None else [payload]
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (";".join(map(str, v)) if isinstance(v, (list, tuple)) else v)
                        for k, v in r.items()})
        out = buf.getvalue()
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _listing(strings: list[str], limit: int) -> str:
    if len(strings) <= limit:
        return ", ".join(strings)
    return ", ".join(strings[:limit]) + f", ... ({len(strings) - limit} more)"


def cmd_close(args) -> int:
    gens, _, _, n = _model(args)
    t0 = time.monotonic()
    basis = close(gens, max_seconds=args.max_seconds, max_elements=args.max_elements)
    dt = time.monotonic() - t0
    strings = basis.strings()
    payload = {"n": n, "topology": args.topology, "generators": [str(g) for g in gens],
               "dimension": basis.dimension, "basis": strings, "seconds": round(dt, 6)}
    text = (f"n={n} dim={basis.dimension} ({dt:.3f}s)\n"
            f"basis: {_listing(strings, args.max_listing)}")
    rows = [{"string": s} for s in strings]
    _emit(args, payload, text, rows)
    return EXIT_OK


def _frustration(gens, gens2, fam, n, topology):
    candidates = [gens]
    alt = frustration_generators(fam) if fam is not None else None
    if alt is not None and n >= 3:
        candidates.append(sorted(extend(alt, n, topology)))
    for cand in candidates:
        expr = recognize_path_or_cycle(frustration_graph(cand))
        if expr is not None:
            return str(expr)
    return None


def cmd_structure(args) -> int:
    gens, gens2, fam, n = _model(args)
    basis = close(gens, max_seconds=args.max_seconds, max_elements=args.max_elements)
    st = stabilizer(gens)
    cen = center_strings(basis)
    comps = ideal_components(basis)
    claim = None
    if fam is not None:
        try:
            claim = predict(fam, args.topology, n)
        except OutOfRange:
            claim = None
    checks = verify_iso(basis, claim, components=comps, center=cen).as_dict() if claim else None
    payload = {
        "n": n,
        "dim": basis.dimension,
        "center": [str(p) for p in cen],
        "stabilizer_generators": [str(p) for p in st.generator_basis],
        "stabilizer_order": st.order,
        "stabilizer_elements": sorted(str(p) for p in st.elements) if st.elements else None,
        "component_sizes": [len(c) for c in comps],
        "frustration_verdict": _frustration(gens, gens2, fam, n, args.topology),
        "iso_claim": str(claim) if claim else None,
        "iso_checks": checks,
    }
    if fam is not None and claim is not None and fam.kind != "c":
        payload["scaling_class"] = scaling_class_of(fam, args.topology)
    lines = [f"{k}: {v}" for k, v in payload.items() if k != "stabilizer_elements"]
    if st.elements:
        lines.append("stabilizer_elements: " +
                     _listing(payload["stabilizer_elements"], args.max_listing))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _orbit_row(rec) -> dict:
    s, p, e, d = rec.invariants
    return {"family": str(rec.matched_family) if rec.matched_family else "",
            "type": rec.kind or "", "basis": rec.basis_text(), "dim": rec.dimension,
            "stabilizer_order": rec.stabilizer_order, "orbit_size": rec.orbit_size,
            "s": s, "p": p, "e": e, "d": d}


def cmd_scan(args) -> int:
    if args.orbit_of:
        rec = orbit_of(parse_list(args.orbit_of))
        inv = scan_power_sets()
        for r in inv.orbit_records:
            if r.canonical_basis == rec.canonical_basis:
                rec = r
        row = _orbit_row(rec)
        _emit(args, row, " ".join(f"{k}={v}" for k, v in row.items()), [row])
        return EXIT_OK
    inv = scan_power_sets()
    rows = [_orbit_row(r) for r in inv.orbit_records]
    payload = {"total": inv.total, "a_count": inv.a_count, "b_count": inv.b_count,
               "c_count": inv.c_count, "orbit_count": len(rows),
               "flagged": len(inv.flagged), "orbits": rows}
    lines = [f"subalgebras={inv.total} a={inv.a_count} b={inv.b_count} "
             f"c={inv.c_count} orbits={len(rows)}"]
    for r in rows:
        lines.append(f"{r['family']:>4} {r['dim']:>2} stab={r['stabilizer_order']:>2} "
                     f"orbit={r['orbit_size']:>2} ({r['s']},{r['p']},{r['e']},{r['d']}) "
                     f"{r['basis']}")
    _emit(args, payload, "\n".join(lines), rows)
    return EXIT_OK


def cmd_classify(args) -> int:
    lo, hi = _n_range(args.n)
    fams = None
    if args.family:
        try:
            fams = [FamilyId.parse(f) for f in args.family]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rows = classify_sweep(lo, hi, args.topology, fams, max_seconds=args.max_seconds,
                          max_elements=args.max_elements, workers=max(1, args.threads))
    dicts = [r.as_dict() for r in rows]
    tally = summarize(rows)
    lines = [f"{r.topology:<11} {r.family:>4} n={r.n} dim={r.computed_dim} "
             f"predicted={r.predicted} ({r.predicted_dim}) {r.verdict}" for r in rows]
    lines.append(" ".join(f"{k}={v}" for k, v in tally.items()))
    csv_rows = [{k: v for k, v in d.items() if k != "iso_checks"} for d in dicts]
    _emit(args, {"rows": dicts, "summary": tally}, "\n".join(lines), csv_rows)
    if tally["mismatch"]:
        return EXIT_MISMATCH
    if tally["capped"]:
        return EXIT_CAP
    return EXIT_OK


COMMANDS = {"close": cmd_close, "structure": cmd_structure, "scan": cmd_scan,
            "classify": cmd_classify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, PauliError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
