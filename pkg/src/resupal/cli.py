"""
CLI entry point for the resupal package.

The ``resupal`` command wraps the library in a handful of subcommands:

* ``check``: verify the bracket axioms and, when the file has one, the
  p|2p-map axioms and p-nilpotency.
* ``invariants``: the fingerprint table (sdim of [L,L] and z(L), H^1..H^4)
  at one or more primes.
* ``cohomology``: ordinary or restricted cohomology with trivial or adjoint
  coefficients, with a basis of representatives.
* ``extend``: the central extension by a scalar cocycle, written as a new
  algebra file.
* ``pmaps`` / ``orbits`` / ``isomorphic``: p|2p-structures up to
  automorphism, Aut(L)-orbits of 2-cocycles and isomorphism witnesses.
* ``reproduce``: the golden classification tables.
* ``catalog`` and ``doctor``.

Algebras are JSON files (see :mod:`resupal.algebra_file`) or built-in names
written ``catalog:L_{2|2}^5(b)``.

Exit codes: 0 success, 1 axiom or cocycle violation, 2 input or argument
error, 3 fingerprints differ (not isomorphic), 4 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import linalg
from .algebra_file import AlgebraFile, algebra_to_json, dump_algebra, load_algebra
from .catalog import catalog_get, catalog_names
from .cohomology import (
    Cochain,
    RestrictedCochain2,
    ce_coboundaries,
    ce_cocycles,
    h1_res_dims,
    h2_res,
    h_ce_dims,
    module_for,
    parse_cochain,
)
from .config import Limits
from .equivalence import (
    cocycle_orbits,
    compare_fingerprints,
    isomorphism_search,
    pmap_orbits,
    restricted_isomorphism_search,
)
from .errors import (
    BoundExceeded,
    LoadError,
    NotACocycle,
    NotFoundOverField,
    NotRestricted,
    ResupalError,
)
from .extensions import ExtensionSpec, central_extend
from .liesuper import check_axioms, to_code
from .render import SUPPORTED_OUT_FORMATS, format_sdim, render_fingerprints, render_table
from .reproduce import TABLES, build_tables, cached_fingerprint
from .restricted import check_pmap_axioms, enumerate_pmaps, is_p_nilpotent

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_DIFFERENT = 3
EXIT_INCONCLUSIVE = 4

DEFAULT_PRIMES = "3,5,7,11"


def _primes(text: str) -> list[int]:
    try:
        primes = sorted({int(s) for s in text.split(",") if s.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of primes, got {text!r}") from None
    if not primes:
        raise argparse.ArgumentTypeError("at least one prime is required")
    return primes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resupal",
        description=(
            "Restricted Lie superalgebras over finite fields: axiom checks, cohomology, "
            "central extensions, p|2p-maps and the low-dimensional classification tables."
        ),
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress messages, -vv for debug output (stderr).",
    )

    subparsers = parser.add_subparsers(dest="command")

    # ---- doctor subcommand
    doctor_parser = subparsers.add_parser(
        "doctor",
        help="Check environment and dependencies",
        description="Verify Python, numpy, the RESUPAL_* variables and a smoke computation.",
    )
    doctor_parser.add_argument(
        "--dev", action="store_true", help="Also check the test dependencies."
    )

    # ---- catalog
    catalog_parser = subparsers.add_parser(
        "catalog", help="List built-in algebras", description="List every built-in name."
    )
    catalog_parser.add_argument(
        "--show", default=None, metavar="NAME", help="Print one algebra as JSON."
    )
    catalog_parser.add_argument("--p", type=int, default=3, help="Prime for --show (default 3).")

    # ---- check
    check_parser = subparsers.add_parser(
        "check", help="Verify an algebra file", description="Run the axiom checks."
    )
    _add_input(check_parser)
    check_parser.add_argument(
        "--exhaustive",
        action="store_true",
        help="Visit every element instead of basis plus random samples (slow past 2000 elements).",
    )

    # ---- invariants
    inv_parser = subparsers.add_parser(
        "invariants",
        help="Fingerprint table",
        description="sdim of [L,L] and z(L) and the CE cohomology H^1..H^4 with trivial coefficients.",
    )
    inv_parser.add_argument("inputs", nargs="+", help="Algebra files or catalog:NAME.")
    inv_parser.add_argument("--p", type=_primes, default=_primes(DEFAULT_PRIMES), help="Primes, e.g. 3,5,7,11.")
    inv_parser.add_argument("--out-format", choices=SUPPORTED_OUT_FORMATS, default="txt")
    inv_parser.add_argument("--cache-dir", default=None, help="Cache fingerprints in this directory.")

    # ---- cohomology
    coh_parser = subparsers.add_parser(
        "cohomology", help="Cohomology dimensions and representatives"
    )
    _add_input(coh_parser)
    coh_parser.add_argument("--degree", type=int, default=2, help="Degree k (restricted: 1 or 2).")
    coh_parser.add_argument("--coeff", choices=["trivial", "adjoint"], default="trivial")
    coh_parser.add_argument("--restricted", action="store_true", help="Restricted cohomology H^k_*.")
    coh_parser.add_argument(
        "--plus-even",
        action="store_true",
        help="With --restricted: the even subcomplex H^2_*(L;M)^+_ev.",
    )

    # ---- extend
    ext_parser = subparsers.add_parser(
        "extend", help="Central extension by a scalar cocycle", description="Write L ⊕ ⟨X⟩."
    )
    _add_input(ext_parser)
    ext_parser.add_argument("--cocycle", required=True, help='Cocycle, e.g. "Δ22+Δ33" or "0".')
    ext_parser.add_argument("--name", default="X", help="Name of the new basis element.")
    ext_parser.add_argument(
        "--parity", choices=["even", "odd"], default=None, help="Parity of X for a zero cocycle."
    )
    ext_parser.add_argument(
        "--omega",
        default=None,
        help='Restricted part on the even basis, e.g. "e1=1" (needs a p-map).',
    )
    ext_parser.add_argument("-o", "--out", default=None, help="Output path (default: stdout).")

    # ---- pmaps
    pm_parser = subparsers.add_parser("pmaps", help="p|2p-structures up to automorphism")
    _add_input(pm_parser)
    pm_parser.add_argument(
        "--all", action="store_true", help="List every map instead of classes."
    )
    pm_parser.add_argument(
        "--include-non-nilpotent",
        action="store_true",
        help="Keep maps that are not p-nilpotent.",
    )
    pm_parser.add_argument(
        "--exhaustive",
        action="store_true",
        help="Decide p-nilpotency on every even element, not a sample.",
    )

    # ---- orbits
    orb_parser = subparsers.add_parser("orbits", help="Aut(L)-orbits on H^2(L; K)")
    _add_input(orb_parser)

    # ---- isomorphic
    iso_parser = subparsers.add_parser("isomorphic", help="Isomorphism witness or verdict")
    iso_parser.add_argument("first", help="Algebra file or catalog:NAME.")
    iso_parser.add_argument("second", help="Algebra file or catalog:NAME.")
    iso_parser.add_argument("--p", type=int, default=None, help="Prime (overrides the files).")
    iso_parser.add_argument(
        "--restricted", action="store_true", help="Require the witness to preserve p-maps."
    )

    # ---- reproduce
    rep_parser = subparsers.add_parser(
        "reproduce", help="Write the golden classification tables"
    )
    rep_parser.add_argument(
        "--tables",
        default="all",
        help=f"Comma separated subset of {', '.join(TABLES)} or all.",
    )
    rep_parser.add_argument("--p", type=_primes, default=_primes("3,5,7"), help="Primes.")
    rep_parser.add_argument("--out-dir", default="tables", help="Output directory.")
    rep_parser.add_argument("--out-format", choices=SUPPORTED_OUT_FORMATS, default="txt")
    rep_parser.add_argument("--cache-dir", default=None, help="Cache fingerprints in this directory.")

    return parser


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="Algebra file (JSON) or catalog:NAME.")
    p.add_argument("--p", type=int, default=None, help="Prime (overrides the file).")


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _header(af: AlgebraFile) -> str:
    L = af.algebra
    return f"{L.label or af.source} sdim {format_sdim(L.sdim)} over {L.field}"


# ---- commands


def cmd_check(args: argparse.Namespace, limits: Limits) -> int:
    if args.exhaustive:
        limits = limits.exhaustive()
    af = load_algebra(args.input, args.p)
    L = af.algebra
    print(_header(af))
    report = check_axioms(L, limits)
    if af.pmap is not None:
        report.extend(check_pmap_axioms(L, af.pmap, limits))
    if report:
        for line in report.lines():
            print(f"  ✗ {line}")
        return EXIT_VIOLATION
    print("  ✓ bracket axioms")
    if af.pmap is not None:
        print(f"  ✓ p|2p-map: {af.pmap.describe()}")
        nilpotent = is_p_nilpotent(af.restricted(), limits)
        print(f"  {'✓' if nilpotent else '·'} p-nilpotent: {'yes' if nilpotent else 'no'}")
    return EXIT_OK


def cmd_invariants(args: argparse.Namespace, limits: Limits) -> int:
    cache_dir = Path(args.cache_dir) if args.cache_dir else None
    rows = []
    for uri in args.inputs:
        fps = {}
        name = uri
        for p in args.p:
            af = load_algebra(uri, p)
            name = af.algebra.label or af.source
            fps[p] = cached_fingerprint(af.algebra, cache_dir)
        rows.append((name, fps))
    sys.stdout.write(render_fingerprints(rows, args.out_format))
    return EXIT_OK


def _ce_representatives(L, M, k: int) -> list[Cochain]:
    F = L.F
    Z = ce_cocycles(L, M, k)
    B = ce_coboundaries(L, M, k)
    reps = linalg.complement(F, B, Z)
    return [Cochain(L, M, k, row) for row in reps]


def cmd_cohomology(args: argparse.Namespace, limits: Limits) -> int:
    af = load_algebra(args.input, args.p, restricted=args.restricted)
    k = args.degree
    print(_header(af))
    if not args.restricted:
        L = af.algebra
        M = module_for(L, args.coeff)
        even, odd = h_ce_dims(L, M, k)
        print(f"dim H{k} = {format_sdim((even, odd))} ({even} even, {odd} odd)")
        for c in _ce_representatives(L, M, k):
            print(f"  [{'even' if c.parity() == 0 else 'odd'}] {c}")
        return EXIT_OK
    R = af.restricted()
    M = module_for(R.algebra, args.coeff)
    if k == 1:
        even, odd = h1_res_dims(R, M)
        print(f"dim H1* = {format_sdim((even, odd))} ({even} even, {odd} odd)")
        return EXIT_OK
    if k != 2:
        print("ERROR: restricted cohomology is available in degrees 1 and 2.", file=sys.stderr)
        return EXIT_INPUT
    H = h2_res(R, M, limits, plus_even=args.plus_even)
    tag = "H2*+ev" if args.plus_even else "H2*"
    print(f"dim Z2* = {H.cocycles.shape[0]}")
    print(f"dim B2* = {H.coboundaries.shape[0]}")
    print(f"dim {tag} = {H.dim}")
    for rc in H.cochains():
        print(f"  {rc.describe()}")
    return EXIT_OK


def _parse_omega(af: AlgebraFile, text: Optional[str]) -> np.ndarray:
    L = af.algebra
    omega = np.zeros((L.n, 1), dtype=np.int64)
    if not text:
        return omega
    for item in text.split(","):
        name, _, value = item.partition("=")
        j = L.index(name.strip())
        if j >= L.n:
            raise LoadError(f"ω is defined on the even basis, {name.strip()!r} is odd")
        omega[j, 0] = to_code(L.F, int(value or 1))
    return omega


def cmd_extend(args: argparse.Namespace, limits: Limits) -> int:
    af = load_algebra(args.input, args.p)
    L = af.algebra
    phi = parse_cochain(L, args.cocycle)
    parity = None if args.parity is None else int(args.parity == "odd")
    if af.pmap is not None:
        cocycle = RestrictedCochain2(phi, _parse_omega(af, args.omega))
        spec = ExtensionSpec(af.restricted(), cocycle, args.name, parity)
    else:
        if args.omega:
            print("ERROR: --omega needs an algebra with a p-map.", file=sys.stderr)
            return EXIT_INPUT
        spec = ExtensionSpec(L, phi, args.name, parity)
    E = central_extend(spec, limits)
    if args.out:
        out_path = Path(args.out).expanduser().resolve()
        dump_algebra(E, out_path)
        print(f"OK -> {out_path}")
    else:
        print(json.dumps(algebra_to_json(E), ensure_ascii=False, indent=2))
    return EXIT_OK


def cmd_pmaps(args: argparse.Namespace, limits: Limits) -> int:
    if args.exhaustive:
        limits = limits.exhaustive()
    af = load_algebra(args.input, args.p)
    L = af.algebra
    print(_header(af))
    if args.all:
        maps = enumerate_pmaps(L, limits)
        print(f"{len(maps)} p|2p-map(s)")
        for P in maps:
            print(f"  {P.describe()}")
        return EXIT_OK
    orbits = pmap_orbits(L, limits, nilpotent_only=not args.include_non_nilpotent)
    kind = "p|2p-map" if args.include_non_nilpotent else "p-nilpotent p|2p-map"
    print(f"{len(orbits)} class(es) of {kind}s up to Aut(L)")
    for i, orbit in enumerate(orbits, 1):
        print(f"  ({i}) {orbit.representative.describe()}  [{orbit.size} map(s)]")
    return EXIT_OK


def cmd_orbits(args: argparse.Namespace, limits: Limits) -> int:
    af = load_algebra(args.input, args.p)
    L = af.algebra
    print(_header(af))
    table = cocycle_orbits(L, limits)
    rows = [
        [i, "even" if orbit.parity == 0 else "odd", orbit.size, str(orbit.representative)]
        for i, orbit in enumerate(table.orbits)
    ]
    sys.stdout.write(render_table(("orbit", "parity", "size", "representative"), rows))
    return EXIT_OK


def cmd_isomorphic(args: argparse.Namespace, limits: Limits) -> int:
    first = load_algebra(args.first, args.p, restricted=args.restricted)
    second = load_algebra(args.second, args.p, restricted=args.restricted)
    L1, L2 = first.algebra, second.algebra
    if L1.field != L2.field:
        print(f"ERROR: {L1.field} and {L2.field} differ; pass --p.", file=sys.stderr)
        return EXIT_INPUT
    differences = compare_fingerprints(L1, L2)
    if differences:
        print("not isomorphic: fingerprints differ")
        for line in differences.lines():
            print(f"  {line}")
        return EXIT_DIFFERENT
    try:
        if args.restricted:
            f = restricted_isomorphism_search(first.restricted(), second.restricted(), limits)
        else:
            f = isomorphism_search(L1, L2, limits)
    except NotFoundOverField as exc:
        print(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    print(f"isomorphic over {L1.field}:")
    for line in f.describe():
        print(f"  {line}")
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace, limits: Limits) -> int:
    which = [t.strip() for t in args.tables.split(",") if t.strip()]
    unknown = [t for t in which if t != "all" and t not in TABLES]
    if unknown:
        print(f"ERROR: unknown table(s) {', '.join(unknown)}; choose from {', '.join(TABLES)}", file=sys.stderr)
        return EXIT_INPUT
    cache_dir = Path(args.cache_dir) if args.cache_dir else None
    tables = build_tables(which, args.p, limits, args.out_format, cache_dir)
    out_dir = Path(args.out_dir).expanduser().resolve()
    out_dir.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for stem, table in tables.items():
        path = out_dir / f"{stem}.{args.out_format}"
        path.write_text(table.text, encoding="utf-8")
        print(f"OK -> {path}")
        if table.problems:
            print(f"  {table.problems} row(s) disagree", file=sys.stderr)
            status = EXIT_VIOLATION
    return status


def cmd_catalog(args: argparse.Namespace, limits: Limits) -> int:
    if args.show:
        entry = catalog_get(args.show, args.p)
        doc = algebra_to_json(entry.algebra)
        if entry.pmaps:
            doc["pmaps"] = {P.label: P.to_json() for P in entry.pmaps}
        print(json.dumps(doc, ensure_ascii=False, indent=2))
        return EXIT_OK
    rows = [[name, format_sdim(sdim)] for name, sdim in catalog_names()]
    rows += [["K^{n,m}", "n|m (n = 2, 3; n = 4 with m even or m = 5)"]]
    sys.stdout.write(render_table(("name", "sdim"), rows))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "invariants": cmd_invariants,
    "cohomology": cmd_cohomology,
    "extend": cmd_extend,
    "pmaps": cmd_pmaps,
    "orbits": cmd_orbits,
    "isomorphic": cmd_isomorphic,
    "reproduce": cmd_reproduce,
    "catalog": cmd_catalog,
}


def main(argv: Optional[list[str]] = None) -> None:
    """Run the command line interface.

    Errors are written to stderr as ``ERROR: ...`` and mapped to the exit
    codes listed in the module docstring.
    """
    parser = build_parser()
    args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    if args.command is None:
        parser.print_help()
        raise SystemExit(EXIT_OK)

    _configure_logging(args.verbose)

    if args.command == "doctor":
        from .doctor import format_report

        ok, lines = format_report(dev=args.dev)
        for line in lines:
            print(line)
        raise SystemExit(0 if ok else 1)

    try:
        limits = Limits.from_env()
        code = COMMANDS[args.command](args, limits)
    except (NotACocycle, NotRestricted) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        if exc.report is not None:
            for line in exc.report.lines():
                print(f"  {line}", file=sys.stderr)
        code = EXIT_VIOLATION
    except BoundExceeded as exc:
        print(f"ERROR: {exc} (raise RESUPAL_BOUND to search further)", file=sys.stderr)
        code = EXIT_INCONCLUSIVE
    except ResupalError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    raise SystemExit(code)


if __name__ == "__main__":  # pragma: no cover
    main()
