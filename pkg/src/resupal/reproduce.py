"""
Golden tables for the low-dimensional classification.

Each builder returns ``{filename stem: Table}``; the CLI writes the text under
an output directory and reports rows whose verdict disagrees with the
expected one.  Rendering is deterministic so two runs produce
byte-identical files.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .cache import compute_cache_key, load_cached_result, save_cached_result
from .catalog import (
    COCYCLE_REPRESENTATIVES,
    DIM3,
    DIM4,
    TABLE_ROWS,
    Definition,
    build_K,
    catalog_get,
)
from .cohomology import parse_cochain
from .config import Limits
from .equivalence import Fingerprint, cocycle_orbits, fingerprint, pmap_orbits
from .errors import BoundExceeded
from .liesuper import SuperAlgebra, check_axioms, nilindex
from .render import format_sdim, render_fingerprints, render_table
from .restricted import RestrictedAlgebra, check_pmap_axioms, enumerate_pmaps, is_p_nilpotent

log = logging.getLogger(__name__)

TABLES = ("invariants", "cocycles", "classif3", "classif4", "pmap4", "K-families")


@dataclass(frozen=True)
class Table:
    text: str
    problems: int = 0


K_MEMBERS: tuple[tuple[int, int], ...] = (
    *[(2, m) for m in range(1, 8)],
    *[(3, m) for m in range(1, 8)],
    (4, 2),
    (4, 4),
    (4, 5),
    (4, 6),
)


def cached_fingerprint(L: SuperAlgebra, cache_dir: Optional[Path] = None) -> Fingerprint:
    if cache_dir is None:
        return fingerprint(L)
    key = compute_cache_key(kind="fingerprint", algebra=L, degrees=[1, 2, 3, 4])
    hit = load_cached_result(cache_dir, key)
    if hit is not None:
        return Fingerprint.from_json(hit)
    fp = fingerprint(L)
    save_cached_result(cache_dir, key, fp.to_json())
    return fp


def invariant_tables(
    primes: Sequence[int],
    out_format: str = "txt",
    cache_dir: Optional[Path] = None,
) -> dict[str, Table]:
    """One fingerprint table per superdimension (1|3), (2|2), (3|1)."""
    out: dict[str, Table] = {}
    for sdim, letters in TABLE_ROWS.items():
        rows = []
        for letter in letters:
            name = f"L_{{{sdim}}}^{letter}"
            fps = {p: cached_fingerprint(catalog_get(name, p).algebra, cache_dir) for p in primes}
            rows.append((name, fps))
        out[f"invariants_{sdim.replace('|', '-')}"] = Table(render_fingerprints(rows, out_format))
    return out


def cocycle_table(p: int, limits: Limits, out_format: str = "txt") -> dict[str, Table]:
    """Orbit index of each listed cocycle under Aut(L) over F_p.

    The last column says whether the representatives of one algebra fall in
    pairwise distinct orbits.
    """
    rows = []
    problems = 0
    for base, cocycles in COCYCLE_REPRESENTATIVES.items():
        L = catalog_get(base, p).algebra
        table = cocycle_orbits(L, limits)
        indices = []
        for text in cocycles:
            c = parse_cochain(L, text)
            index = 0 if c.is_zero() else table.orbit_index(c)
            indices.append(index)
        distinct = "yes" if len(set(indices)) == len(indices) else "no"
        problems += distinct == "no"
        for text, index in zip(cocycles, indices):
            c = parse_cochain(L, text)
            parity = "-" if c.is_zero() else ("even" if c.parity() == 0 else "odd")
            rows.append([base, text, parity, index, table.orbits[index].size, distinct])
    headers = ("algebra", "cocycle", "parity", "orbit", "orbit size", "distinct")
    return {f"cocycles_p{p}": Table(render_table(headers, rows, out_format), problems)}


def _verify(R: RestrictedAlgebra, limits: Limits) -> str:
    report = check_axioms(R.algebra, limits)
    report.extend(check_pmap_axioms(R.algebra, R.pmap, limits))
    if report:
        return "FAIL " + report.lines()[0]
    return "ok" if is_p_nilpotent(R, limits) else "not p-nilpotent"


def _classification(
    table: dict[str, Definition], primes: Sequence[int], limits: Limits
) -> list[list[object]]:
    rows: list[list[object]] = []
    for name in table:
        first = catalog_get(name, primes[0])
        for P in first.pmaps:
            verdicts = [_verify(catalog_get(name, p).restricted(P.label), limits) for p in primes]
            rows.append([name, format_sdim(first.algebra.sdim), P.label, P.describe(), *verdicts])
    return rows


def classification_table(
    dim: int, primes: Sequence[int], limits: Limits, out_format: str = "txt"
) -> dict[str, Table]:
    """Every listed algebra with every listed p-map, verified at each prime."""
    table = DIM3 if dim == 3 else DIM4
    headers = ("algebra", "sdim", "map", "p-map", *[f"p={p}" for p in primes])
    rows = _classification(table, primes, limits)
    problems = sum(1 for row in rows if any(v != "ok" for v in row[4:]))
    return {f"classif{dim}": Table(render_table(headers, rows, out_format), problems)}


def pmap_class_table(p: int, limits: Limits, out_format: str = "txt") -> dict[str, Table]:
    """Listed p-maps against the p-nilpotent classes found over F_p."""
    small = replace(limits, pmap_bound=min(limits.pmap_bound, 1000))
    rows = []
    for name in DIM4:
        entry = catalog_get(name, p)
        if not entry.algebra.n:
            continue
        try:
            classes = pmap_orbits(entry.algebra, small)
            found = str(len(classes))
            reps = "; ".join(orbit.representative.describe() for orbit in classes)
        except BoundExceeded as exc:
            found, reps = "-", f"skipped ({exc.size} candidates)"
        rows.append([name, len(entry.pmaps), found, reps])
    headers = ("algebra", "listed", "classes", "representatives")
    return {f"pmap4_p{p}": Table(render_table(headers, rows, out_format))}


def _expected_restricted(n: int, m: int, p: int) -> bool:
    if n == 4:
        return p >= 5 if m == 5 else m < p
    return m <= p


def k_family_table(primes: Sequence[int], limits: Limits, out_format: str = "txt") -> dict[str, Table]:
    """Existence of p|2p-structures on K^{n,m} against the m ≤ p rule."""
    rows = []
    for n, m in K_MEMBERS:
        for p in primes:
            L = build_K(n, m, p)
            maps = enumerate_pmaps(L, limits)
            restricted = bool(maps)
            agrees = "yes" if restricted == _expected_restricted(n, m, p) else "no"
            rows.append([L.label, p, "yes" if restricted else "no", len(maps), nilindex(L), agrees])
    headers = ("family", "p", "restricted", "p-maps", "nilindex", "agrees")
    problems = sum(1 for row in rows if row[-1] == "no")
    return {"K-families": Table(render_table(headers, rows, out_format), problems)}


def build_tables(
    which: Sequence[str],
    primes: Sequence[int],
    limits: Limits,
    out_format: str = "txt",
    cache_dir: Optional[Path] = None,
) -> dict[str, Table]:
    """Run the requested builders; orbit tables use the smallest prime only."""
    p0 = min(primes)
    builders: dict[str, Callable[[], dict[str, Table]]] = {
        "invariants": lambda: invariant_tables(primes, out_format, cache_dir),
        "cocycles": lambda: cocycle_table(p0, limits, out_format),
        "classif3": lambda: classification_table(3, primes, limits, out_format),
        "classif4": lambda: classification_table(4, primes, limits, out_format),
        "pmap4": lambda: pmap_class_table(p0, limits, out_format),
        "K-families": lambda: k_family_table(primes, limits, out_format),
    }
    selected = TABLES if "all" in which else which
    out: dict[str, Table] = {}
    for name in selected:
        log.info("building table %s", name)
        out.update(builders[name]())
    return out
