"""
Rendering utilities for cochains and invariant tables.

Two kinds of output are produced here:

* cochains written as sums of ``value⊗Δij`` terms, e.g.
  ``e2⊗Δ13 + 2·e3⊗Δ33``; with scalar coefficients the ``value⊗`` part is
  dropped (``Δ22 + Δ23``);
* tables with a fixed column order, rendered as aligned text, a Markdown pipe
  table or JSON.  The fingerprint table uses the columns name, sdim,
  [L,L], z(L), H1..H4.

Superdimensions print as ``a|b`` and the zero space as ``0``.  When a table
covers several primes and an entry depends on p, the entry reads
``a|b (c|d if p=3)``: the value at the largest prime followed by the
exceptions.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from typing import TYPE_CHECKING, Any

from .gfield import FieldElem

if TYPE_CHECKING:
    from .cohomology import Cochain
    from .equivalence import Fingerprint

SUPPORTED_OUT_FORMATS = ("txt", "md", "json")

FINGERPRINT_COLUMNS = ("name", "sdim", "[L,L]", "z(L)", "H1", "H2", "H3", "H4")


def format_sdim(sdim: Sequence[int]) -> str:
    a, b = sdim
    if not a and not b:
        return "0"
    return f"{a}|{b}"


def _index_label(t: Sequence[int]) -> str:
    idx = [i + 1 for i in t]
    if all(i < 10 for i in idx):
        return "Δ" + "".join(str(i) for i in idx)
    return "Δ_{" + ",".join(str(i) for i in idx) + "}"


def _coeff_prefix(text: str) -> str:
    if text == "1":
        return ""
    if "+" in text:
        return f"({text})·"
    return f"{text}·"


def render_cochain(c: Cochain) -> str:
    """``e2⊗Δ13 + 2·e3⊗Δ33``; indices are 1-based."""
    M = c.module
    spec = c.algebra.field
    scalar = M.kind != "adjoint" and M.dim == 1
    terms = []
    for code, slot, t in c.terms():
        coeff = _coeff_prefix(str(FieldElem.from_code(spec, code)))
        value = "" if scalar else f"{M.names[slot]}⊗"
        terms.append(f"{coeff}{value}{_index_label(t)}")
    return " + ".join(terms) if terms else "0"


def format_by_prime(values: Mapping[int, str]) -> str:
    """One cell of a multi-prime table.

    ``{3: "3|5", 5: "3|4", 7: "3|4"}`` becomes ``"3|4 (3|5 if p=3)"``.
    """
    primes = sorted(values)
    base = values[primes[-1]]
    exceptions: dict[str, list[int]] = {}
    for p in primes[:-1]:
        if values[p] != base:
            exceptions.setdefault(values[p], []).append(p)
    if not exceptions:
        return base
    notes = [f"{v} if p={','.join(str(p) for p in ps)}" for v, ps in exceptions.items()]
    return f"{base} ({'; '.join(notes)})"


def fingerprint_cells(fps: Mapping[int, Fingerprint]) -> list[str]:
    """The non-name cells of one row: sdim, [L,L], z(L) and H^k for each k."""
    first = next(iter(fps.values()))
    columns: list[dict[int, str]] = [
        {p: format_sdim(fp.sdim) for p, fp in fps.items()},
        {p: format_sdim(fp.derived) for p, fp in fps.items()},
        {p: format_sdim(fp.center) for p, fp in fps.items()},
    ]
    for k in range(len(first.h)):
        columns.append({p: format_sdim(fp.h[k]) for p, fp in fps.items()})
    return [format_by_prime(col) for col in columns]


def render_table(
    headers: Sequence[str],
    rows: Iterable[Sequence[Any]],
    out_format: str = "txt",
) -> str:
    """Aligned text, Markdown pipe table or a JSON list of objects."""
    out_format = out_format.lower()
    rows = [[str(cell) for cell in row] for row in rows]
    if out_format == "json":
        return json.dumps([dict(zip(headers, row)) for row in rows], ensure_ascii=False, indent=2) + "\n"
    if out_format == "md":
        lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines += ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def render_fingerprints(
    rows: Iterable[tuple[str, Mapping[int, Fingerprint]]],
    out_format: str = "txt",
) -> str:
    """Render ``(name, {p: fingerprint})`` rows.

    The JSON form keeps the raw fingerprints per prime instead of the
    merged ``(.. if p=3)`` cells.
    """
    rows = list(rows)
    if out_format.lower() == "json":
        doc = [
            {"name": name, "primes": {str(p): fp.to_json() for p, fp in sorted(fps.items())}}
            for name, fps in rows
        ]
        return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
    body = [[name, *fingerprint_cells(dict(sorted(fps.items())))] for name, fps in rows]
    return render_table(FINGERPRINT_COLUMNS, body, out_format)
