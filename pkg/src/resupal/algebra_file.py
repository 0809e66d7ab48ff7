"""
Reading and writing algebras as JSON documents.

The document format is::

    {
      "p": 3, "field_degree": 1,
      "even": ["e1"], "odd": ["e2", "e3"],
      "brackets": [{"left": "e2", "right": "e3", "value": {"e1": 1}}],
      "pmap": {"e1": {}}
    }

Unlisted brackets are zero and ``[b, a]`` follows from ``[a, b]`` by
super-antisymmetry.  Coefficients are integers reduced mod p, residue pairs
``[c0, c1]`` over F_{p^2}, or ``{"num": 3, "den": 2}`` resolved per prime so
a single file serves several values of p.  ``field_degree`` 2 files may carry
the quadratic as ``"modulus": [c0, c1]``.

Besides file paths, :func:`load_algebra` accepts ``catalog:<name>`` for the
built-in algebras, e.g. ``catalog:L_{2|2}^5(b)``.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .errors import InvalidField, LoadError, ResupalError
from .gfield import FieldSpec
from .liesuper import SuperAlgebra, _json_coeff, to_code
from .restricted import PMap, RestrictedAlgebra, zero_pmap

log = logging.getLogger(__name__)

CATALOG_SCHEME = "catalog:"


@dataclass(frozen=True)
class AlgebraFile:
    """A loaded document: the algebra and its p-map, which is not yet verified."""

    algebra: SuperAlgebra
    pmap: Optional[PMap] = None
    source: str = ""

    def restricted(self) -> RestrictedAlgebra:
        """The restricted algebra; raises :class:`NotRestricted` on a bad p-map."""
        if self.pmap is None and self.algebra.n == 0:
            return RestrictedAlgebra(self.algebra, zero_pmap(self.algebra), self.algebra.label)
        if self.pmap is None:
            raise LoadError(f"{self.source or self.algebra.label}: no p-map given")
        return RestrictedAlgebra(self.algebra, self.pmap, self.algebra.label)

    def base(self) -> Union[SuperAlgebra, RestrictedAlgebra]:
        return self.algebra if self.pmap is None else self.restricted()


def algebra_to_json(obj: Union[SuperAlgebra, RestrictedAlgebra, AlgebraFile]) -> dict[str, Any]:
    """Encode an algebra (with its p-map when it has one)."""
    pmap: Optional[PMap] = None
    if isinstance(obj, AlgebraFile):
        L, pmap = obj.algebra, obj.pmap
    elif isinstance(obj, RestrictedAlgebra):
        L, pmap = obj.algebra, obj.pmap
    else:
        L = obj
    F = L.F
    doc: dict[str, Any] = {}
    if L.label:
        doc["name"] = L.label
    doc["p"] = L.p
    doc["field_degree"] = L.field.degree
    if L.field.degree == 2:
        doc["modulus"] = list(L.field.modulus)  # type: ignore[arg-type]
    doc["even"] = list(L.names[: L.n])
    doc["odd"] = list(L.names[L.n :])
    doc["brackets"] = [
        {
            "left": left,
            "right": right,
            "value": {L.names[k]: _json_coeff(F, int(value[k])) for k in np.nonzero(value)[0]},
        }
        for left, right, value in L.brackets()
    ]
    if pmap is not None:
        doc["pmap"] = pmap.to_json()
    return doc


def _require(doc: Mapping[str, Any], key: str, kind: type) -> Any:
    if key not in doc:
        raise LoadError(f"missing key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise LoadError(f"{key!r} must be a {kind.__name__}")
    return value


def _names(doc: Mapping[str, Any], key: str) -> list[str]:
    names = doc.get(key, [])
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise LoadError(f"{key!r} must be a list of basis names")
    return names


def _field_spec(doc: Mapping[str, Any], p: Optional[int]) -> FieldSpec:
    if p is None:
        p = _require(doc, "p", int)
    degree = doc.get("field_degree", 1)
    modulus = doc.get("modulus")
    try:
        if degree == 2:
            return FieldSpec(int(p), 2, tuple(modulus) if modulus else None)  # type: ignore[arg-type]
        return FieldSpec(int(p), int(degree))
    except (InvalidField, TypeError, ValueError) as exc:
        raise LoadError(f"bad field: {exc}") from None


def algebra_from_json(doc: Any, p: Optional[int] = None, source: str = "") -> AlgebraFile:
    """Decode a document; ``p`` overrides the prime stored in it."""
    if not isinstance(doc, Mapping):
        raise LoadError("an algebra document must be a JSON object")
    spec = _field_spec(doc, p)
    even, odd = _names(doc, "even"), _names(doc, "odd")
    raw = doc.get("brackets", [])
    if not isinstance(raw, list):
        raise LoadError("'brackets' must be a list")
    brackets = []
    for entry in raw:
        if not isinstance(entry, Mapping):
            raise LoadError("each bracket must be an object with left, right, value")
        value = _require(entry, "value", Mapping)
        brackets.append((_require(entry, "left", str), _require(entry, "right", str), dict(value)))
    label = doc.get("name", "") or source
    try:
        L = SuperAlgebra.from_brackets(spec, even, odd, brackets, label=str(label))
        pmap = None
        if "pmap" in doc:
            pmap = _pmap_from_json(L, _require(doc, "pmap", Mapping))
    except LoadError:
        raise
    except (ResupalError, KeyError, TypeError, ValueError) as exc:
        raise LoadError(f"{source or 'document'}: {exc}") from None
    log.debug("loaded %r%s", L, " with p-map" if pmap is not None else "")
    return AlgebraFile(L, pmap, source)


def _pmap_from_json(L: SuperAlgebra, values: Mapping[str, Any]) -> PMap:
    F = L.F
    rows = np.zeros((L.n, L.dim), dtype=np.int64)
    for name, image in values.items():
        j = L.index(name)
        if j >= L.n:
            raise LoadError(f"p-map given on odd element {name!r}")
        if not isinstance(image, Mapping):
            raise LoadError(f"p-map value of {name!r} must be an object")
        for target, coeff in image.items():
            k = L.index(target)
            rows[j, k] = F.add(rows[j, k], to_code(F, coeff))
    return PMap(L, rows, verified=False)


def _load_catalog(name: str, p: Optional[int], restricted: bool) -> AlgebraFile:
    from .catalog import canonical_name, catalog_get

    canonical, label = canonical_name(name)
    entry = catalog_get(canonical, p or 3)
    source = CATALOG_SCHEME + name
    if label is None and (not restricted or not entry.pmaps):
        return AlgebraFile(entry.algebra, None, source)
    R = entry.restricted(label or entry.pmaps[0].label)
    return AlgebraFile(R.algebra.with_label(R.label), R.pmap, source)


def load_algebra(uri_or_path: str, p: Optional[int] = None, restricted: bool = False) -> AlgebraFile:
    """Load ``catalog:<name>`` or a JSON file.

    With ``restricted`` a catalog name without a map label gets its first
    listed p-map.
    """
    if uri_or_path.startswith(CATALOG_SCHEME):
        return _load_catalog(uri_or_path[len(CATALOG_SCHEME) :], p, restricted)
    path = Path(uri_or_path).expanduser()
    if not path.exists():
        raise LoadError(f"input file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    return algebra_from_json(doc, p, source=path.stem)


def dump_algebra(obj: Union[SuperAlgebra, RestrictedAlgebra, AlgebraFile], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(algebra_to_json(obj), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
