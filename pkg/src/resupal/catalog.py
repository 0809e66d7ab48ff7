"""
Built-in algebras.

Names follow the tables they come from:

- ``L_{a|b}^i`` with a number: the classification lists in dimension 3
  (basis ``e1, e2, e3``) and dimension 4 (basis ``x1, ..., x4``), each with
  its list of p|2p-maps labelled ``a, b, c``;
- ``L_{a|b}^x`` with a letter: the dimension-4 extension tables, built by
  :func:`~resupal.extensions.central_extend` from a dimension-3 base and a
  cocycle (basis ``e1, e2, e3`` plus ``X``);
- ``K^{n,m}``: the families of maximal nilindex (basis ``x0, ..., y1, ...``).

``L^4_{2|2}`` and ``L_{2|2}^4`` are the same name; a trailing ``(b)``
selects a p-map.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .cohomology import parse_cochain
from .errors import UnknownName, UnsupportedPair
from .gfield import FieldSpec, is_prime, prime_field
from .liesuper import SuperAlgebra
from .restricted import PMap, RestrictedAlgebra, make_pmap, zero_pmap

log = logging.getLogger(__name__)

Bracket = tuple[str, str, dict]


@dataclass(frozen=True)
class Definition:
    even: tuple[str, ...]
    odd: tuple[str, ...]
    brackets: tuple[Bracket, ...] = ()
    pmaps: tuple[tuple[str, dict], ...] = ()


def _b(left: str, right: str, value: str, coeff: object = 1) -> Bracket:
    return (left, right, {value: coeff})


E3 = (("e1",), ("e2", "e3"))

_ZERO: tuple[tuple[str, dict], ...] = (("a", {}),)
_TWO_EVEN_3: tuple[tuple[str, dict], ...] = (("a", {}), ("b", {"e1": {"e2": 1}}))
_THREE_EVEN_3 = (("a", {}), ("b", {"e1": {"e2": 1}}), ("c", {"e1": {"e2": 1}, "e2": {"e3": 1}}))
_HEIS_EVEN_3 = (("a", {}), ("b", {"e1": {"e3": 1}}))

DIM3: dict[str, Definition] = {
    "L_{0|3}^1": Definition((), ("e1", "e2", "e3")),
    "L_{1|2}^1": Definition(*E3, (), _ZERO),
    "L_{1|2}^2": Definition(*E3, (_b("e2", "e3", "e1"),), _ZERO),
    "L_{1|2}^3": Definition(*E3, (_b("e1", "e2", "e3"),), _ZERO),
    "L_{1|2}^4": Definition(*E3, (_b("e3", "e3", "e1"),), _ZERO),
    "L_{2|1}^1": Definition(("e1", "e2"), ("e3",), (), _TWO_EVEN_3),
    "L_{2|1}^2": Definition(("e1", "e2"), ("e3",), (_b("e3", "e3", "e2"),), _TWO_EVEN_3),
    "L_{3|0}^1": Definition(("e1", "e2", "e3"), (), (), _THREE_EVEN_3),
    "L_{3|0}^2": Definition(("e1", "e2", "e3"), (), (_b("e1", "e2", "e3"),), _HEIS_EVEN_3),
}

X1, X2, X3, X4 = "x1", "x2", "x3", "x4"
_ONE_EVEN_4 = ((X1,), (X2, X3, X4))
_TWO_EVEN_4 = ((X1, X2), (X3, X4))
_THREE_EVEN_4 = ((X1, X2, X3), (X4,))
_P13 = (("a", {}),)
_P22 = (("a", {}), ("b", {X1: {X2: 1}}))
_P31_ABELIAN = (("a", {}), ("b", {X1: {X2: 1}}), ("c", {X1: {X2: 1}, X2: {X3: 1}}))
_P31_HEIS = (("a", {}), ("b", {X1: {X3: 1}}))

DIM4: dict[str, Definition] = {
    "L_{0|4}^1": Definition((), (X1, X2, X3, X4)),
    "L_{1|3}^1": Definition(*_ONE_EVEN_4, (), _P13),
    "L_{1|3}^2": Definition(*_ONE_EVEN_4, (_b(X1, X3, X4),), _P13),
    "L_{1|3}^3": Definition(*_ONE_EVEN_4, (_b(X2, X3, X1),), _P13),
    "L_{1|3}^4": Definition(*_ONE_EVEN_4, (_b(X1, X2, X3), _b(X1, X3, X4)), _P13),
    "L_{1|3}^5": Definition(*_ONE_EVEN_4, (_b(X3, X3, X1),), _P13),
    "L_{1|3}^6": Definition(*_ONE_EVEN_4, (_b(X2, X2, X1), _b(X3, X4, X1)), _P13),
    "L_{2|2}^1": Definition(*_TWO_EVEN_4, (), _P22),
    "L_{2|2}^2": Definition(*_TWO_EVEN_4, (_b(X3, X4, X2),), _P22),
    "L_{2|2}^3": Definition(*_TWO_EVEN_4, (_b(X3, X3, X2), _b(X3, X4, X1)), _P22),
    "L_{2|2}^4": Definition(
        *_TWO_EVEN_4, (_b(X3, X3, X2), _b(X4, X4, X2), _b(X3, X4, X1)), _P22
    ),
    "L_{2|2}^5": Definition(*_TWO_EVEN_4, (_b(X1, X3, X4),), _P22),
    "L_{2|2}^6": Definition(*_TWO_EVEN_4, (_b(X1, X3, X4), _b(X3, X3, X2)), _P22),
    "L_{2|2}^7": Definition(*_TWO_EVEN_4, (_b(X4, X4, X1),), _P22),
    "L_{3|1}^1": Definition(*_THREE_EVEN_4, (), _P31_ABELIAN),
    "L_{3|1}^2": Definition(*_THREE_EVEN_4, (_b(X1, X2, X3),), _P31_HEIS),
    "L_{3|1}^3": Definition(*_THREE_EVEN_4, (_b(X4, X4, X3),), _P31_ABELIAN),
    "L_{3|1}^4": Definition(*_THREE_EVEN_4, (_b(X1, X2, X3), _b(X4, X4, X3)), _P31_HEIS),
    "L_{4|0}^1": Definition((X1, X2, X3, X4), (), (), _P13),
    "L_{4|0}^2": Definition((X1, X2, X3, X4), (), (_b(X1, X2, X3),), _P13),
    "L_{4|0}^3": Definition((X1, X2, X3, X4), (), (_b(X1, X2, X3), _b(X1, X3, X4)), _P13),
}

# letter -> (dimension-3 base, cocycle, parity of X)
WORKING_NAMES: dict[str, dict[str, tuple[str, str, int]]] = {
    "1|3": {
        "a": ("L_{1|2}^1", "0", 1),
        "b": ("L_{1|2}^1", "Δ12", 1),
        "c": ("L_{1|2}^2", "0", 1),
        "d": ("L_{1|2}^3", "0", 1),
        "e": ("L_{1|2}^3", "Δ13", 1),
        "f": ("L_{1|2}^4", "0", 1),
        "g": ("L_{0|3}^1", "0", 0),
        "h": ("L_{0|3}^1", "Δ11", 0),
        "i": ("L_{0|3}^1", "Δ12", 0),
        "j": ("L_{0|3}^1", "Δ11+Δ23", 0),
    },
    "2|2": {
        "a": ("L_{1|2}^1", "0", 0),
        "b": ("L_{1|2}^1", "Δ23", 0),
        "c": ("L_{1|2}^1", "Δ22+Δ23+Δ33", 0),
        "d": ("L_{1|2}^2", "0", 0),
        "e": ("L_{1|2}^2", "Δ22", 0),
        "f": ("L_{1|2}^2", "Δ22+Δ33", 0),
        "g": ("L_{1|2}^3", "0", 0),
        "h": ("L_{1|2}^3", "Δ22", 0),
        "i": ("L_{1|2}^4", "0", 0),
        "j": ("L_{1|2}^4", "Δ22", 0),
        "k": ("L_{1|2}^4", "Δ23", 0),
        "l": ("L_{1|2}^4", "Δ22+Δ23", 0),
        "m": ("L_{2|1}^1", "0", 1),
        "n": ("L_{2|1}^1", "Δ13", 1),
        "o": ("L_{2|1}^2", "0", 1),
        "p": ("L_{2|1}^2", "Δ13", 1),
    },
    "3|1": {
        "a": ("L_{2|1}^1", "0", 0),
        "b": ("L_{2|1}^1", "Δ12", 0),
        "c": ("L_{2|1}^1", "Δ33", 0),
        "d": ("L_{2|1}^1", "Δ12+Δ33", 0),
        "e": ("L_{2|1}^2", "0", 0),
    },
    "0|4": {
        "a": ("L_{0|3}^1", "0", 1),
    },
}

# inequivalent homogeneous 2-cocycles of each dimension-3 algebra
COCYCLE_REPRESENTATIVES: dict[str, tuple[str, ...]] = {
    "L_{0|3}^1": ("0", "Δ11", "Δ12", "Δ11+Δ23"),
    "L_{1|2}^1": ("0", "Δ12", "Δ23", "Δ22+Δ23+Δ33"),
    "L_{1|2}^2": ("0", "Δ22", "Δ22+Δ33"),
    "L_{1|2}^3": ("0", "Δ13", "Δ22"),
    "L_{1|2}^4": ("0", "Δ22", "Δ23", "Δ22+Δ23"),
    "L_{2|1}^1": ("0", "Δ13", "Δ12", "Δ33", "Δ12+Δ33"),
    "L_{2|1}^2": ("0", "Δ13"),
}

# rows of the invariant tables: one working name per isomorphism class
TABLE_ROWS: dict[str, tuple[str, ...]] = {
    "1|3": ("a", "b", "c", "e", "f", "j"),
    "2|2": ("a", "b", "c", "e", "f", "g", "h", "i", "j", "l"),
    "3|1": ("a", "b", "c", "d"),
}


@dataclass
class CatalogEntry:
    name: str
    algebra: SuperAlgebra
    pmaps: list[PMap] = field(default_factory=list)
    base: Optional[str] = None
    cocycle: Optional[str] = None

    def restricted(self, label: str = "a") -> RestrictedAlgebra:
        for P in self.pmaps:
            if P.label == label:
                return RestrictedAlgebra(self.algebra, P, f"{self.name}({label})")
        raise UnknownName(f"{self.name} has no p-map {label!r}")


_NAME = re.compile(
    r"^L(?:_\{?(?P<s1>\d\|\d)\}?\^\{?(?P<i1>\w)\}?|\^\{?(?P<i2>\w)\}?_\{?(?P<s2>\d\|\d)\}?)"
    r"(?:\((?P<map>[a-z])\))?$"
)
_K = re.compile(r"^K\^?\{?(?P<n>\d),(?P<m>\d+)\}?$")


def canonical_name(name: str) -> tuple[str, Optional[str]]:
    """``("L_{2|2}^4", "b")`` for ``"L^4_{2|2}(b)"``; K-family names pass through."""
    text = name.strip().replace(" ", "")
    if _K.match(text):
        k = _K.match(text)
        assert k is not None
        return f"K^{{{k['n']},{k['m']}}}", None
    match = _NAME.match(text)
    if not match:
        raise UnknownName(f"unknown catalog name {name!r}")
    sdim = match["s1"] or match["s2"]
    index = match["i1"] or match["i2"]
    return f"L_{{{sdim}}}^{index}", match["map"]


def _field(p: int, spec: FieldSpec | None) -> FieldSpec:
    if spec is not None:
        if spec.p != p:
            raise UnknownName(f"field {spec} does not have characteristic {p}")
        return spec
    return prime_field(p)


def _from_definition(name: str, d: Definition, spec: FieldSpec) -> CatalogEntry:
    L = SuperAlgebra.from_brackets(spec, d.even, d.odd, d.brackets, label=name)
    if not L.n:
        return CatalogEntry(name, L, [PMap(L, zero_pmap(L).values, True, "a")])
    pmaps = [make_pmap(L, values, label=label) for label, values in d.pmaps]
    return CatalogEntry(name, L, pmaps)


@lru_cache(maxsize=None)
def _get(name: str, spec: FieldSpec) -> CatalogEntry:
    if name in DIM3:
        return _from_definition(name, DIM3[name], spec)
    if name in DIM4:
        return _from_definition(name, DIM4[name], spec)
    if name.startswith("K^"):
        k = _K.match(name)
        assert k is not None
        L = build_K(int(k["n"]), int(k["m"]), spec.p, spec)
        return CatalogEntry(name, L)
    sdim, letter = name[3:6], name[-1]
    table = WORKING_NAMES.get(sdim, {})
    if letter not in table:
        raise UnknownName(f"unknown catalog name {name!r}")
    base_name, cocycle, parity = table[letter]
    from .extensions import ExtensionSpec, central_extend

    base = _get(base_name, spec).algebra
    phi = parse_cochain(base, cocycle)
    E = central_extend(ExtensionSpec(base, phi, "X", parity))
    assert isinstance(E, SuperAlgebra)
    return CatalogEntry(name, E.with_label(name), [], base_name, cocycle)


def catalog_get(name: str, p: int = 3, spec: FieldSpec | None = None) -> CatalogEntry:
    """The named algebra over F_p (or ``spec``) with its listed p-maps."""
    if not is_prime(p) or p == 2:
        raise UnknownName(f"catalog algebras need an odd prime, got {p}")
    canonical, _ = canonical_name(name)
    return _get(canonical, _field(p, spec))


def catalog_restricted(name: str, p: int = 3, spec: FieldSpec | None = None) -> RestrictedAlgebra:
    """``"L_{2|2}^5(b)"`` as a restricted algebra; the map defaults to ``a``."""
    canonical, label = canonical_name(name)
    return catalog_get(canonical, p, spec).restricted(label or "a")


def catalog_names() -> list[tuple[str, tuple[int, int]]]:
    """Every L-name with its superdimension, classification lists first."""
    out = []
    for table in (DIM3, DIM4):
        for name, d in table.items():
            out.append((name, (len(d.even), len(d.odd))))
    for sdim, letters in WORKING_NAMES.items():
        n, m = (int(s) for s in sdim.split("|"))
        for letter in letters:
            out.append((f"L_{{{sdim}}}^{letter}", (n, m)))
    return out


# ---- K^{n,m}


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _k_brackets(n: int, m: int) -> list[Bracket]:
    ys = [f"y{i}" for i in range(1, m + 1)]

    def y(i: int) -> str:
        return ys[i - 1]

    out: list[Bracket] = [_b("x0", y(i), y(i + 1)) for i in range(1, m)]
    if n >= 3:
        out.append(_b("x0", "x1", "x2"))
    if n == 4:
        out.append(_b("x0", "x2", "x3"))
    if m % 2:
        top = "x1" if n == 2 else "x2"
        for i in range(1, (m + 1) // 2 + 1):
            out.append(_b(y(i), y(m + 1 - i), top, _sign(i + 1)))
        return out
    for i in range(1, m // 2 + 1):
        out.append(_b(y(i), y(m - i), "x1", _sign((m - 2 * i) // 2)))
    if n >= 3:
        for i in range(1, m // 2 + 1):
            coeff = Fraction(_sign((m - 2 * i) // 2) * (m - 2 * i + 1), 2)
            out.append(_b(y(i), y(m + 1 - i), "x2", coeff))
    if n == 4:
        for i in range(2, (m + 2) // 2 + 1):
            coeff = Fraction(_sign((m - 2 * i + 2) // 2) * (i - 1) * (m - i + 1), 2)
            out.append(_b(y(i), y(m + 2 - i), "x3", coeff))
    return out


def _k45_brackets() -> list[Bracket]:
    half = Fraction(1, 2)
    three_halves = Fraction(-3, 2)
    return [
        _b("x0", "x1", "x2"),
        _b("x0", "x2", "x3"),
        *[_b("x0", f"y{i}", f"y{i + 1}") for i in range(1, 5)],
        _b("x1", "y3", "y5"),
        _b("x2", "y2", "y5", -1),
        _b("x3", "y1", "y5"),
        _b("y1", "y4", "x2", three_halves),
        _b("y2", "y4", "x3", three_halves),
        _b("y1", "y3", "x1", -1),
        _b("y2", "y2", "x1"),
        _b("y2", "y3", "x2", half),
        _b("y3", "y3", "x3", 2),
    ]


def build_K(n: int, m: int, p: int = 3, spec: FieldSpec | None = None) -> SuperAlgebra:
    """The family K^{n,m} over F_p: ``x0`` acts as a shift on ``y1..ym``.

    Supported: n = 2, 3 with any m, n = 4 with m even or m = 5.
    """
    if n not in (2, 3, 4) or m < 1 or (n == 4 and m % 2 and m != 5):
        raise UnsupportedPair(f"K^{{{n},{m}}} is not a member of the families")
    field_spec = _field(p, spec)
    even = tuple(f"x{i}" for i in range(n))
    odd = tuple(f"y{i}" for i in range(1, m + 1))
    brackets = _k45_brackets() if (n, m) == (4, 5) else _k_brackets(n, m)
    label = f"K^{{{n},{m}}}"
    log.debug("building %s over %s", label, field_spec)
    return SuperAlgebra.from_brackets(field_spec, even, odd, brackets, label)
