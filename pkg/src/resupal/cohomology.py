"""
Chevalley–Eilenberg and restricted cohomology with trivial or adjoint
coefficients.

Cochains of degree k are stored on the canonical basis of sorted argument
tuples: even indices strictly increasing, odd indices weakly increasing, even
indices before odd ones, times a value slot of the module.  The coefficient
of a basis element is the value of the cochain on that sorted tuple, so
``Δ_{i,j}(e_i, e_j) = 1`` and ``Δ_{3,3}(e_3, e_3) = 1`` for odd ``e_3``.

The restricted part follows the degree-2 complex

    C^1 --(d^1_CE, ind^1)--> C^2_* --(d^2_CE, ind^2)--> C^3_*

where a restricted 2-cochain is a pair (φ, ω) with ω given by its values on
the even basis and extended by the φ-compatibility rule.  Z^2_* is solved as
one linear system in (φ coefficients, ω basis values).
"""

from __future__ import annotations

import itertools
import logging
import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import NamedTuple, Optional

import numpy as np

from . import linalg
from .config import Limits
from .errors import BoundExceeded, DegreeMismatch, DimensionMismatch, LoadError, UnknownName
from .gfield import FieldElem
from .liesuper import Scalar, SuperAlgebra, bracket, matrix_power, to_code
from .report import Report
from .restricted import RestrictedAlgebra, pmap_eval

log = logging.getLogger(__name__)


# ---- coefficient modules


@dataclass(frozen=True, eq=False)
class CoeffModule:
    """A finite-dimensional L-module given by the action matrices of the basis.

    ``action[i] @ m`` is ``e_i · m``; the module basis is even-first.
    """

    algebra: SuperAlgebra
    kind: str
    n_even: int
    n_odd: int
    action: np.ndarray
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        L, dm = self.algebra, self.n_even + self.n_odd
        act = np.array(self.action, dtype=np.int64).reshape(L.dim, dm, dm)
        act.setflags(write=False)
        object.__setattr__(self, "action", act)

    @property
    def dim(self) -> int:
        return self.n_even + self.n_odd

    def parity(self, k: int) -> int:
        return 0 if k < self.n_even else 1

    @cached_property
    def parities(self) -> tuple[int, ...]:
        return tuple(self.parity(k) for k in range(self.dim))

    def action_matrix(self, x: np.ndarray) -> np.ndarray:
        L = self.algebra
        dm = self.dim
        return L.F.matmul(np.asarray(x, dtype=np.int64)[None, :], self.action.reshape(L.dim, dm * dm)).reshape(dm, dm)

    def act(self, x: np.ndarray, m: np.ndarray) -> np.ndarray:
        return self.algebra.F.matmul(self.action_matrix(x), np.asarray(m, dtype=np.int64)[:, None])[:, 0]

    def format(self, m: np.ndarray) -> str:
        if self.kind == "adjoint":
            return self.algebra.format(m)
        F = self.algebra.F
        terms = [
            str(FieldElem.from_code(F.spec, int(code))) + ("" if self.dim == 1 else self.names[k])
            for k, code in enumerate(m)
            if code
        ]
        return " + ".join(terms) if terms else "0"

    def key(self) -> tuple:
        return (self.algebra.key(), self.kind, self.n_even, self.n_odd, self.action.tobytes())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffModule):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"<CoeffModule {self.kind} ({self.n_even}|{self.n_odd}) of {self.algebra!r}>"


def trivial(L: SuperAlgebra, odd: bool = False) -> CoeffModule:
    """The one-dimensional trivial module, even unless ``odd``."""
    action = np.zeros((L.dim, 1, 1), dtype=np.int64)
    return CoeffModule(L, "trivial", 0 if odd else 1, 1 if odd else 0, action, ("K",))


def adjoint(L: SuperAlgebra) -> CoeffModule:
    return CoeffModule(L, "adjoint", L.n, L.m, L.ad_basis, L.names)


def module_for(L: SuperAlgebra, kind: str) -> CoeffModule:
    if kind == "trivial":
        return trivial(L)
    if kind == "adjoint":
        return adjoint(L)
    raise UnknownName(f"unknown coefficient module {kind!r} (trivial or adjoint)")


def check_module(R: RestrictedAlgebra | SuperAlgebra, M: CoeffModule) -> Report:
    """Grading, ``[x,y]·m = x·(y·m) - (-1)^{|x||y|} y·(x·m)`` and the restricted law."""
    L = R.algebra if isinstance(R, RestrictedAlgebra) else R
    F, d = L.F, L.dim
    report = Report()
    for i in range(d):
        for k in range(M.dim):
            for r in np.nonzero(M.action[i][:, k])[0]:
                if (L.parity(i) + M.parity(k)) % 2 != M.parity(int(r)):
                    report.add("grading", f"{L.names[i]}·{M.names[k]} has a component on {M.names[r]}")
    for i in range(d):
        for j in range(d):
            lhs = M.action_matrix(L.c[i, j])
            ab = F.matmul(M.action[i], M.action[j])
            ba = F.matmul(M.action[j], M.action[i])
            rhs = F.add(ab, ba) if (L.parity(i) & L.parity(j)) else F.sub(ab, ba)
            if not np.array_equal(lhs, rhs):
                report.add("module", f"[{L.names[i]},{L.names[j]}]· != {L.names[i]}·{L.names[j]}· ∓ {L.names[j]}·{L.names[i]}·")
    if isinstance(R, RestrictedAlgebra):
        for j in range(L.n):
            lhs = matrix_power(F, M.action[j], L.p)
            rhs = M.action_matrix(R.pmap.values[j])
            if not np.array_equal(lhs, rhs):
                report.add("restricted", f"{L.names[j]}^p· != ({L.names[j]}^[p])·")
    return report


# ---- cochain bases


class CochainBasisIndex(NamedTuple):
    S: tuple[int, ...]
    T: tuple[int, ...]
    slot: int


def normal_form(indices: Sequence[int], n: int) -> tuple[int, tuple[int, ...]]:
    """Sort cochain arguments into canonical order.

    Returns ``(sign, sorted tuple)``; swapping neighbours a, b contributes
    ``-(-1)^{|a||b|}`` and the sign is 0 when an even index repeats.
    """
    items = list(indices)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            a, b = items[j - 1], items[j]
            if a < n or b < n:
                sign = -sign
            items[j - 1], items[j] = b, a
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b and a < n:
            return 0, tuple(items)
    return sign, tuple(items)


@dataclass(frozen=True)
class CochainBasis:
    n: int
    m: int
    degree: int
    slot_parities: tuple[int, ...]

    @cached_property
    def tuples(self) -> tuple[tuple[int, ...], ...]:
        n, d = self.n, self.n + self.m
        out = []
        for t in itertools.combinations_with_replacement(range(d), self.degree):
            if any(a == b and a < n for a, b in zip(t, t[1:])):
                continue
            out.append(t)
        return tuple(out)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {t: k for k, t in enumerate(self.tuples)}

    @property
    def dim_module(self) -> int:
        return len(self.slot_parities)

    @property
    def size(self) -> int:
        return len(self.tuples) * self.dim_module

    def position(self, t: tuple[int, ...], slot: int) -> int:
        return self.index[t] * self.dim_module + slot

    def odd_count(self, t: tuple[int, ...]) -> int:
        return sum(1 for a in t if a >= self.n)

    @cached_property
    def parities(self) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        for t in self.tuples:
            odd = self.odd_count(t)
            for slot, sp in enumerate(self.slot_parities):
                out[self.position(t, slot)] = (odd + sp) % 2
        return out

    def columns(self, parity: int) -> np.ndarray:
        return np.nonzero(self.parities == parity)[0]

    def entries(self) -> list[CochainBasisIndex]:
        out = []
        for t in self.tuples:
            S = tuple(a for a in t if a < self.n)
            T = tuple(a for a in t if a >= self.n)
            for slot in range(self.dim_module):
                out.append(CochainBasisIndex(S, T, slot))
        return out


@lru_cache(maxsize=None)
def _basis(n: int, m: int, k: int, slot_parities: tuple[int, ...]) -> CochainBasis:
    return CochainBasis(n, m, k, slot_parities)


def cochain_basis(L: SuperAlgebra, M: CoeffModule, k: int) -> CochainBasis:
    if k < 0:
        raise DegreeMismatch(f"negative degree {k}")
    return _basis(L.n, L.m, k, M.parities)


def cochain_dim(L: SuperAlgebra, M: CoeffModule, k: int) -> tuple[int, int]:
    par = cochain_basis(L, M, k).parities
    odd = int(par.sum())
    return (len(par) - odd, odd)


# ---- cochains


@dataclass(frozen=True, eq=False)
class Cochain:
    algebra: SuperAlgebra
    module: CoeffModule
    degree: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        size = self.basis.size
        arr = np.array(self.coeffs, dtype=np.int64).reshape(-1)
        if arr.shape != (size,):
            raise DimensionMismatch(f"{arr.shape[0]} coefficients for a basis of size {size}")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def zero(cls, L: SuperAlgebra, M: CoeffModule, k: int) -> Cochain:
        return cls(L, M, k, np.zeros(cochain_basis(L, M, k).size, dtype=np.int64))

    @property
    def basis(self) -> CochainBasis:
        return cochain_basis(self.algebra, self.module, self.degree)

    def parity(self) -> Optional[int]:
        """0 or 1 for homogeneous cochains (0 for zero), None when mixed."""
        par = self.basis.parities[np.nonzero(self.coeffs)[0]]
        if par.size == 0 or np.all(par == 0):
            return 0
        if np.all(par == 1):
            return 1
        return None

    def part(self, parity: int) -> Cochain:
        coeffs = np.where(self.basis.parities == parity, self.coeffs, 0)
        return Cochain(self.algebra, self.module, self.degree, coeffs)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def _same(self, other: Cochain) -> None:
        if other.degree != self.degree or other.module != self.module:
            raise DegreeMismatch("cochains of different degree or module")

    def __add__(self, other: Cochain) -> Cochain:
        self._same(other)
        return Cochain(self.algebra, self.module, self.degree, self.algebra.F.add(self.coeffs, other.coeffs))

    def __sub__(self, other: Cochain) -> Cochain:
        self._same(other)
        return Cochain(self.algebra, self.module, self.degree, self.algebra.F.sub(self.coeffs, other.coeffs))

    def __neg__(self) -> Cochain:
        return Cochain(self.algebra, self.module, self.degree, self.algebra.F.neg(self.coeffs))

    def scale(self, lam: Scalar) -> Cochain:
        F = self.algebra.F
        return Cochain(self.algebra, self.module, self.degree, F.scale(to_code(F, lam), self.coeffs))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.module == other.module
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None  # type: ignore[assignment]

    def value(self, t: Sequence[int]) -> np.ndarray:
        """Value on basis elements ``e_{t_1}, ..., e_{t_k}`` (0-based indices)."""
        L, basis = self.algebra, self.basis
        sign, s = normal_form(t, L.n)
        if not sign:
            return np.zeros(self.module.dim, dtype=np.int64)
        k = basis.index[s] * basis.dim_module
        v = self.coeffs[k : k + basis.dim_module]
        return v if sign > 0 else L.F.neg(v)

    def terms(self) -> list[tuple[int, int, tuple[int, ...]]]:
        """Nonzero ``(code, slot, sorted tuple)`` entries in basis order."""
        basis = self.basis
        out = []
        for t in basis.tuples:
            for slot in range(basis.dim_module):
                code = int(self.coeffs[basis.position(t, slot)])
                if code:
                    out.append((code, slot, t))
        return out

    def __str__(self) -> str:
        from .render import render_cochain

        return render_cochain(self)


def evaluate_cochain(c: Cochain, *args: np.ndarray) -> np.ndarray:
    """Multilinear evaluation on arbitrary vectors."""
    L, F = c.algebra, c.algebra.F
    if len(args) != c.degree:
        raise DegreeMismatch(f"degree-{c.degree} cochain evaluated on {len(args)} argument(s)")
    vecs = [np.asarray(a, dtype=np.int64) for a in args]
    supports = [np.nonzero(v)[0] for v in vecs]
    total = np.zeros(c.module.dim, dtype=np.int64)
    for idx in itertools.product(*supports):
        coeff = 1
        for v, i in zip(vecs, idx):
            coeff = int(F.mul(coeff, int(v[i])))
        total = F.add(total, F.scale(coeff, c.value(idx)))
    return total


def delta(
    L: SuperAlgebra,
    *indices: int,
    module: CoeffModule | None = None,
    value: str | None = None,
    coeff: Scalar = 1,
) -> Cochain:
    """``coeff · value ⊗ Δ_{i,j,...}`` with 1-based indices, as in the tables."""
    M = module or trivial(L)
    k = len(indices)
    basis = cochain_basis(L, M, k)
    zero_based = [i - 1 for i in indices]
    if any(not 0 <= i < L.dim for i in zero_based):
        raise UnknownName(f"Δ index out of range in {indices}")
    sign, t = normal_form(zero_based, L.n)
    coeffs = np.zeros(basis.size, dtype=np.int64)
    if sign:
        slot = 0 if value is None else M.names.index(value) if value in M.names else None
        if slot is None:
            raise UnknownName(f"{value!r} is not a basis element of the module")
        code = to_code(L.F, coeff)
        coeffs[basis.position(t, slot)] = code if sign > 0 else L.F.neg(code)
    return Cochain(L, M, k, coeffs)


_TERM = re.compile(
    r"^(?:(?P<coeff>\d+(?:/\d+)?)\s*[*·]?\s*)?"
    r"(?:(?P<slot>[A-Za-z][\w]*)\s*(?:⊗|@)\s*)?"
    r"(?:Δ|D|Delta)_?\{?(?P<idx>[\d,\s]+)\}?$"
)


def parse_cochain(L: SuperAlgebra, text: str, module: CoeffModule | None = None) -> Cochain:
    """Parse ``"Δ22+Δ23"``, ``"2*D13"``, ``"e2⊗Δ13 - e3@D_{1,2}"`` or ``"0"``."""
    M = module or trivial(L)
    text = text.strip()
    if text in ("", "0"):
        return Cochain.zero(L, M, 2)
    pieces = re.findall(r"([+-]?)\s*([^+-]+)", text.replace(" ", ""))
    result: Cochain | None = None
    for sign, body in pieces:
        match = _TERM.match(body)
        if not match:
            raise LoadError(f"cannot parse cocycle term {body!r}")
        raw = match["idx"].replace(" ", "")
        idx = [int(s) for s in raw.split(",")] if "," in raw else [int(ch) for ch in raw]
        coeff = Fraction(match["coeff"]) if match["coeff"] else Fraction(1)
        if sign == "-":
            coeff = -coeff
        term = delta(L, *idx, module=M, value=match["slot"], coeff=coeff)
        result = term if result is None else result + term
    assert result is not None
    return result


def pullback(c: Cochain, A: np.ndarray) -> Cochain:
    """``(A·c)(x_1, ..., x_k) = c(A x_1, ..., A x_k)``."""
    basis = c.basis
    A = np.asarray(A, dtype=np.int64)
    coeffs = np.zeros(basis.size, dtype=np.int64)
    dm = basis.dim_module
    for t in basis.tuples:
        value = evaluate_cochain(c, *[A[:, i] for i in t])
        k = basis.index[t] * dm
        coeffs[k : k + dm] = value
    return Cochain(c.algebra, c.module, c.degree, coeffs)


# ---- Chevalley–Eilenberg differential


def _sgn(F, code, sign: int):
    return code if sign > 0 else F.neg(code)


@lru_cache(maxsize=256)
def _d_ce_cached(L: SuperAlgebra, M: CoeffModule, k: int) -> np.ndarray:
    F, n = L.F, L.n
    par = L.parities
    src = cochain_basis(L, M, k)
    dst = cochain_basis(L, M, k + 1)
    dm = M.dim
    D = np.zeros((dst.size, src.size), dtype=np.int64)

    def add(r: int, col: int, code) -> None:
        D[r, col] = F.add(D[r, col], code)

    if k == 0:
        for (a,) in dst.tuples:
            for so in range(dm):
                for si in range(dm):
                    code = int(M.action[a][so, si])
                    if code:
                        s = -1 if (M.parity(si) & int(par[a])) else 1
                        add(dst.position((a,), so), src.position((), si), _sgn(F, code, s))
        D.setflags(write=False)
        return D

    for t in dst.tuples:
        # bracket terms
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                between = sum(int(par[t[q]]) for q in range(i + 1, j))
                s = -1 if (int(par[t[j]]) * between + (j + 1)) % 2 else 1
                br = L.c[t[i], t[j]]
                for cidx in np.nonzero(br)[0]:
                    args = t[:i] + (int(cidx),) + t[i + 1 : j] + t[j + 1 :]
                    sigma, srt = normal_form(args, n)
                    if not sigma:
                        continue
                    code = _sgn(F, int(br[cidx]), s * sigma)
                    for slot in range(dm):
                        add(dst.position(t, slot), src.position(srt, slot), code)
        # action terms
        for j in range(k + 1):
            rest = t[:j] + t[j + 1 :]
            sigma, srt = normal_form(rest, n)
            if not sigma:
                continue
            before = sum(int(par[t[q]]) for q in range(j))
            act = M.action[t[j]]
            for si in range(dm):
                phi_par = (src.odd_count(srt) + M.parity(si)) % 2
                s = -1 if (int(par[t[j]]) * (phi_par + before) + (j + 1)) % 2 else 1
                for so in np.nonzero(act[:, si])[0]:
                    code = _sgn(F, int(act[so, si]), s * sigma)
                    add(dst.position(t, int(so)), src.position(srt, si), code)
    D.setflags(write=False)
    log.debug("d^%d for %r: %s", k, L, D.shape)
    return D


def d_ce(L: SuperAlgebra, M: CoeffModule, k: int) -> np.ndarray:
    """Matrix of ``d^k_CE: C^k -> C^{k+1}`` (columns: source basis)."""
    if k < 0:
        raise DegreeMismatch(f"negative degree {k}")
    return _d_ce_cached(L, M, k)


def apply_d(c: Cochain) -> Cochain:
    D = d_ce(c.algebra, c.module, c.degree)
    return Cochain(c.algebra, c.module, c.degree + 1, c.algebra.F.matmul(D, c.coeffs[:, None])[:, 0])


@lru_cache(maxsize=1024)
def _h_ce_cached(L: SuperAlgebra, M: CoeffModule, k: int) -> tuple[int, int]:
    F = L.F
    out = []
    D = d_ce(L, M, k)
    src = cochain_basis(L, M, k)
    for parity in (0, 1):
        cols = src.columns(parity)
        z = len(cols) - (linalg.rank(F, D[:, cols]) if len(cols) else 0)
        b = 0
        if k > 0:
            prev_cols = cochain_basis(L, M, k - 1).columns(parity)
            if len(prev_cols):
                b = linalg.rank(F, d_ce(L, M, k - 1)[:, prev_cols])
        out.append(z - b)
    return (out[0], out[1])


def h_ce_dims(L: SuperAlgebra, M: CoeffModule, k: int) -> tuple[int, int]:
    """Parity-split ``sdim H^k_CE(L; M)``."""
    if k < 0:
        raise DegreeMismatch(f"negative degree {k}")
    return _h_ce_cached(L, M, k)


def ce_cocycles(L: SuperAlgebra, M: CoeffModule, k: int) -> np.ndarray:
    return linalg.nullspace(L.F, d_ce(L, M, k))


def ce_coboundaries(L: SuperAlgebra, M: CoeffModule, k: int) -> np.ndarray:
    size = cochain_basis(L, M, k).size
    if k == 0:
        return np.zeros((0, size), dtype=np.int64)
    return linalg.row_basis(L.F, d_ce(L, M, k - 1).T, size)


# ---- φ-compatibility


@lru_cache(maxsize=128)
def _pair_basis(L: SuperAlgebra, M: CoeffModule) -> np.ndarray:
    """``E[a, b] @ φ = φ(e_a, e_b)``, shape (d*d, dimM*size)."""
    basis = cochain_basis(L, M, 2)
    d, dm = L.dim, M.dim
    E = np.zeros((d, d, dm, basis.size), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            sign, t = normal_form((a, b), L.n)
            if not sign:
                continue
            for slot in range(dm):
                E[a, b, slot, basis.position(t, slot)] = 1 if sign > 0 else L.F.neg(1)
    out = E.reshape(d * d, dm * basis.size)
    out.setflags(write=False)
    return out


PairEval = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _symbolic_pairs(L: SuperAlgebra, M: CoeffModule) -> PairEval:
    """``(u, v) -> matrix of φ ↦ φ(u, v)``."""
    E = _pair_basis(L, M)
    F, d, dm = L.F, L.dim, M.dim
    size = E.shape[1] // dm

    def pair(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if not np.any(u) or not np.any(v):
            return np.zeros((dm, size), dtype=np.int64)
        outer = F.mul(u[:, None], v[None, :]).reshape(1, d * d)
        return F.matmul(outer, E).reshape(dm, size)

    return pair


def _concrete_pairs(phi: Cochain) -> PairEval:
    """``(u, v) -> φ(u, v)`` as a (dimM, 1) column."""
    L, M = phi.algebra, phi.module
    F, d, dm = L.F, L.dim, M.dim
    E = _pair_basis(L, M)
    size = E.shape[1] // dm
    values = F.matmul(E.reshape(d * d * dm, size), phi.coeffs[:, None]).reshape(d * d, dm)

    def pair(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if not np.any(u) or not np.any(v):
            return np.zeros((dm, 1), dtype=np.int64)
        outer = F.mul(u[:, None], v[None, :]).reshape(1, d * d)
        return F.matmul(outer, values).reshape(dm, 1)

    return pair


def _compat_sum(L: SuperAlgebra, M: CoeffModule, x: np.ndarray, y: np.ndarray, pair: PairEval) -> np.ndarray:
    """The correction in ``ω(x+y) = ω(x) + ω(y) + Q(x, y)``.

    Words ``x_1..x_p`` over {x, y} with ``x_1 = x, x_2 = y`` contribute
    ``(1/♯x)[φ([x_1..x_{p-1}], x_p) + Σ_k (-1)^k x_p⋯x_{p-k+1}·φ([x_1..x_{p-k-1}], x_{p-k})]``
    with left-nested brackets.
    """
    F, p = L.F, L.p
    acts = (M.action_matrix(x), M.action_matrix(y))
    total = None
    for tail in itertools.product((0, 1), repeat=p - 2):
        word = (0, 1) + tail
        vecs = [x if w == 0 else y for w in word]
        prefixes = [vecs[0]]
        for v in vecs[1:-1]:
            prefixes.append(bracket(L, prefixes[-1], v))
        term = pair(prefixes[p - 2], vecs[p - 1])
        horner = None
        for pos in range(2, p):
            e = pair(prefixes[pos - 2], vecs[pos - 1])
            if (p - pos) % 2:
                e = F.neg(e)
            horner = e if horner is None else F.add(F.matmul(acts[word[pos - 1]], horner), e)
        if horner is not None:
            term = F.add(term, F.matmul(acts[word[p - 1]], horner))
        term = F.scale(int(F.inv(word.count(0) % p)), term)
        total = term if total is None else F.add(total, term)
    return total


def _fold_defect(L: SuperAlgebra, M: CoeffModule, x: np.ndarray, pair: PairEval) -> np.ndarray:
    """``G(x) = Σ_j Q(u_{j-1}, λ_j e_j)`` along the ascending fold of ``x``."""
    F = L.F
    acc = np.zeros(L.dim, dtype=np.int64)
    total = None
    for j in range(L.n):
        lam = int(x[j])
        if not lam:
            continue
        term = np.zeros(L.dim, dtype=np.int64)
        term[j] = lam
        if np.any(acc):
            q = _compat_sum(L, M, acc, term, pair)
            total = q if total is None else F.add(total, q)
        acc = F.add(acc, term)
    return total


def omega_extend(phi: Cochain, omega: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Canonical extension of ω from the even basis to the even vector ``x``."""
    L, M = phi.algebra, phi.module
    F = L.F
    x = np.asarray(x, dtype=np.int64)
    if not L.is_even(x):
        raise DimensionMismatch(f"ω is defined on even vectors, got {L.format(x)}")
    omega = np.asarray(omega, dtype=np.int64).reshape(L.n, M.dim)
    out = np.zeros(M.dim, dtype=np.int64)
    for j in range(L.n):
        if x[j]:
            out = F.add(out, F.scale(int(F.frob(int(x[j]))), omega[j]))
    g = _fold_defect(L, M, x, _concrete_pairs(phi))
    if g is not None:
        out = F.add(out, g[:, 0])
    return out


def _even_pairs(L: SuperAlgebra, limits: Limits, rng: np.random.Generator) -> list[tuple[np.ndarray, np.ndarray]]:
    F, n = L.F, L.n
    if F.q ** (2 * n) <= limits.exhaustive_bound:
        vecs = []
        for flat in range(F.q**n):
            v = np.zeros(L.dim, dtype=np.int64)
            for t in range(n):
                flat, v[t] = divmod(flat, F.q)
            vecs.append(v)
        return [(a, b) for a in vecs for b in vecs]
    basis = [L.basis_vector(j) for j in range(n)]
    pairs = [(a, b) for a in basis for b in basis]
    for _ in range(limits.random_samples):
        a = np.zeros(L.dim, dtype=np.int64)
        b = np.zeros(L.dim, dtype=np.int64)
        a[:n] = F.random(rng, n)
        b[:n] = F.random(rng, n)
        pairs.append((a, b))
    return pairs


def phi_compat_check(
    L: SuperAlgebra,
    M: CoeffModule,
    phi: Cochain,
    omega: np.ndarray,
    limits: Limits | None = None,
    rng: np.random.Generator | None = None,
) -> Report:
    """Violations of conditions (i) and (ii) for the canonical extension of ω."""
    limits = limits or Limits()
    rng = rng or limits.rng()
    F = L.F
    report = Report()
    if phi.degree != 2:
        raise DegreeMismatch("φ-compatibility needs a degree-2 cochain")
    if L.n == 0:
        return report
    pair = _concrete_pairs(phi)
    cache: dict[bytes, np.ndarray] = {}

    def hat(v: np.ndarray) -> np.ndarray:
        key = v.tobytes()
        if key not in cache:
            cache[key] = omega_extend(phi, omega, v)
        return cache[key]

    for x, y in _even_pairs(L, limits, rng):
        q = _compat_sum(L, M, x, y, pair)[:, 0]
        lhs = hat(F.add(x, y))
        rhs = F.add(F.add(hat(x), hat(y)), q)
        if not np.array_equal(lhs, rhs):
            report.add("additivity", f"ω(x+y) != ω(x)+ω(y)+Q(x,y) at x = {L.format(x)}, y = {L.format(y)}")
            break
    for lam in F.nonzero()[:16]:
        x = np.zeros(L.dim, dtype=np.int64)
        x[: L.n] = F.random(rng, L.n)
        if not np.array_equal(hat(F.scale(int(lam), x)), F.scale(int(F.frob(int(lam))), hat(x))):
            report.add("semilinear", f"ω(λx) != λ^p ω(x) at λ = {lam}")
            break
    return report


# ---- restricted cochains


@dataclass(frozen=True, eq=False)
class RestrictedCochain2:
    """A pair (φ, ω) with ``omega[j]`` the value of ω on the j-th even basis element."""

    phi: Cochain
    omega: np.ndarray

    def __post_init__(self) -> None:
        L, M = self.phi.algebra, self.phi.module
        if self.phi.degree != 2:
            raise DegreeMismatch("restricted 2-cochains pair a degree-2 φ with ω")
        om = np.array(self.omega, dtype=np.int64).reshape(L.n, M.dim)
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)

    @property
    def algebra(self) -> SuperAlgebra:
        return self.phi.algebra

    @property
    def module(self) -> CoeffModule:
        return self.phi.module

    @classmethod
    def from_vector(cls, L: SuperAlgebra, M: CoeffModule, z: np.ndarray) -> RestrictedCochain2:
        size = cochain_basis(L, M, 2).size
        z = np.asarray(z, dtype=np.int64)
        return cls(Cochain(L, M, 2, z[:size]), z[size:].reshape(L.n, M.dim))

    def vector(self) -> np.ndarray:
        return np.concatenate([self.phi.coeffs, self.omega.reshape(-1)])

    def split(self) -> tuple[RestrictedCochain2, RestrictedCochain2]:
        """``(φ_0̄, ω_0̄) + (φ_1̄, ω_1̄)`` with ``Im ω_j̄ ⊆ M_j̄``."""
        M = self.module
        mask = np.array(M.parities, dtype=np.int64)
        parts = []
        for parity in (0, 1):
            om = np.where(mask[None, :] == parity, self.omega, 0)
            parts.append(RestrictedCochain2(self.phi.part(parity), om))
        return parts[0], parts[1]

    def omega_at(self, x: np.ndarray) -> np.ndarray:
        return omega_extend(self.phi, self.omega, x)

    def __add__(self, other: RestrictedCochain2) -> RestrictedCochain2:
        F = self.algebra.F
        return RestrictedCochain2(self.phi + other.phi, F.add(self.omega, other.omega))

    def __sub__(self, other: RestrictedCochain2) -> RestrictedCochain2:
        F = self.algebra.F
        return RestrictedCochain2(self.phi - other.phi, F.sub(self.omega, other.omega))

    def is_zero(self) -> bool:
        return self.phi.is_zero() and not np.any(self.omega)

    def describe(self) -> str:
        L, M = self.algebra, self.module
        om = ", ".join(
            f"{L.names[j]} ↦ {M.format(self.omega[j])}" for j in range(L.n) if np.any(self.omega[j])
        )
        return f"({self.phi}, {om or '0'})"


@dataclass(frozen=True, eq=False)
class RestrictedCochain3:
    """``beta[a, j]`` is β(e_a, e_j) for any basis e_a and even basis e_j."""

    alpha: Cochain
    beta: np.ndarray


def _psi_matrix(L: SuperAlgebra, M: CoeffModule, psi: Cochain) -> np.ndarray:
    """``(dimM, d)`` matrix with column i equal to ψ(e_i)."""
    return np.stack([psi.value((i,)) for i in range(L.dim)], axis=1)


def ind1(R: RestrictedAlgebra, M: CoeffModule, psi: Cochain) -> np.ndarray:
    """``ind^1(ψ)(e_j) = ψ(e_j^{[p]}) - e_j^{p-1}·ψ(e_j)`` on the even basis."""
    L, F, p = R.algebra, R.algebra.F, R.algebra.p
    if psi.degree != 1:
        raise DegreeMismatch("ind^1 takes a degree-1 cochain")
    Psi = _psi_matrix(L, M, psi)
    out = np.zeros((L.n, M.dim), dtype=np.int64)
    for j in range(L.n):
        first = F.matmul(Psi, R.pmap.values[j][:, None])[:, 0]
        power = matrix_power(F, M.action[j], p - 1)
        second = F.matmul(power, Psi[:, j][:, None])[:, 0]
        out[j] = F.sub(first, second)
    return out


def ind1_eval(R: RestrictedAlgebra, M: CoeffModule, psi: Cochain, x: np.ndarray) -> np.ndarray:
    """``ind^1(ψ)(x)`` on an arbitrary even vector."""
    L, F = R.algebra, R.algebra.F
    Psi = _psi_matrix(L, M, psi)
    first = F.matmul(Psi, pmap_eval(R.pmap, x)[:, None])[:, 0]
    power = matrix_power(F, M.action_matrix(x), L.p - 1)
    return F.sub(first, F.matmul(power, F.matmul(Psi, np.asarray(x)[:, None]))[:, 0])


def d1_star(R: RestrictedAlgebra, M: CoeffModule, psi: Cochain) -> RestrictedCochain2:
    return RestrictedCochain2(apply_d(psi), ind1(R, M, psi))


def _ind2_blocks(R: RestrictedAlgebra, M: CoeffModule, a: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Matrices giving ind^2(φ, ω)(e_a, e_j) as ``Φ @ φ + Ω @ ω(e_j)``."""
    L, F, p = R.algebra, R.algebra.F, R.algebra.p
    pair = _symbolic_pairs(L, M)
    x = L.basis_vector(a)
    y = L.basis_vector(j)
    phi_block = pair(x, R.pmap.values[j])
    Ay = M.action[j]
    nested = x
    for reps in range(p):
        i = p - 1 - reps
        term = F.matmul(matrix_power(F, Ay, i), pair(nested, y))
        phi_block = F.sub(phi_block, term) if i % 2 == 0 else F.add(phi_block, term)
        nested = bracket(L, nested, y)
    omega_block = M.action[a].copy()
    for s in range(M.dim):
        if L.parity(a) and M.parity(s):
            omega_block[:, s] = F.neg(omega_block[:, s])
    return phi_block, omega_block


@lru_cache(maxsize=64)
def _ind2_matrix(R: RestrictedAlgebra, M: CoeffModule) -> np.ndarray:
    L = R.algebra
    size = cochain_basis(L, M, 2).size
    dm, n, d = M.dim, L.n, L.dim
    out = np.zeros((d * n * dm, size + n * dm), dtype=np.int64)
    for a in range(d):
        for j in range(n):
            phi_block, omega_block = _ind2_blocks(R, M, a, j)
            rows = slice((a * n + j) * dm, (a * n + j + 1) * dm)
            out[rows, :size] = phi_block
            out[rows, size + j * dm : size + (j + 1) * dm] = omega_block
    out.setflags(write=False)
    return out


def ind2(R: RestrictedAlgebra, M: CoeffModule, rc: RestrictedCochain2) -> np.ndarray:
    """β = ind^2(φ, ω) on basis pairs, shape ``(d, n, dimM)``."""
    L = R.algebra
    z = rc.vector()
    beta = L.F.matmul(_ind2_matrix(R, M), z[:, None])[:, 0]
    return beta.reshape(L.dim, L.n, M.dim)


def ind2_eval(R: RestrictedAlgebra, M: CoeffModule, rc: RestrictedCochain2, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``ind^2(φ, ω)(x, y)`` for any x and even y, using the (lin) split."""
    L, F, p = R.algebra, R.algebra.F, R.algebra.p
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    phi = rc.phi
    out = evaluate_cochain(phi, x, pmap_eval(R.pmap, y))
    Ay = M.action_matrix(y)
    nested = x
    for reps in range(p):
        i = p - 1 - reps
        term = F.matmul(matrix_power(F, Ay, i), evaluate_cochain(phi, nested, y)[:, None])[:, 0]
        out = F.sub(out, term) if i % 2 == 0 else F.add(out, term)
        nested = bracket(L, nested, y)
    w = rc.omega_at(y)
    mask = np.array(M.parities)
    w_even = np.where(mask == 0, w, 0)
    w_odd = np.where(mask == 1, w, 0)
    x_even, x_odd = L.even_part(x), L.odd_part(x)
    out = F.add(out, M.act(x_even, F.add(w_even, w_odd)))
    out = F.add(out, M.act(x_odd, F.sub(w_even, w_odd)))
    return out


def alpha_compat_check(
    R: RestrictedAlgebra,
    M: CoeffModule,
    alpha: Cochain,
    beta: Callable[[np.ndarray, np.ndarray], np.ndarray],
    limits: Limits | None = None,
    rng: np.random.Generator | None = None,
) -> Report:
    """Conditions (i)-(iii) of α-compatibility for ``beta(x, y)`` on samples."""
    limits = limits or Limits()
    rng = rng or limits.rng()
    L, F = R.algebra, R.algebra.F
    report = Report()
    if alpha.degree != 3:
        raise DegreeMismatch("α-compatibility needs a degree-3 cochain")
    samples = min(limits.random_samples, 32)
    n = L.n
    if n == 0:
        return report

    def even_vec() -> np.ndarray:
        v = np.zeros(L.dim, dtype=np.int64)
        v[:n] = F.random(rng, n)
        return v

    for _ in range(samples):
        x1, x2 = F.random(rng, L.dim), F.random(rng, L.dim)
        y = even_vec()
        lam = int(F.random(rng))
        if not np.array_equal(beta(F.add(x1, F.scale(lam, x2)), y), F.add(beta(x1, y), F.scale(lam, beta(x2, y)))):
            report.add("linear", "β(x, y) is not linear in x")
            break
    for _ in range(samples):
        x, y = F.random(rng, L.dim), even_vec()
        lam = int(F.random(rng))
        if not np.array_equal(beta(x, F.scale(lam, y)), F.scale(int(F.frob(lam)), beta(x, y))):
            report.add("semilinear", "β(x, λy) != λ^p β(x, y)")
            break
    for _ in range(samples):
        x, y1, y2 = F.random(rng, L.dim), even_vec(), even_vec()
        lhs = beta(x, F.add(y1, y2))
        rhs = F.sub(F.add(beta(x, y1), beta(x, y2)), _alpha_correction(R, M, alpha, x, y1, y2))
        if not np.array_equal(lhs, rhs):
            report.add("additivity", f"condition (iii) fails at y1 = {L.format(y1)}, y2 = {L.format(y2)}")
            break
    return report


def _alpha_correction(
    R: RestrictedAlgebra, M: CoeffModule, alpha: Cochain, x: np.ndarray, y1: np.ndarray, y2: np.ndarray
) -> np.ndarray:
    """The double sum of condition (iii), with ``h_1 = y_1, h_2 = y_2``."""
    from math import comb

    L, F, p = R.algebra, R.algebra.F, R.algebra.p
    total = np.zeros(M.dim, dtype=np.int64)

    def nested(vs: list[np.ndarray]) -> np.ndarray:
        acc = vs[0]
        for v in vs[1:]:
            acc = bracket(L, acc, v)
        return acc

    for tail in itertools.product((0, 1), repeat=p - 2):
        word = (0, 1) + tail
        h = [y1 if w == 0 else y2 for w in word]  # h[0] is h_1
        weight = int(F.inv(word.count(0) % p))
        for j in range(p - 1):
            for k in range(1, j + 1):
                first = nested([x] + [h[i - 1] for i in range(p - k, p - j, -1)])
                second = nested(h[: p - j - 1])
                value = evaluate_cochain(alpha, first, second, h[p - j - 1])
                for i in range(p - k - 1, p + 1):
                    value = M.act(h[i - 1], value)
                coeff = F.mul(F.from_int(comb(j, k)), weight)
                term = F.scale(int(coeff), value)
                total = F.add(total, term) if j % 2 == 0 else F.sub(total, term)
    return total


# ---- Z^2_*, B^2_*, H^2_*, H^1_*


@dataclass
class RestrictedH2:
    cocycles: np.ndarray
    coboundaries: np.ndarray
    representatives: np.ndarray
    algebra: SuperAlgebra
    module: CoeffModule

    @property
    def dim(self) -> int:
        return self.representatives.shape[0]

    def cochains(self, rows: np.ndarray | None = None) -> list[RestrictedCochain2]:
        rows = self.representatives if rows is None else rows
        return [RestrictedCochain2.from_vector(self.algebra, self.module, z) for z in rows]


def _compat_constraints(R: RestrictedAlgebra, M: CoeffModule, limits: Limits) -> np.ndarray:
    """Rows in φ expressing order-independence of the canonical ω-extension."""
    L, F = R.algebra, R.algebra.F
    pair = _symbolic_pairs(L, M)
    size = cochain_basis(L, M, 2).size
    # the same pairs phi_compat_check verifies
    pairs = _even_pairs(L, limits, limits.rng())
    rows = []
    zero = np.zeros((M.dim, size), dtype=np.int64)

    def g(v: np.ndarray) -> np.ndarray:
        out = _fold_defect(L, M, v, pair)
        return zero if out is None else out

    for x, y in pairs:
        defect = F.sub(F.sub(F.sub(g(F.add(x, y)), g(x)), g(y)), _compat_sum(L, M, x, y, pair))
        if np.any(defect):
            rows.append(defect)
    if not rows:
        return np.zeros((0, size), dtype=np.int64)
    return linalg.row_basis(F, np.vstack(rows), size)


def _check_size(rows: int, cols: int, limits: Limits) -> None:
    if rows * cols > limits.enum_bound:
        raise BoundExceeded("restricted cocycle system entries", rows * cols, limits.enum_bound)


def z2_res(
    R: RestrictedAlgebra,
    M: CoeffModule,
    limits: Limits | None = None,
    plus_even: bool = False,
) -> np.ndarray:
    """Row basis of Z^2_*(L; M) as vectors ``(φ coefficients, ω values)``.

    With ``plus_even`` only even φ with ω into ``M_ev`` are kept.
    """
    limits = limits or Limits()
    L, F = R.algebra, R.algebra.F
    size = cochain_basis(L, M, 2).size
    width = size + L.n * M.dim
    blocks = []
    D2 = d_ce(L, M, 2)
    blocks.append(np.hstack([D2, np.zeros((D2.shape[0], L.n * M.dim), dtype=np.int64)]))
    if L.n:
        C = _compat_constraints(R, M, limits)
        if C.shape[0]:
            blocks.append(np.hstack([C, np.zeros((C.shape[0], L.n * M.dim), dtype=np.int64)]))
        blocks.append(_ind2_matrix(R, M))
    if plus_even:
        par = cochain_basis(L, M, 2).parities
        for col in np.nonzero(par == 1)[0]:
            row = np.zeros((1, width), dtype=np.int64)
            row[0, col] = 1
            blocks.append(row)
        for j in range(L.n):
            for s in range(M.dim):
                if M.parity(s):
                    row = np.zeros((1, width), dtype=np.int64)
                    row[0, size + j * M.dim + s] = 1
                    blocks.append(row)
    system = np.vstack(blocks)
    _check_size(*system.shape, limits)
    Z = linalg.nullspace(F, system)
    log.info("Z^2_* of %r: %d equations, dim %d", L, system.shape[0], Z.shape[0])
    return linalg.row_basis(F, Z, width) if Z.shape[0] else Z


def b2_res(R: RestrictedAlgebra, M: CoeffModule, even_only: bool = False) -> np.ndarray:
    """Row basis of B^2_* = {(d^1 ψ, ind^1 ψ)}; ``even_only`` takes even ψ."""
    L, F = R.algebra, R.algebra.F
    basis1 = cochain_basis(L, M, 1)
    size2 = cochain_basis(L, M, 2).size
    rows = []
    for col in range(basis1.size):
        if even_only and basis1.parities[col]:
            continue
        coeffs = np.zeros(basis1.size, dtype=np.int64)
        coeffs[col] = 1
        rc = d1_star(R, M, Cochain(L, M, 1, coeffs))
        rows.append(rc.vector())
    width = size2 + L.n * M.dim
    if not rows:
        return np.zeros((0, width), dtype=np.int64)
    return linalg.row_basis(F, np.vstack(rows), width)


def h2_res(R: RestrictedAlgebra, M: CoeffModule, limits: Limits | None = None, plus_even: bool = False) -> RestrictedH2:
    L, F = R.algebra, R.algebra.F
    Z = z2_res(R, M, limits, plus_even=plus_even)
    B = b2_res(R, M, even_only=plus_even)
    reps = linalg.complement(F, B, Z)
    return RestrictedH2(Z, B, reps, L, M)


def h2_res_dims(R: RestrictedAlgebra, M: CoeffModule, limits: Limits | None = None) -> int:
    return h2_res(R, M, limits).dim


def h2_res_plus_even(R: RestrictedAlgebra, M: CoeffModule, limits: Limits | None = None) -> RestrictedH2:
    """H^2_*(L; M)^+_ev: even φ, ω into M_ev, modulo d^1_* of even 1-cochains."""
    return h2_res(R, M, limits, plus_even=True)


def restricted_cocycle_report(R: RestrictedAlgebra, M: CoeffModule, rc: RestrictedCochain2, limits: Limits | None = None) -> Report:
    """Why ``rc`` is not in Z^2_*: d^2_CE φ, φ-compatibility and ind^2 on basis pairs."""
    limits = limits or Limits()
    L, F = R.algebra, R.algebra.F
    report = Report()
    dphi = F.matmul(d_ce(L, M, 2), rc.phi.coeffs[:, None])[:, 0]
    if np.any(dphi):
        report.add("cocycle", "d^2_CE φ != 0")
    report.extend(phi_compat_check(L, M, rc.phi, rc.omega, limits))
    beta = ind2(R, M, rc)
    for a, j in zip(*np.nonzero(np.any(beta, axis=2))):
        report.add("ind2", f"ind^2(φ,ω)({L.names[a]},{L.names[j]}) = {M.format(beta[a, j])}")
    return report


def h1_res_dims(R: RestrictedAlgebra, M: CoeffModule) -> tuple[int, int]:
    """sdim H^1_* = {ψ : d^1 ψ = 0, ind^1 ψ = 0} / im d^0."""
    L, F = R.algebra, R.algebra.F
    basis1 = cochain_basis(L, M, 1)
    D1 = d_ce(L, M, 1)
    ind_cols = []
    for col in range(basis1.size):
        coeffs = np.zeros(basis1.size, dtype=np.int64)
        coeffs[col] = 1
        ind_cols.append(ind1(R, M, Cochain(L, M, 1, coeffs)).reshape(-1))
    IND = np.stack(ind_cols, axis=1) if ind_cols else np.zeros((0, 0), dtype=np.int64)
    system = np.vstack([D1, IND]) if IND.size else D1
    D0 = d_ce(L, M, 0)
    basis0 = cochain_basis(L, M, 0)
    out = []
    for parity in (0, 1):
        cols = basis1.columns(parity)
        z = len(cols) - (linalg.rank(F, system[:, cols]) if len(cols) else 0)
        cols0 = basis0.columns(parity)
        b = linalg.rank(F, D0[:, cols0]) if len(cols0) else 0
        out.append(z - b)
    return (out[0], out[1])
