"""Automorphism groups of Fulton-MacPherson spaces and related moduli spaces.

Groups are expression trees built from a few atoms (symmetric groups,
projective linear groups, automorphism groups of curves and varieties)
with direct products, semidirect products and powers.  ``str()`` gives a
canonical string such as ``"S5 x PGL2"`` or ``"S2 ⋉ (PGL2 x PGL2)"``; the
acting factor of a semidirect product is written on the left.

:func:`diagonal_stabilizer` checks by brute force which tuples of
permutations in ``S_n^r`` permute the diagonals of ``(C_1 x ... x C_r)^n``.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from math import factorial
from typing import Sequence, Union

from .exact import Permutation, all_permutations, subsets

BRUTE_FORCE_BOUND = 10**7

# -- group expressions --------------------------------------------------------


@dataclass(frozen=True)
class Sym:
    n: int

    def __str__(self):
        return f"S{self.n}"


@dataclass(frozen=True)
class PGL:
    k: int

    def __str__(self):
        return f"PGL{self.k}"


@dataclass(frozen=True)
class AutCurve:
    """``Aut(C)`` or, with ``connected``, its identity component."""

    class_id: str | None = None
    order: int | None = None
    connected: bool = False
    genus: int | None = None

    def __str__(self):
        name = "Aut^o" if self.connected else "Aut"
        return f"{name}(C_{self.class_id})" if self.class_id else f"{name}(C)"


@dataclass(frozen=True)
class AutVariety:
    name: str = "Aut(X)"
    order: int | None = None

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Trivial:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("a direct product needs at least two factors")

    def __str__(self):
        return " x ".join(_wrap(f) for f in self.factors)


@dataclass(frozen=True)
class Semidirect:
    normal: "GroupExpr"
    acting: "GroupExpr"

    def __str__(self):
        return f"{_wrap(self.acting)} ⋉ {_wrap(self.normal)}"


@dataclass(frozen=True)
class Power:
    base: "GroupExpr"
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("exponent must be at least 1")

    def __str__(self):
        return f"{_wrap(self.base)}^{self.exponent}"


GroupExpr = Union[Sym, PGL, AutCurve, AutVariety, Trivial, DirectProduct, Semidirect, Power]
_ATOMS = (Sym, PGL, AutCurve, AutVariety, Trivial)


def _wrap(g) -> str:
    return str(g) if isinstance(g, (*_ATOMS, Power)) else f"({g})"


def direct(*factors) -> GroupExpr:
    fs = [f for f in factors if not isinstance(f, Trivial)]
    if not fs:
        return Trivial()
    return fs[0] if len(fs) == 1 else DirectProduct(tuple(fs))


def power(base, r: int) -> GroupExpr:
    return base if r == 1 else Power(base, r)


def to_json(g: GroupExpr) -> dict:
    if isinstance(g, Sym):
        return {"op": "sym", "n": g.n}
    if isinstance(g, PGL):
        return {"op": "pgl", "k": g.k}
    if isinstance(g, AutCurve):
        return {"op": "aut_curve", "class": g.class_id, "order": g.order, "connected": g.connected}
    if isinstance(g, AutVariety):
        return {"op": "aut_variety", "name": g.name, "order": g.order}
    if isinstance(g, Trivial):
        return {"op": "trivial"}
    if isinstance(g, DirectProduct):
        return {"op": "direct", "factors": [to_json(f) for f in g.factors]}
    if isinstance(g, Semidirect):
        return {"op": "semidirect", "normal": to_json(g.normal), "acting": to_json(g.acting)}
    return {"op": "power", "base": to_json(g.base), "exponent": g.exponent}


def dumps(g: GroupExpr) -> str:
    return json.dumps(to_json(g), sort_keys=True, ensure_ascii=True)


# -- orders -------------------------------------------------------------------


@dataclass(frozen=True)
class Infinite:
    def __str__(self):
        return "infinite"


@dataclass(frozen=True)
class Unknown:
    missing: tuple[str, ...]


def group_order(g: GroupExpr) -> Union[int, Infinite, Unknown]:
    """Order of ``g``; ``Infinite`` beats ``Unknown`` when both occur."""
    if isinstance(g, Sym):
        return factorial(g.n)
    if isinstance(g, PGL):
        return Infinite()
    if isinstance(g, Trivial):
        return 1
    if isinstance(g, (AutCurve, AutVariety)):
        return g.order if g.order is not None else Unknown((str(g),))
    if isinstance(g, Power):
        return _mul([group_order(g.base)] * g.exponent)
    if isinstance(g, Semidirect):
        return _mul([group_order(g.normal), group_order(g.acting)])
    return _mul([group_order(f) for f in g.factors])


def _mul(orders):
    if any(isinstance(o, Infinite) for o in orders):
        return Infinite()
    missing = [m for o in orders if isinstance(o, Unknown) for m in o.missing]
    if missing:
        return Unknown(tuple(sorted(set(missing))))
    out = 1
    for o in orders:
        out *= o
    return out


def erase_ids(g: GroupExpr) -> GroupExpr:
    """Forget class labels, sorting direct factors so that relabelings compare equal."""
    if isinstance(g, AutCurve):
        return replace(g, class_id="?" if g.class_id else None)
    if isinstance(g, Power):
        return Power(erase_ids(g.base), g.exponent)
    if isinstance(g, Semidirect):
        return Semidirect(erase_ids(g.normal), erase_ids(g.acting))
    if isinstance(g, DirectProduct):
        return DirectProduct(tuple(sorted((erase_ids(f) for f in g.factors), key=repr)))
    return g


def isomorphic_shape(a: GroupExpr, b: GroupExpr) -> bool:
    return erase_ids(a) == erase_ids(b)


# -- spaces -------------------------------------------------------------------


@dataclass(frozen=True)
class ProjLine:
    pass


@dataclass(frozen=True)
class Curve:
    genus: int
    aut_order: int | None = None
    class_id: str | None = None


@dataclass(frozen=True)
class ProductOfCurves:
    """``C_1 x ... x C_r``; factors with the same ``class_id`` are isomorphic."""

    factors: tuple[Curve, ...]

    def __post_init__(self):
        seen: dict[str, Curve] = {}
        for c in self.factors:
            if c.class_id is None:
                raise ValueError("product factors need a class id")
            if seen.setdefault(c.class_id, c) != c:
                raise ValueError(f"class {c.class_id} declared with different data")


@dataclass(frozen=True)
class NefCanonical:
    name: str = "X"


@dataclass(frozen=True)
class GeneralType:
    name: str = "X"


Base = Union[ProjLine, Curve, ProductOfCurves, NefCanonical, GeneralType]


@dataclass(frozen=True)
class FM:
    base: Base
    n: int


@dataclass(frozen=True)
class Kontsevich:
    """Stable maps of genus 0 and degree ``d`` to ``P^N`` with ``n`` markings."""

    N: int
    d: int
    n: int


@dataclass(frozen=True)
class ModuliCurves:
    g: int
    n: int


@dataclass(frozen=True)
class Bare:
    """The base itself, without blowing up diagonals."""

    base: Base


Space = Union[FM, Kontsevich, ModuliCurves, Bare]


@dataclass(frozen=True)
class Unsupported:
    reason: str


@dataclass(frozen=True)
class Conjectural:
    structure: GroupExpr


GENUS_ONE = "genus one: translations and GL(2,Z) act on C x C, so the structure differs"
OUTSIDE = "no structure theorem available for this space"


def _curve_atom(c: Curve, connected: bool = False) -> GroupExpr:
    if c.genus == 0:
        return PGL(2)
    return AutCurve(c.class_id, 1 if connected else c.aut_order, connected, c.genus)


def _blocks(p: ProductOfCurves) -> list[tuple[Curve, int]]:
    counts = Counter(c.class_id for c in p.factors)
    rep = {c.class_id: c for c in p.factors}
    order = sorted(counts, key=lambda k: (-counts[k], k))
    return [(rep[k], counts[k]) for k in order]


def _product_group(p: ProductOfCurves) -> GroupExpr:
    """``(S_{r_1} ⋉ Aut(C_1)^{r_1}) x ... x (S_{r_k} ⋉ Aut(C_k)^{r_k})``."""
    parts = []
    for c, r in _blocks(p):
        atom = _curve_atom(c)
        parts.append(atom if r == 1 else Semidirect(Power(atom, r), Sym(r)))
    return direct(*parts)


def _has_genus(b: Base, g: int) -> bool:
    if isinstance(b, Curve):
        return b.genus == g
    if isinstance(b, ProductOfCurves):
        return any(c.genus == g for c in b.factors)
    return False


def _normalize_base(b: Base) -> Base:
    if isinstance(b, Curve) and b.genus == 0:
        return ProjLine()
    if isinstance(b, ProductOfCurves) and len(b.factors) == 1:
        return b.factors[0]
    return b


def aut_structure(s: Space) -> Union[GroupExpr, Unsupported, Conjectural]:
    if isinstance(s, Kontsevich):
        if s.N == 1 and s.d == 1:
            return aut_structure(FM(ProjLine(), s.n))
        if (s.N, s.d, s.n) == (2, 2, 0):
            return PGL(3)
        return Unsupported(OUTSIDE)
    if isinstance(s, ModuliCurves):
        if s.g >= 3 and s.n >= 1:
            return Sym(s.n)
        return Unsupported(OUTSIDE)
    if isinstance(s, Bare):
        b = s.base
        if _has_genus(b, 1):
            return Unsupported(GENUS_ONE)
        if isinstance(b, Curve):
            return _curve_atom(b)
        if isinstance(b, ProductOfCurves):
            return _product_group(b)
        return Unsupported(OUTSIDE)
    if not isinstance(s, FM):
        raise TypeError(f"not a space descriptor: {s!r}")
    if s.n < 0:
        raise ValueError("n must be non-negative")
    b = _normalize_base(s.base)
    n = s.n
    if _has_genus(b, 1):
        return Unsupported(GENUS_ONE)
    if n == 0:
        return Unsupported(OUTSIDE)
    if isinstance(b, ProjLine):
        if n == 2:
            return Semidirect(DirectProduct((PGL(2), PGL(2))), Sym(2))
        return direct(Sym(n), PGL(2))
    if isinstance(b, Curve):
        a = _curve_atom(b)
        if n == 2:
            return Semidirect(DirectProduct((a, a)), Sym(2))
        return direct(Sym(n), a)
    if isinstance(b, ProductOfCurves):
        if any(c.genus < 2 for c in b.factors):
            return Unsupported(OUTSIDE)
        aut_x = _product_group(b)
        if n == 2:
            return Semidirect(aut_x, Power(Sym(2), len(b.factors)))
        return direct(Sym(n), aut_x)
    if isinstance(b, NefCanonical):
        return AutVariety(f"Aut_Delta({b.name}^{n})")
    if isinstance(b, GeneralType):
        if n == 2:
            return Unsupported(OUTSIDE)
        return Conjectural(direct(Sym(n), AutVariety(f"Aut({b.name})")))
    return Unsupported(OUTSIDE)


def aut_connected(s: Space) -> Union[GroupExpr, Unsupported]:
    """The identity component of the automorphism group."""
    if isinstance(s, Kontsevich):
        N, d, n = s.N, s.d, s.n
        if N == 1 and d == 1:
            return aut_connected(FM(ProjLine(), n))
        if N >= 2 and d == 1 and n >= 1:
            if n == 2:
                return DirectProduct((PGL(2), PGL(2), PGL(N + 1)))
            return DirectProduct((PGL(2), PGL(N + 1)))
        if N == d and N >= 3 and n >= N + 2:
            return PGL(N + 1)
        return Unsupported(OUTSIDE)
    if not isinstance(s, FM):
        return Unsupported(OUTSIDE)
    b = _normalize_base(s.base)
    if _has_genus(b, 1):
        return Unsupported(GENUS_ONE)
    if isinstance(b, ProjLine):
        return DirectProduct((PGL(2), PGL(2))) if s.n == 2 else PGL(2)
    if isinstance(b, Curve):
        a = _curve_atom(b, connected=True)
        return DirectProduct((a, a)) if s.n == 2 else a
    if isinstance(b, ProductOfCurves):
        known = all(c.genus >= 2 for c in b.factors)
        return AutVariety("Aut^o(X)", 1 if known else None)
    return AutVariety(f"Aut^o({b.name})")


# -- space JSON ---------------------------------------------------------------


def _base_from_json(doc) -> Base:
    if doc in ("P1", "p1"):
        return ProjLine()
    if isinstance(doc, dict):
        if "curve" in doc:
            c = doc["curve"]
            return Curve(int(c["genus"]), c.get("aut_order"), c.get("class"))
        if "product" in doc:
            return ProductOfCurves(
                tuple(Curve(int(c["genus"]), c.get("aut_order"), str(c["class"])) for c in doc["product"])
            )
        if "nef_canonical" in doc:
            return NefCanonical(str(doc["nef_canonical"]))
        if "general_type" in doc:
            return GeneralType(str(doc["general_type"]))
    raise ValueError(f"unrecognized base {doc!r}")


def space_from_json(doc: dict) -> Space:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise ValueError("space must be an object with exactly one key")
    (kind, body), = doc.items()
    if kind == "fm":
        return FM(_base_from_json(body["base"]), int(body["n"]))
    if kind == "kontsevich":
        return Kontsevich(int(body["N"]), int(body["d"]), int(body["n"]))
    if kind == "moduli_curves":
        return ModuliCurves(int(body["g"]), int(body["n"]))
    if kind == "bare":
        return Bare(_base_from_json(body))
    raise ValueError(f"unknown space kind {kind!r}")


# -- diagonal stabilizer ------------------------------------------------------


@dataclass(frozen=True)
class DiagonalSym:
    n: int


@dataclass(frozen=True)
class FullSym2Power:
    r: int


@dataclass(frozen=True)
class TrivialGroup:
    pass


@dataclass(frozen=True)
class Unrecognized:
    order: int


@dataclass(frozen=True)
class StabilizerResult:
    n: int
    r: int
    elements: tuple[tuple[Permutation, ...], ...] = field(repr=False)
    verdict: Union[DiagonalSym, FullSym2Power, TrivialGroup, Unrecognized]

    @property
    def order(self) -> int:
        return len(self.elements)


def _preserves_diagonals(sigmas: Sequence[Permutation], diagonals) -> bool:
    """Per factor ``j`` the new point has ``y^j_i = x^j_{sigma_j(i)}``.

    The image of the diagonal ``x^j_a = x^j_b (a, b in S, all j)`` is cut
    out by ``sigma_j^{-1}(S)`` in factor ``j``; it is a diagonal exactly
    when these sets agree for all ``j``.
    """
    inverses = [s.inverse() for s in sigmas]
    for S in diagonals:
        images = {frozenset(inv(i) for i in S) for inv in inverses}
        if len(images) != 1:
            return False
    return True


def _scan(args):
    first, n, r = args
    diagonals = [tuple(S) for S in subsets(n, (2, n))] if n >= 2 else []
    perms = list(all_permutations(n))
    out = []
    for rest in product(perms, repeat=r - 1):
        tup = (first, *rest)
        if _preserves_diagonals(tup, diagonals):
            out.append(tup)
    return out


def worker_cap(requested: int | None = None) -> int:
    cap = os.environ.get("FMCKIT_THREADS")
    w = requested or (os.cpu_count() or 1)
    if cap:
        w = min(w, max(1, int(cap)))
    return max(1, w)


def diagonal_stabilizer(n: int, r: int, workers: int = 1) -> StabilizerResult:
    """Tuples in ``S_n^r`` permuting the diagonals of ``(C_1 x ... x C_r)^n``."""
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    if factorial(n) ** r > BRUTE_FORCE_BOUND:
        raise ValueError(f"(n!)^r = {factorial(n) ** r} exceeds the brute-force bound {BRUTE_FORCE_BOUND}")
    jobs = [(p, n, r) for p in all_permutations(n)]
    workers = worker_cap(workers)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as ex:
            chunks = list(ex.map(_scan, jobs))
    else:
        chunks = [_scan(j) for j in jobs]
    elements = tuple(t for chunk in chunks for t in chunk)
    return StabilizerResult(n, r, elements, _identify(n, r, elements))


def _identify(n: int, r: int, elements) -> Union[DiagonalSym, FullSym2Power, TrivialGroup, Unrecognized]:
    if n == 1:
        return TrivialGroup() if len(elements) == 1 else Unrecognized(len(elements))
    if n == 2:
        return FullSym2Power(r) if len(elements) == 2**r else Unrecognized(len(elements))
    diagonal = {tuple([p] * r) for p in all_permutations(n)}
    if set(elements) == diagonal:
        return DiagonalSym(n)
    return Unrecognized(len(elements))
