"""Morphisms out of P^1[n] and C[n], described by their factorization data.

A morphism is never built as a map of point sets.  Instead it is named by a
descriptor:

* ``Ev(i)``: the evaluation at the i-th marking, P^1[n] -> P^1;
* ``ForgetToM04(J)``: forget the map, then every marking outside the
  4-set ``J``, landing on M_{0,4} = P^1;
* ``ForgetfulDescriptor(n, I)``: forget the markings in ``I``, landing on
  P^1[n - |I|].

Pencils (morphisms to P^1) are detected from the two pieces of their
Picard class: the part pulled back from M_{0,n+1} and the coefficients
``a_i`` on the pulled back point classes ``H_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence, Union

from .exact import IndexSubset, subsets


@dataclass(frozen=True, order=True)
class Ev:
    i: int

    def check(self, n: int) -> None:
        if not 1 <= self.i <= n:
            raise ValueError(f"ev_{self.i} is not defined on P^1[{n}]")

    def to_json(self) -> dict:
        return {"ev": self.i}

    def __str__(self):
        return f"ev_{self.i}"


@dataclass(frozen=True, order=True)
class ForgetToM04:
    """Forget the map and keep only the markings in ``J`` (``|J| = 4``)."""

    J: tuple[int, int, int, int]

    def __post_init__(self):
        J = tuple(sorted(set(self.J)))
        if len(J) != 4:
            raise ValueError("ForgetToM04 needs four distinct surviving labels")
        object.__setattr__(self, "J", J)

    def check(self, n: int) -> None:
        if n < 4 or self.J[0] < 1 or self.J[-1] > n:
            raise ValueError(f"labels {self.J} do not survive on P^1[{n}]")

    def forgotten(self, n: int) -> IndexSubset:
        """The same morphism indexed by the ``n - 4`` forgotten labels."""
        return IndexSubset(n, tuple(i for i in range(1, n + 1) if i not in self.J))

    @classmethod
    def from_forgotten(cls, n: int, forgotten: Sequence[int]) -> "ForgetToM04":
        return cls(tuple(i for i in range(1, n + 1) if i not in set(forgotten)))

    def to_json(self) -> dict:
        return {"m04": list(self.J)}

    def __str__(self):
        return "rho_{" + ",".join(map(str, self.J)) + "}"


PencilDescriptor = Union[Ev, ForgetToM04]


@dataclass(frozen=True)
class ForgetfulDescriptor:
    """``pi_I``: P^1[n] -> P^1[r] forgetting the labels in ``forgotten``."""

    n: int
    forgotten: IndexSubset

    def __post_init__(self):
        f = self.forgotten
        if not isinstance(f, IndexSubset):
            f = IndexSubset.of(self.n, f)
            object.__setattr__(self, "forgotten", f)
        if f.ambient != self.n:
            raise ValueError("forgotten labels live in a different ambient set")
        if not 1 <= self.r < self.n:
            raise ValueError(f"target P^1[{self.r}] needs 1 <= r < n")

    @property
    def r(self) -> int:
        return self.n - len(self.forgotten)

    @property
    def surviving(self) -> tuple[int, ...]:
        return self.forgotten.complement().members

    def normal_form(self):
        """A forgetful map onto P^1 = P^1[1] is an evaluation."""
        if self.r == 1:
            return Ev(self.surviving[0])
        return self

    def to_json(self) -> dict:
        return {"forget": list(self.forgotten.members)}

    def __str__(self):
        return "pi_{" + ",".join(map(str, self.forgotten.members)) + "}"


def descriptor_from_json(doc: dict, n: int):
    if "ev" in doc:
        d = Ev(int(doc["ev"]))
    elif "m04" in doc:
        d = ForgetToM04(tuple(int(j) for j in doc["m04"]))
    elif "forget" in doc:
        return ForgetfulDescriptor(n, IndexSubset.of(n, (int(i) for i in doc["forget"])))
    else:
        raise ValueError(f"unrecognized descriptor {doc!r}")
    d.check(n)
    return d


# -- pencils ------------------------------------------------------------------


def modular_pencils(n: int) -> list[PencilDescriptor]:
    """Evaluations, then one forget-to-M_{0,4} map per 4-set of labels.

    ``pi`` forgetting all labels but ``i`` is the same pencil as ``ev_i`` and
    is listed once, as ``Ev(i)``.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    out: list[PencilDescriptor] = [Ev(i) for i in range(1, n + 1)]
    out.extend(ForgetToM04(J) for J in combinations(range(1, n + 1), 4))
    assert len(out) == n + comb(n, 4)
    return out


@dataclass(frozen=True)
class PicSignature:
    """``D = D_0 + a_1 H_1 + ... + a_n H_n``.

    ``m_part`` is ``None`` when ``D_0 = 0`` and otherwise the surviving
    4-set ``J`` of the forgetful class it is pulled back from.
    """

    m_part: tuple[int, ...] | None
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if self.m_part is not None:
            object.__setattr__(self, "m_part", tuple(sorted(self.m_part)))

    @property
    def n(self) -> int:
        return len(self.a)


def pencil_signature(p, n: int) -> PicSignature:
    if isinstance(p, ForgetfulDescriptor):
        p = p.normal_form()
        if not isinstance(p, Ev):
            raise ValueError("only forgetful maps onto P^1 are pencils")
    p.check(n)
    if isinstance(p, Ev):
        return PicSignature(None, tuple(int(j == p.i) for j in range(1, n + 1)))
    return PicSignature(p.J, (0,) * n)


@dataclass(frozen=True)
class NonModular:
    reason: str  # mixed-parts | multiple-evaluations | zero | not-nef


def classify_pencil(sig: PicSignature) -> PencilDescriptor | NonModular:
    """Inverse of :func:`pencil_signature`, up to positive scaling of ``a``."""
    support = [i for i, x in enumerate(sig.a, start=1) if x]
    if sig.m_part is None and not support:
        return NonModular("zero")
    if sig.m_part is not None and support:
        return NonModular("mixed-parts")
    if sig.m_part is not None:
        return ForgetToM04(sig.m_part)
    if any(x < 0 for x in sig.a):
        return NonModular("not-nef")
    if len(support) > 1:
        return NonModular("multiple-evaluations")
    return Ev(support[0])


def signature_multiplicity(sig: PicSignature) -> int:
    """Positive scale relating ``sig`` to the signature of its pencil (1 for M_{0,4} parts)."""
    p = classify_pencil(sig)
    if isinstance(p, NonModular):
        raise ValueError(f"not a modular pencil: {p.reason}")
    return sig.a[p.i - 1] if isinstance(p, Ev) else 1


# -- preimages of the small diagonal ------------------------------------------


@dataclass(frozen=True)
class Witness:
    """A stratum of codimension two inside the preimage of the small diagonal.

    ``kind`` names the construction ("L1", "L2", "L3"); ``stratum`` lists the
    contracted components and the labels they carry.
    """

    kind: str
    codimension: int
    stratum: tuple = field(default=())
    note: str = ""


@dataclass(frozen=True)
class Admissible:
    pass


@dataclass(frozen=True)
class Obstructed:
    witness: Witness | None = None
    detail: str = ""


@dataclass(frozen=True)
class PreimageProfile:
    components: tuple[tuple[object, int], ...]
    verdict: Admissible | Obstructed


def _witness_L1(n: int, j: ForgetToM04, evs: list[Ev]) -> Witness:
    a, b = (e.i for e in evs)
    return Witness(
        "L1",
        2,
        (("contracted", tuple(range(1, n + 1))),),
        f"inside E_{{1..{n}}}: all markings on one contracted twig; the cross-ratio of "
        f"{j.J} equals the common value of ev_{a} and ev_{b}",
    )


def _witness_L2(n: int, js: list[ForgetToM04], ev: Ev) -> Witness:
    I, J = js
    low = (I.J[2], I.J[3], J.J[2], J.J[3])
    twig = tuple(sorted(set(low) - {ev.i}))
    return Witness(
        "L2",
        2,
        (("contracted", twig), ("framed", tuple(sorted(set(range(1, n + 1)) - set(twig))))),
        f"inside the boundary divisor with a contracted twig; ev_{ev.i} is pinned to the common "
        f"image of {I} and {J}",
    )


def _witness_L3(n: int, js: list[ForgetToM04]) -> Witness:
    sets = [set(j.J) for j in js]
    private = []
    for k, s in enumerate(sets):
        others = set().union(*(t for m, t in enumerate(sets) if m != k))
        extra = sorted(s - others)
        private.append(extra[0] if extra else None)
    return Witness(
        "L3",
        2,
        (("components", 3), ("private_labels", tuple(private))),
        "three-component stratum on which the three forgetful images agree",
    )


def diagonal_preimage_profile(n: int, triple: Sequence[PencilDescriptor]) -> PreimageProfile:
    """Components of ``(xi_1 x xi_2 x xi_3)^{-1}(small diagonal)`` and their codimension."""
    if n < 4:
        raise ValueError("need n >= 4")
    if len(triple) != 3:
        raise ValueError("need three pencils")
    for p in triple:
        p.check(n)
    if len(set(triple)) < 3:
        raise ValueError("degenerate: repeated pencil")
    evs = [p for p in triple if isinstance(p, Ev)]
    ms = [p for p in triple if isinstance(p, ForgetToM04)]
    if len(evs) == 3:
        base = {e.i for e in evs}
        rest = [i for i in range(1, n + 1) if i not in base]
        comps = []
        for k in range(len(rest) + 1):
            for T in combinations(rest, k):
                comps.append((IndexSubset.of(n, base | set(T)), 1))
        return PreimageProfile(tuple(comps), Admissible())
    if len(ms) == 1:
        w = _witness_L1(n, ms[0], evs)
    elif len(ms) == 2:
        w = _witness_L2(n, ms, evs[0])
    else:
        w = _witness_L3(n, ms)
    return PreimageProfile(((w, w.codimension),), Obstructed(w))


# -- forgetful factorizations -------------------------------------------------


@dataclass(frozen=True)
class FiberIntersection:
    dim: int
    meets_bound: bool


def _as_subset(n: int, S) -> IndexSubset:
    return S if isinstance(S, IndexSubset) else IndexSubset.of(n, S)


def fiber_intersection_dim(n: int, r: int, I, J) -> FiberIntersection:
    """Dimension of ``F_{I,x} cap F_{J,x}`` at a general point, against the bound ``n - r``."""
    I, J = _as_subset(n, I), _as_subset(n, J)
    if len(I) != n - r + 1 or len(J) != n - r + 1:
        raise ValueError(f"need |I| = |J| = n - r + 1 = {n - r + 1}")
    k = len(set(I.members) & set(J.members))
    return FiberIntersection(k, k >= n - r)


def factor_forgetful(n: int, r: int, I, J) -> ForgetfulDescriptor | Obstructed:
    """The common refinement of ``pi_I`` and ``pi_J`` as a forgetful map onto P^1[r]."""
    if r < 3:
        raise ValueError("need r >= 3")
    I, J = _as_subset(n, I), _as_subset(n, J)
    if I == J:
        raise ValueError("degenerate: I = J")
    fi = fiber_intersection_dim(n, r, I, J)
    if fi.dim == n - r:
        return ForgetfulDescriptor(n, IndexSubset.of(n, set(I.members) & set(J.members)))
    return Obstructed(None, f"|I cap J| = {fi.dim} but the fibers force n - r = {n - r}")


@dataclass(frozen=True)
class FactorReport:
    n: int
    factors: tuple
    targets: tuple[str, ...]
    pi_only: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "factors": [f.to_json() for f in self.factors],
            "targets": list(self.targets),
            "pi_only": self.pi_only,
        }


def _target(f) -> str:
    if isinstance(f, Ev):
        return "P1"
    if isinstance(f, ForgetToM04):
        return "M04"
    return f"P1[{f.r}]"


def factor_product(n: int, components: Sequence) -> FactorReport:
    """Normal form of a product of forgetful-type morphisms, one factor per component."""
    if not components:
        raise ValueError("empty product")
    out = []
    for c in components:
        if isinstance(c, ForgetfulDescriptor):
            if c.n != n:
                raise ValueError(f"forgetful map from P^1[{c.n}] in a product over P^1[{n}]")
            c = c.normal_form()
        else:
            c.check(n)
        out.append(c)
    pi_only = not any(isinstance(c, ForgetToM04) for c in out)
    return FactorReport(n, tuple(out), tuple(_target(c) for c in out), pi_only)


# -- curves -------------------------------------------------------------------


@dataclass(frozen=True)
class CurveProductDescriptor:
    """``C[n] -> C^n -> C^r`` followed by finite maps ``f_j`` on each factor."""

    genus: int
    n: int
    projections: tuple[int, ...]

    def to_json(self) -> dict:
        return {"genus": self.genus, "n": self.n, "projections": list(self.projections), "through": "g_n"}

    def __str__(self):
        return " x ".join(f"f_{i} o pr_{i}" for i in self.projections) + " o g_n"


@dataclass(frozen=True)
class Unsupported:
    reason: str


@dataclass(frozen=True)
class NotDominant:
    repeated: tuple[int, ...]


def factor_curve_product(genus: int, n: int, r: int, chosen: Sequence[int]):
    """Factor a dominant map ``C[n] -> C^r`` through projections of ``C^n``."""
    if genus < 0 or n < 1 or r < 1:
        raise ValueError("need genus >= 0, n >= 1, r >= 1")
    if genus == 1:
        return Unsupported("genus one: the group law A x A -> A is dominant but not a product of projections")
    chosen = tuple(int(i) for i in chosen)
    if len(chosen) != r:
        raise ValueError(f"need {r} indices, got {len(chosen)}")
    if any(not 1 <= i <= n for i in chosen):
        raise ValueError(f"indices must lie in 1..{n}")
    repeated = tuple(sorted(i for i in set(chosen) if chosen.count(i) > 1))
    if repeated:
        return NotDominant(repeated)
    return CurveProductDescriptor(genus, n, chosen)


def forgetful_maps(n: int, r: int) -> list[ForgetfulDescriptor]:
    return [ForgetfulDescriptor(n, S) for S in subsets(n, (n - r, n - r))]
