"""Exact polyhedral cones in a divisor lattice and a curve lattice.

The two lattices are tied together by an integer intersection matrix
``pairing[i][j] = divisor_basis[i] . curve_basis[j]``.  Cones are given by
generators; facets are recovered by brute-force enumeration of active
constraint sets, which is exact and fast enough at rank <= 6.

Presets:

``P13``
    P^1[3], seen as the blow-up of P^3 along three skew lines.  Divisors
    ``(H, E1, E2, E3)``, curves ``(L, R1, R2, R3)``.
``DP6``
    The degree six del Pezzo surface, the blow-up of P^2 at three points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .exact import determinant, kernel, primitive, rank, solve_exact, transpose

MAX_RANK = 6
DIVISOR = "divisor"
CURVE = "curve"


def _other(lattice: str) -> str:
    return CURVE if lattice == DIVISOR else DIVISOR


@dataclass(frozen=True)
class PairedLattices:
    divisor_basis: tuple[str, ...]
    curve_basis: tuple[str, ...]
    pairing: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairing", tuple(tuple(int(v) for v in row) for row in self.pairing))
        k = len(self.divisor_basis)
        if len(self.curve_basis) != k or len(self.pairing) != k or any(len(r) != k for r in self.pairing):
            raise ValueError("pairing must be square and match both bases")
        if determinant(self.pairing) == 0:
            raise ValueError("degenerate pairing")

    @property
    def rank(self) -> int:
        return len(self.divisor_basis)

    def pair(self, divisor: Sequence, curve: Sequence):
        """Intersection number of a divisor class with a curve class."""
        return sum(d * self.pairing[i][j] * c for i, d in enumerate(divisor) for j, c in enumerate(curve) if d and c)

    def functional(self, v: Sequence, lattice: str) -> tuple:
        """Coefficients of ``x -> <v, x>`` on the opposite lattice, in its basis."""
        if lattice == CURVE:
            return tuple(sum(self.pairing[i][j] * v[j] for j in range(self.rank)) for i in range(self.rank))
        return tuple(sum(v[i] * self.pairing[i][j] for i in range(self.rank)) for j in range(self.rank))

    def class_from_functional(self, w: Sequence, lattice: str) -> tuple[int, ...]:
        """Primitive class in ``lattice`` inducing the functional ``w`` (up to positive scale)."""
        P = self.pairing if lattice == CURVE else transpose(self.pairing)
        sol = solve_exact(P, w)
        return primitive(sol.x)


@dataclass(frozen=True)
class NumericalClass:
    lattice: str
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if self.lattice not in (DIVISOR, CURVE):
            raise ValueError(f"unknown lattice {self.lattice!r}")

    def __add__(self, other: "NumericalClass"):
        if other.lattice != self.lattice:
            raise ValueError("adding classes from different lattices")
        return NumericalClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "NumericalClass"):
        return self + (-1) * other

    def __rmul__(self, k: int):
        return NumericalClass(self.lattice, tuple(k * a for a in self.coords))

    def __neg__(self):
        return (-1) * self


def _normalize_generators(gens) -> tuple[tuple[int, ...], ...]:
    out = []
    seen = set()
    for g in gens:
        coords = g.coords if isinstance(g, NumericalClass) else g
        p = primitive(coords)
        if not any(p) or p in seen:
            continue
        seen.add(p)
        out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class RationalCone:
    """Cone generated by primitive integer vectors (direction preserved)."""

    lattice: str
    generators: tuple[tuple[int, ...], ...]
    dim: int = field(default=0)

    def __post_init__(self):
        gens = _normalize_generators(self.generators)
        object.__setattr__(self, "generators", gens)
        if gens:
            d = len(gens[0])
            if any(len(g) != d for g in gens):
                raise ValueError("generators of different lengths")
            if self.dim and self.dim != d:
                raise ValueError("dim does not match generators")
            object.__setattr__(self, "dim", d)
        if self.dim > MAX_RANK:
            raise ValueError(f"cones of rank above {MAX_RANK} are not supported")

    @classmethod
    def of(cls, lattice: str, gens, dim: int = 0) -> "RationalCone":
        return cls(lattice, tuple(gens), dim)

    def classes(self) -> list[NumericalClass]:
        return [NumericalClass(self.lattice, g) for g in self.generators]

    def to_json(self) -> dict:
        return {"lattice": self.lattice, "generators": [list(g) for g in sorted(self.generators)]}


# -- halfspace to ray conversion ---------------------------------------------


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def halfspace_generators(normals: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    """Generators of ``{x : <a, x> >= 0 for all a in normals}``.

    Returns the extreme rays of the pointed part followed by ``+-`` a basis
    of the lineality space.
    """
    if dim > MAX_RANK:
        raise ValueError(f"cones of rank above {MAX_RANK} are not supported")
    A = [list(a) for a in normals if any(a)]
    lineality = kernel(A, ncols=dim) if A else kernel([], ncols=dim)
    lin = [primitive(v) for v in lineality]
    m = dim - len(lin)
    rays: list[tuple[int, ...]] = []
    if m > 0:
        seen = set()
        for active in combinations(range(len(A)), m - 1):
            system = [A[i] for i in active] + [list(v) for v in lin]
            if system and rank(system) != dim - 1:
                continue
            (v,) = kernel(system, ncols=dim) if system else kernel([], ncols=dim)
            vals = [_dot(a, v) for a in A]
            if all(x >= 0 for x in vals):
                r = primitive(v)
            elif all(x <= 0 for x in vals):
                r = primitive([-x for x in v])
            else:
                continue
            if r not in seen:
                seen.add(r)
                rays.append(r)
    for v in lin:
        rays.append(v)
        rays.append(tuple(-x for x in v))
    return rays


def _raw_dual(gens: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    return halfspace_generators(gens, dim)


# -- membership ---------------------------------------------------------------


@dataclass(frozen=True)
class Yes:
    """``v = sum coefficients[k] * generators[k]`` with non-negative coefficients."""

    coefficients: tuple[Fraction, ...]


@dataclass(frozen=True)
class No:
    """``functional`` pairs >= 0 with every generator and < 0 with ``v``.

    ``functional`` is in raw dot-product coordinates; ``dual_class`` is the
    same functional as a class of the opposite lattice when lattices were
    supplied.
    """

    functional: tuple[int, ...]
    dual_class: tuple[int, ...] | None = None


def _coords(v):
    return tuple(v.coords) if isinstance(v, NumericalClass) else tuple(v)


def contains(c: RationalCone, v, lattices: PairedLattices | None = None) -> Yes | No:
    """Exact membership with a certificate either way.

    Looks for ``v`` in the cone of a linearly independent subset of the
    generators (Caratheodory), smallest subsets first.
    """
    if isinstance(v, NumericalClass) and v.lattice != c.lattice:
        raise ValueError("class and cone live in different lattices")
    v = _coords(v)
    gens = c.generators
    dim = c.dim or len(v)
    if not any(v):
        return Yes(tuple(Fraction(0) for _ in gens))
    for k in range(1, min(len(gens), dim) + 1):
        for idx in combinations(range(len(gens)), k):
            cols = [gens[i] for i in idx]
            M = transpose(cols)
            sol = solve_exact(M, v)
            if not hasattr(sol, "x"):
                continue
            if all(x >= 0 for x in sol.x):
                coeffs = [Fraction(0)] * len(gens)
                for i, x in zip(idx, sol.x):
                    coeffs[i] = x
                return Yes(tuple(coeffs))
    for w in _raw_dual(gens, dim):
        if _dot(w, v) < 0:
            dual_class = lattices.class_from_functional(w, c.lattice) if lattices else None
            return No(w, dual_class)
    raise AssertionError("no certificate found")  # unreachable for exact input


def extremal_rays(c: RationalCone) -> RationalCone:
    """Drop every generator lying in the cone spanned by the remaining ones."""
    keep = list(c.generators)
    i = 0
    while i < len(keep):
        rest = keep[:i] + keep[i + 1 :]
        if rest and isinstance(contains(RationalCone(c.lattice, tuple(rest), c.dim), keep[i]), Yes):
            keep.pop(i)
        else:
            i += 1
    return RationalCone(c.lattice, tuple(keep), c.dim)


def dual_cone(c: RationalCone, L: PairedLattices) -> RationalCone:
    """Classes of the opposite lattice pairing non-negatively with all of ``c``."""
    if c.dim and c.dim != L.rank:
        raise ValueError("cone rank does not match the lattices")
    normals = [L.functional(g, c.lattice) for g in c.generators]
    gens = halfspace_generators(normals, L.rank)
    return extremal_rays(RationalCone(_other(c.lattice), tuple(gens), L.rank))


def same_cone(a: RationalCone, b: RationalCone) -> bool:
    if a.lattice != b.lattice:
        return False
    return all(isinstance(contains(b, g), Yes) for g in a.generators) and all(
        isinstance(contains(a, g), Yes) for g in b.generators
    )


def ray_set(c: RationalCone) -> frozenset[tuple[int, ...]]:
    return frozenset(extremal_rays(c).generators)


# -- presets ------------------------------------------------------------------


@dataclass(frozen=True)
class ModelPreset:
    name: str
    lattices: PairedLattices
    cones: dict
    classes: dict
    pencils: tuple[tuple[int, ...], ...] = ()

    def cone(self, key: str) -> RationalCone:
        return self.cones[key]


def _unit(k, i):
    return tuple(int(j == i) for j in range(k))


def preset(model: str) -> ModelPreset:
    model = model.upper()
    diag = ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1))
    if model == "P13":
        L = PairedLattices(("H", "E1", "E2", "E3"), ("L", "R1", "R2", "R3"), diag)
        line_minus = (1, -1, -1, -1)
        R = [_unit(4, i) for i in (1, 2, 3)]
        # sigma_i: H.sigma_i = 1, E_i.sigma_i = -1, E_j.sigma_i = 0  =>  L + R_i
        sigma = [tuple(a + b for a, b in zip(_unit(4, 0), r)) for r in R]
        mori = RationalCone(CURVE, (line_minus, *R, *sigma), 4)
        H = _unit(4, 0)
        E = [_unit(4, i) for i in (1, 2, 3)]
        eff = RationalCone(
            DIVISOR,
            ((2, -1, -1, -1), *[tuple(h - e for h, e in zip(H, Ei)) for Ei in E], *E),
            4,
        )
        classes = {
            "H": NumericalClass(DIVISOR, H),
            **{f"E{i}": NumericalClass(DIVISOR, E[i - 1]) for i in (1, 2, 3)},
            "L": NumericalClass(CURVE, _unit(4, 0)),
            **{f"R{i}": NumericalClass(CURVE, R[i - 1]) for i in (1, 2, 3)},
            **{f"sigma{i}": NumericalClass(CURVE, sigma[i - 1]) for i in (1, 2, 3)},
            "K": NumericalClass(DIVISOR, (-4, 1, 1, 1)),
            "-K": NumericalClass(DIVISOR, (4, -1, -1, -1)),
        }
        cones = {"mori": mori, "mori_minimal": extremal_rays(mori), "effective": eff}
        cones["nef"] = dual_cone(mori, L)
        return ModelPreset("P13", L, cones, classes)
    if model == "DP6":
        L = PairedLattices(("H", "E1", "E2", "E3"), ("H", "E1", "E2", "E3"), diag)
        E = [_unit(4, i) for i in (1, 2, 3)]
        lines = [(1, *(-int(k in (i, j)) for k in (1, 2, 3))) for i, j in ((1, 2), (1, 3), (2, 3))]
        mori = RationalCone(CURVE, (*E, *lines), 4)
        classes = {
            "H": NumericalClass(DIVISOR, _unit(4, 0)),
            **{f"E{i}": NumericalClass(DIVISOR, E[i - 1]) for i in (1, 2, 3)},
            "K": NumericalClass(DIVISOR, (-3, 1, 1, 1)),
            "-K": NumericalClass(DIVISOR, (3, -1, -1, -1)),
        }
        pencils = tuple((1, *(-int(k == i) for k in (1, 2, 3))) for i in (1, 2, 3))
        cones = {
            "mori": mori,
            "mori_minimal": extremal_rays(mori),
            "effective": RationalCone(DIVISOR, mori.generators, 4),
        }
        cones["nef"] = dual_cone(mori, L)
        return ModelPreset("DP6", L, cones, classes, pencils)
    raise ValueError(f"unknown model {model!r}; expected P13 or DP6")


def self_intersection(L: PairedLattices, d: Sequence[int]) -> int:
    """``d . d`` for a surface whose divisor and curve bases coincide."""
    if L.divisor_basis != L.curve_basis:
        raise ValueError("self-intersection needs identical divisor and curve bases")
    return L.pair(d, d)


def nef_isotropic_classes(p: ModelPreset, box: int = 5) -> list[tuple[int, ...]]:
    """Primitive nef classes with ``D^2 = 0`` and coordinates in ``[-box, box]``."""
    L = p.lattices
    mori = p.cones["mori"].generators
    out = []
    for d in product(range(-box, box + 1), repeat=L.rank):
        if not any(d) or primitive(d) != d:
            continue
        if all(L.pair(d, c) >= 0 for c in mori) and self_intersection(L, d) == 0:
            out.append(d)
    return out


# -- P^1[3] Mori decomposition and Fano test ---------------------------------


@dataclass(frozen=True)
class MoriDecomposition:
    """``d (L - R1 - R2 - R3) + sum (d - m_i) R_i``."""

    line_coefficient: int
    ruling_coefficients: tuple[int, int, int]

    def as_vector(self) -> tuple[int, ...]:
        return (self.line_coefficient, *self.ruling_coefficients)


@dataclass(frozen=True)
class Rejected:
    """``d < m_i``: the curve would contain the line ``L_i`` (Bezout)."""

    index: int


def mori_decompose_p13(d: int, m: Sequence[int]) -> MoriDecomposition | Rejected:
    """Decompose ``d L - m_1 R_1 - m_2 R_2 - m_3 R_3`` in the Mori generators of P^1[3]."""
    if d <= 0:
        raise ValueError("degree must be positive for a curve not inside an exceptional divisor")
    if len(m) != 3:
        raise ValueError("need three multiplicities")
    for i, mi in enumerate(m, start=1):
        if d - mi < 0:
            return Rejected(i)
    return MoriDecomposition(d, tuple(d - mi for mi in m))


def curve_class_p13(d: int, m: Sequence[int]) -> tuple[int, ...]:
    return (d, *(-mi for mi in m))


@dataclass(frozen=True)
class FanoReport:
    is_fano: bool
    table: tuple[tuple[tuple[int, ...], int], ...]


def fano_test(L: PairedLattices, anticanonical, mori: RationalCone) -> FanoReport:
    """``-K`` is positive on every extremal ray of the Mori cone."""
    ak = _coords(anticanonical)
    if isinstance(anticanonical, NumericalClass) and anticanonical.lattice != DIVISOR:
        raise ValueError("anticanonical class must be a divisor")
    rays = extremal_rays(mori).generators
    table = tuple((r, L.pair(ak, r)) for r in rays)
    return FanoReport(all(v > 0 for _, v in table), table)
