"""The Chow ring of (P^1)^n: Z[h_1..h_n] / (h_1^2, ..., h_n^2).

A class is a table from square-free monomials (sorted index tuples; the
empty tuple is the unit) to integer coefficients.  Integration takes the
coefficient of ``h_1 ... h_n`` (the point class, normalized to 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exact import IndexSubset


class SquareFreeClass:
    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.n = n
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if list(mono) != sorted(set(mono)):
                raise ValueError(f"monomial {mono} is not square-free and sorted")
            if mono and (mono[0] < 1 or mono[-1] > n):
                raise ValueError(f"monomial {mono} outside 1..{n}")
            if c:
                clean[mono] = clean.get(mono, 0) + int(c)
        self._terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def unit(cls, n: int) -> "SquareFreeClass":
        return cls(n, {(): 1})

    @classmethod
    def h(cls, n: int, i: int) -> "SquareFreeClass":
        return cls(n, {(i,): 1})

    @classmethod
    def divisor(cls, a: Sequence[int]) -> "SquareFreeClass":
        """``a_1 h_1 + ... + a_n h_n``."""
        return cls(len(a), {(i,): ai for i, ai in enumerate(a, start=1)})

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._terms)

    def coefficient(self, mono) -> int:
        if isinstance(mono, IndexSubset):
            mono = mono.members
        return self._terms.get(tuple(mono), 0)

    def degree_part(self, k: int) -> "SquareFreeClass":
        return SquareFreeClass(self.n, {m: c for m, c in self._terms.items() if len(m) == k})

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "SquareFreeClass"):
        if not isinstance(other, SquareFreeClass):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"classes live on (P^1)^{self.n} and (P^1)^{other.n}")

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return SquareFreeClass(self.n, out)

    def __neg__(self):
        return SquareFreeClass(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return SquareFreeClass(self.n, {m: other * c for m, c in self._terms.items()})
        if self._check(other) is NotImplemented:
            return NotImplemented
        return sf_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SquareFreeClass.unit(self.n)
        for _ in range(k):
            out = sf_mul(out, self)
        return out

    def __eq__(self, other):
        return isinstance(other, SquareFreeClass) and self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, key=lambda m: (len(m), m)):
            mono = "*".join(f"h{i}" for i in m) or "1"
            parts.append(f"{self._terms[m]}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"subset": list(m), "coef": self._terms[m]}
                for m in sorted(self._terms, key=lambda m: (len(m), m))
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SquareFreeClass":
        return cls(int(doc["n"]), {tuple(t["subset"]): int(t["coef"]) for t in doc["terms"]})


def sf_mul(p: SquareFreeClass, q: SquareFreeClass) -> SquareFreeClass:
    if p.n != q.n:
        raise ValueError(f"classes live on (P^1)^{p.n} and (P^1)^{q.n}")
    out: dict[tuple[int, ...], int] = {}
    for m1, c1 in p._terms.items():
        s1 = set(m1)
        for m2, c2 in q._terms.items():
            if s1.intersection(m2):
                continue
            m = tuple(sorted(s1.union(m2)))
            out[m] = out.get(m, 0) + c1 * c2
    return SquareFreeClass(p.n, out)


def sf_integrate(p: SquareFreeClass) -> int:
    return p.coefficient(tuple(range(1, p.n + 1)))


def is_nef_product(a: Sequence[int]) -> bool:
    """``sum a_i h_i`` is nef iff it meets every curve class ``l_i`` non-negatively."""
    return all(ai >= 0 for ai in a)


@dataclass(frozen=True)
class FactorsThrough:
    """The pencil is pulled back from the ``j``-th factor by a degree ``degree`` map."""

    j: int
    degree: int


@dataclass(frozen=True)
class NotAPencil:
    reason: str  # "not-nef" | "zero-class" | "square-nonzero"


def pencil_classify_product(a: Sequence[int]) -> FactorsThrough | NotAPencil:
    """Decide whether ``sum a_i h_i`` can be the class of a map (P^1)^n -> P^1.

    Two distinct fibres of such a map are disjoint, so the class squares to
    zero; with ``h_i^2 = 0`` this leaves a single non-zero coefficient.
    """
    if not is_nef_product(a):
        return NotAPencil("not-nef")
    if not any(a):
        return NotAPencil("zero-class")
    D = SquareFreeClass.divisor(a)
    if not sf_mul(D, D).degree_part(2).is_zero():
        return NotAPencil("square-nonzero")
    (j,) = [i for i, ai in enumerate(a, start=1) if ai > 0]
    return FactorsThrough(j, a[j - 1])
