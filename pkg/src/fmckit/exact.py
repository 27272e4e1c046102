"""Exact rationals, integer linear algebra, index subsets and permutations.

Everything here is exact: coefficients are :class:`fractions.Fraction` or
plain Python integers, so overflow and rounding cannot occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce, total_ordering
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

Rational = Fraction

_OPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "−": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "×": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "÷": lambda a, b: a / b,
}


def rat_arith(a, b, op: str) -> Fraction:
    """Apply ``op`` to two rationals; ``ZeroDivisionError`` on division by 0."""
    try:
        f = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return f(Fraction(a), Fraction(b))


# -- linear algebra -----------------------------------------------------------


@dataclass(frozen=True)
class UniqueSolution:
    x: tuple[Fraction, ...]


@dataclass(frozen=True)
class ParametricFamily:
    particular: tuple[Fraction, ...]
    kernel: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class NoSolution:
    pass


def _as_matrix(M) -> list[list[Fraction]]:
    rows = [[Fraction(v) for v in row] for row in M]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    A = _as_matrix(M)
    if not A:
        return A, []
    nrows, ncols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [vi - f * vr for vi, vr in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, pivots


def rank(M) -> int:
    return len(rref(M)[1])


def kernel(M, ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space of ``M``.

    ``ncols`` is needed when ``M`` has no rows.
    """
    A = _as_matrix(M)
    if not A:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    ncols = len(A[0])
    R, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def determinant(M) -> Fraction:
    A = _as_matrix(M)
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [vi - f * vc for vi, vc in zip(A[i], A[c])]
    return det


def solve_exact(M, b) -> UniqueSolution | ParametricFamily | NoSolution:
    """Solve ``M x = b`` by exact Gauss-Jordan elimination."""
    A = _as_matrix(M)
    b = [Fraction(v) for v in b]
    if len(A) != len(b):
        raise ValueError(f"dimension mismatch: {len(A)} rows but {len(b)} right-hand entries")
    if not A:
        raise ValueError("empty system")
    ncols = len(A[0])
    R, pivots = rref([row + [bi] for row, bi in zip(A, b)])
    if ncols in pivots:
        return NoSolution()
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    if len(pivots) == ncols:
        return UniqueSolution(tuple(x))
    return ParametricFamily(tuple(x), tuple(kernel(A)))


def mat_vec(M, v) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def transpose(M) -> list[list]:
    return [list(col) for col in zip(*M)]


def primitive(v: Iterable) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = [Fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(i) for i in ints), 0)
    if g == 0:
        return tuple(ints)
    return tuple(i // g for i in ints)


# -- subsets ------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class IndexSubset:
    """A subset of ``{1..ambient}`` stored as a sorted tuple."""

    ambient: int
    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(self.members)
        object.__setattr__(self, "members", m)
        if self.ambient < 0:
            raise ValueError("ambient must be non-negative")
        if list(m) != sorted(set(m)):
            raise ValueError(f"members must be strictly increasing: {m}")
        if m and (m[0] < 1 or m[-1] > self.ambient):
            raise ValueError(f"members {m} outside 1..{self.ambient}")

    @classmethod
    def of(cls, ambient: int, members: Iterable[int]) -> "IndexSubset":
        return cls(ambient, tuple(sorted(set(members))))

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i) -> bool:
        return i in self.members

    def sort_key(self):
        return (len(self.members), self.members)

    def __lt__(self, other: "IndexSubset"):
        return self.sort_key() < other.sort_key()

    def complement(self) -> "IndexSubset":
        return IndexSubset(self.ambient, tuple(i for i in range(1, self.ambient + 1) if i not in self.members))

    def __repr__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def subsets(n: int, size_range: tuple[int, int]) -> list[IndexSubset]:
    """All subsets of ``{1..n}`` with size in ``[lo, hi]``, size-major then lexicographic."""
    lo, hi = size_range
    if not 0 <= lo <= hi <= n:
        raise ValueError(f"need 0 <= lo <= hi <= n, got lo={lo}, hi={hi}, n={n}")
    return [IndexSubset(n, c) for k in range(lo, hi + 1) for c in combinations(range(1, n + 1), k)]


# -- permutations -------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..n}``; ``images[i-1]`` is the image of ``i``.

    Composition follows function composition: ``(s * t)(i) == s(t(i))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation of 1..{len(imgs)}: {imgs}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[j - 1] = j, i
        return cls(tuple(imgs))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self(other(i)) for i in range(1, self.degree + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.degree + 1))


def all_permutations(n: int) -> Iterator[Permutation]:
    from itertools import permutations

    for p in permutations(range(1, n + 1)):
        yield Permutation(p)


def as_fraction_vector(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)
