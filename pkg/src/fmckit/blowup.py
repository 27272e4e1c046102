"""Diagonal blow-up schedules for X[n], Picard numbers and discrepancies.

Two orders of blow-ups produce X[n] from X^n:

* the symmetric order blows up all diagonals at once per round, the
  small diagonal first and the big diagonals last;
* the recursive order builds X[n] from X[n-1] x X, so each stage k adds
  the centers lying over the diagonals that contain the index k.

Both orders have ``2**n - n - 1`` centers, one per subset ``S`` with
``|S| >= 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .exact import IndexSubset, subsets

PICARD_ASSUMPTION = "rho(X^n) is taken to be n * rho(X)"


@dataclass(frozen=True)
class DiagonalCenter:
    """The diagonal where the points indexed by ``subset`` coincide."""

    subset: IndexSubset
    dim_base: int = 1

    def __post_init__(self):
        if len(self.subset) < 2:
            raise ValueError("a diagonal needs at least two indices")

    @property
    def dimension(self) -> int:
        return (self.subset.ambient - len(self.subset) + 1) * self.dim_base

    @property
    def codimension(self) -> int:
        return (len(self.subset) - 1) * self.dim_base


@dataclass(frozen=True)
class StageCenter:
    """A center of the recursive construction at stage ``stage``.

    ``base`` is the subset ``T`` of ``{1..stage-1}`` whose points are
    required to coincide with the new point; the center lies over the
    diagonal indexed by ``T + {stage}``.  ``family`` is one of

    * ``"full"``: the locus over the smallest diagonal of X[stage-1] x X,
    * ``"strict"``: strict transforms for ``2 <= |T| <= stage-2``,
    * ``"point"``: the graphs of the ``stage-1`` projections (``|T| = 1``).
    """

    stage: int
    family: str
    base: tuple[int, ...]

    @property
    def diagonal(self) -> IndexSubset:
        return IndexSubset.of(self.stage, (*self.base, self.stage))

    @property
    def label(self) -> str:
        idx = ",".join(map(str, self.base))
        if self.family == "point":
            return f"X[{self.stage - 1}]~_{idx}"
        return f"E~_{{{idx}}}"


@dataclass(frozen=True)
class BlowupSchedule:
    n: int
    style: str
    rounds: tuple[tuple, ...] = field(default=())

    @property
    def centers(self) -> list:
        return [c for r in self.rounds for c in r]

    def __len__(self) -> int:
        return sum(len(r) for r in self.rounds)

    def diagonals(self) -> list[IndexSubset]:
        """The diagonal of X^n lying under each center, in schedule order."""
        out = []
        for c in self.centers:
            d = c.subset if isinstance(c, DiagonalCenter) else c.diagonal
            out.append(IndexSubset(self.n, d.members))
        return out

    def to_json(self) -> dict:
        doc = {
            "n": self.n,
            "style": self.style,
            "rounds": [
                [list(c.subset.members if isinstance(c, DiagonalCenter) else c.diagonal.members) for c in r]
                for r in self.rounds
            ],
        }
        if self.style == "recursive":
            doc["labels"] = [[f"stage {c.stage}: {c.label}" for c in r] for r in self.rounds]
        return doc


def symmetric_schedule(n: int, dim_base: int = 1) -> BlowupSchedule:
    if n < 1:
        raise ValueError("n must be at least 1")
    rounds = tuple(
        tuple(DiagonalCenter(s, dim_base) for s in subsets(n, (k, k)))
        for k in range(n, 1, -1)
    )
    return BlowupSchedule(n, "symmetric", rounds)


def _stage_rounds(k: int) -> list[tuple[StageCenter, ...]]:
    prev = k - 1
    rounds = []
    for size in range(prev, 0, -1):
        if size == 1:
            family = "point"
        elif size == prev:
            family = "full"
        else:
            family = "strict"
        rounds.append(tuple(StageCenter(k, family, s.members) for s in subsets(prev, (size, size))))
    return rounds


def recursive_schedule(n: int) -> BlowupSchedule:
    if n < 1:
        raise ValueError("n must be at least 1")
    rounds = []
    for k in range(2, n + 1):
        rounds.extend(_stage_rounds(k))
    return BlowupSchedule(n, "recursive", tuple(rounds))


def stage_increment(k: int) -> int:
    """Number of centers added when passing from X[k-1] x X to X[k]."""
    return sum(len(r) for r in _stage_rounds(k))


def picard_number(rho_base: int, dim_base: int, n: int) -> int:
    """Picard number of X[n], assuming ``rho(X^n) = n * rho(X)``.

    For curves the ``C(n, 2)`` centers of codimension one do not change
    the variety and are not counted.
    """
    if rho_base < 1 or dim_base < 1 or n < 1:
        raise ValueError("rho_base, dim_base and n must be positive")
    blowups = 2**n - n - 1
    if dim_base == 1:
        blowups -= comb(n, 2)
    return n * rho_base + blowups


@dataclass(frozen=True)
class Discrepancy:
    size: int
    coefficient: int
    divisorial: bool


def canonical_discrepancies(dim_base: int, n: int) -> dict[int, Discrepancy]:
    """Coefficient of ``E_S`` in ``K_{X[n]} - g_n^* K_{X^n}``, keyed by ``|S|``.

    A center of codimension one (curves, ``|S| = 2``) is flagged
    ``divisorial``: blowing it up is an isomorphism and it contributes 0.
    """
    if dim_base < 1 or n < 2:
        raise ValueError("need dim_base >= 1 and n >= 2")
    table = {}
    for s in range(2, n + 1):
        codim = (s - 1) * dim_base
        table[s] = Discrepancy(s, codim - 1, codim == 1)
    return table
