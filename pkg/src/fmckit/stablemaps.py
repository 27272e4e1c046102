"""Genus-0 degree-1 stable maps to P^1 with exact coordinates.

A point of P^1[n] is a tree of projective lines carrying n markings.  One
component (the *framed* one) maps isomorphically to the target through a
Mobius transformation; every other component is contracted to the point
where its subtree meets the framed component.

Trees are immutable.  Operations that change a tree return it in canonical
form, so two trees describe the same point iff their canonical forms are
equal.

Label convention for the symmetric action: ``act_sym(t, s)`` puts at label
``i`` whatever ``t`` had at label ``s(i)``.  With ``(s * u)(i) = s(u(i))``
this is a right action::

    act_sym(act_sym(t, s), u) == act_sym(t, s * u)
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

from .exact import IndexSubset, Permutation, subsets

# -- points and Mobius maps ---------------------------------------------------


@dataclass(frozen=True, order=True)
class ProjPoint:
    """``(p : q)`` with ``q > 0`` and ``gcd(p, q) = 1``, or ``(1 : 0)``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p == 0 and q == 0:
            raise ValueError("(0:0) is not a point of P^1")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def of(cls, z) -> "ProjPoint":
        """From a rational number, ``None`` or ``"inf"`` for infinity, or a pair."""
        if z is None or z == "inf":
            return cls(1, 0)
        if isinstance(z, (tuple, list)):
            return cls(*z)
        z = Fraction(z)
        return cls(z.numerator, z.denominator)

    @property
    def is_infinity(self) -> bool:
        return self.q == 0

    def value(self) -> Fraction | None:
        return None if self.q == 0 else Fraction(self.p, self.q)

    def to_json(self) -> list[int]:
        return [self.p, self.q]

    def __repr__(self):
        return f"({self.p}:{self.q})"


INF = ProjPoint(1, 0)
ZERO = ProjPoint(0, 1)
ONE = ProjPoint(1, 1)


def _det(z: ProjPoint, w: ProjPoint) -> int:
    return z.p * w.q - z.q * w.p


@dataclass(frozen=True)
class MobiusMap:
    """``z -> (a z + b) / (c z + d)``, stored primitive with first nonzero entry positive."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        m = [int(self.a), int(self.b), int(self.c), int(self.d)]
        if m[0] * m[3] - m[1] * m[2] == 0:
            raise ValueError("singular matrix")
        g = gcd(*m)
        m = [x // g for x in m]
        if next(x for x in m if x) < 0:
            m = [-x for x in m]
        for name, x in zip("abcd", m):
            object.__setattr__(self, name, x)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, M) -> "MobiusMap":
        (a, b), (c, d) = M
        return cls(a, b, c, d)

    @classmethod
    def sending_to_inf_zero_one(cls, a: ProjPoint, b: ProjPoint, c: ProjPoint) -> "MobiusMap":
        """The unique map with ``a -> (1:0)``, ``b -> (0:1)``, ``c -> (1:1)``."""
        if len({a, b, c}) < 3:
            raise ValueError("need three distinct points")
        ca, cb = _det(c, a), _det(c, b)
        return cls(ca * b.q, -ca * b.p, cb * a.q, -cb * a.p)

    def matrix(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __call__(self, z: ProjPoint) -> ProjPoint:
        return ProjPoint(self.a * z.p + self.b * z.q, self.c * z.p + self.d * z.q)

    def __mul__(self, other: "MobiusMap") -> "MobiusMap":
        """``(self * other)(z) == self(other(z))``."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def __repr__(self):
        return f"Mobius[[{self.a},{self.b}],[{self.c},{self.d}]]"


def translation(t: int) -> MobiusMap:
    return MobiusMap(1, t, 0, 1)


def cross_ratio(x1: ProjPoint, x2: ProjPoint, x3: ProjPoint, x4: ProjPoint) -> ProjPoint:
    """Image of ``x4`` under the map sending ``x1, x2, x3`` to ``0, 1, inf``."""
    return MobiusMap.sending_to_inf_zero_one(x3, x1, x2)(x4)


# -- trees --------------------------------------------------------------------

Key = tuple  # ("m", label) or ("e", neighbour cid)


@dataclass(frozen=True)
class Violation:
    kind: str  # not-a-tree | bad-edge | duplicate-point | stability | bad-framed
    component: int | None = None
    detail: str = ""


def _tree_violations(components, edges, markings) -> list[Violation]:
    out = []
    comps = set(components)
    adj = {c: set() for c in comps}
    for (ca, _), (cb, _) in edges:
        if ca not in comps or cb not in comps or ca == cb:
            out.append(Violation("bad-edge", None, f"{ca}-{cb}"))
            continue
        if cb in adj[ca]:
            out.append(Violation("not-a-tree", None, f"double edge {ca}-{cb}"))
        adj[ca].add(cb)
        adj[cb].add(ca)
    for label, (c, _) in markings.items():
        if c not in comps:
            out.append(Violation("bad-edge", None, f"marking {label} on unknown component {c}"))
    if comps:
        start = min(comps)
        seen = {start}
        todo = [start]
        while todo:
            for nb in adj[todo.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        if seen != comps or len(edges) != len(comps) - 1:
            out.append(Violation("not-a-tree"))
    else:
        out.append(Violation("not-a-tree", None, "no components"))
    return out


def _special_points(components, edges, markings) -> dict[int, dict[Key, ProjPoint]]:
    pts: dict[int, dict[Key, ProjPoint]] = {c: {} for c in components}
    for (ca, pa), (cb, pb) in edges:
        if ca in pts and cb in pts:
            pts[ca][("e", cb)] = pa
            pts[cb][("e", ca)] = pb
    for label, (c, p) in markings.items():
        if c in pts:
            pts[c][("m", label)] = p
    return pts


def _point_violations(pts, exempt: int | None) -> list[Violation]:
    out = []
    for c, sp in sorted(pts.items()):
        vals = list(sp.values())
        if len(set(vals)) != len(vals):
            out.append(Violation("duplicate-point", c))
        if c != exempt and len(sp) < 3:
            out.append(Violation("stability", c, f"{len(sp)} special points"))
    return out


class _TreeBase:
    components: tuple[int, ...]
    edges: tuple
    markings: tuple

    @property
    def marking_map(self) -> dict[int, tuple[int, ProjPoint]]:
        return {label: (c, p) for label, c, p in self.markings}

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(label for label, _, _ in self.markings)

    @property
    def n(self) -> int:
        return len(self.markings)

    def special_points(self) -> dict[int, dict[Key, ProjPoint]]:
        return _special_points(self.components, self.edges, self.marking_map)

    def _json_body(self) -> dict:
        return {
            "n": self.n,
            "components": list(self.components),
            "edges": [{"a": [ca, pa.to_json()], "b": [cb, pb.to_json()]} for (ca, pa), (cb, pb) in self.edges],
            "markings": {str(label): [c, p.to_json()] for label, c, p in self.markings},
        }


def _parse_body(doc: Mapping):
    components = tuple(int(c) for c in doc["components"])
    edges = tuple(
        ((int(e["a"][0]), ProjPoint(*e["a"][1])), (int(e["b"][0]), ProjPoint(*e["b"][1]))) for e in doc["edges"]
    )
    markings = {int(k): (int(v[0]), ProjPoint(*v[1])) for k, v in doc["markings"].items()}
    if "n" in doc and int(doc["n"]) != len(markings):
        raise ValueError(f"n = {doc['n']} but {len(markings)} markings given")
    return components, edges, markings


def _marking_tuple(markings: Mapping[int, tuple[int, ProjPoint]]):
    return tuple((label, c, p) for label, (c, p) in sorted(markings.items()))


@dataclass(frozen=True)
class StableMapTree(_TreeBase):
    components: tuple[int, ...]
    edges: tuple[tuple[tuple[int, ProjPoint], tuple[int, ProjPoint]], ...]
    markings: tuple[tuple[int, int, ProjPoint], ...]
    framed: int
    frame: MobiusMap

    @classmethod
    def build(cls, components: Iterable[int], edges, markings: Mapping, framed: int, frame: MobiusMap | None = None):
        return cls(
            tuple(components),
            tuple((tuple(a), tuple(b)) for a, b in edges),
            _marking_tuple(markings),
            framed,
            frame or MobiusMap.identity(),
        )

    @classmethod
    def line(cls, points: Mapping[int, ProjPoint], frame: MobiusMap | None = None) -> "StableMapTree":
        """Smooth domain: every marking on the framed component."""
        return cls.build((0,), (), {i: (0, p) for i, p in points.items()}, 0, frame)

    def to_json(self) -> dict:
        doc = self._json_body()
        doc["framed"] = self.framed
        doc["frame"] = self.frame.matrix()
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "StableMapTree":
        components, edges, markings = _parse_body(doc)
        return cls.build(components, edges, markings, int(doc["framed"]), MobiusMap.from_matrix(doc["frame"]))


@dataclass(frozen=True)
class StableCurveTree(_TreeBase):
    components: tuple[int, ...]
    edges: tuple[tuple[tuple[int, ProjPoint], tuple[int, ProjPoint]], ...]
    markings: tuple[tuple[int, int, ProjPoint], ...]

    @classmethod
    def build(cls, components: Iterable[int], edges, markings: Mapping):
        return cls(tuple(components), tuple((tuple(a), tuple(b)) for a, b in edges), _marking_tuple(markings))

    def to_json(self) -> dict:
        return self._json_body()

    @classmethod
    def from_json(cls, doc: Mapping) -> "StableCurveTree":
        return cls.build(*_parse_body(doc))


def validate(t: StableMapTree | StableCurveTree) -> list[Violation]:
    """Every violated invariant; an empty list means the tree is valid."""
    out = _tree_violations(t.components, t.edges, t.marking_map)
    exempt = None
    if isinstance(t, StableMapTree):
        exempt = t.framed
        if t.framed not in t.components:
            out.append(Violation("bad-framed", t.framed))
    out.extend(_point_violations(t.special_points(), exempt))
    return out


def is_valid(t) -> bool:
    return not validate(t)


# -- working representation and stabilization ----------------------------------


def _stabilize(pts: dict[int, dict[Key, ProjPoint]], exempt: int | None) -> None:
    """Contract unstable components in place, smallest id first."""
    while True:
        bad = [c for c, sp in pts.items() if c != exempt and len(sp) < 3]
        if not bad:
            return
        c = min(bad)
        sp = pts.pop(c)
        keys = sorted(sp)
        edges = [k for k in keys if k[0] == "e"]
        marks = [k for k in keys if k[0] == "m"]
        if len(sp) == 1 and edges:
            (_, nb), = edges
            del pts[nb][("e", c)]
        elif len(sp) == 2 and len(edges) == 1:
            (_, nb), = edges
            at = pts[nb].pop(("e", c))
            pts[nb][marks[0]] = at
        elif len(sp) == 2 and len(edges) == 2:
            (_, x), (_, y) = edges
            px = pts[x].pop(("e", c))
            py = pts[y].pop(("e", c))
            pts[x][("e", y)] = px
            pts[y][("e", x)] = py
        else:
            raise ValueError("cannot stabilize: too few markings left")


def _unpack(pts: dict[int, dict[Key, ProjPoint]]):
    components = tuple(sorted(pts))
    edges = []
    markings = {}
    for c in components:
        for k, p in pts[c].items():
            if k[0] == "m":
                markings[k[1]] = (c, p)
            elif c < k[1]:
                edges.append(((c, p), (k[1], pts[k[1]][("e", c)])))
    return components, tuple(sorted(edges)), markings


def _subtree_min_labels(pts, root: int) -> tuple[dict[int, int], dict[int, int | None]]:
    """Parent pointers and the minimal label in each subtree, rooted at ``root``."""
    parent: dict[int, int | None] = {root: None}
    order = [root]
    i = 0
    while i < len(order):
        c = order[i]
        i += 1
        for k in pts[c]:
            if k[0] == "e" and k[1] not in parent:
                parent[k[1]] = c
                order.append(k[1])
    big = float("inf")
    low: dict[int, int] = {}
    for c in reversed(order):
        m = min((k[1] for k in pts[c] if k[0] == "m"), default=big)
        for k in pts[c]:
            if k[0] == "e" and parent.get(k[1]) == c:
                m = min(m, low[k[1]])
        low[c] = m
    return low, parent


def _canonical_pts(pts, root: int, fix_root: MobiusMap | None):
    """Reparametrize every component and renumber in BFS order from ``root``.

    ``fix_root`` is applied to the root; when it is ``None`` the root is
    normalized like the other components (with no parent edge).
    """
    low, parent = _subtree_min_labels(pts, root)

    def key_rank(c, k):
        if k[0] == "e" and k[1] == parent[c]:
            return (0, 0)
        return (1, k[1] if k[0] == "m" else low[k[1]])

    new_id = {root: 0}
    queue = deque([root])
    out: dict[int, dict[Key, ProjPoint]] = {}
    maps: dict[int, MobiusMap] = {}
    while queue:
        c = queue.popleft()
        ordered = sorted(pts[c], key=lambda k: key_rank(c, k))
        if c == root and fix_root is not None:
            maps[c] = fix_root
        else:
            a, b, z = (pts[c][k] for k in ordered[:3])
            maps[c] = MobiusMap.sending_to_inf_zero_one(a, b, z)
        for k in ordered:
            if k[0] == "e" and k[1] != parent[c]:
                new_id[k[1]] = len(new_id)
                queue.append(k[1])
    for c, sp in pts.items():
        out[new_id[c]] = {
            (k if k[0] == "m" else ("e", new_id[k[1]])): maps[c](p) for k, p in sp.items()
        }
    return out


def _to_pts(t) -> dict[int, dict[Key, ProjPoint]]:
    return {c: dict(sp) for c, sp in t.special_points().items()}


def canonicalize(t: StableMapTree) -> StableMapTree:
    """Normal form: identity frame, framed component 0, degree-0 components fixed by three points."""
    if isinstance(t, StableCurveTree):
        return canonicalize_curve(t)
    pts = _canonical_pts(_to_pts(t), t.framed, t.frame)
    components, edges, markings = _unpack(pts)
    return StableMapTree.build(components, edges, markings, 0)


def canonicalize_curve(t: StableCurveTree) -> StableCurveTree:
    pts = _to_pts(t)
    first = min(t.labels)
    root = t.marking_map[first][0]
    components, edges, markings = _unpack(_canonical_pts(pts, root, None))
    return StableCurveTree.build(components, edges, markings)


# -- operations ---------------------------------------------------------------


def evaluate(t: StableMapTree, i: int) -> ProjPoint:
    """``alpha(x_i)``: contracted subtrees evaluate to their attachment point."""
    mk = t.marking_map
    if i not in mk:
        raise KeyError(f"unknown label {i}")
    c, p = mk[i]
    pts = t.special_points()
    _, parent = _subtree_min_labels(pts, t.framed)
    while c != t.framed:
        up = parent[c]
        p = pts[up][("e", c)]
        c = up
    return t.frame(p)


def forget(t: StableMapTree, labels: Iterable[int]) -> StableMapTree:
    """Drop the markings in ``labels`` and stabilize.  Remaining labels keep their names."""
    drop = set(labels)
    unknown = drop - set(t.labels)
    if unknown:
        raise KeyError(f"unknown labels {sorted(unknown)}")
    pts = _to_pts(t)
    for sp in pts.values():
        for k in [k for k in sp if k[0] == "m" and k[1] in drop]:
            del sp[k]
    _stabilize(pts, t.framed)
    components, edges, markings = _unpack(pts)
    return canonicalize(StableMapTree.build(components, edges, markings, t.framed, t.frame))


def forget_map(t: StableMapTree) -> StableCurveTree:
    """Forget the map to P^1 and stabilize the domain (needs at least three markings)."""
    if t.n < 3:
        raise ValueError("forgetting the map needs n >= 3")
    pts = _to_pts(t)
    _stabilize(pts, None)
    return canonicalize_curve(StableCurveTree.build(*_unpack(pts)))


def m04_value(c: StableCurveTree) -> ProjPoint:
    """Point of M_{0,4} = P^1: the cross-ratio, with nodal curves at 0, 1, inf."""
    if sorted(c.labels) != [1, 2, 3, 4]:
        raise ValueError("need a curve marked by 1, 2, 3, 4")
    mk = c.marking_map
    if len(c.components) == 1:
        return cross_ratio(*(mk[i][1] for i in (1, 2, 3, 4)))
    partner = next(j for j in (2, 3) if mk[j][0] == mk[4][0]) if mk[4][0] != mk[1][0] else 1
    return {1: ZERO, 2: ONE, 3: INF}[partner]


def act_sym(t: StableMapTree, sigma: Permutation) -> StableMapTree:
    """Label ``i`` of the result carries what label ``sigma(i)`` carried in ``t``."""
    labels = sorted(t.labels)
    if labels != list(range(1, sigma.degree + 1)):
        raise ValueError(f"permutation of degree {sigma.degree} on labels {labels}")
    mk = t.marking_map
    new = {i: mk[sigma(i)] for i in labels}
    return canonicalize(StableMapTree.build(t.components, t.edges, new, t.framed, t.frame))


def act_target(t: StableMapTree, mu: MobiusMap) -> StableMapTree:
    """Post-compose the map with ``mu``."""
    return canonicalize(StableMapTree.build(t.components, t.edges, t.marking_map, t.framed, mu * t.frame))


def _bubble_at(x: ProjPoint) -> StableMapTree:
    return StableMapTree.build((0, 1), (((0, x), (1, INF)),), {1: (1, ZERO), 2: (1, ONE)}, 0)


def act_pair(t: StableMapTree, nu1: MobiusMap, nu2: MobiusMap) -> StableMapTree:
    """Action of ``PGL2 x PGL2`` on P^1[2], moving the two points independently."""
    if sorted(t.labels) != [1, 2]:
        raise ValueError("act_pair needs exactly the labels 1 and 2")
    t = canonicalize(t)
    if len(t.components) == 1:
        mk = t.marking_map
        y1, y2 = nu1(mk[1][1]), nu2(mk[2][1])
        if y1 != y2:
            return StableMapTree.line({1: y1, 2: y2})
        return canonicalize(_bubble_at(y1))
    x = evaluate(t, 1)
    y1, y2 = nu1(x), nu2(x)
    if y1 != y2:
        return StableMapTree.line({1: y1, 2: y2})
    return canonicalize(_bubble_at(y1))


# -- counts -------------------------------------------------------------------


def moduli_dimension(N: int, d: int, n: int) -> int:
    """Expected dimension of genus-0 stable maps to P^N of degree d with n markings."""
    if N < 1 or d < 0 or n < 0:
        raise ValueError("need N >= 1, d >= 0, n >= 0")
    return N + d * (N + 1) + n - 3


def boundary_divisors(n: int) -> list[IndexSubset]:
    """The loci D_S, one for each S with at least two elements."""
    if n < 2:
        raise ValueError("need n >= 2")
    return subsets(n, (2, n))


# -- random trees for tests and demos -------------------------------------------


def random_point(rng: random.Random, bound: int = 6) -> ProjPoint:
    if rng.random() < 0.1:
        return INF
    return ProjPoint(rng.randint(-bound, bound), rng.randint(1, bound))


def _distinct_points(rng: random.Random, k: int) -> list[ProjPoint]:
    out: list[ProjPoint] = []
    while len(out) < k:
        p = random_point(rng, bound=max(3, k))
        if p not in out:
            out.append(p)
    return out


def random_mobius(rng: random.Random, bound: int = 4) -> MobiusMap:
    while True:
        m = [rng.randint(-bound, bound) for _ in range(4)]
        if m[0] * m[3] - m[1] * m[2]:
            return MobiusMap(*m)


def _random_parts(rng: random.Random, labels: list[int], min_parts: int) -> list[list[int]]:
    labels = labels[:]
    rng.shuffle(labels)
    k = rng.randint(min(max(min_parts, 1), len(labels)), len(labels))
    if k == 0:
        return []
    cuts = sorted(rng.sample(range(1, len(labels)), k - 1))
    bounds = [0, *cuts, len(labels)]
    return [sorted(labels[a:b]) for a, b in zip(bounds, bounds[1:])]


def random_map_tree(rng: random.Random, labels: Iterable[int], bubble_bias: float = 0.5) -> StableMapTree:
    """A random valid tree with the given labels (not canonicalized)."""
    pts: dict[int, dict[Key, ProjPoint]] = {0: {}}

    def grow(c: int, group: list[int], parent: int | None):
        parts = _random_parts(rng, group, 0 if parent is None else 2)
        if parent is None:
            flat = []
            for part in parts:
                if len(part) > 1 and rng.random() > bubble_bias:
                    flat.extend([x] for x in part)
                else:
                    flat.append(part)
            parts = flat
        elif len(parts) < 2:
            parts = [[x] for x in group]
        places = _distinct_points(rng, len(parts) + (parent is not None))
        if parent is not None:
            pts[c][("e", parent)] = places.pop()
        for part, at in zip(parts, places):
            if len(part) == 1:
                pts[c][("m", part[0])] = at
            else:
                child = len(pts)
                pts[child] = {}
                pts[c][("e", child)] = at
                grow(child, part, c)

    grow(0, sorted(labels), None)
    components, edges, markings = _unpack(pts)
    return StableMapTree.build(components, edges, markings, 0, random_mobius(rng))
