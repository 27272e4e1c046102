import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmckit.exact import Permutation, all_permutations
from fmckit.stablemaps import (
    INF,
    ONE,
    ZERO,
    MobiusMap,
    ProjPoint,
    StableCurveTree,
    StableMapTree,
    act_pair,
    act_sym,
    act_target,
    boundary_divisors,
    canonicalize,
    cross_ratio,
    evaluate,
    forget,
    forget_map,
    is_valid,
    m04_value,
    moduli_dimension,
    random_map_tree,
    random_mobius,
    translation,
    validate,
)

P = ProjPoint


def leaf_tree(leaf_markings, at=ZERO, framed_markings=None):
    """Framed line with one contracted leaf attached at ``at``."""
    mk = {i: (1, p) for i, p in leaf_markings.items()}
    mk.update({i: (0, p) for i, p in (framed_markings or {}).items()})
    return StableMapTree.build((0, 1), (((0, at), (1, INF)),), mk, 0)


def test_proj_point_normalization():
    assert P(2, 4) == P(1, 2)
    assert P(-1, -3) == P(1, 3)
    assert P(-5, 0) == INF
    with pytest.raises(ValueError):
        P(0, 0)
    assert P.of(Fraction(-3, 6)) == P(-1, 2)


def test_mobius_normalization_and_action():
    assert MobiusMap(-2, 0, 0, -2).is_identity()
    assert MobiusMap(0, 1, 1, 0)(P(1, 2)) == P(2, 1)
    with pytest.raises(ValueError):
        MobiusMap(1, 2, 2, 4)
    m = MobiusMap(2, 1, 1, 1)
    assert (m * m.inverse()).is_identity()


def finite_cross_ratio(x1, x2, x3, x4):
    return (x4 - x1) * (x2 - x3) / ((x4 - x3) * (x2 - x1))


fracs = st.fractions(min_value=-20, max_value=20, max_denominator=9)


@given(st.lists(fracs, min_size=4, max_size=4, unique=True))
def test_cross_ratio_matches_formula(xs):
    got = cross_ratio(*(P.of(x) for x in xs))
    assert got == P.of(finite_cross_ratio(*xs))


def test_three_point_map():
    a, b, c = P(0, 1), P(1, 1), P(2, 1)
    m = MobiusMap.sending_to_inf_zero_one(a, b, c)
    assert (m(a), m(b), m(c)) == (INF, ZERO, ONE)


def test_validate_examples():
    assert validate(StableMapTree.line({1: ZERO, 2: ONE})) == []
    bad = leaf_tree({1: ZERO})
    kinds = [v.kind for v in validate(bad)]
    assert kinds == ["stability"]
    assert validate(leaf_tree({1: ZERO, 2: ONE})) == []


def test_validate_reports_duplicates_and_cycles():
    dup = StableMapTree.line({1: ONE, 2: ONE})
    assert [v.kind for v in validate(dup)] == ["duplicate-point"]
    cyc = StableMapTree.build(
        (0, 1), (((0, ZERO), (1, INF)), ((0, ONE), (1, ZERO))), {1: (1, ONE), 2: (1, P(2, 1))}, 0
    )
    assert "not-a-tree" in [v.kind for v in validate(cyc)]


def test_canonicalize_examples():
    t = StableMapTree.line({1: ONE}, MobiusMap(2, 0, 0, 1))
    c = canonicalize(t)
    assert c.frame.is_identity() and c.marking_map[1] == (0, P(2, 1))
    assert canonicalize(c) == c
    t = StableMapTree.build((0, 1), (((0, ONE), (1, ZERO)),), {2: (1, ONE), 3: (1, P(2, 1))}, 0)
    c = canonicalize(t)
    assert c.special_points()[1] == {("e", 0): INF, ("m", 2): ZERO, ("m", 3): ONE}


def test_evaluate_examples():
    assert evaluate(StableMapTree.line({1: P(2, 1)}), 1) == P(2, 1)
    t = leaf_tree({1: ONE, 2: P(2, 1)}, at=ZERO)
    assert evaluate(t, 1) == evaluate(t, 2) == ZERO
    assert evaluate(StableMapTree.line({1: P(1, 2)}, MobiusMap(0, 1, 1, 0)), 1) == P(2, 1)
    with pytest.raises(KeyError):
        evaluate(t, 7)


def test_forget_examples():
    t = StableMapTree.line({1: ZERO, 2: ONE, 3: INF})
    f = forget(t, {3})
    assert f.labels == (1, 2) and len(f.components) == 1
    p = P(5, 1)
    t = leaf_tree({2: ZERO, 3: ONE}, at=p, framed_markings={1: ZERO})
    f = forget(t, {2})
    assert f.components == (0,) and f.marking_map[3] == (0, p)


def test_forget_map_examples():
    c = forget_map(StableMapTree.line({1: ZERO, 2: ONE, 3: INF}))
    assert len(c.components) == 1 and is_valid(c)
    lam = P(7, 3)
    c = forget_map(StableMapTree.line({1: ZERO, 2: ONE, 3: INF, 4: lam}))
    assert m04_value(c) == lam
    with pytest.raises(ValueError):
        forget_map(StableMapTree.line({1: ZERO, 2: ONE}))


@pytest.mark.parametrize(
    "pair, rest, value",
    [((1, 4), (2, 3), ZERO), ((2, 4), (1, 3), ONE), ((3, 4), (1, 2), INF)],
)
def test_boundary_points_of_m04(pair, rest, value):
    t = leaf_tree({pair[0]: ZERO, pair[1]: ONE}, at=P(9, 1), framed_markings={rest[0]: ZERO, rest[1]: ONE})
    assert m04_value(forget_map(t)) == value


def test_act_sym_examples():
    t = StableMapTree.line({1: ZERO, 2: ONE, 3: P(3, 1)})
    assert act_sym(t, Permutation.identity(3)) == canonicalize(t)
    s = Permutation.transposition(3, 1, 2)
    assert act_sym(act_sym(t, s), s) == canonicalize(t)


def test_act_target_example():
    t = StableMapTree.line({1: ZERO, 2: ONE})
    assert act_target(t, MobiusMap.identity()) == canonicalize(t)


def test_act_pair_cases():
    ident = MobiusMap.identity()
    smooth = StableMapTree.line({1: ZERO, 2: ONE})
    assert act_pair(smooth, ident, ident) == canonicalize(smooth)
    bubbled = act_pair(smooth, translation(1), ident)
    assert len(bubbled.components) == 2
    assert evaluate(bubbled, 1) == evaluate(bubbled, 2) == ONE
    at_zero = leaf_tree({1: ZERO, 2: ONE}, at=ZERO)
    back = act_pair(at_zero, ident, translation(1))
    assert back.components == (0,)
    assert (evaluate(back, 1), evaluate(back, 2)) == (ZERO, ONE)
    kept = act_pair(at_zero, translation(2), translation(2))
    assert len(kept.components) == 2 and evaluate(kept, 1) == P(2, 1)
    with pytest.raises(ValueError):
        act_pair(StableMapTree.line({1: ZERO, 2: ONE, 3: INF}), ident, ident)


def test_dimension_and_boundary():
    assert [moduli_dimension(1, 1, n) for n in range(6)] == list(range(6))
    assert moduli_dimension(2, 2, 0) == 5
    assert moduli_dimension(3, 3, 6) == 18
    assert len(boundary_divisors(3)) == 4
    assert [s.members for s in boundary_divisors(2)] == [(1, 2)]
    assert len(boundary_divisors(5)) == 26


def test_json_round_trip():
    t = leaf_tree({1: ZERO, 2: ONE}, at=P(-1, 2), framed_markings={3: INF})
    doc = json.loads(json.dumps(t.to_json()))
    assert StableMapTree.from_json(doc) == t
    c = forget_map(t)
    assert StableCurveTree.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        StableMapTree.from_json({**doc, "n": 5})


seeds = st.integers(0, 2**32 - 1)


def tree_from(seed, max_n=7):
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    return rng, n, random_map_tree(rng, range(1, n + 1))


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_random_trees_are_valid_and_canonical_form_is_stable(seed):
    rng, n, t = tree_from(seed)
    assert is_valid(t)
    c = canonicalize(t)
    assert is_valid(c) and canonicalize(c) == c
    assert all(evaluate(c, i) == evaluate(t, i) for i in range(1, n + 1))
    # reparametrizing the framed line by any mu and compensating in the frame is invisible
    mu = random_mobius(rng)
    moved = StableMapTree.build(
        t.components,
        [((a, mu(p) if a == t.framed else p), (b, mu(q) if b == t.framed else q)) for (a, p), (b, q) in t.edges],
        {i: (c_, mu(p) if c_ == t.framed else p) for i, (c_, p) in t.marking_map.items()},
        t.framed,
        t.frame * mu.inverse(),
    )
    assert canonicalize(moved) == c


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_forget_composes(seed):
    rng, n, t = tree_from(seed, 8)
    labels = list(range(1, n + 1))
    A = set(rng.sample(labels, rng.randint(0, n - 1)))
    rest = [i for i in labels if i not in A]
    B = set(rng.sample(rest, rng.randint(0, len(rest) - 1)))
    assert forget(forget(t, A), B) == forget(t, A | B)
    j = rng.choice(labels)
    assert evaluate(forget(t, set(labels) - {j}), j) == evaluate(t, j)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_actions(seed):
    rng, n, t = tree_from(seed)
    mu = random_mobius(rng)
    perms = list(all_permutations(n))
    s, u = rng.choice(perms), rng.choice(perms)
    for i in range(1, n + 1):
        assert evaluate(act_target(t, mu), i) == mu(evaluate(t, i))
        assert evaluate(act_sym(t, s), i) == evaluate(t, s(i))
    assert act_sym(act_sym(t, s), u) == act_sym(t, s * u)
    assert act_target(act_sym(t, s), mu) == act_sym(act_target(t, mu), s)
    if n >= 3:
        assert forget_map(act_target(t, mu)) == forget_map(t)


def test_fibers_of_evaluation_are_moved_by_target_action():
    rng = random.Random(3)
    sample = [random_map_tree(rng, range(1, 5)) for _ in range(150)]
    mu = MobiusMap(1, 1, 0, 1)
    for p in {evaluate(t, 1) for t in sample}:
        fiber = {canonicalize(t) for t in sample if evaluate(t, 1) == p}
        image = {act_target(t, mu) for t in fiber}
        assert len(image) == len(fiber)
        assert all(evaluate(t, 1) == mu(p) for t in image)
        back = {act_target(t, mu.inverse()) for t in image}
        assert back == fiber


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_act_pair_round_trip(seed):
    rng = random.Random(seed)
    branch = rng.randrange(3)
    x = P(rng.randint(-3, 3), rng.randint(1, 3))
    if branch == 0:
        y = x
        while y == x:
            y = P(rng.randint(-3, 3), rng.randint(1, 3))
        t = StableMapTree.line({1: x, 2: y})
    else:
        t = leaf_tree({1: ZERO, 2: ONE}, at=x)
    nu1 = random_mobius(rng)
    nu2 = nu1 if branch == 2 else random_mobius(rng)
    out = act_pair(t, nu1, nu2)
    assert act_pair(out, nu1.inverse(), nu2.inverse()) == canonicalize(t)
    assert (evaluate(out, 1), evaluate(out, 2)) == (nu1(evaluate(t, 1)), nu2(evaluate(t, 2)))
