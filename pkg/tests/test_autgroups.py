import json
from itertools import product
from math import factorial

import pytest

from fmckit.autgroups import (
    FM,
    AutCurve,
    Bare,
    Conjectural,
    Curve,
    DiagonalSym,
    DirectProduct,
    FullSym2Power,
    GeneralType,
    Infinite,
    Kontsevich,
    ModuliCurves,
    NefCanonical,
    PGL,
    ProductOfCurves,
    ProjLine,
    Semidirect,
    Sym,
    TrivialGroup,
    Unknown,
    Unsupported,
    aut_connected,
    aut_structure,
    diagonal_stabilizer,
    direct,
    dumps,
    group_order,
    isomorphic_shape,
    space_from_json,
)
from fmckit.exact import all_permutations, subsets

A = Curve(2, 6, "A")
B = Curve(3, None, "B")


@pytest.mark.parametrize(
    "space, text",
    [
        (FM(ProjLine(), 5), "S5 x PGL2"),
        (FM(ProjLine(), 2), "S2 ⋉ (PGL2 x PGL2)"),
        (FM(Curve(2), 4), "S4 x Aut(C)"),
        (FM(Curve(5), 2), "S2 ⋉ (Aut(C) x Aut(C))"),
        (FM(ProductOfCurves((A, A, B)), 3), "S3 x ((S2 ⋉ Aut(C_A)^2) x Aut(C_B))"),
        (FM(ProductOfCurves((A, A, B)), 2), "S2^3 ⋉ ((S2 ⋉ Aut(C_A)^2) x Aut(C_B))"),
        (FM(NefCanonical(), 3), "Aut_Delta(X^3)"),
        (Bare(ProductOfCurves((A, A, A))), "S3 ⋉ Aut(C_A)^3"),
        (Kontsevich(2, 2, 0), "PGL3"),
        (ModuliCurves(3, 4), "S4"),
        (Kontsevich(1, 1, 6), "S6 x PGL2"),
    ],
)
def test_structure_table(space, text):
    assert str(aut_structure(space)) == text


def test_structure_trees():
    assert aut_structure(FM(ProjLine(), 5)) == DirectProduct((Sym(5), PGL(2)))
    g = aut_structure(FM(ProjLine(), 2))
    assert g == Semidirect(DirectProduct((PGL(2), PGL(2))), Sym(2))


def test_conjectural_and_unsupported():
    res = aut_structure(FM(GeneralType(), 4))
    assert isinstance(res, Conjectural) and str(res.structure) == "S4 x Aut(X)"
    for s in [FM(Curve(1), 2), FM(Curve(1), 5), FM(ProductOfCurves((Curve(1, None, "E"), A)), 3),
              Bare(Curve(1)), ModuliCurves(2, 1), Kontsevich(3, 2, 1)]:
        assert isinstance(aut_structure(s), Unsupported)


def test_genus_one_never_gets_a_structure():
    E = Curve(1, None, "E")
    for n in range(0, 6):
        for base in (Curve(1), ProductOfCurves((E, E)), ProductOfCurves((E, A))):
            assert isinstance(aut_structure(FM(base, n)), Unsupported)
            assert isinstance(aut_connected(FM(base, n)), Unsupported)


@pytest.mark.parametrize(
    "space, text",
    [
        (Kontsevich(3, 1, 4), "PGL2 x PGL4"),
        (Kontsevich(2, 1, 2), "PGL2 x PGL2 x PGL3"),
        (Kontsevich(3, 3, 5), "PGL4"),
        (Kontsevich(4, 4, 6), "PGL5"),
        (FM(Curve(2), 2), "Aut^o(C) x Aut^o(C)"),
        (FM(ProjLine(), 5), "PGL2"),
        (FM(NefCanonical("Y"), 3), "Aut^o(Y)"),
    ],
)
def test_connected_table(space, text):
    assert str(aut_connected(space)) == text


def test_connected_out_of_range():
    assert isinstance(aut_connected(Kontsevich(3, 3, 4)), Unsupported)
    assert isinstance(aut_connected(Kontsevich(2, 1, 0)), Unsupported)


@pytest.mark.parametrize("n", [1, 3, 4, 7])
def test_connected_part_of_the_full_group(n):
    full = aut_structure(FM(ProjLine(), n))
    assert PGL(2) in full.factors
    assert aut_connected(FM(ProjLine(), n)) == PGL(2)


def test_orders():
    assert group_order(direct(Sym(3), AutCurve("A", 2))) == 12
    assert group_order(Semidirect(DirectProduct((AutCurve(order=6), AutCurve(order=6))), Sym(2))) == 72
    assert group_order(direct(Sym(4), PGL(2))) == Infinite()
    assert group_order(direct(Sym(2), AutCurve("Z"))) == Unknown(("Aut(C_Z)",))
    assert group_order(direct(PGL(2), AutCurve("Z"))) == Infinite()


@pytest.mark.parametrize("n", [1, 3, 4, 5])
@pytest.mark.parametrize("a", [1, 2, 10])
def test_order_for_curves(n, a):
    assert group_order(aut_structure(FM(Curve(2, a), n))) == factorial(n) * a


def test_relabeling_classes_of_equal_multiplicity():
    C = Curve(4, 2, "C")
    first = aut_structure(FM(ProductOfCurves((A, A, C, C, B)), 3))
    second = aut_structure(FM(ProductOfCurves((Curve(2, 6, "Z"), Curve(2, 6, "Z"), Curve(4, 2, "Y"),
                                               Curve(4, 2, "Y"), Curve(3, None, "X"))), 3))
    assert isomorphic_shape(first, second)
    assert group_order(first) == Unknown(("Aut(C_B)",))


def test_json_forms():
    doc = json.loads(dumps(aut_structure(FM(ProjLine(), 2))))
    assert doc["op"] == "semidirect" and doc["acting"] == {"op": "sym", "n": 2}
    assert "\\u22c9" not in dumps(aut_structure(FM(ProjLine(), 2)))
    s = space_from_json({"fm": {"base": {"product": [{"genus": 2, "class": "A"}]}, "n": 3}})
    assert str(aut_structure(s)) == "S3 x Aut(C_A)"
    with pytest.raises(ValueError):
        space_from_json({"fm": {"base": "P2", "n": 3}})


def oracle_stabilizer(n, r):
    """Direct check: the image of every diagonal, as a set of coordinate equations, is a diagonal."""
    diagonals = {frozenset((j, a, b) for j in range(r) for a in S for b in S if a < b) for S in subsets(n, (2, n))}
    keep = []
    for tup in product(list(all_permutations(n)), repeat=r):
        ok = True
        for S in subsets(n, (2, n)):
            inv = [s.inverse() for s in tup]
            eqs = frozenset(
                (j, min(inv[j](a), inv[j](b)), max(inv[j](a), inv[j](b))) for j in range(r) for a in S for b in S if a < b
            )
            if eqs not in diagonals:
                ok = False
                break
        if ok:
            keep.append(tup)
    return keep


@pytest.mark.parametrize("n, r", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2)])
def test_diagonal_stabilizer_against_oracle(n, r):
    res = diagonal_stabilizer(n, r)
    assert set(res.elements) == set(oracle_stabilizer(n, r))
    assert res.order == (2**r if n == 2 else factorial(n))


def test_diagonal_stabilizer_examples():
    assert diagonal_stabilizer(3, 2).verdict == DiagonalSym(3)
    assert diagonal_stabilizer(2, 3).verdict == FullSym2Power(3)
    res = diagonal_stabilizer(1, 5)
    assert res.order == 1 and res.verdict == TrivialGroup()
    assert diagonal_stabilizer(4, 3, workers=2).order == 24
    with pytest.raises(ValueError):
        diagonal_stabilizer(6, 3)
