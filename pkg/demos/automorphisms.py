"""Automorphism groups of configuration space compactifications.

Prints the group structure for a range of bases and numbers of points,
then confirms by brute force which tuples of permutations preserve the
diagonals of X^n when X is a product of r curves.
"""

from fmckit.autgroups import (
    FM,
    Curve,
    Kontsevich,
    ProductOfCurves,
    ProjLine,
    Unsupported,
    aut_connected,
    aut_structure,
    diagonal_stabilizer,
    group_order,
)


def main():
    A, B = Curve(2, 6, "A"), Curve(3, 2, "B")
    spaces = {
        "P1[2]": FM(ProjLine(), 2),
        "P1[5]": FM(ProjLine(), 5),
        "C[3], |Aut C| = 6": FM(A, 3),
        "(A x A x B)[3]": FM(ProductOfCurves((A, A, B)), 3),
        "(A x A x B)[2]": FM(ProductOfCurves((A, A, B)), 2),
        "E[2], genus one": FM(Curve(1), 2),
    }
    for name, space in spaces.items():
        g = aut_structure(space)
        order = "-" if isinstance(g, Unsupported) else group_order(g)
        print(f"{name:<22} {g}    order {order}")
    for args in [(3, 1, 4), (2, 1, 2), (3, 3, 5)]:
        print(f"Aut^o M_0,{args[2]}(P^{args[0]}, {args[1]}):  {aut_connected(Kontsevich(*args))}")

    for n, r in [(2, 3), (3, 2), (4, 2)]:
        res = diagonal_stabilizer(n, r)
        print(f"stabilizer in S_{n}^{r}: {res.order} elements, {res.verdict}")


if __name__ == "__main__":
    main()
