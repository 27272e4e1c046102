"""Walk through the cones of P^1[3] and the degree-6 del Pezzo surface.

Prints the nef cone obtained by dualizing the Mori cone, the Fano pairing
table, a few membership certificates, and the three conic-bundle pencils
recovered as primitive isotropic nef classes.
"""

from fmckit.blowup import picard_number, recursive_schedule
from fmckit.cones import contains, dual_cone, fano_test, mori_decompose_p13, nef_isotropic_classes, preset


def show(label, value):
    print(f"{label:<28} {value}")


def main():
    p13 = preset("P13")
    L = p13.lattices
    show("Picard number of P^1[3]", picard_number(1, 1, 3))
    show("blow-up centers (recursive)", [c.label for c in recursive_schedule(3).centers])

    nef = dual_cone(p13.cones["mori"], L)
    show("nef generators", list(nef.generators))

    rep = fano_test(L, p13.classes["-K"], p13.cones["mori"])
    for ray, value in rep.table:
        show(f"  -K . {ray}", value)
    show("Fano", rep.is_fano)

    mori = p13.cones["mori_minimal"]
    for v in [(3, -1, -1, -1), (1, -2, 0, 0)]:
        res = contains(mori, v, L)
        show(f"curve {v}", res)
    show("decompose d=4, m=(1,2,4)", mori_decompose_p13(4, (1, 2, 4)))
    show("decompose d=2, m=(3,0,0)", mori_decompose_p13(2, (3, 0, 0)))

    dp6 = preset("DP6")
    show("DP6 isotropic nef classes", nef_isotropic_classes(dp6))


if __name__ == "__main__":
    main()
