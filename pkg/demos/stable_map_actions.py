"""Random stable map trees in degree one, and the group actions on them.

Draws a handful of trees, shows their canonical form, the effect of
relabeling and of moving the target, and the image in M_{0,4} after
forgetting the map.
"""

import random

from fmckit.exact import Permutation
from fmckit.stablemaps import (
    MobiusMap,
    act_sym,
    act_target,
    canonicalize,
    evaluate,
    forget,
    forget_map,
    m04_value,
    random_map_tree,
)


def describe(t):
    pts = {i: evaluate(t, i) for i in t.labels}
    return f"{len(t.components)} component(s), images {pts}"


def main(seed=11):
    rng = random.Random(seed)
    mu = MobiusMap(1, 1, 0, 1)
    swap = Permutation.transposition(4, 1, 2)
    for k in range(4):
        t = canonicalize(random_map_tree(rng, range(1, 5), bubble_bias=0.6))
        print(f"tree {k}: {describe(t)}")
        print(f"  after z -> z + 1:   {describe(act_target(t, mu))}")
        print(f"  after swapping 1,2: {describe(act_sym(t, swap))}")
        print(f"  forgetting 4:       {describe(forget(t, {4}))}")
        print(f"  point of M_0,4:     {m04_value(forget_map(t))}")


if __name__ == "__main__":
    main()
