"""For even n, show the subgroup <a^m, b, x> (m = n/2) in every extension of D_2n
whose datum acts on D_2n as a -> a, b -> a^m b with x^2 = e.

Prints the order, involution count and catalog tag of the subgroup together
with the verdict of the surrounding extension class.
"""

import argparse

from o3sym.catalog import classify_in_o3
from o3sym.extensions import extension_classes
from o3sym.groups import make_dihedral, subgroup_closure
from o3sym.morphisms import dihedral_aut_coords
from o3sym.obstructions import detect_obstructions


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=12)
    args = parser.parse_args()
    for n in range(4, args.max_n + 1, 2):
        m = n // 2
        D = make_dihedral(n)
        classes = extension_classes(D)
        _, to_coord = dihedral_aut_coords(n, D)
        for i, d in enumerate(classes.data):
            c = to_coord(d.phi)
            if (c.t, c.s) != (m, 1) or d.c != 0:
                continue
            G = classes.pairs[i].group
            sub = subgroup_closure(G, [m, n, D.order]).as_group()
            involutions = int((sub.element_orders() == 2).sum())
            k = classes.collapse[i]
            rep = classes.representatives[k]
            blockers = [str(o.spec) for o in detect_obstructions(rep.group, rep.n_embed)]
            print(
                f"n={n:<3} class={k:<2} |H|={sub.order} involutions={involutions} "
                f"tag={classify_in_o3(sub) or '-'} blockers={','.join(blockers) or '-'}"
            )


if __name__ == "__main__":
    main()
