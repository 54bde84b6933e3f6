#!/usr/bin/env python3
"""Why hierarchical sharing pays: two families with closed-form sizes.

The exponential-weights family EXP_n maps x (read as a binary numeral)
to 2^x. A decision tree for it has 2^n leaves, all distinct; here each
extra doubling of the variable count adds a constant number of
groupings, because every level reuses the one below it twice.

The Hadamard family is even smaller: one new grouping per level, since
H^(2k) = H^(k) kron H^(k) and Kronecker squaring is a single internal
grouping over the previous head.
"""

from fractions import Fraction

from wcflobdd.core import Forest, evaluate, size
from wcflobdd.construct import exp_family, hadamard_family
from wcflobdd.semifield import rational_field, real_field


def main():
    rational = Forest(rational_field())
    print("EXP_n: f(x) = 2^x over n variables")
    print(f"{'n':>6} {'groupings':>10} {'vertices':>9} {'edges':>6} "
          f"{'total':>6}   closed form 13*2^l - 7")
    for level in range(0, 9):
        n = 1 << level
        d = exp_family(rational, n)
        s = size(d)
        formula = 13 * 2 ** level - 7
        assert s.total == formula
        print(f"{n:>6} {s.groupings:>10} {s.vertices:>9} {s.edges:>6} "
              f"{s.total:>6}   = {formula}")

    d = exp_family(rational, 8)
    x = [1, 0, 1, 1, 0, 1, 0, 0]
    value = evaluate(d, x)
    print(f"\nEXP_8 at x={''.join(map(str, x))} "
          f"(decimal {int(''.join(map(str, x)), 2)}): {value}")
    assert value == Fraction(2) ** int("".join(map(str, x)), 2)

    print("\nHadamard: H^(2^(l-1)) as a level-l matrix diagram")
    print(f"{'level':>6} {'dim':>10} {'total':>6}   closed form 8l + 22")
    floating = Forest(real_field())
    for level in range(1, 9):
        h = hadamard_family(floating, level)
        s = size(h)
        formula = 8 * level + 22
        assert s.total == formula
        dim = f"2^{1 << (level - 1)}"
        print(f"{level:>6} {dim + ' x ' + dim:>12} {s.total:>6}   "
              f"= {formula}")

    print("\nA 2^128 x 2^128 Hadamard costs 86 size units; its decision"
          " tree would have 2^256 leaves.")

    again = exp_family(rational, 8)
    print(f"\nRebuilding EXP_8 returns the same interned object: "
          f"{again is exp_family(rational, 8)}")


if __name__ == "__main__":
    main()
