"""Folding decision trees into diagrams and the named families."""

import random
from fractions import Fraction

from wcflobdd.core import Forest, evaluate, size, validate
from wcflobdd.construct import (exp_family, fold, hadamard_family,
                                identity_matrix, not_matrix, scalar_multiply,
                                tree_to_weighted_tree, unfold, walsh_family)
from wcflobdd.semifield import Pow2, rational_field, real_field

import oracle

F = Forest(rational_field())
FL = Forest(real_field())

WEIGHT_POOL = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2),
               Fraction(-2), Fraction(1, 2)]


def test_fold_unfold_round_trip():
    rng = random.Random(5)
    for level in (0, 1, 2, 3):
        n = 1 << (1 << level)
        for _ in range(30):
            table = [WEIGHT_POOL[rng.randrange(6)] for _ in range(n)]
            d = fold(F, table)
            assert unfold(d) == table
            assert d.level == level
            assert validate(d) == []


def test_fold_is_canonical():
    rng = random.Random(6)
    seen = {}
    for _ in range(400):
        table = tuple(WEIGHT_POOL[rng.randrange(6)] for _ in range(4))
        d = fold(F, list(table))
        assert fold(F, unfold(d)) is d
        prior = seen.setdefault(table, d)
        assert prior is d
    # distinct functions get distinct handles
    handles = {}
    for table, d in seen.items():
        other = handles.setdefault(id(d), table)
        assert other == table


def test_fold_rejects_bad_leaf_count():
    try:
        fold(F, [1, 2, 3])
        assert False
    except ValueError:
        pass
    try:
        fold(F, [1, 2, 3, 4, 5, 6, 7, 8])  # 8 = 2^3, not 2^(2^k)
        assert False
    except ValueError:
        pass


def test_tree_to_weighted_tree_normalizes():
    field = rational_field()
    factor, wt = tree_to_weighted_tree(field, (Fraction(2), Fraction(6)))
    assert factor == 2
    lw, rw, lt, rt = wt
    assert lw == 1 and rw == 3
    assert lt == field.one and rt == field.one
    factor, wt = tree_to_weighted_tree(field, (Fraction(0), Fraction(5)))
    assert factor == 5
    assert wt[0] == 0 and wt[1] == 1


def test_scalar_multiply():
    d = fold(F, [1, 2, 3, 5])
    s = scalar_multiply(Fraction(3), d)
    assert unfold(s) == [3, 6, 9, 15]
    assert s.head is d.head
    assert scalar_multiply(Fraction(0), d) is F.zero_diagram(1)
    assert scalar_multiply(Fraction(1), d) is d


def test_exp_family_values_and_size():
    d = exp_family(F, 4)
    assert unfold(d) == [Fraction(2) ** v for v in
                        (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15)]
    for l, nvars in ((0, 1), (1, 2), (2, 4), (3, 8)):
        assert size(exp_family(F, nvars)).total == 13 * 2 ** l - 7
    assert validate(d) == []


def test_exp_family_huge_weights_stay_symbolic():
    d = exp_family(F, 256)
    assert evaluate(d, [1] + [0] * 255) == Pow2.make(1 << 255)
    assert validate(d) == []


def test_walsh_entries():
    w = walsh_family(F, 2)
    table = oracle.to_dense(w)
    for r in range(4):
        for c in range(4):
            want = Fraction(-1) ** bin(r & c).count("1")
            assert table[r][c] == want
    assert validate(w) == []


def test_hadamard_needs_roots():
    try:
        hadamard_family(F, 1)
        assert False, "1/sqrt(2) is not rational"
    except ValueError:
        pass


def test_hadamard_entries_and_sharing():
    # level l is the 2^(l-1)-fold Kronecker power of the 2x2 core
    h = hadamard_family(FL, 3)
    table = oracle.to_dense(h)
    scale = 2.0 ** -2
    for r in range(16):
        for c in range(16):
            sign = (-1.0) ** bin(r & c).count("1")
            assert abs(table[r][c] - sign * scale) < 1e-12
    # one new grouping per level: the proto tower is shared
    assert size(hadamard_family(FL, 4)).groupings == \
        size(hadamard_family(FL, 3)).groupings + 1
    assert validate(h) == []


def test_identity_and_not_matrices():
    for l in (1, 2):
        side = 1 << (1 << (l - 1))
        ident = oracle.to_dense(identity_matrix(F, l))
        assert ident == [[Fraction(r == c) for c in range(side)]
                         for r in range(side)]
        anti = oracle.to_dense(not_matrix(F, l))
        assert anti == [[Fraction(r == side - 1 - c) for c in range(side)]
                        for r in range(side)]
    assert validate(identity_matrix(F, 3)) == []
    assert validate(not_matrix(F, 3)) == []
