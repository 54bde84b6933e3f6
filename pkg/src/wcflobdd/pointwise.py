"""Pointwise multiplication and addition of diagrams.

Both operations follow the same recipe: walk the two operand heads in
lockstep to build a cross-product grouping whose exits are pairs of
operand exits (``pair_product`` for multiplication, the weight-carrying
``weighted_pair_product`` for addition), combine the operand values at
each pair exit, then call ``reduce`` to merge exits that became
indistinguishable and to push the combined values back into edge
weights.  ``reduce`` is where canonicity is restored: its output is
interned and satisfies the same normalization the tree fold produces.

The cross-product intermediates are ordinary interned groupings but are
not themselves canonical (they may carry duplicate middles and
non-normalized leaf weights); they only ever flow into ``reduce``.
"""

from .core import (Diagram, DontCareGrouping, ForkGrouping, StructureError,
                   is_zero_diagram)
from .construct import scalar_multiply

__all__ = [
    "add",
    "collapse_classes_leftmost",
    "insert_b_connection",
    "multiply",
    "pair_product",
    "reduce",
    "subtract",
    "weighted_pair_product",
]


def collapse_classes_leftmost(classes):
    """Project a sequence onto its first occurrences.

    Returns ``(projected, renumbered)`` where ``projected`` keeps the
    leftmost instance of each distinct element in order of appearance
    and ``renumbered`` maps every position to the 1-based index of its
    element's class in ``projected``.  For example ``[x, x, y, x, z]``
    gives ``((x, y, z), (1, 1, 2, 1, 3))``.
    """
    first = {}
    projected = []
    renumbered = []
    for c in classes:
        k = first.get(c)
        if k is None:
            k = len(projected) + 1
            first[c] = k
            projected.append(c)
        renumbered.append(k)
    return tuple(projected), tuple(renumbered)


def insert_b_connection(b_connections, b_return_tuples, grouping, return_tuple):
    """Register a middle in an under-construction internal grouping.

    ``b_connections`` and ``b_return_tuples`` are parallel lists being
    assembled.  If the (grouping, return tuple) pair is already present
    its existing 1-based position is returned; otherwise the pair is
    appended.  This is the merge point that removes duplicate middles
    produced by the cross products.
    """
    return_tuple = tuple(return_tuple)
    for pos, (b, rt) in enumerate(zip(b_connections, b_return_tuples), start=1):
        if b is grouping and rt == return_tuple:
            return pos
    b_connections.append(grouping)
    b_return_tuples.append(return_tuple)
    return len(b_connections)


def reduce(forest, grouping, reduction, values):
    """Merge exits of ``grouping`` and absorb per-exit values.

    ``reduction`` maps each old exit to a new exit class and ``values``
    gives the weight to fold into paths reaching each old exit.  Returns
    ``(reduced, w)`` such that for every assignment ``x``:

        w * weight_reduced(x) == weight(x) * values[exit(x) - 1]

    and ``exit_reduced(x) == reduction[exit(x) - 1]``.  The result is
    canonical whenever the inputs came from canonical diagrams.

    ``reduction`` must be leftmost-compact (class numbers appear in
    first-occurrence order, covering 1..m); that is how every caller in
    this module produces it, via :func:`collapse_classes_leftmost`.
    """
    n = grouping.number_of_exits
    reduction = tuple(reduction)
    values = tuple(values)
    if len(reduction) != n or len(values) != n:
        raise ValueError(
            f"reduction and values must have length {n}, "
            f"got {len(reduction)} and {len(values)}")
    if collapse_classes_leftmost(reduction)[1] != reduction:
        raise ValueError(f"reduction tuple {reduction} is not leftmost-compact")

    field = forest.field
    cache = forest.cache("reduce")
    key = (id(grouping), reduction, tuple(field.key(v) for v in values))
    hit = cache.get(key)
    if hit is not None:
        return hit

    zero = all(field.is_zero(v) for v in values)
    if zero and len(set(reduction)) == 1:
        res = (forest.zero_proto(grouping.level), field.zero)
    elif (not zero
          and reduction == tuple(range(1, n + 1))
          and len({field.key(v) for v in values}) == 1
          and not field.is_zero(values[0])
          and forest.is_marked_canonical(grouping)):
        # Nothing to merge and a uniform value to factor straight out.
        res = (grouping, values[0])
    elif grouping.level == 0:
        res = _reduce_leaf(forest, grouping, reduction, values)
    else:
        res = _reduce_internal(forest, grouping, reduction, values)
    cache[key] = res
    return res


def _normalized_leaf(forest, merged, wl, wr):
    """Renormalize accumulated leaf weights, extracting the factor."""
    field = forest.field
    if not field.is_zero(wl):
        w = wl
        lw, rw = field.one, field.mul(field.inverse(wl), wr)
    elif not field.is_zero(wr):
        w = wr
        lw, rw = field.zero, field.one
    else:
        # Every path through here is weight-dead; the factor 0 makes the
        # leaf's own weights irrelevant, so pick the normalized zero pair.
        w = field.zero
        lw, rw = field.zero, field.one
    g = forest.dontcare(lw, rw) if merged else forest.fork(lw, rw)
    return g, w


def _reduce_leaf(forest, grouping, reduction, values):
    field = forest.field
    if isinstance(grouping, DontCareGrouping):
        v = values[0]
        return _normalized_leaf(forest, True,
                                field.mul(grouping.lw, v),
                                field.mul(grouping.rw, v))
    wl = field.mul(grouping.lw, values[0])
    wr = field.mul(grouping.rw, values[1])
    return _normalized_leaf(forest, reduction[0] == reduction[1], wl, wr)


def _reduce_internal(forest, grouping, reduction, values):
    bs = []
    rts = []
    positions = []
    b_factors = []
    for b, rt in zip(grouping.b_connections, grouping.b_return_tuples):
        classes = tuple(reduction[t - 1] for t in rt)
        vals = tuple(values[t - 1] for t in rt)
        projected, rho = collapse_classes_leftmost(classes)
        h, w = reduce(forest, b, rho, vals)
        if h.number_of_exits != len(projected):
            raise StructureError("reduced B-connection lost exit classes")
        positions.append(insert_b_connection(bs, rts, h, projected))
        b_factors.append(w)
    # Positions are handed out in first-occurrence order, so the position
    # sequence is its own leftmost-compact renumbering; merging the
    # A-connection's exits by position folds the duplicate middles away
    # and absorbs the per-middle factors into the A-side weights.
    a, w = reduce(forest, grouping.a_connection, tuple(positions),
                  tuple(b_factors))
    if a.number_of_exits != len(bs):
        raise StructureError("reduced A-connection lost middle classes")
    g = forest.internal(a, tuple(bs), tuple(rts))
    forest.mark_canonical(g)
    return g, w


def pair_product(forest, g1, g2):
    """Cross product of two groupings for pointwise multiplication.

    Returns ``(g, pt)`` where each path through ``g`` simulates the same
    path through both operands, carrying the product of their weights,
    and ``pt[e - 1] = (i1, i2)`` names the operand exits that product
    exit ``e`` stands for.
    """
    if g1.level != g2.level:
        raise ValueError("pair_product operands must share a level")
    cache = forest.cache("pair_product")
    key = (id(g1), id(g2))
    hit = cache.get(key)
    if hit is not None:
        return hit

    level = g1.level
    zp = forest.zero_proto(level)
    op = forest.one_proto(level)
    field = forest.field
    if g1 is op and g2 is op:
        res = (g1, ((1, 1),))
    elif g1 is zp or g2 is zp:
        res = (zp, ((1, 1),))
    elif g1 is op:
        res = (g2, tuple((1, k) for k in range(1, g2.number_of_exits + 1)))
    elif g2 is op:
        res = (g1, tuple((k, 1) for k in range(1, g1.number_of_exits + 1)))
    elif level == 0:
        lw = field.mul(g1.lw, g2.lw)
        rw = field.mul(g1.rw, g2.rw)
        fork1 = isinstance(g1, ForkGrouping)
        fork2 = isinstance(g2, ForkGrouping)
        if fork1 or fork2:
            right = (2 if fork1 else 1, 2 if fork2 else 1)
            res = (forest.fork(lw, rw), ((1, 1), right))
        else:
            res = (forest.dontcare(lw, rw), ((1, 1),))
    else:
        a, pt_a = pair_product(forest, g1.a_connection, g2.a_connection)
        bs = []
        rts = []
        pt_ans = []
        index = {}
        for i, j in pt_a:
            b, pt_b = pair_product(forest, g1.b_connections[i - 1],
                                   g2.b_connections[j - 1])
            rt1 = g1.b_return_tuples[i - 1]
            rt2 = g2.b_return_tuples[j - 1]
            rt = []
            for e1, e2 in pt_b:
                pair = (rt1[e1 - 1], rt2[e2 - 1])
                k = index.get(pair)
                if k is None:
                    k = len(pt_ans) + 1
                    index[pair] = k
                    pt_ans.append(pair)
                rt.append(k)
            bs.append(b)
            rts.append(tuple(rt))
        res = (forest.internal(a, tuple(bs), tuple(rts)), tuple(pt_ans))
    cache[key] = res
    return res


def multiply(n1: Diagram, n2: Diagram) -> Diagram:
    """Pointwise product: the diagram of ``x -> n1(x) * n2(x)``."""
    forest = _common_forest(n1, n2)
    field = forest.field
    level = n1.level
    if is_zero_diagram(n1) or is_zero_diagram(n2):
        return forest.zero_diagram(level)
    op = forest.one_proto(level)
    if n1.head is op and field.is_one(n1.values[0]):
        return scalar_multiply(n1.factor, n2)
    if n2.head is op and field.is_one(n2.values[0]):
        return scalar_multiply(n2.factor, n1)

    g, pt = pair_product(forest, n1.head, n2.head)
    deduced = tuple(field.mul(n1.values[i1 - 1], n2.values[i2 - 1])
                    for i1, i2 in pt)
    keys = [field.key(v) for v in deduced]
    projected, rho = collapse_classes_leftmost(keys)
    reps = {}
    for v, k in zip(deduced, keys):
        reps.setdefault(k, v)
    reduced, w = reduce(forest, g, rho, deduced)
    factor = field.mul(w, field.mul(n1.factor, n2.factor))
    return forest.diagram(factor, reduced, tuple(reps[k] for k in projected))


def weighted_pair_product(forest, g1, g2, p1, p2):
    """Cross product of two groupings for pointwise addition.

    Unlike :func:`pair_product` the structural product carries unit
    weights; the operands' path weights accumulate in the descriptor
    tuple instead.  Returns ``(g, pt)`` with ``pt[e - 1]`` of the form
    ``((q1, i1), (q2, i2))``: every assignment reaching product exit
    ``e`` with product weight ``W`` has weight ``W * q1 / p1`` to exit
    ``i1`` in ``g1`` and ``W * q2 / p2`` to exit ``i2`` in ``g2``.  The
    seeds ``p1, p2`` are the operands' factor weights.
    """
    if g1.level != g2.level:
        raise ValueError("weighted_pair_product operands must share a level")
    field = forest.field
    cache = forest.cache("weighted_pair_product")
    key = (id(g1), id(g2), field.key(p1), field.key(p2))
    hit = cache.get(key)
    if hit is not None:
        return hit

    level = g1.level
    zp = forest.zero_proto(level)
    if g1 is zp:
        res = (g2, tuple(((p1, 1), (p2, k))
                         for k in range(1, g2.number_of_exits + 1)))
    elif g2 is zp:
        res = (g1, tuple(((p1, k), (p2, 1))
                         for k in range(1, g1.number_of_exits + 1)))
    elif g1 is g2:
        # Shared structure: reuse it verbatim, keeping both seed weights.
        res = (g1, tuple(((p1, k), (p2, k))
                         for k in range(1, g1.number_of_exits + 1)))
    elif level == 0:
        first = ((field.mul(p1, g1.lw), 1), (field.mul(p2, g2.lw), 1))
        right1, right2 = _LEVEL0_RIGHT_EXITS[
            isinstance(g1, ForkGrouping), isinstance(g2, ForkGrouping)]
        second = ((field.mul(p1, g1.rw), right1),
                  (field.mul(p2, g2.rw), right2))
        if _entry_key(field, first) == _entry_key(field, second):
            res = (forest.dontcare(field.one, field.one), (first,))
        else:
            res = (forest.fork(field.one, field.one), (first, second))
    else:
        a, pt_a = weighted_pair_product(forest, g1.a_connection,
                                        g2.a_connection, p1, p2)
        bs = []
        rts = []
        pt_ans = []
        index = {}
        for (q1, i), (q2, j) in pt_a:
            b, pt_b = weighted_pair_product(forest, g1.b_connections[i - 1],
                                            g2.b_connections[j - 1], q1, q2)
            rt1 = g1.b_return_tuples[i - 1]
            rt2 = g2.b_return_tuples[j - 1]
            rt = []
            for (f1, e1), (f2, e2) in pt_b:
                entry = ((f1, rt1[e1 - 1]), (f2, rt2[e2 - 1]))
                ek = _entry_key(field, entry)
                k = index.get(ek)
                if k is None:
                    k = len(pt_ans) + 1
                    index[ek] = k
                    pt_ans.append(entry)
                rt.append(k)
            bs.append(b)
            rts.append(tuple(rt))
        res = (forest.internal(a, tuple(bs), tuple(rts)), tuple(pt_ans))
    cache[key] = res
    return res


# Exit indices for the second (right-branch) descriptor row of the
# level-0 table, by (is_fork(g1), is_fork(g2)).  A DontCare funnels both
# branches to its single exit; a Fork's right branch is its exit 2.
_LEVEL0_RIGHT_EXITS = {
    (False, False): (1, 1),
    (False, True): (1, 2),
    (True, False): (2, 1),
    (True, True): (2, 2),
}


def _entry_key(field, entry):
    (q1, i1), (q2, i2) = entry
    return (field.key(q1), i1, field.key(q2), i2)


def add(n1: Diagram, n2: Diagram) -> Diagram:
    """Pointwise sum: the diagram of ``x -> n1(x) + n2(x)``."""
    forest = _common_forest(n1, n2)
    field = forest.field
    if is_zero_diagram(n1):
        return n2
    if is_zero_diagram(n2):
        return n1

    g, pt = weighted_pair_product(forest, n1.head, n2.head,
                                  n1.factor, n2.factor)
    deduced = tuple(field.add(field.mul(q1, n1.values[i1 - 1]),
                              field.mul(q2, n2.values[i2 - 1]))
                    for (q1, i1), (q2, i2) in pt)
    # Exits merge when their sums agree up to a scalar that reduce can
    # push into weights, which for the 0/1 value alphabet means exactly:
    # zero sums together, nonzero sums together.
    pattern = tuple(field.zero if field.is_zero(v) else field.one
                    for v in deduced)
    projected, rho = collapse_classes_leftmost(pattern)
    reduced, w = reduce(forest, g, rho, deduced)
    return forest.diagram(w, reduced, projected)


def subtract(n1: Diagram, n2: Diagram) -> Diagram:
    """Pointwise difference, as ``n1 + (-1) * n2``.

    Requires the field to contain -1 (all shipped instances do).
    """
    field = _common_forest(n1, n2).field
    return add(n1, scalar_multiply(field.minus_one, n2))


def _common_forest(n1, n2):
    if n1.forest is not n2.forest:
        raise ValueError("operands belong to different forests")
    if n1.level != n2.level:
        raise ValueError("operands must have the same level")
    return n1.forest
