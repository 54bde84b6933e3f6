"""Kronecker product, matrix multiplication, and matrix-vector apply.

A level-k diagram under the interleaved variable order (row bit, column
bit, row bit, ...) holds a square matrix of side 2^(2^(k-1)).  The
Kronecker product stacks the operands' variables, so it simply wraps the
two heads in a new top grouping.  Matrix multiplication recurses through
the block structure; below the top level no concrete cell values exist,
so each product exit carries a bilinear polynomial over the operands'
exit vertices whose coefficients absorb the summed path weights.  The
polynomials collapse to numbers only at top level, after which a reduce
pass restores canonicity.

Bilinear polynomials are plain dicts mapping ``(ev1, ev2)`` exit-index
pairs to nonzero coefficients; the empty dict is the zero polynomial.
"""

from .core import (Diagram, DontCareGrouping, StructureError, evaluate,
                   is_zero_diagram)
from .construct import identity_matrix
from .pointwise import (collapse_classes_leftmost, insert_b_connection,
                        reduce, weighted_pair_product)

__all__ = [
    "apply_matrix_to_vector",
    "bp_add",
    "bp_scale",
    "kronecker",
    "matrix_multiply",
]


def bp_add(field, bp1, bp2):
    """Sum of two bilinear polynomials, dropping cancelled terms."""
    out = dict(bp1)
    for pair, coeff in bp2.items():
        if pair in out:
            s = field.add(out[pair], coeff)
            if field.is_zero(s):
                del out[pair]
            else:
                out[pair] = s
        else:
            out[pair] = coeff
    return out


def bp_scale(field, n, bp):
    """The polynomial ``n * bp``; scaling by zero annihilates."""
    if field.is_zero(n):
        return {}
    return {pair: field.mul(n, coeff) for pair, coeff in bp.items()}


def _bp_key(field, bp):
    return tuple(sorted((pair, field.key(coeff)) for pair, coeff in bp.items()))


def _bp_remap(bp, rt1, rt2):
    """Rename exit-vertex variables through the owners' return tuples."""
    out = {}
    for (e1, e2), coeff in bp.items():
        out[(rt1[e1 - 1], rt2[e2 - 1])] = coeff
    return out


def kronecker(n1: Diagram, n2: Diagram) -> Diagram:
    """Kronecker product; operands at level k give a level k+1 result.

    The first operand's variables become the upper half, so with the
    interleaved order intact kron(A, B) is the usual block matrix of
    A-entries scaling copies of B.
    """
    forest = _common_forest(n1, n2)
    field = forest.field
    level = n1.level + 1
    if is_zero_diagram(n1) or is_zero_diagram(n2):
        return forest.zero_diagram(level)

    classes = {}
    values = []

    def cls(v):
        k = field.key(v)
        c = classes.get(k)
        if c is None:
            c = len(values) + 1
            classes[k] = c
            values.append(v)
        return c

    bs = []
    rts = []
    for v1 in n1.values:
        if field.is_zero(v1):
            bs.append(forest.zero_proto(n2.level))
            rts.append((cls(field.zero),))
        else:
            bs.append(n2.head)
            rts.append(tuple(cls(field.mul(v1, v2)) for v2 in n2.values))
    g = forest.internal(n1.head, tuple(bs), tuple(rts))
    forest.mark_canonical(g)
    return forest.diagram(field.mul(n1.factor, n2.factor), g, tuple(values))


def matrix_multiply(n1: Diagram, n2: Diagram) -> Diagram:
    """Matrix product of two interleaved-order square matrices."""
    forest = _common_forest(n1, n2)
    field = forest.field
    level = n1.level
    if level < 1:
        raise ValueError("matrices need at least one row and one column bit")
    if is_zero_diagram(n1) or is_zero_diagram(n2):
        return forest.zero_diagram(level)
    if n2 is identity_matrix(forest, level):
        return n1
    if n1 is identity_matrix(forest, level):
        return n2

    g, m, w = _mat_mult_groupings(forest, n1.head, n2.head)
    v = []
    for bp in m:
        total = field.zero
        for (e1, e2), coeff in bp.items():
            total = field.add(total, field.mul(
                coeff, field.mul(n1.values[e1 - 1], n2.values[e2 - 1])))
        v.append(total)
    pattern = tuple(field.zero if field.is_zero(x) else field.one for x in v)
    projected, rho = collapse_classes_leftmost(pattern)
    reduced, fw = reduce(forest, g, rho, tuple(v))
    factor = field.mul(field.mul(w, fw), field.mul(n1.factor, n2.factor))
    return forest.diagram(factor, reduced, projected)


def _mat_mult_groupings(forest, g1, g2):
    """Symbolic product of two proto-matrices.

    Returns ``(g, m, w)`` where ``g`` ranges over the distinguishable
    product cells, ``m`` holds one bilinear polynomial per exit of ``g``
    and, for every interleaved row/column path ``x``,

        sum_k path1(row(x) join k) * path2(k join col(x))
            == w * path_g(x) * m[exit_g(x) - 1]

    with the polynomial's (ev1, ev2) terms standing for the operands'
    exit vertices.
    """
    if g1.level != g2.level:
        raise ValueError("matrix operands must share a level")
    field = forest.field
    cache = forest.cache("matrix_mult")
    key = (id(g1), id(g2))
    hit = cache.get(key)
    if hit is not None:
        return hit

    level = g1.level
    zp = forest.zero_proto(level)
    ip = identity_matrix(forest, level).head
    if g1 is zp or g2 is zp:
        res = (zp, ({},), field.zero)
    elif g1 is ip:
        # I * M keeps M; only diagonal paths (exit 1 of the identity
        # proto) survive with unit weight.
        res = (g2, tuple({(1, k): field.one}
                         for k in range(1, g2.number_of_exits + 1)),
               field.one)
    elif g2 is ip:
        res = (g1, tuple({(k, 1): field.one}
                         for k in range(1, g1.number_of_exits + 1)),
               field.one)
    elif level == 1:
        res = _mat_mult_base(forest, g1, g2)
    else:
        res = _mat_mult_internal(forest, g1, g2)
    cache[key] = res
    return res


def _level0_branch(grouping, bit):
    """(exit, weight) taken by a level-0 grouping on one input bit."""
    if bit == 0:
        return 1, grouping.lw
    if isinstance(grouping, DontCareGrouping):
        return 1, grouping.rw
    return 2, grouping.rw


def _mat_mult_base(forest, g1, g2):
    field = forest.field
    cells1 = _cells(forest, g1)
    cells2 = _cells(forest, g2)
    bps = []
    for r in (0, 1):
        for c in (0, 1):
            bp = {}
            for k in (0, 1):
                w1, e1 = cells1[r][k]
                w2, e2 = cells2[k][c]
                coeff = field.mul(w1, w2)
                if field.is_zero(coeff):
                    continue
                pair = (e1, e2)
                if pair in bp:
                    s = field.add(bp[pair], coeff)
                    if field.is_zero(s):
                        del bp[pair]
                    else:
                        bp[pair] = s
                else:
                    bp[pair] = coeff
            bps.append(bp)
    # Group equal cells, then build the placeholder level-1 grouping that
    # realizes that cell partition with unit weights.
    keys = [_bp_key(field, bp) for bp in bps]
    projected, renumbered = collapse_classes_leftmost(keys)
    reps = {}
    for bp, k in zip(bps, keys):
        reps.setdefault(k, bp)
    one = field.one
    bs = []
    rts = []
    positions = []
    for r in (0, 1):
        left, right = renumbered[2 * r], renumbered[2 * r + 1]
        if left == right:
            h, rt = forest.dontcare(one, one), (left,)
        else:
            h, rt = forest.fork(one, one), (left, right)
        positions.append(insert_b_connection(bs, rts, h, rt))
    if positions[0] == positions[1]:
        a = forest.dontcare(one, one)
    else:
        a = forest.fork(one, one)
    g = forest.internal(a, tuple(bs), tuple(rts))
    return (g, tuple(reps[k] for k in projected), one)


def _cells(forest, g):
    cells = []
    for r in (0, 1):
        mid, aw = _level0_branch(g.a_connection, r)
        b = g.b_connections[mid - 1]
        rt = g.b_return_tuples[mid - 1]
        row = []
        for c in (0, 1):
            be, bw = _level0_branch(b, c)
            row.append((forest.field.mul(aw, bw), rt[be - 1]))
        cells.append(row)
    return cells


def _mat_mult_internal(forest, g1, g2):
    field = forest.field
    aa, ma, wa = _mat_mult_groupings(forest, g1.a_connection, g2.a_connection)
    bs = []
    rts = []
    all_bps = []
    exit_values = []
    for bp_a in ma:
        acc = _symbolic_zero(forest, g1.level - 1)
        for (k1, k2), v in bp_a.items():
            bb, mb, wb = _mat_mult_groupings(forest, g1.b_connections[k1 - 1],
                                             g2.b_connections[k2 - 1])
            mapped = [_bp_remap(bp, g1.b_return_tuples[k1 - 1],
                                g2.b_return_tuples[k2 - 1]) for bp in mb]
            keys = [_bp_key(field, bp) for bp in mapped]
            projected, rho = collapse_classes_leftmost(keys)
            reps = {}
            for bp, k in zip(mapped, keys):
                reps.setdefault(k, bp)
            h, fw = reduce(forest, bb, rho, (wb,) * len(mb))
            term = (field.mul(v, fw), h, tuple(reps[k] for k in projected))
            acc = _symbolic_add(forest, acc, term)
        w_i, h_i, bps_i = acc
        offset = len(all_bps)
        bs.append(h_i)
        rts.append(tuple(range(offset + 1, offset + 1 + len(bps_i))))
        all_bps.extend(bps_i)
        exit_values.extend([w_i] * len(bps_i))
    g = forest.internal(aa, tuple(bs), tuple(rts))

    keys = [_bp_key(field, bp) for bp in all_bps]
    projected, rho = collapse_classes_leftmost(keys)
    reps = {}
    for bp, k in zip(all_bps, keys):
        reps.setdefault(k, bp)
    reduced, fw = reduce(forest, g, rho, tuple(exit_values))
    if reduced.number_of_exits != len(projected):
        raise StructureError("matrix product lost exit classes")
    return (reduced, tuple(reps[k] for k in projected), field.mul(wa, fw))


def _symbolic_zero(forest, level):
    return (forest.field.zero, forest.zero_proto(level), ({},))


def _symbolic_add(forest, s1, s2):
    """Pointwise sum of two polynomial-valued diagrams.

    Each operand is a (weight, grouping, polynomial tuple) triple; the
    magnitudes that pointwise addition would push into leaf weights stay
    inside the polynomial coefficients here, so the reduce pass only
    separates dead exits (empty polynomial) from live ones.
    """
    field = forest.field
    w1, g1, bps1 = s1
    w2, g2, bps2 = s2
    if field.is_zero(w1):
        return s2
    if field.is_zero(w2):
        return s1
    g, pt = weighted_pair_product(forest, g1, g2, w1, w2)
    deduced = [bp_add(field, bp_scale(field, q1, bps1[i1 - 1]),
                      bp_scale(field, q2, bps2[i2 - 1]))
               for (q1, i1), (q2, i2) in pt]
    keys = [_bp_key(field, bp) for bp in deduced]
    projected, rho = collapse_classes_leftmost(keys)
    reps = {}
    for bp, k in zip(deduced, keys):
        reps.setdefault(k, bp)
    values = tuple(field.zero if not bp else field.one for bp in deduced)
    reduced, w = reduce(forest, g, rho, values)
    return (w, reduced, tuple(reps[k] for k in projected))


def apply_matrix_to_vector(m: Diagram, s: Diagram) -> Diagram:
    """Apply a matrix to a broadcast-column state.

    ``s`` encodes a vector v as the column-constant matrix V(r, c) =
    v(r); then (M x V)(r, c) = (M v)(r) for every c, so the product is
    again broadcast and no scaling correction is needed.
    """
    _probe_broadcast(s)
    return matrix_multiply(m, s)


def _probe_broadcast(s: Diagram):
    """Cheap spot check that a state ignores its column bits."""
    level = s.level
    if level > 3:
        return
    field = s.forest.field
    half = 1 << (level - 1)
    for row_bit in (0, 1):
        seen = None
        for col_bit in (0, 1):
            bits = []
            for _ in range(half):
                bits.append(row_bit)
                bits.append(col_bit)
            value = field.key(evaluate(s, bits))
            if seen is None:
                seen = value
            elif seen != value:
                raise ValueError("state is not column-independent")


def _common_forest(n1, n2):
    if n1.forest is not n2.forest:
        raise ValueError("operands belong to different forests")
    if n1.level != n2.level:
        raise ValueError("operands must have the same level")
    return n1.forest
