"""Hash-consed diagram structures.

A diagram is a triple (factor, head grouping, value tuple). Groupings
form a two-level hierarchy: level-0 groupings decide a single variable
(a *fork* with two exits or a *don't-care* with one), and an internal
grouping at level k wires an A-connection over the first half of the
variables to B-connections over the second half through return tuples.
Return tuples are 1-based, the A-return tuple is always the identity,
and every grouping is interned in a per-forest unique table, so
structural equality is pointer equality.

Weights on level-0 edges and the top-level factor come from a
semi-field instance owned by the forest. A value tuple assigns a
terminal weight (0 or 1, all entries distinct) to each head exit, and
the function computed on an assignment is
``factor * path_weight * value[exit]``.

The ``size`` accounting and the ``validate`` audit live here as well;
both operate on the set of distinct groupings reachable from a head.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .semifield import Semifield

__all__ = [
    "StructureError",
    "Grouping",
    "ForkGrouping",
    "DontCareGrouping",
    "InternalGrouping",
    "Diagram",
    "Forest",
    "SizeReport",
    "evaluate",
    "size",
    "validate",
    "reachable_groupings",
]


class StructureError(ValueError):
    """Raised when a grouping or triple violates a structural invariant."""


class Grouping:
    __slots__ = ()

    level = 0
    number_of_exits = 0


class ForkGrouping(Grouping):
    """Level-0 grouping that distinguishes its variable: two exits."""

    __slots__ = ("lw", "rw")

    level = 0
    number_of_exits = 2

    def __init__(self, lw, rw):
        self.lw = lw
        self.rw = rw

    def __repr__(self):
        return f"Fork({self.lw!r}, {self.rw!r})"


class DontCareGrouping(Grouping):
    """Level-0 grouping with a single exit reached on either bit."""

    __slots__ = ("lw", "rw")

    level = 0
    number_of_exits = 1

    def __init__(self, lw, rw):
        self.lw = lw
        self.rw = rw

    def __repr__(self):
        return f"DontCare({self.lw!r}, {self.rw!r})"


class InternalGrouping(Grouping):
    __slots__ = ("level", "a_connection", "b_connections", "b_return_tuples",
                 "number_of_exits")

    def __init__(self, level, a_connection, b_connections, b_return_tuples,
                 number_of_exits):
        self.level = level
        self.a_connection = a_connection
        self.b_connections = b_connections
        self.b_return_tuples = b_return_tuples
        self.number_of_exits = number_of_exits

    @property
    def a_return_tuple(self):
        # Middle vertices are numbered by A-exit; the map is the identity.
        return tuple(range(1, len(self.b_connections) + 1))

    @property
    def number_of_b_connections(self):
        return len(self.b_connections)

    def __repr__(self):
        return (f"Internal(level={self.level}, "
                f"b={len(self.b_connections)}, exits={self.number_of_exits})")


class Diagram:
    """Interned (factor, head grouping, value tuple) triple."""

    __slots__ = ("forest", "factor", "head", "values")

    def __init__(self, forest, factor, head, values):
        self.forest = forest
        self.factor = factor
        self.head = head
        self.values = values

    @property
    def level(self):
        return self.head.level

    @property
    def num_variables(self):
        return 1 << self.head.level

    def __repr__(self):
        f = self.forest.field
        vals = ",".join(f.format(v) for v in self.values)
        return (f"Diagram(level={self.level}, factor={f.format(self.factor)}, "
                f"values=[{vals}])")


def _check_return_tuples(b_connections, b_return_tuples):
    """Shared shape checks for internal groupings; returns exit count."""
    if len(b_connections) != len(b_return_tuples) or not b_connections:
        raise StructureError("B-connection and return-tuple counts differ")
    seen_max = 0
    for b, rt in zip(b_connections, b_return_tuples):
        if len(rt) != b.number_of_exits:
            raise StructureError("return tuple length != B-connection exits")
        used = set()
        for target in rt:
            if not isinstance(target, int) or target < 1:
                raise StructureError(f"bad return-tuple entry {target!r}")
            if target in used:
                raise StructureError("return tuple maps two exits together")
            used.add(target)
            if target > seen_max + 1:
                raise StructureError(
                    "exit numbers must appear in first-occurrence order")
            seen_max = max(seen_max, target)
    return seen_max


def _duplicate_middles(b_connections, b_return_tuples):
    """True if some (B-connection, return tuple) pair repeats.

    Cross-product intermediates legitimately carry duplicates (the
    reduction step merges them), so this is audited by :func:`validate`
    rather than enforced when a grouping is interned.
    """
    pairs = set()
    for b, rt in zip(b_connections, b_return_tuples):
        pair = (id(b), rt)
        if pair in pairs:
            return True
        pairs.add(pair)
    return False


class Forest:
    """Owner of the unique tables and operation caches for one field.

    All groupings and triples of a computation are interned here;
    diagrams from different forests must not be mixed. Operation
    memo tables live in ``caches`` keyed by operation name and can be
    dropped wholesale without affecting canonicity (interning is what
    makes handles unique; the caches only avoid recomputation).
    """

    def __init__(self, field: Semifield):
        self.field = field
        self._leaf_table = {}
        self._internal_table = {}
        self._diagram_table = {}
        self._canonical_ids = set()
        self._zero_protos = {}
        self._one_protos = {}
        self.caches = {}

    # -- interning ---------------------------------------------------

    def fork(self, lw, rw) -> ForkGrouping:
        f = self.field
        tkey = ("fork", f.key(lw), f.key(rw))
        g = self._leaf_table.get(tkey)
        if g is None:
            g = ForkGrouping(lw, rw)
            self._leaf_table[tkey] = g
            if f.is_one(lw) or (f.is_zero(lw) and f.is_one(rw)):
                self._canonical_ids.add(id(g))
        return g

    def dontcare(self, lw, rw) -> DontCareGrouping:
        f = self.field
        tkey = ("dc", f.key(lw), f.key(rw))
        g = self._leaf_table.get(tkey)
        if g is None:
            g = DontCareGrouping(lw, rw)
            self._leaf_table[tkey] = g
            if f.is_one(lw) or (f.is_zero(lw) and f.is_one(rw)):
                self._canonical_ids.add(id(g))
        return g

    def internal(self, a_connection, b_connections,
                 b_return_tuples) -> InternalGrouping:
        b_connections = tuple(b_connections)
        b_return_tuples = tuple(tuple(rt) for rt in b_return_tuples)
        level = a_connection.level + 1
        if len(b_connections) != a_connection.number_of_exits:
            raise StructureError("middle count != A-connection exits")
        for b in b_connections:
            if b.level != a_connection.level:
                raise StructureError("A- and B-connection levels differ")
        exits = _check_return_tuples(b_connections, b_return_tuples)
        tkey = (level, id(a_connection), tuple(map(id, b_connections)),
                b_return_tuples)
        g = self._internal_table.get(tkey)
        if g is None:
            g = InternalGrouping(level, a_connection, b_connections,
                                 b_return_tuples, exits)
            self._internal_table[tkey] = g
        return g

    def diagram(self, factor, head, values) -> Diagram:
        f = self.field
        values = tuple(values)
        if len(values) != head.number_of_exits:
            raise StructureError("value tuple length != head exits")
        vkeys = tuple(f.key(v) for v in values)
        zero_key, one_key = f.key(f.zero), f.key(f.one)
        for vk in vkeys:
            if vk != zero_key and vk != one_key:
                raise StructureError("value tuple entries must be 0 or 1")
        if len(set(vkeys)) != len(vkeys):
            raise StructureError("value tuple entries must be distinct")
        tkey = (f.key(factor), id(head), vkeys)
        d = self._diagram_table.get(tkey)
        if d is None:
            d = Diagram(self, factor, head, values)
            self._diagram_table[tkey] = d
        return d

    # -- canonicity witnesses ------------------------------------------

    def mark_canonical(self, g: Grouping):
        """Record that ``g`` was produced by a canonicalizing construction.

        Purely an optimization hint consumed by Reduce's early exit;
        an unmarked canonical grouping is rebuilt to the same handle.
        """
        self._canonical_ids.add(id(g))

    def is_marked_canonical(self, g: Grouping) -> bool:
        return id(g) in self._canonical_ids

    # -- memo tables ---------------------------------------------------

    def cache(self, name: str) -> dict:
        c = self.caches.get(name)
        if c is None:
            c = self.caches[name] = {}
        return c

    def clear_caches(self):
        """Drop all operation memo tables (unique tables are kept)."""
        self.caches.clear()

    # -- constant protos -------------------------------------------------

    def zero_proto(self, level: int) -> Grouping:
        g = self._zero_protos.get(level)
        if g is None:
            if level == 0:
                g = self.dontcare(self.field.zero, self.field.one)
            else:
                below = self.zero_proto(level - 1)
                g = self.internal(below, (below,), ((1,),))
            self.mark_canonical(g)
            self._zero_protos[level] = g
        return g

    def one_proto(self, level: int) -> Grouping:
        g = self._one_protos.get(level)
        if g is None:
            if level == 0:
                g = self.dontcare(self.field.one, self.field.one)
            else:
                below = self.one_proto(level - 1)
                g = self.internal(below, (below,), ((1,),))
            self.mark_canonical(g)
            self._one_protos[level] = g
        return g

    def zero_diagram(self, level: int) -> Diagram:
        return self.diagram(self.field.zero, self.zero_proto(level),
                            (self.field.zero,))

    def one_diagram(self, level: int) -> Diagram:
        return self.diagram(self.field.one, self.one_proto(level),
                            (self.field.one,))

    def constant_diagram(self, level: int, value) -> Diagram:
        """The diagram mapping every assignment to ``value``."""
        if self.field.is_zero(value):
            return self.zero_diagram(level)
        return self.diagram(value, self.one_proto(level), (self.field.one,))

    def __repr__(self):
        return (f"<Forest {self.field.name}: "
                f"{len(self._leaf_table) + len(self._internal_table)} "
                f"groupings, {len(self._diagram_table)} diagrams>")


# -- evaluation ---------------------------------------------------------


def _coerce_bits(assignment) -> tuple:
    if isinstance(assignment, str):
        bits = []
        for ch in assignment:
            if ch == "0":
                bits.append(0)
            elif ch == "1":
                bits.append(1)
            else:
                raise ValueError(f"bad assignment character {ch!r}")
        return tuple(bits)
    bits = tuple(int(b) for b in assignment)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("assignment bits must be 0 or 1")
    return bits


def _eval_grouping(field, g, bits, lo, hi):
    """Exit index (1-based) and path weight of ``g`` on bits[lo:hi]."""
    if g.level == 0:
        if bits[lo] == 0:
            return 1, g.lw
        return (2, g.rw) if isinstance(g, ForkGrouping) else (1, g.rw)
    mid = (lo + hi) // 2
    a_exit, a_weight = _eval_grouping(field, g.a_connection, bits, lo, mid)
    b = g.b_connections[a_exit - 1]
    b_exit, b_weight = _eval_grouping(field, b, bits, mid, hi)
    return (g.b_return_tuples[a_exit - 1][b_exit - 1],
            field.mul(a_weight, b_weight))


def evaluate(diagram: Diagram, assignment):
    """Value of the represented function on one assignment.

    ``assignment`` is a bit string or 0/1 sequence with one bit per
    variable, leftmost bit first (the A-connection half comes first).
    """
    bits = _coerce_bits(assignment)
    if len(bits) != diagram.num_variables:
        raise ValueError(
            f"expected {diagram.num_variables} bits, got {len(bits)}")
    field = diagram.forest.field
    exit_index, weight = _eval_grouping(field, diagram.head, bits, 0,
                                        len(bits))
    return field.mul(diagram.factor,
                     field.mul(weight, diagram.values[exit_index - 1]))


def evaluate_exit(diagram: Diagram, assignment):
    """(exit index, accumulated path weight) of the head on an assignment."""
    bits = _coerce_bits(assignment)
    if len(bits) != diagram.num_variables:
        raise ValueError(
            f"expected {diagram.num_variables} bits, got {len(bits)}")
    return _eval_grouping(diagram.forest.field, diagram.head, bits, 0,
                          len(bits))


def is_zero_diagram(diagram: Diagram) -> bool:
    """True when the diagram denotes the all-zero function.

    Structural test (canonical zero head, or a factor that is exactly
    the additive identity), deliberately not the rounding key: a global
    factor may sit below the key's resolution, as in deep Hadamard
    powers, without the function being zero.
    """
    forest = diagram.forest
    return (diagram.head is forest.zero_proto(diagram.level)
            or diagram.factor == forest.field.zero)


# -- traversal and size ---------------------------------------------------


def reachable_groupings(head: Grouping) -> list:
    """Distinct groupings reachable from ``head``, parents first."""
    seen = {}
    order = []
    stack = [head]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen[id(g)] = g
        order.append(g)
        if isinstance(g, InternalGrouping):
            stack.append(g.a_connection)
            stack.extend(g.b_connections)
    return order


class SizeReport(NamedTuple):
    groupings: int
    vertices: int
    edges: int
    total: int


def size(diagram: Diagram) -> SizeReport:
    """Vertex/edge accounting over the distinct reachable groupings.

    Per grouping: one unit for the grouping itself; vertices are the
    entry vertex, the middle vertices, the exit vertices, and (for a
    fork) the branch point of the decision; edges are the two decision
    edges at level 0, and the A-connection edge, A-return edges,
    B-connection edges and B-return edges internally. One extra unit
    counts the free edge above the head. Exit-to-terminal links are
    not counted.
    """
    groupings = vertices = edges = 0
    for g in reachable_groupings(diagram.head):
        groupings += 1
        if isinstance(g, ForkGrouping):
            vertices += 4
            edges += 2
        elif isinstance(g, DontCareGrouping):
            vertices += 2
            edges += 2
        else:
            middles = len(g.b_connections)
            vertices += 1 + middles + g.number_of_exits
            edges += 1 + middles + middles
            edges += sum(len(rt) for rt in g.b_return_tuples)
    total = groupings + vertices + edges + 1
    return SizeReport(groupings, vertices, edges, total)


# -- validation ---------------------------------------------------------


def _path_kinds(field, g, memo):
    """Per exit: (has zero-weight path, has nonzero-weight path)."""
    got = memo.get(id(g))
    if got is not None:
        return got
    if g.level == 0:
        lz = field.is_zero(g.lw)
        rz = field.is_zero(g.rw)
        if isinstance(g, ForkGrouping):
            kinds = ((lz, not lz), (rz, not rz))
        else:
            kinds = ((lz or rz, (not lz) or (not rz)),)
    else:
        a_kinds = _path_kinds(field, g.a_connection, memo)
        zero = [False] * g.number_of_exits
        nonzero = [False] * g.number_of_exits
        for m, (b, rt) in enumerate(zip(g.b_connections, g.b_return_tuples)):
            b_kinds = _path_kinds(field, b, memo)
            az, anz = a_kinds[m]
            for j, target in enumerate(rt):
                bz, bnz = b_kinds[j]
                if az or bz:
                    zero[target - 1] = True
                if anz and bnz:
                    nonzero[target - 1] = True
        kinds = tuple(zip(zero, nonzero))
    memo[id(g)] = kinds
    return kinds


def validate(diagram: Diagram) -> list:
    """Audit structural invariants and weight constraints.

    Returns a list of human-readable violation strings; an empty list
    means the diagram is well formed. Construction through a Forest
    already rejects structural breakage, so on diagrams built normally
    this checks the weight conditions: level-0 normalization, the
    zero-path conditions on B-connections and terminal values, and
    canonical-zero uniqueness (factor 0 exactly on the zero diagram).
    """
    forest = diagram.forest
    field = forest.field
    out = []
    groupings = reachable_groupings(diagram.head)

    by_key = {}
    for g in groupings:
        if g.level == 0:
            kind = "fork" if isinstance(g, ForkGrouping) else "dc"
            skey = (kind, field.key(g.lw), field.key(g.rw))
        else:
            skey = (g.level, id(g.a_connection),
                    tuple(map(id, g.b_connections)), g.b_return_tuples)
        other = by_key.setdefault(skey, g)
        if other is not g:
            out.append(f"duplicate structure not interned: {g!r}")

    kinds_memo = {}
    for g in groupings:
        if g.level == 0:
            if not (field.is_one(g.lw)
                    or (field.is_zero(g.lw) and field.is_one(g.rw))):
                out.append(f"level-0 weights not normalized: {g!r}")
            continue
        try:
            _check_return_tuples(g.b_connections, g.b_return_tuples)
        except StructureError as exc:
            out.append(f"{exc} in {g!r}")
        if _duplicate_middles(g.b_connections, g.b_return_tuples):
            out.append(f"duplicate (B-connection, return tuple) pair in {g!r}")
        if g.number_of_exits != max(t for rt in g.b_return_tuples
                                    for t in rt):
            out.append(f"exit count mismatch in {g!r}")
        if len(g.b_connections) != g.a_connection.number_of_exits:
            out.append(f"middle count mismatch in {g!r}")
        a_kinds = _path_kinds(field, g.a_connection, kinds_memo)
        zero_below = forest.zero_proto(g.level - 1)
        for m, b in enumerate(g.b_connections):
            az, anz = a_kinds[m]
            if az and not anz and b is not zero_below:
                out.append(
                    f"dead middle {m + 1} of {g!r} lacks the zero proto")
            if az and anz and g is not forest.zero_proto(g.level):
                out.append(
                    f"middle {m + 1} of {g!r} mixes zero and nonzero paths")

    head_kinds = _path_kinds(field, diagram.head, kinds_memo)
    for e, (_, has_nonzero) in enumerate(head_kinds):
        if not has_nonzero and not field.is_zero(diagram.values[e]):
            out.append(f"exit {e + 1} has no nonzero path but value 1")

    is_zero_triple = (diagram.head is forest.zero_proto(diagram.level)
                      and len(diagram.values) == 1
                      and field.is_zero(diagram.values[0]))
    # Compared exactly, not through the rounding key: a factor may be
    # legitimately tiny (Hadamard powers) without being the identity.
    if (diagram.factor == field.zero) != is_zero_triple:
        out.append("factor 0 must coincide with the canonical zero diagram")

    if len(diagram.values) != diagram.head.number_of_exits:
        out.append("value tuple length != head exits")
    vkeys = [field.key(v) for v in diagram.values]
    if len(set(vkeys)) != len(vkeys):
        out.append("value tuple entries not distinct")
    for v in diagram.values:
        if not (field.is_zero(v) or field.is_one(v)):
            out.append(f"value tuple entry {field.format(v)} not 0/1")

    return out
