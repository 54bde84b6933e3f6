"""Textual dump/load of diagrams and a deterministic DOT rendering.

The dump is a line format, one grouping per record in dependency order
(children always precede their parents), so the loader can intern
bottom-up.  Rational weights round-trip exactly, including the 2^e
shorthand; float and complex weights are written with repr precision,
which Python reads back bit-identically.  Loaded groupings are interned
but never marked canonical: the file is untrusted, and operations only
lose a shortcut, not correctness, when the mark is absent.

The DOT output draws one cluster per distinct grouping with entry,
middle, and exit vertices, decision edges carrying weights at level 0
and connection/return edges above.  All orderings derive from a
postorder walk, so equal diagrams produce byte-equal text.
"""

from .core import Diagram, DontCareGrouping, Forest, InternalGrouping
from .semifield import field_by_name

__all__ = ["dump_diagram", "load_diagram", "export_dot"]

_FORMAT_NAME = "wcflobdd"
_FORMAT_VERSION = 1


def _weight_text(field, w):
    if field.name == "rational":
        return field.format(w)
    if field.name == "real":
        return repr(float(w))
    c = complex(w)
    return f"{c.real!r},{c.imag!r}"


def _weight_value(field, text):
    if field.name == "rational":
        return field.parse(text)
    if field.name == "real":
        return float(text)
    re_part, im_part = text.split(",")
    return complex(float(re_part), float(im_part))


def _postorder(head):
    order = []
    seen = set()

    def walk(g):
        if id(g) in seen:
            return
        seen.add(id(g))
        if isinstance(g, InternalGrouping):
            walk(g.a_connection)
            for b in g.b_connections:
                walk(b)
        order.append(g)

    walk(head)
    return order


def dump_diagram(diagram: Diagram) -> str:
    """Serialize one diagram; see load_diagram for the inverse."""
    field = diagram.forest.field
    order = _postorder(diagram.head)
    ids = {id(g): i for i, g in enumerate(order)}
    lines = [f"{_FORMAT_NAME} {_FORMAT_VERSION} {field.name}"]
    for i, g in enumerate(order):
        if g.level == 0:
            kind = "dontcare" if isinstance(g, DontCareGrouping) else "fork"
            lines.append(f"g {i} {kind} {_weight_text(field, g.lw)} "
                         f"{_weight_text(field, g.rw)}")
        else:
            lines.append(f"g {i} internal {g.level} {ids[id(g.a_connection)]} "
                         f"{len(g.b_connections)}")
            for b, rt in zip(g.b_connections, g.b_return_tuples):
                targets = ",".join(str(t) for t in rt)
                lines.append(f"b {ids[id(b)]} {targets}")
    values = " ".join(_weight_text(field, v) for v in diagram.values)
    lines.append(f"d {_weight_text(field, diagram.factor)} "
                 f"{ids[id(diagram.head)]} {values}")
    return "\n".join(lines) + "\n"


def load_diagram(text: str, forest: Forest | None = None) -> Diagram:
    """Rebuild a dumped diagram, interning into ``forest``.

    Without a forest one is created for the field named in the header.
    Raises ValueError on malformed input or a field mismatch.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty dump")
    header = lines[0].split()
    if (len(header) != 3 or header[0] != _FORMAT_NAME
            or header[1] != str(_FORMAT_VERSION)):
        raise ValueError(f"unrecognized dump header: {lines[0]!r}")
    field_name = header[2]
    if forest is None:
        forest = Forest(field_by_name(field_name))
    elif forest.field.name != field_name:
        raise ValueError(f"dump is over the {field_name} instance, "
                         f"forest is {forest.field.name}")
    field = forest.field

    groupings = {}
    diagram = None
    i = 1
    while i < len(lines):
        parts = lines[i].split()
        try:
            if parts[0] == "g" and parts[2] in ("fork", "dontcare"):
                gid, kind = int(parts[1]), parts[2]
                lw = _weight_value(field, parts[3])
                rw = _weight_value(field, parts[4])
                make = forest.dontcare if kind == "dontcare" else forest.fork
                groupings[gid] = make(lw, rw)
                i += 1
            elif parts[0] == "g" and parts[2] == "internal":
                gid, level = int(parts[1]), int(parts[3])
                a = groupings[int(parts[4])]
                count = int(parts[5])
                bs = []
                rts = []
                for j in range(count):
                    bparts = lines[i + 1 + j].split()
                    if bparts[0] != "b":
                        raise ValueError("expected b record")
                    bs.append(groupings[int(bparts[1])])
                    rts.append(tuple(int(t) for t in bparts[2].split(",")))
                g = forest.internal(a, tuple(bs), tuple(rts))
                if g.level != level:
                    raise ValueError(f"grouping {gid} level mismatch")
                groupings[gid] = g
                i += 1 + count
            elif parts[0] == "d":
                factor = _weight_value(field, parts[1])
                head = groupings[int(parts[2])]
                values = tuple(_weight_value(field, t) for t in parts[3:])
                diagram = forest.diagram(factor, head, values)
                i += 1
            else:
                raise ValueError("unknown record")
        except (IndexError, KeyError, ValueError) as e:
            raise ValueError(f"dump line {i + 1}: {lines[i]!r} ({e})") from None
    if diagram is None:
        raise ValueError("dump has no diagram record")
    return diagram


def export_dot(diagram: Diagram) -> str:
    """Graphviz text for a diagram; byte-stable for equal diagrams."""
    field = diagram.forest.field
    order = _postorder(diagram.head)
    ids = {id(g): i for i, g in enumerate(order)}
    out = ["digraph wcflobdd {", "  rankdir=TB;",
           "  node [shape=circle, fontsize=10];"]
    for i, g in enumerate(order):
        out.append(f"  subgraph cluster_{i} {{")
        out.append(f"    label=\"g{i} level {g.level}\";")
        out.append(f"    g{i}_entry [label=\"entry\"];")
        if g.level == 0:
            for k in range(1, g.number_of_exits + 1):
                out.append(f"    g{i}_exit{k} [label=\"exit {k}\", "
                           f"shape=doublecircle];")
            lw = _weight_text(field, g.lw)
            rw = _weight_text(field, g.rw)
            right = 1 if isinstance(g, DontCareGrouping) else 2
            out.append(f"    g{i}_entry -> g{i}_exit1 [label=\"0/{lw}\"];")
            out.append(f"    g{i}_entry -> g{i}_exit{right} "
                       f"[label=\"1/{rw}\"];")
        else:
            for m in range(1, len(g.b_connections) + 1):
                out.append(f"    g{i}_mid{m} [label=\"mid {m}\"];")
            for k in range(1, g.number_of_exits + 1):
                out.append(f"    g{i}_exit{k} [label=\"exit {k}\", "
                           f"shape=doublecircle];")
        out.append("  }")
    for i, g in enumerate(order):
        if g.level == 0:
            continue
        a = ids[id(g.a_connection)]
        out.append(f"  g{i}_entry -> g{a}_entry [label=\"A\", style=bold];")
        for m, _ in enumerate(g.b_connections, start=1):
            out.append(f"  g{a}_exit{m} -> g{i}_mid{m} [label=\"ret\"];")
        for m, (b, rt) in enumerate(zip(g.b_connections, g.b_return_tuples),
                                    start=1):
            bid = ids[id(b)]
            out.append(f"  g{i}_mid{m} -> g{bid}_entry "
                       f"[label=\"B{m}\", style=bold];")
            for j, target in enumerate(rt, start=1):
                out.append(f"  g{bid}_exit{j} -> g{i}_exit{target} "
                           f"[label=\"ret m{m}\"];")
    head = ids[id(diagram.head)]
    factor = _weight_text(field, diagram.factor)
    out.append(f"  free [shape=none, label=\"{factor}\"];")
    out.append(f"  free -> g{head}_entry;")
    for k, v in enumerate(diagram.values, start=1):
        label = _weight_text(field, v)
        out.append(f"  term{k} [shape=box, label=\"{label}\"];")
        out.append(f"  g{head}_exit{k} -> term{k};")
    out.append("}")
    return "\n".join(out) + "\n"
