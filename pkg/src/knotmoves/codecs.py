"""Text formats: planar diagram codes and signed Gauss codes.

PD codes follow the Knot-Atlas layout ``X[a,b,c,d]``: edge labels 1..2n
numbered along the orientation, the tuple starting at the incoming
under-strand and proceeding counterclockwise.  Over-strand directions are
recovered from global walk consistency (each label once inbound, once
outbound), falling back to the ``d = b + 1`` label rule only to break ties.

Signed Gauss codes are token sequences like ``O1+U2+U1+O2+``: one token per
passage in cyclic order, each crossing appearing once as O and once as U
with equal signs.
"""

from __future__ import annotations

import re

from . import diagram as pd
from . import gauss as gs
from .diagram import Dart, PlanarDiagram
from .errors import NotAKnot, ParseError, StructureError

_X_TOKEN = re.compile(r"[Xx]\s*[\[\(]\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*[\]\)]")
_GAUSS_TOKEN = re.compile(r"([OUou])\s*(\d+)\s*([+-])")


def parse_pd(text: str, outer_edge: int = 1, outer_side: str = "right") -> PlanarDiagram:
    """Parse a PD code into a planar diagram.

    PD codes are spherical; the unbounded face is fixed by convention as
    the face on one side of one edge: by default the right side of edge 1.
    A trailing ``@L`` marker in the text selects the left side instead (an
    extension emitted for diagrams whose unbounded face touches no edge on
    its right).  ``outer_edge``/``outer_side`` override both.
    """
    stripped = text.strip()
    if stripped.endswith("@L"):
        stripped = stripped[:-2].rstrip()
        if outer_side == "right":
            outer_side = "left"
    if not stripped:
        raise ParseError("empty input", position=0)
    tuples = []
    pos = 0
    while pos < len(stripped):
        chunk = stripped[pos:]
        if chunk[0] in " \t\r\n,;":
            pos += 1
            continue
        m = _X_TOKEN.match(chunk)
        if not m:
            raise ParseError(f"expected X[a,b,c,d] near {chunk[:16]!r}", position=pos)
        tuples.append(tuple(int(g) for g in m.groups()))
        pos += m.end()
    n = len(tuples)
    labels = [lbl for t in tuples for lbl in t]
    expected = set(range(1, 2 * n + 1))
    if set(labels) != expected:
        missing = sorted(expected - set(labels))
        raise StructureError(
            f"edge labels must be 1..{2*n}; missing {missing[:6]}"
            if missing
            else "unexpected edge labels"
        )
    counts = {}
    for lbl in labels:
        counts[lbl] = counts.get(lbl, 0) + 1
    bad = sorted(l for l, k in counts.items() if k != 2)
    if bad:
        raise StructureError(f"label {bad[0]} appears {counts[bad[0]]} times (expected 2)")

    # positions: (crossing, port); port 0 = incoming under, ccw
    occur: dict[int, list[Dart]] = {}
    for c, t in enumerate(tuples):
        for p, lbl in enumerate(t):
            occur.setdefault(lbl, []).append((c, p))

    # under-strand directions are fixed: in at port 0, out at port 2
    direction: dict[Dart, str] = {}
    for c in range(n):
        direction[(c, 0)] = "in"
        direction[(c, 2)] = "out"

    # propagate over-port directions: each label is once inbound and once
    # outbound, and the over strand enters one of ports 1,3 and leaves the
    # other
    def assign(dart, value):
        direction[dart] = value
        other = (dart[0], (dart[1] + 2) % 4)
        direction.setdefault(other, "out" if value == "in" else "in")

    changed = True
    while changed:
        changed = False
        for lbl, ends in occur.items():
            a, b = ends
            da, db = direction.get(a), direction.get(b)
            if da and db:
                if da == db:
                    raise StructureError(
                        f"label {lbl} runs {da} at both ends; not an oriented walk"
                    )
            elif da and not db:
                assign(b, "out" if da == "in" else "in")
                changed = True
            elif db and not da:
                assign(a, "out" if db == "in" else "in")
                changed = True
    for c, t in enumerate(tuples):
        if (c, 1) not in direction:
            # undetermined over strand: Knot-Atlas label arithmetic
            b_lbl, d_lbl = t[1], t[3]
            if d_lbl == b_lbl % (2 * n) + 1:
                direction[(c, 1)], direction[(c, 3)] = "in", "out"
            else:
                direction[(c, 1)], direction[(c, 3)] = "out", "in"
        ins = [p for p in range(4) if direction[(c, p)] == "in"]
        if len(ins) != 2 or (ins[0] + 2) % 4 == ins[1]:
            raise StructureError(f"crossing {c}: inconsistent strand directions")

    pairing: dict[Dart, Dart] = {}
    heads: set[Dart] = set()
    for lbl, (a, b) in occur.items():
        if direction[a] == direction[b]:
            raise StructureError(f"label {lbl} has two {direction[a]} ends")
        tail, head = (a, b) if direction[a] == "out" else (b, a)
        pairing[tail] = head
        pairing[head] = tail
        heads.add(head)

    over = {c: 1 for c in range(n)}  # over strand occupies ports 1,3
    if not 1 <= outer_edge <= 2 * n:
        raise StructureError(f"no edge labeled {outer_edge}")
    tail = next(x for x in occur[outer_edge] if direction[x] == "out")
    head = next(x for x in occur[outer_edge] if direction[x] == "in")
    marker = tail if outer_side == "right" else head
    d = PlanarDiagram(over, pairing, heads, marker, 0)
    problems = pd.validate(d)
    if any("multiple components" in p for p in problems):
        raise NotAKnot("; ".join(problems))
    if problems:
        raise StructureError("; ".join(problems))
    return PlanarDiagram(over, pairing, heads, marker, pd.compute_rotation(d))


def emit_pd(d: PlanarDiagram) -> str:
    """Deterministic PD text; parsing it recovers the diagram exactly.

    The starting edge is chosen so that edge 1 carries the unbounded face
    on its right (the parse convention); when the unbounded face touches
    no edge on its right, the ``@L`` marker is appended and a left-side
    edge is used.  Among the admissible starts the minimal text wins.
    """
    pd.require_valid(d)
    if d.n == 0:
        raise StructureError("PD codes cannot express the 0-crossing diagram")
    walk = d.component_walk()
    m = len(walk)
    outer = d._face_of_dart[d.outer_dart]

    def render(offset: int) -> str:
        label = {}
        for i, (tail, head) in enumerate(walk):
            lbl = (i - offset) % m + 1
            label[tail] = lbl
            label[head] = lbl
        rows = []
        for c in d.crossings:
            under_in = next(
                p for p in range(4) if (c, p) in d.heads and not d.is_over_dart((c, p))
            )
            rows.append(
                "X[%d,%d,%d,%d]"
                % tuple(label[(c, (under_in + k) % 4)] for k in range(4))
            )
        rows.sort(key=lambda r: tuple(int(x) for x in r[2:-1].split(",")))
        return " ".join(rows)

    right_offsets = [i for i, (t, _) in enumerate(walk) if d._face_of_dart[t] == outer]
    if right_offsets:
        return min(render(off) for off in right_offsets)
    left_offsets = [i for i, (_, h) in enumerate(walk) if d._face_of_dart[h] == outer]
    return min(render(off) for off in left_offsets) + " @L"


def parse_gauss(text: str) -> gs.GaussDiagram:
    stripped = text.strip()
    if not stripped:
        return gs.GaussDiagram(())
    tokens = []
    pos = 0
    while pos < len(stripped):
        if stripped[pos] in " \t\r\n,;":
            pos += 1
            continue
        m = _GAUSS_TOKEN.match(stripped[pos:])
        if not m:
            raise ParseError(
                f"expected O<k><sign> or U<k><sign> near {stripped[pos:pos+8]!r}",
                position=pos,
            )
        kind, idx, sign = m.group(1).upper(), int(m.group(2)), 1 if m.group(3) == "+" else -1
        tokens.append((kind, idx, sign))
        pos += m.end()

    slots: dict[int, dict[str, tuple[int, int]]] = {}
    for slot, (kind, idx, sign) in enumerate(tokens):
        entry = slots.setdefault(idx, {})
        if kind in entry:
            raise StructureError(f"crossing {idx} passed twice as {kind}")
        entry[kind] = (slot, sign)
    arrows = []
    for idx in sorted(slots):
        entry = slots[idx]
        if set(entry) != {"O", "U"}:
            raise StructureError(f"crossing {idx} must appear once as O and once as U")
        (o_slot, o_sign), (u_slot, u_sign) = entry["O"], entry["U"]
        if o_sign != u_sign:
            raise StructureError(f"crossing {idx} has conflicting signs")
        arrows.append((u_slot, o_slot, o_sign))
    arrows.sort()
    return gs.GaussDiagram(tuple(arrows))


def emit_gauss(g: gs.GaussDiagram) -> str:
    """Deterministic text; the rotation minimizing the output is used."""
    if g.n == 0:
        return ""

    def render(r: int) -> str:
        size = g.size
        slot_info = {}
        order = sorted(
            range(g.n), key=lambda i: min((g.arrows[i][0] - r) % size, (g.arrows[i][1] - r) % size)
        )
        names = {arrow: k + 1 for k, arrow in enumerate(order)}
        for i, (t, h, s) in enumerate(g.arrows):
            slot_info[(t - r) % size] = ("U", names[i], s)
            slot_info[(h - r) % size] = ("O", names[i], s)
        return "".join(
            f"{kind}{idx}{'+' if s == 1 else '-'}"
            for kind, idx, s in (slot_info[k] for k in range(size))
        )

    return min(render(r) for r in range(g.size))
