"""Built-in diagrams and the dependence-pair generators.

The built-ins are frozen transcriptions, each validated by the test suite
against its defining properties: the 8-crossing wheel and the locked unknot
pass the site preconditions; the figure-eight Gauss diagram carries exactly
one copy of the 4-arrow template and its mirror none.

Pair generators follow the tangle-replacement recipe: insert the input knot
as a tangle into a designated edge of the locked unknot, then perform one
strand overlap across two distinct core edges chosen so the protected
isolated copy is disturbed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import diagram as pd
from . import gauss as gs
from .diagram import Dart, PlanarDiagram, from_braid, round_unknot
from .errors import InvalidTangle, UnknownBuiltin, UnknownEdge
from .moves import MoveKind, ReidemeisterMove, apply_move, enumerate_moves

# 4-arrow template counted by the order-2 invariant: the underlying
# arrangement of the figure-eight Gauss diagram, signs left free.
_PATTERN_ARROWS = ((1, 4, None), (3, 6, None), (5, 0, None), (7, 2, None))

# Figure-eight knot Gauss diagram (from the braid closure of s1 s2^-1 s1 s2^-1).
_EIGHT_ARROWS = ((1, 4, -1), (3, 6, 1), (5, 0, -1), (7, 2, 1))


def _wheel() -> PlanarDiagram:
    """Alternating 8-crossing wheel (closed 3-braid weave)."""
    return from_braid([1, -2] * 4, 3)


def _locked_unknot() -> PlanarDiagram:
    """Unknot whose diagram admits no untwist, no untangle and no slide."""
    from ._figure2 import FIGURE2_SPEC

    over, pairing, heads, outer, rot = FIGURE2_SPEC
    full = dict(pairing)
    for a, b in pairing.items():
        full[b] = a
    return PlanarDiagram(over, full, heads, outer, rot)


def builtin(name: str):
    """Return a frozen built-in object by name."""
    table = {
        "figure1": _wheel,
        "figure2": _locked_unknot,
        "figure5-pattern": lambda: gs.ArrowPattern(_PATTERN_ARROWS),
        "figure6-eight": lambda: gs.GaussDiagram(_EIGHT_ARROWS),
        "trefoil": lambda: from_braid([1, 1, 1], 2),
        "figure-eight": lambda: from_braid([1, -2, 1, -2], 3),
        "granny": lambda: connected_sum(
            from_braid([1, 1, 1], 2),
            designated_edge(from_braid([1, 1, 1], 2)),
            from_braid([1, 1, 1], 2),
            designated_edge(from_braid([1, 1, 1], 2)),
        ),
        "square": lambda: connected_sum(
            pd.mirror(from_braid([1, 1, 1], 2)),
            designated_edge(pd.mirror(from_braid([1, 1, 1], 2))),
            from_braid([1, 1, 1], 2),
            designated_edge(from_braid([1, 1, 1], 2)),
        ),
        "unknot": lambda: round_unknot(1),
    }
    if name not in table:
        raise UnknownBuiltin(
            f"unknown builtin {name!r}; have {sorted(table)}"
        )
    return table[name]()


BUILTIN_NAMES = (
    "figure1",
    "figure2",
    "figure5-pattern",
    "figure6-eight",
    "trefoil",
    "figure-eight",
    "granny",
    "square",
    "unknot",
)


# -- tangles -------------------------------------------------------------------


@dataclass(frozen=True)
class Tangle:
    """A diagram with one edge cut open: two loose ends on the outer face."""

    source: PlanarDiagram
    cut: tuple[Dart, Dart]  # (tail, head) of the removed edge
    label: Optional[str] = None

    @property
    def n(self) -> int:
        return self.source.n

    def close(self) -> PlanarDiagram:
        return self.source


@dataclass(frozen=True)
class DiagramPair:
    first: PlanarDiagram
    second: PlanarDiagram
    tag: str
    witness: dict = field(default_factory=dict)


def _edge_of(d: PlanarDiagram, edge) -> tuple[Dart, Dart]:
    """Normalize an edge reference to its (tail, head) pair."""
    if isinstance(edge, tuple) and len(edge) == 2 and isinstance(edge[0], tuple):
        tail, head = edge
    else:
        tail = edge
        head = d.pairing.get(tail)
        if head is None:
            raise UnknownEdge(f"no dart {tail}")
    if d.pairing.get(tail) != head or tail in d.heads:
        raise UnknownEdge(f"({tail}, {head}) is not an oriented edge")
    return tail, head


def designated_edge(d: PlanarDiagram) -> tuple[Dart, Dart]:
    """The canonical surgery edge: first edge with the unbounded face on
    its right, where the tangle-turning bookkeeping is exact."""
    pd.require_valid(d)
    if d.n == 0:
        raise UnknownEdge("the 0-crossing diagram has no cuttable edge")
    outer = d._face_of_dart[d.outer_dart]
    for tail, head in d.edges():
        if d._face_of_dart[tail] == outer:
            return (tail, head)
    return d.edges()[0]


def cut_to_tangle(d: PlanarDiagram, edge, label: Optional[str] = None) -> Tangle:
    pd.require_valid(d)
    if d.n == 0:
        return Tangle(d, ((-1, -1), (-1, -1)), label or "unknot")
    tail, head = _edge_of(d, edge)
    return Tangle(d, (tail, head), label)


def replace_edge_with_tangle(d: PlanarDiagram, edge, t: Tangle) -> PlanarDiagram:
    """Splice the tangle into an edge of ``d``.

    The strand enters the tangle where its cut edge pointed and leaves where
    it began; no arrow of the tangle can interleave an arrow of the host.
    """
    pd.require_valid(d)
    if t.source.n == 0:
        return d
    if pd.validate(t.source):
        raise InvalidTangle("; ".join(pd.validate(t.source)))
    th, hh = _edge_of(d, edge)
    ts, hs = t.cut
    base = max(d.over, default=-1) + 1
    remap = {c: base + i for i, c in enumerate(t.source.crossings)}

    def m(x: Dart) -> Dart:
        return (remap[x[0]], x[1])

    pairing = dict(d.pairing)
    del pairing[th], pairing[hh]
    for a, b in t.source.pairing.items():
        if {a, b} == {ts, hs}:
            continue
        pairing[m(a)] = m(b)
    pairing[th] = m(hs)
    pairing[m(hs)] = th
    pairing[m(ts)] = hh
    pairing[hh] = m(ts)
    heads = set(d.heads) | {m(h) for h in t.source.heads if h != hs} | {m(hs)}
    over = dict(d.over)
    over.update({remap[c]: o for c, o in t.source.over.items()})
    out = PlanarDiagram(over, pairing, heads, d.outer_dart, 0)
    pd.require_valid(out)
    return PlanarDiagram(over, pairing, heads, d.outer_dart, pd.compute_rotation(out))


def connected_sum(a: PlanarDiagram, edge_a, b: PlanarDiagram, edge_b) -> PlanarDiagram:
    """``a # b``: replace an edge of ``b`` by the tangle cut from ``a``.

    Writhe adds; the turning number adds minus one when both edges carry the
    unbounded face on their right (the ``designated_edge`` default).
    """
    if a.n == 0:
        return b
    if b.n == 0:
        return a
    return replace_edge_with_tangle(b, edge_b, cut_to_tangle(a, edge_a))


# -- dependence pairs ----------------------------------------------------------


def _core_overlap_moves(f: PlanarDiagram, core_ids: set[int]):
    """Strand-overlap moves across two distinct edges of the core."""
    for mv in enumerate_moves(f, {MoveKind.R2_UP}):
        d1, d2, _ = mv.data
        e1 = {d1[0], f.pairing[d1][0]}
        e2 = {d2[0], f.pairing[d2][0]}
        t1 = d1 if d1 not in f.heads else f.pairing[d1]
        t2 = d2 if d2 not in f.heads else f.pairing[d2]
        if e1 | e2 <= core_ids and {t1, f.pairing[t1]} != {t2, f.pairing[t2]}:
            yield mv


def make_omega2_dependent_pair(k: PlanarDiagram) -> DiagramPair:
    """The overlap-locked pair for the knot carried by diagram ``k``.

    ``F`` inserts ``k`` as a tangle into the locked unknot; ``F'`` performs
    one strand overlap across two distinct core edges, chosen (first in move
    order) so the count of isolated copies of the core drops.
    """
    pd.require_valid(k)
    core = builtin("figure2")
    core_gauss = gs.gauss_from_planar(core)
    if k.n == 0:
        f = core
    else:
        f = replace_edge_with_tangle(
            core, designated_edge(core), cut_to_tangle(k, designated_edge(k))
        )
    base = gs.count_isolated_copies(gs.gauss_from_planar(f), core_gauss)
    assert base >= 1, "tangle insertion must leave the protected copy intact"
    for mv in _core_overlap_moves(f, set(core.crossings)):
        f2 = apply_move(f, mv)
        after = gs.count_isolated_copies(gs.gauss_from_planar(f2), core_gauss)
        if after < base:
            return DiagramPair(
                f,
                f2,
                "overlap-dependent",
                witness={
                    "move": mv,
                    "isolated_copies_before": base,
                    "isolated_copies_after": after,
                },
            )
    raise AssertionError(
        "no core overlap disturbs the protected copy"
    )  # pragma: no cover - guaranteed by the core's structure


def make_all_dependent_pair(k: PlanarDiagram) -> DiagramPair:
    """A pair needing every move kind: graft the chiral-count diagram pair
    onto the overlap-locked pair by connected sum."""
    base_pair = make_omega2_dependent_pair(k)
    f, f2 = base_pair.first, base_pair.second
    eight = gs.reconstruct_planar(builtin("figure6-eight"))
    eight_mirror = pd.reflect(pd.mirror(eight))
    p = connected_sum(eight, designated_edge(eight), f, designated_edge(f))
    p2 = connected_sum(
        eight_mirror, designated_edge(eight_mirror), f2, designated_edge(f2)
    )
    pattern = builtin("figure5-pattern")
    witness = {
        "base": base_pair.witness,
        "rotation_numbers": (p.rot, p2.rot),
        "pattern_counts": (
            gs.count_pattern(gs.gauss_from_planar(p), pattern),
            gs.count_pattern(gs.gauss_from_planar(p2), pattern),
        ),
        "isolated_copies": (
            gs.count_isolated_copies(
                gs.gauss_from_planar(p), gs.gauss_from_planar(builtin("figure2"))
            ),
            gs.count_isolated_copies(
                gs.gauss_from_planar(p2), gs.gauss_from_planar(builtin("figure2"))
            ),
        ),
    }
    return DiagramPair(p, p2, "all-dependent", witness=witness)
