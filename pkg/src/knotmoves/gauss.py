"""Gauss diagrams: signed arrows on a cycle of passage slots.

A diagram with n crossings walks through 2n passages; slot ``i`` is the
i-th passage.  Each crossing contributes one arrow from its under-passage
slot to its over-passage slot, signed like the crossing.  Two Gauss
diagrams are compared up to rotation of the slot cycle; reflections are
never quotiented.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from . import diagram as pd
from .errors import NonRealizable, UnknownArrow


@dataclass(frozen=True)
class GaussDiagram:
    """Immutable arrow list; ``arrows[i] = (tail_slot, head_slot, sign)``."""

    arrows: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        slots = [s for t, h, _ in self.arrows for s in (t, h)]
        if sorted(slots) != list(range(2 * len(self.arrows))):
            raise ValueError(f"arrow endpoints {sorted(slots)} do not tile the cycle")
        if any(s not in (1, -1) for _, _, s in self.arrows):
            raise ValueError("arrow signs must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.arrows)

    @property
    def size(self) -> int:
        return 2 * len(self.arrows)

    @cached_property
    def interleave_masks(self) -> tuple[int, ...]:
        """Bitmask per arrow of the arrows it interleaves."""
        masks = [0] * self.n
        for i, j in itertools.combinations(range(self.n), 2):
            if _interleaved(self.arrows[i], self.arrows[j], self.size):
                masks[i] |= 1 << j
                masks[j] |= 1 << i
        return tuple(masks)

    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, _, s in self.arrows)


@dataclass(frozen=True)
class ArrowPattern:
    """A matching template: directed arrows, each sign either fixed or free."""

    arrows: tuple[tuple[int, int, Optional[int]], ...]

    def __post_init__(self):
        slots = [s for t, h, _ in self.arrows for s in (t, h)]
        if sorted(slots) != list(range(2 * len(self.arrows))):
            raise ValueError("pattern endpoints must tile the cycle")

    @property
    def n(self) -> int:
        return len(self.arrows)

    @cached_property
    def degree_multiset(self) -> tuple[int, ...]:
        size = 2 * self.n
        degs = []
        for i in range(self.n):
            degs.append(
                sum(
                    1
                    for j in range(self.n)
                    if j != i
                    and _interleaved(self.arrows[i][:2] + (1,), self.arrows[j][:2] + (1,), size)
                )
            )
        return tuple(sorted(degs))


def gauss(arrows: Iterable[tuple[int, int, int]]) -> GaussDiagram:
    return GaussDiagram(tuple(tuple(a) for a in arrows))


def _interleaved(a, b, size: int) -> bool:
    at, ah = a[0], a[1]
    lo, hi = min(at, ah), max(at, ah)
    return (lo < b[0] < hi) != (lo < b[1] < hi)


def arrows_interleave(g: GaussDiagram, i: int, j: int) -> bool:
    """True when arrow ``j`` has exactly one endpoint in each arc cut by ``i``."""
    for k in (i, j):
        if not 0 <= k < g.n:
            raise UnknownArrow(f"arrow index {k} out of range (n={g.n})")
    if i == j:
        raise UnknownArrow("need two distinct arrows")
    return _interleaved(g.arrows[i], g.arrows[j], g.size)


def canonical_form(g: GaussDiagram) -> tuple:
    """Rotation-invariant normal form of the slot cycle."""
    size = g.size
    if size == 0:
        return ()
    return min(
        tuple(sorted(((t - r) % size, (h - r) % size, s) for t, h, s in g.arrows))
        for r in range(size)
    )


def equivalent(g1: GaussDiagram, g2: GaussDiagram) -> bool:
    """Equality up to rotation of the basepoint."""
    return g1.n == g2.n and canonical_form(g1) == canonical_form(g2)


def mirror(g: GaussDiagram) -> GaussDiagram:
    """Reverse every arrow and negate every sign; the cycle stays put."""
    return GaussDiagram(tuple((h, t, -s) for t, h, s in g.arrows))


def rotate(g: GaussDiagram, r: int) -> GaussDiagram:
    size = g.size
    if size == 0:
        return g
    return GaussDiagram(
        tuple(((t - r) % size, (h - r) % size, s) for t, h, s in g.arrows)
    )


# -- conversion to and from planar diagrams -----------------------------------


def gauss_from_planar(d: pd.PlanarDiagram) -> GaussDiagram:
    """Walk the component once from its canonical basepoint."""
    pd.require_valid(d)
    if d.n == 0:
        return GaussDiagram(())
    slots_of: dict[int, dict[bool, int]] = {}
    for i, (_, head) in enumerate(d.component_walk()):
        slots_of.setdefault(head[0], {})[d.is_over_dart(head)] = i
    arrows = []
    for c in sorted(slots_of):
        passages = slots_of[c]
        arrows.append((passages[False], passages[True], pd.crossing_sign(d, c)))
    arrows.sort()
    return GaussDiagram(tuple(arrows))


def reconstruct_planar(g: GaussDiagram) -> pd.PlanarDiagram:
    """Build the planar diagram realizing ``g``, if one exists.

    The local rotation at every crossing is forced by the arrow direction
    and sign, so realizability reduces to the face count of the resulting
    map.  The unbounded face is chosen deterministically as the face right
    of the first arc leaving slot 0.
    """
    if g.n == 0:
        return pd.round_unknot(1)
    size = g.size
    passage: dict[int, tuple[int, bool]] = {}
    for c, (t, h, _) in enumerate(g.arrows):
        passage[t] = (c, False)
        passage[h] = (c, True)

    def in_port(slot: int) -> pd.Dart:
        c, over = passage[slot]
        if not over:
            return (c, 0)
        return (c, 3) if g.arrows[c][2] == 1 else (c, 1)

    pairing: dict[pd.Dart, pd.Dart] = {}
    heads: set[pd.Dart] = set()
    for s in range(size):
        tail = pd.opposite(in_port(s))
        head = in_port((s + 1) % size)
        pairing[tail] = head
        pairing[head] = tail
        heads.add(head)
    over = {c: 1 for c in range(g.n)}
    first_tail = pd.opposite(in_port(0))
    d = pd.PlanarDiagram(over, pairing, heads, first_tail, 0)

    problems = pd.validate(d)
    if problems:
        raise NonRealizable(
            "no planar embedding: " + "; ".join(problems)
        )
    return pd.PlanarDiagram(over, pairing, heads, first_tail, pd.compute_rotation(d))


# -- pattern counting ----------------------------------------------------------


def _induced(g: GaussDiagram, subset: tuple[int, ...]):
    """Relabel the chosen arrows onto a fresh cycle of 2k slots."""
    endpoints = sorted(s for i in subset for s in g.arrows[i][:2])
    position = {s: k for k, s in enumerate(endpoints)}
    return tuple(
        (position[g.arrows[i][0]], position[g.arrows[i][1]], g.arrows[i][2])
        for i in subset
    )


def _matches(induced, pattern: ArrowPattern) -> bool:
    """Rotation-equivalence of an induced arrangement with a template."""
    k2 = 2 * len(induced)
    for r in range(k2):
        table = {((t - r) % k2, (h - r) % k2): s for t, h, s in induced}
        if all(
            (pt, ph) in table and (ps is None or table[(pt, ph)] == ps)
            for pt, ph, ps in pattern.arrows
        ):
            return True
    return False


def count_pattern(g: GaussDiagram, pattern: ArrowPattern) -> int:
    """Signed count of subdiagrams shaped like ``pattern``.

    Each occurrence (a subset of arrows) is counted once — automorphisms of
    the template never double-count — with weight the product of the signs
    of the matched arrows.
    """
    k = pattern.n
    if k == 0:
        return 1
    if k > g.n:
        return 0
    masks = g.interleave_masks
    want_degrees = pattern.degree_multiset
    total = 0
    for subset in itertools.combinations(range(g.n), k):
        bits = 0
        for i in subset:
            bits |= 1 << i
        degs = sorted((masks[i] & bits).bit_count() for i in subset)
        if degs != list(want_degrees):
            continue
        if _matches(_induced(g, subset), pattern):
            sign = 1
            for i in subset:
                sign *= g.arrows[i][2]
            total += sign
    return total


def brute_count_pattern(g: GaussDiagram, pattern: ArrowPattern) -> int:
    """Reference counter: enumerate every injection, group by image.

    Checks cyclic-order preservation directly on the endpoint sequence, with
    no canonicalization, so it is an independent oracle for count_pattern.
    """
    k = pattern.n
    if k == 0:
        return 1
    images: dict[frozenset, int] = {}
    slot_owner = {}
    for idx, (t, h, _) in enumerate(pattern.arrows):
        slot_owner[t] = (idx, 0)
        slot_owner[h] = (idx, 1)
    for choice in itertools.permutations(range(g.n), k):
        ok = True
        for idx, (pt, ph, ps) in enumerate(pattern.arrows):
            if ps is not None and g.arrows[choice[idx]][2] != ps:
                ok = False
                break
        if not ok:
            continue
        seq = []
        for s in range(2 * k):
            idx, end = slot_owner[s]
            seq.append(g.arrows[choice[idx]][end])
        descents = sum(1 for i in range(len(seq)) if seq[i] > seq[(i + 1) % len(seq)])
        if descents != 1:
            continue
        image = frozenset(choice)
        if image not in images:
            sign = 1
            for i in image:
                sign *= g.arrows[i][2]
            images[image] = sign
    return sum(images.values())


# -- isolated copies -----------------------------------------------------------


def _interleave_components(g: GaussDiagram) -> list[tuple[int, ...]]:
    masks = g.interleave_masks
    seen = [False] * g.n
    comps = []
    for i in range(g.n):
        if seen[i]:
            continue
        stack, comp = [i], []
        seen[i] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            m = masks[x]
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return comps


def count_isolated_copies(g: GaussDiagram, h: GaussDiagram) -> int:
    """Embeddings of ``h`` in ``g`` whose image no outside arrow interleaves.

    Embeddings preserve arrow directions, signs and the cyclic order; copies
    are counted once each (up to automorphisms of ``h``).  An isolated image
    is closed under interleavement, hence a union of interleavement-connected
    components, which keeps the enumeration small.
    """
    if h.n == 0:
        return 1
    if h.n > g.n:
        return 0
    template = ArrowPattern(h.arrows)
    comps = [c for c in _interleave_components(g)]
    sizes = [len(c) for c in comps]
    count = 0
    for pick in _subset_sums(sizes, h.n):
        subset = tuple(sorted(i for ci in pick for i in comps[ci]))
        if _matches(_induced(g, subset), template):
            count += 1
    return count


def _subset_sums(sizes: list[int], target: int):
    """Indices of every sub-multiset of ``sizes`` summing to ``target``."""
    out = []

    def rec(start: int, remaining: int, acc: list[int]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(sizes)):
            if sizes[i] <= remaining:
                acc.append(i)
                rec(i + 1, remaining - sizes[i], acc)
                acc.pop()

    rec(0, target, [])
    return out


def brute_count_isolated_copies(g: GaussDiagram, h: GaussDiagram) -> int:
    """Reference counter over all injections with an explicit isolation scan."""
    if h.n == 0:
        return 1
    images = set()
    slot_owner = {}
    for idx, (t, hd, _) in enumerate(h.arrows):
        slot_owner[t] = (idx, 0)
        slot_owner[hd] = (idx, 1)
    size = g.size
    for choice in itertools.permutations(range(g.n), h.n):
        if any(g.arrows[choice[i]][2] != h.arrows[i][2] for i in range(h.n)):
            continue
        seq = []
        for s in range(2 * h.n):
            idx, end = slot_owner[s]
            seq.append(g.arrows[choice[idx]][end])
        descents = sum(1 for i in range(len(seq)) if seq[i] > seq[(i + 1) % len(seq)])
        if descents != 1:
            continue
        inside = set(choice)
        isolated = all(
            not _interleaved(g.arrows[i], g.arrows[j], size)
            for i in inside
            for j in range(g.n)
            if j not in inside
        )
        if isolated:
            images.add(frozenset(choice))
    return len(images)


# -- structural predicates and surgery ----------------------------------------


def has_adjacent_parallel_pair(g: GaussDiagram) -> bool:
    """Some pair of arrows with heads adjacent on the cycle and tails adjacent."""
    size = g.size
    if g.n < 2:
        return False
    for (t1, h1, _), (t2, h2, _) in itertools.combinations(g.arrows, 2):
        if (h1 - h2) % size in (1, size - 1) and (t1 - t2) % size in (1, size - 1):
            return True
    return False


def connected_sum_gauss(
    g1: GaussDiagram, at1: int, g2: GaussDiagram, at2: int
) -> GaussDiagram:
    """Splice the cycle of ``g2`` into an arc gap of ``g1``.

    ``at`` is a gap index: the insertion point before slot ``at``.  No arrow
    of one summand can interleave an arrow of the other in the result.
    """
    n1, n2 = g1.size, g2.size
    if not 0 <= at1 <= max(n1 - 1, 0):
        raise ValueError(f"gap {at1} out of range for a cycle of {n1} slots")
    if not 0 <= at2 <= max(n2 - 1, 0):
        raise ValueError(f"gap {at2} out of range for a cycle of {n2} slots")
    if n2 == 0:
        return g1
    if n1 == 0:
        return rotate(g2, at2)

    def place1(s: int) -> int:
        return s if s < at1 else s + n2

    def place2(s: int) -> int:
        return at1 + ((s - at2) % n2)

    arrows = [(place1(t), place1(h), s) for t, h, s in g1.arrows]
    arrows += [(place2(t), place2(h), s) for t, h, s in g2.arrows]
    arrows.sort()
    return GaussDiagram(tuple(arrows))
