"""Reidemeister moves: enumeration, applicability and application.

Moves are bound to the exact diagram they were enumerated on (a content
fingerprint); applying one to any other diagram raises InapplicableMove.
All applications return fresh diagrams and maintain the turning number
incrementally: +-1 for a curl,0 for everything else.

Site encodings
--------------
* ``r1-``: the single dart of the 1-gon face.
* ``r1+``: ``(dart, curl_sign)`` — the kink goes into the face on that
  dart's side of its edge and the new crossing has sign ``curl_sign``.
  On the 0-crossing diagram the dart is replaced by "inner"/"outer".
* ``r2-``: the two darts of the 2-gon face, sorted.
* ``r2+``: ``(dart1, dart2, over_first)`` — push a finger of dart1's
  strand across dart2's edge through their common face; ``over_first``
  puts the moving strand on top.  The strand alignment through the
  overlap is forced by the face geometry and resolved internally.  On
  the 0-crossing diagram: ``("inner"/"outer", over_first)``.
* ``r3``: ``(face darts sorted, sliding edge tail dart)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from . import diagram as pd
from .diagram import Dart, PlanarDiagram, opposite, sigma, sigma_inv
from .errors import InapplicableMove, NotATriangle


class MoveKind(str, Enum):
    R1_UP = "r1+"
    R1_DOWN = "r1-"
    R2_UP = "r2+"
    R2_DOWN = "r2-"
    R3 = "r3"


INCREASING = {MoveKind.R1_UP, MoveKind.R2_UP}
ALL_KINDS = frozenset(MoveKind)


def parse_kinds(spec: str) -> frozenset[MoveKind]:
    """Parse "r1,r3" / "r2+,r2-" style move-kind lists."""
    out = set()
    for token in spec.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token in ("r1", "r2"):
            out.update({MoveKind(token + "+"), MoveKind(token + "-")})
        else:
            out.add(MoveKind(token))
    return frozenset(out)


@dataclass(frozen=True)
class ReidemeisterMove:
    kind: MoveKind
    data: tuple
    token: int

    def describe(self) -> str:
        return f"{self.kind.value}{self.data}"


@dataclass(frozen=True)
class MoveSequence:
    start_key: str
    moves: tuple[ReidemeisterMove, ...]

    def __len__(self) -> int:
        return len(self.moves)


def _token(d: PlanarDiagram) -> int:
    return hash(
        (
            tuple(sorted(d.pairing.items())),
            tuple(sorted(d.over.items())),
            tuple(sorted(d.heads)),
            d.outer_dart,
            d.rot,
        )
    )


def _fresh_ids(d: PlanarDiagram, count: int) -> list[int]:
    base = max(d.over, default=-1) + 1
    return [base + i for i in range(count)]


# -- site predicates -----------------------------------------------------------


def _strand_over_at(d: PlanarDiagram, dart: Dart) -> bool:
    return d.is_over_dart(dart)


def omega3_admissible(d: PlanarDiagram, face: "pd.Polygon") -> bool:
    """A 3-gon admits a slide iff some bounding strand is over (or under)
    both other strands at its two corners of the face."""
    if face.degree != 3:
        raise NotATriangle(f"face has degree {face.degree}")
    return bool(_slide_darts(d, face.darts))


def _slide_darts(d: PlanarDiagram, fdarts: tuple[Dart, ...]) -> list[Dart]:
    """Tail darts of triangle edges whose strand may slide."""
    crossings = {x[0] for x in fdarts}
    if len(crossings) != 3:
        return []
    out = []
    for dart in fdarts:
        a = dart
        b = d.pairing[a]
        # the edge's strand passes over at both of its end crossings, or
        # under at both
        if d.is_over_dart(a) == d.is_over_dart(b):
            tail = a if a not in d.heads else b
            out.append(tail)
    return out


def _one_gons(d: PlanarDiagram) -> list[tuple[Dart, ...]]:
    return [o for o in d._face_orbits if len(o) == 1]


def _two_gons(d: PlanarDiagram) -> list[tuple[Dart, ...]]:
    return [o for o in d._face_orbits if len(o) == 2]


def _r2_down_applicable(d: PlanarDiagram, fdarts: tuple[Dart, ...]) -> bool:
    (d1, d2) = fdarts
    if d1[0] == d2[0]:
        return False
    # the 2-gon's two edges; one must be the over strand at both corners
    for dart in fdarts:
        if d.is_over_dart(dart) == d.is_over_dart(d.pairing[dart]):
            return True
    return False


# -- enumeration ---------------------------------------------------------------


def enumerate_moves(
    d: PlanarDiagram, allowed: Iterable[MoveKind] = ALL_KINDS
) -> list[ReidemeisterMove]:
    pd.require_valid(d)
    allowed = frozenset(allowed)
    token = _token(d)
    moves: list[ReidemeisterMove] = []

    if d.n == 0:
        if MoveKind.R1_UP in allowed:
            for side in ("inner", "outer"):
                for sign in (1, -1):
                    moves.append(ReidemeisterMove(MoveKind.R1_UP, (side, sign), token))
        if MoveKind.R2_UP in allowed:
            for side in ("inner", "outer"):
                for over_first in (True, False):
                    moves.append(
                        ReidemeisterMove(MoveKind.R2_UP, (side, over_first), token)
                    )
        return moves

    # Decreases and slides act inside a disk around their face; a site on
    # the unbounded face would drag a strand across infinity, which planar
    # isotopy does not grant.
    outer_face = d._face_of_dart[d.outer_dart]
    if MoveKind.R1_DOWN in allowed:
        for orbit in _one_gons(d):
            if d._face_of_dart[orbit[0]] != outer_face:
                moves.append(ReidemeisterMove(MoveKind.R1_DOWN, (orbit[0],), token))
    if MoveKind.R2_DOWN in allowed:
        for orbit in _two_gons(d):
            if d._face_of_dart[orbit[0]] != outer_face and _r2_down_applicable(d, orbit):
                moves.append(
                    ReidemeisterMove(MoveKind.R2_DOWN, tuple(sorted(orbit)), token)
                )
    if MoveKind.R3 in allowed:
        for orbit in d._face_orbits:
            if len(orbit) == 3 and d._face_of_dart[orbit[0]] != outer_face:
                for tail in _slide_darts(d, orbit):
                    moves.append(
                        ReidemeisterMove(
                            MoveKind.R3, (tuple(sorted(orbit)), tail), token
                        )
                    )
    if MoveKind.R1_UP in allowed:
        for dart in d.darts():
            for sign in (1, -1):
                moves.append(ReidemeisterMove(MoveKind.R1_UP, (dart, sign), token))
    if MoveKind.R2_UP in allowed:
        for orbit in d._face_orbits:
            for d1, d2 in itertools.permutations(sorted(orbit), 2):
                for over_first in (True, False):
                    moves.append(
                        ReidemeisterMove(MoveKind.R2_UP, (d1, d2, over_first), token)
                    )
    moves.sort(key=lambda m: (m.kind.value, repr(m.data)))
    return moves


# -- application ---------------------------------------------------------------


def apply_move(d: PlanarDiagram, move: ReidemeisterMove) -> PlanarDiagram:
    if move.token != _token(d):
        raise InapplicableMove("move was enumerated on a different diagram")
    if move.kind is MoveKind.R1_DOWN:
        out = _apply_r1_down(d, *move.data)
    elif move.kind is MoveKind.R1_UP:
        out = _apply_r1_up(d, *move.data)
    elif move.kind is MoveKind.R2_DOWN:
        out = _apply_r2_down(d, move.data)
    elif move.kind is MoveKind.R2_UP:
        out = _apply_r2_up(d, *move.data)
    elif move.kind is MoveKind.R3:
        out = _apply_r3(d, *move.data)
    else:  # pragma: no cover
        raise InapplicableMove(f"unknown kind {move.kind}")
    problems = pd.validate(out)
    if problems:  # pragma: no cover - surgery invariant
        raise AssertionError(f"move {move.describe()} broke the diagram: {problems}")
    return out


# -- curl orientation ----------------------------------------------------------


def _loop_circle_sign(d: PlanarDiagram, loop_tail: Dart) -> int:
    """Orientation of the kink circle: +1 counterclockwise."""
    circle, _ = pd._seifert_circles(d)
    target = circle[loop_tail]
    # replicate the containment walk from compute_rotation
    face_of = d._face_of_dart
    outer = face_of[d.outer_dart]
    inside: dict[int, frozenset] = {outer: frozenset()}
    from collections import deque

    queue = deque([outer])
    while queue:
        f = queue.popleft()
        for dart in d._face_orbits[f]:
            tail = dart if dart not in d.heads else d.pairing[dart]
            g = face_of[d.pairing[dart]]
            if g not in inside:
                inside[g] = inside[f] ^ {circle[tail]}
                queue.append(g)
    left = face_of[sigma(loop_tail)]
    return 1 if target in inside[left] else -1


# -- R1 down -------------------------------------------------------------------


def _apply_r1_down(d: PlanarDiagram, loop_dart: Dart) -> PlanarDiagram:
    if d._face_of_dart.get(loop_dart) is None or (
        len(d._face_orbits[d._face_of_dart[loop_dart]]) != 1
    ):
        raise InapplicableMove(f"{loop_dart} is not a 1-gon face")
    if d._face_of_dart[loop_dart] == d._face_of_dart[d.outer_dart]:
        raise InapplicableMove("untwisting across the unbounded face is not planar")
    k = loop_dart[0]
    loop_other = d.pairing[loop_dart]
    loop_tail = loop_dart if loop_dart not in d.heads else loop_other
    chirality = _loop_circle_sign(d, loop_tail)

    through = [p for p in range(4) if (k, p) not in (loop_dart, loop_other)]
    p_in = next(p for p in through if (k, p) in d.heads)
    p_out = next(p for p in through if (k, p) not in d.heads)
    x = d.pairing[(k, p_in)]
    y = d.pairing[(k, p_out)]
    rot = d.rot - chirality

    if x == (k, p_out):
        # the kink was the whole diagram
        return pd.round_unknot(rot)

    pairing = {
        a: b for a, b in d.pairing.items() if a[0] != k and b[0] != k
    }
    pairing[x] = y
    pairing[y] = x
    over = {c: o for c, o in d.over.items() if c != k}
    heads = {h for h in d.heads if h[0] != k}

    outer = d.outer_dart
    if outer[0] == k:
        old_orbit = d._face_orbits[d._face_of_dart[outer]]
        survivors = [a for a in old_orbit if a[0] != k]
        if not survivors:
            # the outer face was the 1-gon (or fused to it); it merges with
            # the face across the loop edge
            partner = d._face_orbits[d._face_of_dart[loop_other]]
            survivors = [a for a in partner if a[0] != k]
        outer = survivors[0]
    return PlanarDiagram(over, pairing, heads, outer, rot)


# -- R1 up ---------------------------------------------------------------------


def _kink_candidates(d, t, h, k):
    """Both local attachments of a kink on edge (t, h) at new crossing k."""
    for loop_head_port, exit_port in ((1, 3), (3, 1)):
        pairing = dict(d.pairing)
        del pairing[t], pairing[h]
        pairing[t] = (k, 0)
        pairing[(k, 0)] = t
        pairing[(k, 2)] = (k, loop_head_port)
        pairing[(k, loop_head_port)] = (k, 2)
        pairing[(k, exit_port)] = h
        pairing[h] = (k, exit_port)
        heads = set(d.heads) | {(k, 0), (k, loop_head_port)}
        yield pairing, heads


def _apply_r1_up(d: PlanarDiagram, site, curl_sign: int) -> PlanarDiagram:
    if d.n == 0:
        return _r1_up_round(d, site, curl_sign)
    dart = site
    if dart not in d.pairing:
        raise InapplicableMove(f"no dart {dart}")
    t = dart if dart not in d.heads else d.pairing[dart]
    h = d.pairing[t]
    same_face_both_sides = d._face_of_dart[t] == d._face_of_dart[h]
    (k,) = _fresh_ids(d, 1)

    picked = None
    for attach, (pairing, heads) in enumerate(_kink_candidates(d, t, h, k)):
        loop_head = pairing[(k, 2)]
        probe = PlanarDiagram({**d.over, k: 0}, pairing, heads, d.outer_dart, d.rot)
        if len(probe._face_orbits[probe._face_of_dart[(k, 2)]]) == 1:
            flank_dart = loop_head
        else:
            flank_dart = (k, 2)
        if same_face_both_sides:
            # both attachments curl into the same face; key the two site
            # encodings to the two attachments deterministically
            want = 0 if dart == t else 1
            if attach != want:
                continue
        elif probe._face_of_dart[dart] != probe._face_of_dart[flank_dart]:
            continue  # curls into the face on the other side of the edge
        picked = (pairing, heads)
        break
    if picked is None:  # pragma: no cover - some attachment always fits
        raise InapplicableMove("no kink attachment realizes this site")

    pairing, heads = picked
    for over in (0, 1):
        cand = PlanarDiagram({**d.over, k: over}, pairing, heads, d.outer_dart, d.rot)
        if pd.crossing_sign(cand, k) != curl_sign:
            continue
        chirality = _loop_circle_sign(cand, (k, 2))
        return PlanarDiagram(cand.over, pairing, heads, d.outer_dart, d.rot + chirality)
    raise InapplicableMove("no curl matches the requested sign")  # pragma: no cover


def _r1_up_round(d: PlanarDiagram, side: str, curl_sign: int) -> PlanarDiagram:
    if side not in ("inner", "outer"):
        raise InapplicableMove(f"bad side {side!r}")
    if d.rot == -1:
        return pd.reflect(_r1_up_round(pd.reflect(d), side, -curl_sign))
    # counterclockwise base circle; derive the kink map by selection
    for pairing, heads in (
        ({(0, 1): (0, 2), (0, 2): (0, 1), (0, 0): (0, 3), (0, 3): (0, 0)},
         {(0, 0), (0, 1)}),
        ({(0, 3): (0, 2), (0, 2): (0, 3), (0, 0): (0, 1), (0, 1): (0, 0)},
         {(0, 0), (0, 3)}),
    ):
        loop_head = pairing[(0, 2)]
        closure_darts = {(0, p) for p in range(4)} - {(0, 2), loop_head}
        for over in (0, 1):
            for outer in sorted(closure_darts | {(0, 2), loop_head}):
                cand = PlanarDiagram({0: over}, pairing, heads, outer, 0)
                loop_face = cand._face_of_dart[(0, 2)]
                if len(cand._face_orbits[loop_face]) != 1:
                    loop_face = cand._face_of_dart[loop_head]
                    if len(cand._face_orbits[loop_face]) != 1:
                        continue
                outer_face = cand._face_orbits[cand._face_of_dart[outer]]
                loop_is_outer = cand._face_of_dart.get((0, 2)) == cand._face_of_dart[outer] or (
                    len(outer_face) == 1 and outer_face[0] in ((0, 2), loop_head)
                )
                if side == "inner":
                    # curl inside: the unbounded face is the closure lobe
                    want_outer = len(outer_face) == 1 and not loop_is_outer
                else:
                    # curl outside: the unbounded face touches loop and closure
                    want_outer = len(outer_face) == 2
                if not want_outer:
                    continue
                if pd.crossing_sign(cand, 0) != curl_sign:
                    continue
                delta = 1 if side == "inner" else -1
                if pd.compute_rotation(cand) != d.rot + delta:
                    continue
                return PlanarDiagram(
                    {0: over}, pairing, heads, outer, d.rot + delta
                )
    raise InapplicableMove("no kink realizes this site")  # pragma: no cover


# -- R2 down -------------------------------------------------------------------


def _apply_r2_down(d: PlanarDiagram, fdarts: tuple) -> PlanarDiagram:
    orbit_idx = d._face_of_dart.get(fdarts[0])
    if orbit_idx is None or set(d._face_orbits[orbit_idx]) != set(fdarts):
        raise InapplicableMove(f"{fdarts} is not a face")
    if len(fdarts) != 2 or not _r2_down_applicable(d, tuple(fdarts)):
        raise InapplicableMove("2-gon does not admit an untangling move")
    if orbit_idx == d._face_of_dart[d.outer_dart]:
        raise InapplicableMove("untangling across the unbounded face is not planar")
    c1, c2 = fdarts[0][0], fdarts[1][0]
    gone = {c1, c2}

    pairing = {a: b for a, b in d.pairing.items() if a[0] not in gone and b[0] not in gone}
    heads = {h for h in d.heads if h[0] not in gone}
    over = {c: o for c, o in d.over.items() if c not in gone}

    # reconnect each strand crossing the removed zone
    entries = [
        dart
        for dart in d.pairing
        if dart[0] not in gone and d.pairing[dart][0] in gone and dart not in d.heads
    ]
    for x in sorted(entries):
        cur = d.pairing[x]
        while cur[0] in gone:
            cur = d.pairing[opposite(cur)]
        pairing[x] = cur
        pairing[cur] = x

    if not over:
        return pd.round_unknot(d.rot)

    outer = d.outer_dart
    if outer[0] in gone:
        outer = _retrack_outer_after_removal(d, gone, pairing)
    out = PlanarDiagram(over, pairing, heads, outer, d.rot)
    return out


def _retrack_outer_after_removal(
    d: PlanarDiagram, gone: set[int], new_pairing: dict
) -> Dart:
    """New dart for the unbounded face when all its old darts were removed.

    The unbounded region hugs a strand run through the removed zone; after
    straightening, it hugs the rebuilt edge on the same side: right of the
    run for a tail dart, left for a head dart.
    """
    old_orbit = d._face_orbits[d._face_of_dart[d.outer_dart]]
    survivors = [a for a in old_orbit if a[0] not in gone]
    if survivors:
        return survivors[0]
    edge_count = len(d.pairing) // 2
    for dart in old_orbit:
        tail = dart if dart not in d.heads else d.pairing[dart]
        # walk forward to the surviving head
        head, steps = d.pairing[tail], 0
        while head[0] in gone and steps <= edge_count:
            head = d.pairing[opposite(head)]
            steps += 1
        if head[0] in gone:
            continue  # this strand run closes up inside the zone
        # walk backward to the surviving tail
        entry, steps = tail, 0
        while entry[0] in gone and steps <= edge_count:
            entry = d.pairing[opposite(entry)]
            steps += 1
        if entry[0] in gone:  # pragma: no cover - forward walk survived
            continue
        return entry if dart not in d.heads else head
    raise InapplicableMove("cannot track the unbounded face")  # pragma: no cover


# -- R2 up ---------------------------------------------------------------------


def _apply_r2_up(d: PlanarDiagram, *data) -> PlanarDiagram:
    if d.n == 0:
        return _r2_up_round(d, *data)
    d1, d2, over_first = data
    for dart in (d1, d2):
        if dart not in d.pairing:
            raise InapplicableMove(f"no dart {dart}")
    if d1 == d2:
        raise InapplicableMove("need two distinct edge sides")
    if d._face_of_dart[d1] != d._face_of_dart[d2]:
        raise InapplicableMove("edge sides are not on a common face")

    t1 = d1 if d1 not in d.heads else d.pairing[d1]
    h1 = d.pairing[t1]
    t2 = d2 if d2 not in d.heads else d.pairing[d2]
    h2 = d.pairing[t2]
    same_edge = {t1, h1} == {t2, h2}
    a, b = _fresh_ids(d, 2)
    over_val = 0 if over_first else 1
    d2_is_tail = d2 not in d.heads

    for anti in (False, True):
        for pa, pb in ((3, 1), (1, 3)):
            pairing = dict(d.pairing)
            del pairing[t1], pairing[h1]
            if not same_edge:
                del pairing[t2], pairing[h2]

            def link(x, y, store=pairing):
                store[x] = y
                store[y] = x

            link(t1, (a, 0))
            link((a, 2), (b, 0))
            first, second = ((a, pa), (b, pb)) if not anti else ((b, pb), (a, pa))
            if same_edge:
                link((b, 2), first)
                link(opposite(first), second)
                link(opposite(second), h1)
            else:
                link((b, 2), h1)
                link(t2, first)
                link(opposite(first), second)
                link(opposite(second), h2)
            heads = set(d.heads) | {(a, 0), (b, 0), first, second}
            over = {**d.over, a: over_val, b: over_val}
            cand = PlanarDiagram(over, pairing, heads, d.outer_dart, d.rot)
            if pd.validate(cand):
                continue
            # the lens (new 2-gon between finger tip and crossed middle) must
            # poke away from the common face: left of the crossed segment
            # exactly when that face sits on its right
            middle_tail = opposite(first)
            lens = cand._face_of_dart[sigma(middle_tail)]
            lens_orbit = cand._face_orbits[lens]
            lens_on_left = len(lens_orbit) == 2 and all(
                x[0] in (a, b) for x in lens_orbit
            )
            if lens_on_left != d2_is_tail:
                continue
            return cand
    raise InapplicableMove("no overlap realizes this site")


def _r2_up_round(d: PlanarDiagram, side: str, over_first: bool) -> PlanarDiagram:
    from . import gauss as gs

    if side not in ("inner", "outer"):
        raise InapplicableMove(f"bad side {side!r}")
    if d.rot == -1:
        return pd.reflect(_r2_up_round(pd.reflect(d), side, over_first))
    # Overlap of two arcs of the ccw circle.  Pushing through the disk
    # leaves the 4-gon unbounded; pushing through the outside leaves one
    # of the 1-gon lobes unbounded.  Arrow signs pinned by requiring the
    # turning number to stay +1.
    if side == "inner":
        arrows = ((3, 0, 1), (2, 1, -1)) if over_first else ((0, 3, -1), (1, 2, 1))
    else:
        arrows = ((3, 0, -1), (2, 1, 1)) if over_first else ((0, 3, 1), (1, 2, -1))
    base = gs.reconstruct_planar(gs.GaussDiagram(arrows))
    want = 4 if side == "inner" else 1
    pick = min(o for o in base._face_orbits if len(o) == want)
    out = PlanarDiagram(base.over, base.pairing, base.heads, pick[0], 1)
    assert pd.compute_rotation(out) == 1
    return out


# -- R3 ------------------------------------------------------------------------


def _apply_r3(d: PlanarDiagram, fdarts: tuple, slide_tail: Dart) -> PlanarDiagram:
    orbit_idx = d._face_of_dart.get(fdarts[0])
    if orbit_idx is None or set(d._face_orbits[orbit_idx]) != set(fdarts):
        raise InapplicableMove(f"{fdarts} is not a face")
    if slide_tail not in _slide_darts(d, tuple(fdarts)):
        raise InapplicableMove("strand cannot slide across the opposite crossing")
    if orbit_idx == d._face_of_dart[d.outer_dart]:
        raise InapplicableMove("sliding across the unbounded face is not planar")

    triangle_crossings = {x[0] for x in fdarts}

    # Each of the three strands swaps the order of its two zone crossings;
    # in ports map to in ports and out ports to out ports.  Pushing every
    # old edge endpoint through that substitution realizes the slide while
    # keeping crossings, heads and decorations (hence signs) intact.
    sub: dict[Dart, Dart] = {}
    for fd in fdarts:
        end_x = fd
        end_y = d.pairing[fd]
        for a, b in ((end_x, opposite(end_y)), (opposite(end_x), end_y)):
            sub[a] = b
            sub[b] = a

    def s(x: Dart) -> Dart:
        return sub.get(x, x)

    pairing = {s(a): s(b) for a, b in d.pairing.items()}
    out = PlanarDiagram(dict(d.over), pairing, set(d.heads), d.outer_dart, d.rot)
    if pd.validate(out):
        raise InapplicableMove("slide would leave the plane")  # pragma: no cover

    outer = d.outer_dart
    if outer[0] in triangle_crossings:
        # corners of the zone move; retarget the unbounded-face marker
        old_orbit = d._face_orbits[d._face_of_dart[outer]]
        middles = {frozenset((x, d.pairing[x])) for x in fdarts}
        survivors = [x for x in old_orbit if x[0] not in triangle_crossings]
        hugging = [
            x for x in old_orbit if frozenset((x, d.pairing[x])) not in middles
        ]
        if survivors:
            outer = survivors[0]
        elif hugging:
            # infinity hugs a persisting edge whose zone endpoints relocate;
            # its side travels through the substitution
            outer = s(hugging[0])
        else:
            # unbounded 3-gon bounded by the zone middles alone: keep the
            # turning number, which the slide never changes
            for orbit in out._face_orbits:
                cand = PlanarDiagram(out.over, out.pairing, out.heads, orbit[0], d.rot)
                if pd.compute_rotation(cand) == d.rot:
                    outer = orbit[0]
                    break
            else:  # pragma: no cover
                raise InapplicableMove("cannot track the unbounded face")
    out = PlanarDiagram(dict(d.over), pairing, set(d.heads), outer, d.rot)
    return out
