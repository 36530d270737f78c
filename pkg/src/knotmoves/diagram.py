"""Oriented knot diagrams as decorated combinatorial maps.

A diagram is a 4-valent plane map: each crossing carries four ports in
counterclockwise cyclic order (0,1,2,3); opposite ports (0,2) and (1,3) are
the two strands through the crossing.  A *dart* is a pair ``(crossing, port)``.
The edge structure is an involution pairing darts; the knot orientation marks
one dart of every edge as its head (the strand enters the crossing there).
Faces are orbits of ``dart -> sigma(theta(dart))`` where ``sigma`` is the
counterclockwise port rotation and ``theta`` the edge involution.

Side conventions, used throughout and pinned by tests:

* the face orbit containing a dart occupies the corner swept clockwise
  from that dart;
* for an edge directed tail ``t`` -> head ``h``, the right face is the
  orbit of ``t`` and the left face is the orbit of ``h``.

Planar (not merely spherical) isotopy classes are modelled by keeping the
unbounded face as explicit data: ``outer_dart`` names any dart on it.  The
0-crossing round diagram has no darts; it stores only its turning number
(+1 for the counterclockwise round unknot, the convention everywhere).
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .errors import InvalidDiagram

Dart = tuple[int, int]


def sigma(d: Dart) -> Dart:
    """Counterclockwise-next port at the same crossing."""
    return (d[0], (d[1] + 1) % 4)


def sigma_inv(d: Dart) -> Dart:
    return (d[0], (d[1] + 3) % 4)


def opposite(d: Dart) -> Dart:
    """Port where the strand entering at ``d`` leaves the crossing."""
    return (d[0], (d[1] + 2) % 4)


@dataclass(frozen=True)
class Polygon:
    """One face: its boundary darts in face-walk order, degree and corners.

    ``darts`` lists one dart per boundary edge-side; ``vertices`` lists the
    corner crossing clockwise-adjacent to each dart (with multiplicity, so a
    crossing may appear twice).  A 0-gon has no darts at all.
    """

    darts: tuple[Dart, ...]
    is_outer: bool

    @property
    def degree(self) -> int:
        return len(self.darts)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(d[0] for d in self.darts)

    @property
    def edge_sides(self) -> tuple[Dart, ...]:
        return self.darts

    @property
    def key(self) -> Optional[Dart]:
        return min(self.darts) if self.darts else None

    def __contains__(self, dart: Dart) -> bool:
        return dart in self.darts


class PlanarDiagram:
    """Immutable decorated map.  Do not mutate the constructor arguments.

    Parameters
    ----------
    over:
        crossing id -> 0 or 1; ports ``(over, over+2)`` carry the over strand.
    pairing:
        fixed-point-free involution on darts (the edge structure).
    heads:
        the darts where the oriented strand enters its crossing; exactly one
        per edge.
    outer_dart:
        any dart on the unbounded face (None only for 0 crossings).
    rot:
        Whitney turning number of the underlying oriented curve.
    """

    __slots__ = ("over", "pairing", "heads", "outer_dart", "rot", "__dict__")

    def __init__(
        self,
        over: Mapping[int, int],
        pairing: Mapping[Dart, Dart],
        heads: Iterable[Dart],
        outer_dart: Optional[Dart],
        rot: int,
    ):
        self.over = dict(over)
        self.pairing = dict(pairing)
        self.heads = frozenset(heads)
        self.outer_dart = outer_dart
        self.rot = rot

    # -- basic structure ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.over)

    @property
    def crossings(self) -> list[int]:
        return sorted(self.over)

    def darts(self) -> list[Dart]:
        return [(c, p) for c in self.crossings for p in range(4)]

    def theta(self, d: Dart) -> Dart:
        return self.pairing[d]

    def is_head(self, d: Dart) -> bool:
        return d in self.heads

    def edges(self) -> list[tuple[Dart, Dart]]:
        """All edges as (tail, head) pairs, sorted by tail dart."""
        return sorted(
            (d, self.pairing[d]) for d in self.pairing if d not in self.heads
        )

    def is_over_dart(self, d: Dart) -> bool:
        """True when the strand through port ``d`` is the over strand."""
        return d[1] % 2 == self.over[d[0]]

    # -- derived structure (cached; the object is immutable) ---------------

    @cached_property
    def _face_orbits(self) -> list[tuple[Dart, ...]]:
        seen: set[Dart] = set()
        orbits = []
        for start in self.darts():
            if start in seen:
                continue
            orbit = []
            d = start
            while True:
                orbit.append(d)
                seen.add(d)
                d = sigma(self.pairing[d])
                if d == start:
                    break
            # rotate so the minimum dart leads: deterministic identity
            i = orbit.index(min(orbit))
            orbits.append(tuple(orbit[i:] + orbit[:i]))
        orbits.sort()
        return orbits

    @cached_property
    def _face_of_dart(self) -> dict[Dart, int]:
        lookup = {}
        for i, orbit in enumerate(self._face_orbits):
            for d in orbit:
                lookup[d] = i
        return lookup

    def face_index_of(self, d: Dart) -> int:
        return self._face_of_dart[d]

    def right_face(self, tail: Dart) -> int:
        """Face index right of the edge directed out of ``tail``."""
        return self._face_of_dart[tail]

    def left_face(self, tail: Dart) -> int:
        return self._face_of_dart[sigma(tail)]

    @cached_property
    def _walk(self) -> list[tuple[Dart, Dart]]:
        """The oriented closed walk as (tail, head) edge list.

        Starts at the minimal tail dart; empty for 0 crossings.  Raises no
        errors here; validation checks coverage separately.
        """
        if not self.pairing:
            return []
        tails = [d for d in self.pairing if d not in self.heads]
        start = min(tails)
        walk = []
        t = start
        while True:
            h = self.pairing[t]
            walk.append((t, h))
            t = opposite(h)
            if t == start or len(walk) > len(self.pairing):
                break
        return walk

    def component_walk(self) -> list[tuple[Dart, Dart]]:
        return list(self._walk)


def build(over, pairing, heads, outer_dart, rot) -> PlanarDiagram:
    """Bare constructor; symmetrizes a half-specified pairing."""
    full = dict(pairing)
    for d, e in list(pairing.items()):
        full[e] = d
    return PlanarDiagram(over, full, heads, outer_dart, rot)


def round_unknot(rot: int = 1) -> PlanarDiagram:
    """The 0-crossing diagram; ``rot`` must be +1 (ccw) or -1 (cw)."""
    if rot not in (1, -1):
        raise ValueError("a crossingless closed curve has turning number +1 or -1")
    return PlanarDiagram({}, {}, (), None, rot)


# -- validation -------------------------------------------------------------


def validate(d: PlanarDiagram) -> list[str]:
    """Return a list of invariant violations; empty means valid."""
    problems: list[str] = []
    if d.n == 0:
        if d.pairing or d.heads:
            problems.append("crossingless diagram carries edge data")
        if d.outer_dart is not None:
            problems.append("crossingless diagram cannot name an outer dart")
        if d.rot not in (1, -1):
            problems.append(f"crossingless diagram has turning number {d.rot}")
        return problems

    darts = set(d.darts())
    for c, o in d.over.items():
        if o not in (0, 1):
            problems.append(f"crossing {c}: over designation {o} not in {{0,1}}")

    if set(d.pairing) != darts:
        missing = sorted(darts - set(d.pairing))[:4]
        extra = sorted(set(d.pairing) - darts)[:4]
        problems.append(f"pairing domain mismatch (missing {missing}, extra {extra})")
        return problems
    for a, b in d.pairing.items():
        if a == b:
            problems.append(f"unpaired port: involution fixes {a}")
        elif d.pairing.get(b) != a:
            problems.append(f"pairing not an involution at {a}<->{b}")
    if problems:
        return problems

    for a in sorted(d.pairing):
        b = d.pairing[a]
        if a < b and (a in d.heads) == (b in d.heads):
            role = "two heads" if a in d.heads else "no head"
            problems.append(f"edge {a}<->{b} has {role}")
    for c in d.crossings:
        entering = [p for p in range(4) if (c, p) in d.heads]
        if len(entering) != 2 or (entering[0] + 2) % 4 == entering[1]:
            problems.append(f"crossing {c}: in-ports {entering} not one per strand")
    if problems:
        return problems

    walk = d.component_walk()
    if len(walk) != len(d.pairing) // 2 or walk[-1][1] == walk[-1][0]:
        problems.append(
            f"multiple components: closed walk covers {len(walk)} of "
            f"{len(d.pairing) // 2} edges"
        )
        return problems
    # closure sanity: the walk must return to its start
    t, h = walk[-1]
    if opposite(h) != walk[0][0]:
        problems.append("oriented walk does not close up")

    faces = d._face_orbits
    expected = d.n + 2
    if len(faces) != expected:
        problems.append(
            f"Euler check failed: {len(faces)} faces for {d.n} crossings "
            f"(expected {expected}; the map is not planar)"
        )
    if d.outer_dart is None:
        problems.append("no outer face marker")
    elif d.outer_dart not in d._face_of_dart:
        problems.append(f"outer dart {d.outer_dart} not in the diagram")
    return problems


def require_valid(d: PlanarDiagram) -> None:
    problems = validate(d)
    if problems:
        raise InvalidDiagram(problems)


# -- faces and census ---------------------------------------------------------


def faces(d: PlanarDiagram) -> list[Polygon]:
    require_valid(d)
    if d.n == 0:
        return [Polygon((), False), Polygon((), True)]
    outer = d._face_of_dart[d.outer_dart]
    return [
        Polygon(orbit, i == outer) for i, orbit in enumerate(d._face_orbits)
    ]


def ngon_census(d: PlanarDiagram) -> dict[int, int]:
    return dict(Counter(f.degree for f in faces(d)))


# -- decorations --------------------------------------------------------------


def crossing_sign(d: PlanarDiagram, c: int) -> int:
    """+1 when (over direction, under direction) is a positive frame."""
    ins = [p for p in range(4) if (c, p) in d.heads]
    o_in = next(p for p in ins if p % 2 == d.over[c])
    u_in = next(p for p in ins if p % 2 != d.over[c])
    return 1 if u_in == (o_in + 1) % 4 else -1


def writhe(d: PlanarDiagram) -> int:
    require_valid(d)
    return sum(crossing_sign(d, c) for c in d.crossings)


def rotation_number(d: PlanarDiagram) -> int:
    require_valid(d)
    return d.rot


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    """Flip every crossing (over becomes under).  Same underlying curve."""
    return PlanarDiagram(
        {c: 1 - o for c, o in d.over.items()},
        d.pairing,
        d.heads,
        d.outer_dart,
        d.rot,
    )


def reflect(d: PlanarDiagram) -> PlanarDiagram:
    """Reflect the plane: reverses cyclic port order and the turning number."""
    remap = {0: 0, 1: 3, 2: 2, 3: 1}

    def m(dart: Dart) -> Dart:
        return (dart[0], remap[dart[1]])

    # Face sectors swap chirality under reflection: the dart marking the
    # unbounded face must step one port back before relabeling.
    outer = None if d.outer_dart is None else m(sigma_inv(d.outer_dart))
    return PlanarDiagram(
        dict(d.over),
        {m(a): m(b) for a, b in d.pairing.items()},
        {m(h) for h in d.heads},
        outer,
        -d.rot,
    )


def relabel(d: PlanarDiagram, mapping: Mapping[int, int]) -> PlanarDiagram:
    """Rename crossing ids; mapping must be injective on d's crossings."""

    def m(dart: Dart) -> Dart:
        return (mapping[dart[0]], dart[1])

    return PlanarDiagram(
        {mapping[c]: o for c, o in d.over.items()},
        {m(a): m(b) for a, b in d.pairing.items()},
        {m(h) for h in d.heads},
        None if d.outer_dart is None else m(d.outer_dart),
        d.rot,
    )


# -- turning number from the map ----------------------------------------------


def _seifert_circles(d: PlanarDiagram) -> tuple[dict[Dart, int], int]:
    """Orientation-respecting smoothing: edge tail-dart -> circle index."""
    exit_port: dict[Dart, Dart] = {}
    for c in d.crossings:
        ins = [p for p in range(4) if (c, p) in d.heads]
        for q in ins:
            nxt = (q + 3) % 4 if (c, (q + 1) % 4) in d.heads else (q + 1) % 4
            exit_port[(c, q)] = (c, nxt)
    circle: dict[Dart, int] = {}
    count = 0
    tails = sorted(p for p in d.pairing if p not in d.heads)
    for start in tails:
        if start in circle:
            continue
        t = start
        while t not in circle:
            circle[t] = count
            t = exit_port[d.pairing[t]]
        count += 1
    return circle, count


def compute_rotation(d: PlanarDiagram) -> int:
    """Whitney turning number computed from the map and its outer face.

    Smooths every crossing respecting orientation, classifies each resulting
    simple closed curve as counterclockwise (+1) or clockwise (-1) via face
    winding parity from the unbounded face, and sums.  Independent of the
    over/under decorations.
    """
    if d.n == 0:
        return d.rot
    require_valid(d)
    circle, count = _seifert_circles(d)

    # Which circles each face is inside of, by BFS over the dual graph:
    # crossing an edge toggles containment in that edge's circle.
    nfaces = len(d._face_orbits)
    inside: list[Optional[frozenset[int]]] = [None] * nfaces
    outer = d._face_of_dart[d.outer_dart]
    inside[outer] = frozenset()
    queue = deque([outer])
    face_of = d._face_of_dart
    while queue:
        f = queue.popleft()
        for dart in d._face_orbits[f]:
            tail = dart if dart not in d.heads else d.pairing[dart]
            g = face_of[d.pairing[dart]]
            nxt = inside[f] ^ {circle[tail]}
            if inside[g] is None:
                inside[g] = nxt
                queue.append(g)

    total = 0
    seen: set[int] = set()
    for tail in sorted(circle):
        ci = circle[tail]
        if ci in seen:
            continue
        seen.add(ci)
        left = face_of[sigma(tail)]
        total += 1 if ci in inside[left] else -1
    return total


# -- canonical form -----------------------------------------------------------


def canonical_key(d: PlanarDiagram) -> str:
    """Equal exactly for diagrams isomorphic as decorated rooted maps.

    The isomorphisms respected are orientation-preserving map isomorphisms
    that also preserve the over/under decoration, the knot orientation and
    the outer-face marker.  Crossing identities never matter.
    """
    require_valid(d)
    if d.n == 0:
        return f"O0;r{d.rot}"

    ids = d.crossings
    index = {c: i for i, c in enumerate(ids)}
    n = d.n
    theta = [0] * (4 * n)
    for (c, p), (c2, p2) in d.pairing.items():
        theta[index[c] * 4 + p] = index[c2] * 4 + p2
    head = [False] * (4 * n)
    for c, p in d.heads:
        head[index[c] * 4 + p] = True
    over = [d.over[c] for c in ids]
    on_outer = [False] * (4 * n)
    for c, p in d._face_orbits[d._face_of_dart[d.outer_dart]]:
        on_outer[index[c] * 4 + p] = True

    best: Optional[tuple] = None
    for root in range(4 * n):
        pos = [-1] * n
        entry = [0] * n
        order = []
        rc, rp = divmod(root, 4)
        pos[rc] = 0
        entry[rc] = rp
        order.append(rc)
        sig = []
        k = 0
        while k < len(order):
            c = order[k]
            e = entry[c]
            rel_over = (over[c] + e) % 2
            sig.append(rel_over)
            for rel in range(4):
                dart = c * 4 + (e + rel) % 4
                mate = theta[dart]
                mc, mp = divmod(mate, 4)
                if pos[mc] < 0:
                    pos[mc] = len(order)
                    entry[mc] = mp
                    order.append(mc)
                sig.append(pos[mc] * 4 + (mp - entry[mc]) % 4)
                sig.append((2 if head[dart] else 0) | (1 if on_outer[dart] else 0))
            k += 1
        cand = tuple(sig)
        if best is None or cand < best:
            best = cand
    body = ",".join(map(str, best))
    return f"O{n};r{d.rot};{body}"


# -- precondition check (Theorem-style site conditions) -----------------------


@dataclass(frozen=True)
class PreconditionReport:
    holds: bool
    violations: tuple[str, ...]


def check_theorem1_preconditions(d: PlanarDiagram) -> PreconditionReport:
    """No faces of degree <= 2, and no triangle admits a slide move."""
    from .moves import omega3_admissible

    violations = []
    for f in faces(d):
        if f.degree <= 2:
            violations.append(
                f"{f.degree}-gon at face {f.key if f.key else '(round)'}"
            )
        elif f.degree == 3 and omega3_admissible(d, f):
            violations.append(f"slide-admissible 3-gon at face {f.key}")
    return PreconditionReport(not violations, tuple(violations))


# -- braid closures: the workhorse constructor for built-ins ------------------


def from_braid(word: Iterable[int], strands: int) -> PlanarDiagram:
    """Close a braid word into a diagram.

    Letters are nonzero integers: ``+i`` crosses strand positions ``i-1, i``
    (0-based) with positive crossing sign, ``-i`` with negative sign.  Every
    position must be used by some letter, and the closure must give a single
    component (otherwise the result fails validation).
    """
    word = list(word)
    if not word:
        raise ValueError("empty braid word")
    pairing: dict[Dart, Dart] = {}
    heads: set[Dart] = set()
    over: dict[int, int] = {}

    def connect(tail: Dart, head: Dart) -> None:
        pairing[tail] = head
        pairing[head] = tail
        heads.add(head)

    loose: list[Optional[Dart]] = [None] * strands  # dangling out-darts
    first_in: list[Optional[Dart]] = [None] * strands
    for cid, letter in enumerate(word):
        i = abs(letter)
        if not 1 <= i < strands:
            raise ValueError(f"letter {letter} out of range for {strands} strands")
        left, right = i - 1, i
        over[cid] = 1 if letter > 0 else 0
        nw, ne, se, sw = (cid, 2), (cid, 1), (cid, 0), (cid, 3)
        for posn, head in ((left, nw), (right, ne)):
            if loose[posn] is None:
                first_in[posn] = head
            else:
                connect(loose[posn], head)
        loose[left], loose[right] = sw, se
    for posn in range(strands):
        if loose[posn] is None:
            raise ValueError(f"strand position {posn} unused by the braid word")
        connect(loose[posn], first_in[posn])

    outer = loose[strands - 1]
    d = PlanarDiagram(over, pairing, heads, outer, 0)
    require_valid(d)
    return PlanarDiagram(over, pairing, heads, outer, compute_rotation(d))
