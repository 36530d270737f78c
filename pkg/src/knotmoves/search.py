"""Bounded exploration of the Reidemeister move graph.

Breadth-first with canonical-key deduplication.  Negative outcomes are
evidence within the stated budget, never proofs: enlarging a budget can only
turn "not found" into "found".
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import diagram as pd
from . import gauss as gs
from .diagram import PlanarDiagram, canonical_key
from .errors import Deadend, ViolationFound
from .moves import (
    ALL_KINDS,
    MoveKind,
    MoveSequence,
    ReidemeisterMove,
    apply_move,
    enumerate_moves,
)

_GROWTH = {MoveKind.R1_UP: 1, MoveKind.R2_UP: 2}


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int
    max_crossings: int
    max_states: int = 100_000

    def __post_init__(self):
        if min(self.max_depth, self.max_crossings, self.max_states) <= 0:
            raise ValueError("budget fields must be positive")


def default_budget(start: PlanarDiagram, max_depth: int = 6) -> SearchBudget:
    """Desk-scale default: one overlap and one curl of slack."""
    return SearchBudget(max_depth=max_depth, max_crossings=start.n + 4)


@dataclass
class SearchOutcome:
    status: str  # "found" | "exhausted" | "budget_hit"
    sequence: Optional[MoveSequence]
    states_explored: int
    depth_reached: int
    frontier_peak: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def _admissible(d: PlanarDiagram, move: ReidemeisterMove, cap: int) -> bool:
    return d.n + _GROWTH.get(move.kind, 0) <= cap


def _replay(start: PlanarDiagram, moves: Iterable[ReidemeisterMove]) -> PlanarDiagram:
    cur = start
    for mv in moves:
        cur = apply_move(cur, mv)
    return cur


def reachable(
    start: PlanarDiagram,
    target: PlanarDiagram,
    allowed: Iterable[MoveKind] = ALL_KINDS,
    budget: Optional[SearchBudget] = None,
) -> SearchOutcome:
    """Breadth-first reachability; found sequences are replay-verified."""
    pd.require_valid(start)
    pd.require_valid(target)
    budget = budget or default_budget(start)
    allowed = frozenset(allowed)
    target_key = canonical_key(target)
    start_key = canonical_key(start)
    if start_key == target_key:
        return SearchOutcome("found", MoveSequence(start_key, ()), 1, 0, 1)

    seen = {start_key}
    frontier: list[tuple[PlanarDiagram, tuple[ReidemeisterMove, ...]]] = [(start, ())]
    peak = 1
    truncated = False
    for depth in range(1, budget.max_depth + 1):
        nxt = []
        for cur, path in frontier:
            for mv in enumerate_moves(cur, allowed):
                if not _admissible(cur, mv, budget.max_crossings):
                    continue
                out = apply_move(cur, mv)
                key = canonical_key(out)
                if key in seen:
                    continue
                new_path = path + (mv,)
                if key == target_key:
                    final = _replay(start, new_path)
                    assert canonical_key(final) == target_key
                    return SearchOutcome(
                        "found",
                        MoveSequence(start_key, new_path),
                        len(seen) + 1,
                        depth,
                        peak,
                    )
                if len(seen) >= budget.max_states:
                    truncated = True
                    continue
                seen.add(key)
                nxt.append((out, new_path))
        frontier = nxt
        peak = max(peak, len(frontier))
        if not frontier:
            status = "budget_hit" if truncated else "exhausted"
            return SearchOutcome(status, None, len(seen), depth, peak)
    return SearchOutcome("budget_hit", None, len(seen), budget.max_depth, peak)


def random_walk(
    start: PlanarDiagram,
    allowed: Iterable[MoveKind],
    steps: int,
    seed: int,
    max_crossings: Optional[int] = None,
) -> MoveSequence:
    """Deterministic random move sequence; every prefix is applicable."""
    pd.require_valid(start)
    rng = random.Random(seed)
    allowed = frozenset(allowed)
    cap = max_crossings if max_crossings is not None else start.n + 2 * steps
    cur = start
    out: list[ReidemeisterMove] = []
    for _ in range(steps):
        moves = [m for m in enumerate_moves(cur, allowed) if _admissible(cur, m, cap)]
        if not moves:
            raise Deadend(f"no applicable move after {len(out)} steps")
        mv = rng.choice(moves)
        cur = apply_move(cur, mv)
        out.append(mv)
    return MoveSequence(canonical_key(start), tuple(out))


@dataclass
class PersistenceReport:
    min_count: int
    states_explored: int
    leaves_evaluated: int
    exhausted: bool
    depth_reached: int


def verify_isolated_copy_persistence(
    d: PlanarDiagram,
    core: gs.GaussDiagram,
    allowed: Iterable[MoveKind],
    budget: SearchBudget,
) -> PersistenceReport:
    """Assert the protected copy count stays positive across the whole ball.

    Explores every diagram reachable with the allowed (overlap-free) kinds
    within the budget and evaluates the isolated-copy count at each state.
    States at the final depth are evaluated without deduplication, which is
    cheaper and just as sound.
    """
    allowed = frozenset(allowed)
    if allowed & {MoveKind.R2_UP, MoveKind.R2_DOWN}:
        raise ValueError("persistence check requires overlap moves to be excluded")
    pd.require_valid(d)
    start_count = gs.count_isolated_copies(gs.gauss_from_planar(d), core)
    if start_count < 1:
        raise ValueError("no protected copy present at the starting diagram")

    min_count = start_count
    leaves = 0

    def evaluate(state: PlanarDiagram, path) -> None:
        nonlocal min_count
        count = gs.count_isolated_copies(gs.gauss_from_planar(state), core)
        if count < 1:
            raise ViolationFound(
                "protected copy destroyed without an overlap move",
                witness=MoveSequence(canonical_key(d), tuple(path)),
            )
        min_count = min(min_count, count)

    seen = {canonical_key(d)}
    frontier = [(d, ())]
    truncated = False
    depth = 0
    for depth in range(1, budget.max_depth + 1):
        last = depth == budget.max_depth
        nxt = []
        for cur, path in frontier:
            for mv in enumerate_moves(cur, allowed):
                if not _admissible(cur, mv, budget.max_crossings):
                    continue
                out = apply_move(cur, mv)
                evaluate(out, path + (mv,))
                leaves += 1
                if last:
                    continue
                key = canonical_key(out)
                if key in seen:
                    continue
                if len(seen) >= budget.max_states:
                    truncated = True
                    continue
                seen.add(key)
                nxt.append((out, path + (mv,)))
        frontier = nxt
        if not frontier:
            break
    exhausted = not truncated
    return PersistenceReport(min_count, len(seen), leaves, exhausted, depth)
