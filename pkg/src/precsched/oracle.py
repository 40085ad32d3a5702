"""Exact makespan oracle for desk-scale instances.

Search space: order ideals (downward-closed job sets) of the precedence
order, encoded as bitmasks. A schedule prefix that has run for t slots is
fully described by the set S of finished jobs, so breadth-first search over
ideals, stepping S -> S | A for A a subset of the currently available jobs
with |A| <= m, finds the optimal makespan as the BFS distance from the empty
set to the full set.

Two admissible prunings keep the lattice small. Both are exact, not
heuristic:

1. Maximal steps. If A is a strict subset of another available set A' with
   |A| < m, skip A. Proof sketch: running a superset never hurts with unit
   jobs. Take any completion B_1, B_2, ... after S | A; then
   B_i minus (A' minus A) is available at the corresponding state after
   S | A' (available sets only grow as the done set grows) and has at most
   m jobs, so the same number of steps finishes everything.

2. Interchangeable jobs. Two available jobs x, y with identical successor
   sets are interchangeable: both have all predecessors inside S, and
   swapping them in any continuation renames nothing else (prec is closed,
   so their remaining constraints coincide). Hence only the number of jobs
   taken from each equal-successor class matters, and we canonically take
   the smallest ids of each class. Note x, y available implies neither
   precedes the other, and no successor of either is in S, so comparing the
   static successor masks suffices.

The deterministic tie-break for optimal_schedule ("lexicographically
smallest job set among optimal next steps") is evaluated over this pruned
universe; replacing a member of a canonical set with a smaller same-class id
is itself canonical, so the lexicographic minimum over all optimal maximal
steps is always enumerated.
"""

from __future__ import annotations

from .model import Instance, Schedule

EXACT_CAP = 24


class TooLarge(ValueError):
    """Instance exceeds the exact-search job cap."""


class BudgetExhausted(RuntimeError):
    """State budget exhausted before the search finished."""


def _class_groups(inst: Instance):
    """Partition job ids into equal-successor-mask classes."""
    by_mask: dict[int, int] = {}
    class_of = [0] * inst.n
    count = 0
    for j in range(inst.n):
        key = inst.succ_masks[j]
        if key not in by_mask:
            by_mask[key] = count
            count += 1
        class_of[j] = by_mask[key]
    return class_of


def _moves(inst: Instance, class_of, state: int, m: int):
    """Canonical maximal steps from `state`, as sorted job-id tuples."""
    avail = [
        j
        for j in range(inst.n)
        if not state >> j & 1 and inst.pred_masks[j] & state == inst.pred_masks[j]
    ]
    take = min(m, len(avail))
    if take == 0:
        return []
    groups: list[list[int]] = []
    index: dict[int, int] = {}
    for j in avail:
        c = class_of[j]
        if c in index:
            groups[index[c]].append(j)
        else:
            index[c] = len(groups)
            groups.append([j])
    moves: list[tuple[int, ...]] = []
    suffix = [0] * (len(groups) + 1)
    for i in range(len(groups) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + len(groups[i])

    def rec(i: int, left: int, chosen: list[int]) -> None:
        if left == 0:
            moves.append(tuple(sorted(chosen)))
            return
        if i == len(groups):
            return
        hi = min(len(groups[i]), left)
        lo = max(0, left - suffix[i + 1])
        for c in range(hi, lo - 1, -1):
            rec(i + 1, left - c, chosen + groups[i][:c])

    rec(0, take, [])
    return moves


def _mask(jobs) -> int:
    acc = 0
    for j in jobs:
        acc |= 1 << j
    return acc


def optimal_makespan(inst: Instance, cap: int = EXACT_CAP, limit: int | None = None) -> int:
    """BFS distance from the empty ideal to the full job set.

    Raises TooLarge if inst.n > cap and BudgetExhausted if more than `limit`
    states get expanded.
    """
    if inst.n > cap:
        raise TooLarge(f"n={inst.n} exceeds exact-search cap {cap}")
    if inst.n == 0:
        return 0
    full = (1 << inst.n) - 1
    class_of = _class_groups(inst)
    dist = {0: 0}
    frontier = [0]
    explored = 0
    while frontier:
        nxt = []
        for state in frontier:
            explored += 1
            if limit is not None and explored > limit:
                raise BudgetExhausted(f"explored more than {limit} states")
            d = dist[state]
            for mv in _moves(inst, class_of, state, inst.m):
                s2 = state | _mask(mv)
                if s2 == full:
                    return d + 1
                if s2 not in dist:
                    dist[s2] = d + 1
                    nxt.append(s2)
        frontier = nxt
    raise AssertionError("full state unreachable in an acyclic instance")


def optimal_schedule(inst: Instance, cap: int = EXACT_CAP, limit: int | None = None) -> Schedule:
    """A deterministic optimal schedule.

    BFS explores the pruned ideal lattice; exact distances to the goal are
    then back-filled by processing states in decreasing popcount (every step
    adds at least one job, so that order is topological), and the schedule
    is rebuilt forward, at each step taking the lexicographically smallest
    canonical step that preserves optimality.
    """
    if inst.n > cap:
        raise TooLarge(f"n={inst.n} exceeds exact-search cap {cap}")
    if inst.n == 0:
        return Schedule(start={}, horizon=0)
    full = (1 << inst.n) - 1
    class_of = _class_groups(inst)
    seen = {0}
    frontier = [0]
    explored = 0
    while frontier:
        nxt = []
        for state in frontier:
            explored += 1
            if limit is not None and explored > limit:
                raise BudgetExhausted(f"explored more than {limit} states")
            if state == full:
                continue
            for mv in _moves(inst, class_of, state, inst.m):
                s2 = state | _mask(mv)
                if s2 not in seen:
                    seen.add(s2)
                    nxt.append(s2)
        frontier = nxt

    to_goal: dict[int, int] = {}
    for state in sorted(seen, key=lambda s: -bin(s).count("1")):
        if state == full:
            to_goal[state] = 0
            continue
        best = None
        for mv in _moves(inst, class_of, state, inst.m):
            cand = to_goal[state | _mask(mv)]
            if best is None or cand < best:
                best = cand
        to_goal[state] = best + 1

    start: dict[int, int] = {}
    state = 0
    t = 0
    while state != full:
        target = to_goal[state] - 1
        chosen = None
        for mv in sorted(_moves(inst, class_of, state, inst.m)):
            if to_goal[state | _mask(mv)] == target:
                chosen = mv
                break
        for j in chosen:
            start[j] = t
        state |= _mask(chosen)
        t += 1
    return Schedule(start=start, horizon=t)
