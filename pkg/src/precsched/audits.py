"""Empirical auditors for the analysis claims behind the laminar solver.

Each auditor replays or inspects one structural claim (level uniqueness,
offset shifting, window slack, degenerate counts, idle slots, level count)
and returns an AuditReport. run_oracle_pinned replays the recursion with
every guess pinned to an exact optimal schedule, producing per-call traces
the window and idle auditors consume. Everything here is desk-scale: it
sits on top of the exact oracle.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .laminar import (
    IntervalNode,
    LaminarFamily,
    LevelAssignment,
    assign_levels,
    best_offset,
    build_laminar,
    check_eps,
    default_depth_max,
    pad_to_power_of_two,
    analysis_depth_limit,
)
from .model import Instance, JobId, Schedule
from .oracle import EXACT_CAP, optimal_makespan, optimal_schedule
from .qptas import (
    EdfTrace,
    TopWindow,
    classify,
    edf_insert,
    stride_of,
    windows_for_top,
)

# Claims whose violation means the implementation (or the analysis) is wrong,
# versus bounds that are only expected to hold in the audited regime.
CONTRACTUAL_CLAIMS = ("unique-level", "shift-bound", "window-slack", "level-count")
ADVISORY_CLAIMS = ("degenerate-count", "idle-slots")


class PreconditionUnmet(ValueError):
    """The audit's hypothesis does not hold for the supplied data."""


@dataclass(frozen=True)
class AuditReport:
    """Outcome of one empirical check.

    population counts the audited objects, violations how many broke the
    claim. worst is the most extreme observed value and bound the evaluated
    limit it was compared against; for aggregated margin-style reports the
    bound is 0.0 and worst is the largest (observed - limit) gap.
    """

    name: str
    population: int
    violations: int
    worst: float
    bound: float


@dataclass
class CallTrace:
    """One recursion call of the pinned replay.

    windows holds every top window (degenerate included); top1 are the tops
    the level assignment put in this call's own level range, top2 those at
    the partition level. loads and discard times come from the EDF sweep.
    """

    depth: int
    interval: tuple[int, int]
    level: int
    partition_level: int
    cells: list[tuple[int, int]]
    lam: int
    pins: dict[JobId, int]
    tops: frozenset[JobId]
    windows: list[TopWindow]
    top1: frozenset[JobId]
    top2: frozenset[JobId]
    placed_tops: dict[JobId, int]
    edf: EdfTrace = field(default_factory=EdfTrace)
    degenerate: frozenset[JobId] = frozenset()
    edf_discarded: frozenset[JobId] = frozenset()


def check_unique_level(assign: LevelAssignment) -> AuditReport:
    """Every job must appear in exactly one guess or top set."""
    counts = [len(assign.memberships(j)) for j in range(assign.n)]
    bad = sum(1 for c in counts if c != 1)
    worst = max(counts, default=0)
    return AuditReport(
        name="unique-level",
        population=assign.n,
        violations=bad,
        worst=float(worst),
        bound=1.0,
    )


def check_shift_bound(assign: LevelAssignment, m: int, eps, T: int) -> AuditReport:
    """Some offset's top buckets hold at most eps*T jobs.

    Buckets for offset a collect the top jobs of levels a+1, a+1+stride, ...
    Buckets across offsets must be disjoint (each counted appearance beyond
    the first is a violation), the job count may not exceed m*T, and the
    smallest bucket must fit under eps*T. The size comparison is exact.
    """
    e = check_eps(eps)
    stride = stride_of(m, e)
    seen: Counter[JobId] = Counter()
    sizes = []
    for a in range(stride):
        members: set[JobId] = set()
        level = a + 1
        while level <= assign.fam.deepest:
            for j in assign.top_at_level(level):
                members.add(j)
                seen[j] += 1
            level += stride
        sizes.append(len(members))
    violations = sum(c - 1 for c in seen.values() if c > 1)
    if assign.n > m * T:
        violations += 1
    smallest = min(sizes)
    if Fraction(smallest) > e * T:
        violations += 1
    return AuditReport(
        name="shift-bound",
        population=stride,
        violations=violations,
        worst=float(smallest),
        bound=float(e * T),
    )


def check_level_count(fam: LaminarFamily, n: int, eps) -> AuditReport:
    """The deepest level index stays within log2(n)/log2(log2(n)/eps) + 1.

    The divisor can vanish or go negative for tiny n or large eps; the bound
    is +inf there and the check passes vacuously.
    """
    e = check_eps(eps)
    if n < 2:
        raise ValueError(f"need at least 2 jobs, got {n}")
    denom = math.log2(math.log2(n) / float(e)) if math.log2(n) / float(e) > 0 else 0.0
    bound = math.log2(n) / denom + 1 if denom > 0 else math.inf
    worst = float(fam.deepest)
    return AuditReport(
        name="level-count",
        population=fam.level_count(),
        violations=int(worst > bound),
        worst=worst,
        bound=bound,
    )


def check_window_slack(
    opt: Schedule,
    windows,
    lam: int,
    pins: dict[JobId, int] | None = None,
) -> AuditReport:
    """Each top job's optimal slot sits within lam of its guessed window.

    The claim holds for runs whose pins agree with opt; when pins are given
    they are verified first and PreconditionUnmet raised on any mismatch.
    The needed slack for a window [r, d) around slot s is max(r-s, s-d+1),
    so 0 means the slot is already inside.
    """
    if pins is not None:
        for j, t in pins.items():
            if opt.start.get(j) != t:
                raise PreconditionUnmet(
                    f"pin {j}@{t} disagrees with the optimal slot {opt.start.get(j)}"
                )
    needed = []
    for w in windows:
        s = opt.start[w.job]
        needed.append(max(w.r - s, s - w.d + 1))
    violations = sum(1 for v in needed if v > lam)
    return AuditReport(
        name="window-slack",
        population=len(needed),
        violations=violations,
        worst=float(max(needed, default=0)),
        bound=float(lam),
    )


def count_degenerate(windows, m: int, eps, n: int, interval_len: int) -> AuditReport:
    """Degenerate windows among the given ones versus 2*m*eps*|I|/log2(n).

    The caller passes the call's top-1 windows (tops of the call's own level
    range). Advisory: the bound is an analysis artifact, not a contract.
    """
    e = check_eps(eps)
    count = sum(1 for w in windows if w.degenerate)
    bound = 2 * m * float(e) * interval_len / math.log2(n) if n >= 2 else math.inf
    return AuditReport(
        name="degenerate-count",
        population=len(windows),
        violations=int(count > bound),
        worst=float(count),
        bound=bound,
    )


def audit_idle_slots(trace: CallTrace, m: int, eps, n: int) -> AuditReport:
    """Idle slots while a non-degenerate top is pending, per meta-interval.

    A cell is covered when every one of its slots has some live top pending
    (released, not yet finished or discarded). Meta-intervals are maximal
    runs of consecutive covered cells. Within each, slots with load < m are
    counted against |I_hat| * eps / (m * log2(n)). The report aggregates the
    call's meta-intervals: worst is the largest count-minus-bound margin,
    bound 0.0. Advisory.
    """
    e = check_eps(eps)
    live = [w for w in trace.windows if not w.degenerate]
    ends: dict[JobId, int] = {}
    for w in live:
        if w.job in trace.placed_tops:
            ends[w.job] = trace.placed_tops[w.job] + 1
        else:
            ends[w.job] = trace.edf.discard_time[w.job]

    def pending(t: int) -> bool:
        return any(w.r <= t < ends[w.job] for w in live)

    covered = [all(pending(t) for t in range(cs, ce)) for cs, ce in trace.cells]
    rate = float(e) / (m * math.log2(n)) if n >= 2 else math.inf
    runs = []
    i = 0
    while i < len(covered):
        if not covered[i]:
            i += 1
            continue
        j = i
        while j < len(covered) and covered[j]:
            j += 1
        runs.append((trace.cells[i][0], trace.cells[j - 1][1]))
        i = j
    margins = []
    for rs, re in runs:
        idle = sum(1 for t in range(rs, re) if trace.edf.loads.get(t, 0) < m)
        margins.append(idle - (re - rs) * rate)
    return AuditReport(
        name="idle-slots",
        population=len(runs),
        violations=sum(1 for g in margins if g > 0),
        worst=max(margins, default=0.0),
        bound=0.0,
    )


def run_oracle_pinned(
    inst: Instance,
    opt: Schedule,
    fam: LaminarFamily,
    eps,
    offset: int = 0,
    assign: LevelAssignment | None = None,
    divide_by_m: bool = True,
):
    """Replay the recursion with every guess pinned at its optimal slot.

    The call at depth r over a family interval pins the level assignment's
    guess sets for all levels from the interval's own level up to (but not
    including) the partition level offset + r*stride + 1, then classifies,
    recurses on bottoms, windows the tops against the recursion's
    placements, and runs the EDF sweep. Returns (traces, starts, discarded);
    traces are appended children-first.
    """
    e = check_eps(eps)
    if assign is None:
        assign = assign_levels(inst, opt, fam, e, divide_by_m)
    stride = stride_of(inst.m, e)
    traces: list[CallTrace] = []
    discarded: set[JobId] = set()

    def tops_at(levels) -> frozenset[JobId]:
        acc: set[JobId] = set()
        for lvl in levels:
            acc |= assign.top_at_level(lvl)
        return frozenset(acc)

    def call(node: IntervalNode, jobs: frozenset[JobId], pins, depth: int):
        s, e0 = node.start, node.end
        if not jobs:
            return {}
        if e0 - s == 1:
            tops = [TopWindow(j, s, e0) for j in sorted(jobs)]
            occ = Counter(t for t in pins.values() if t == s)
            placed, disc = edf_insert(inst, tops, occ, s, e0)
            discarded.update(disc)
            return placed
        p = min(offset + depth * stride + 1, fam.deepest)
        p = max(p, node.level + 1)
        cells = [(c.start, c.end) for c in fam.descendants(node, p)]
        new_pins: dict[JobId, int] = {}
        for lvl in range(node.level, p):
            for (ks, ke), members in assign.guess.get(lvl, {}).items():
                if ks >= s and ke <= e0:
                    for j in members:
                        if j in jobs:
                            new_pins[j] = opt.start[j]
        bottom, top = classify(inst, jobs, new_pins, cells, pins)
        merged = {**pins, **new_pins}
        starts = dict(new_pins)
        for cell in cells:
            sub = bottom[cell] - new_pins.keys()
            if sub:
                child = fam.find(*cell)
                starts.update(call(child, frozenset(sub), merged, depth + 1))
        placed_all = {**pins, **starts}
        windows = windows_for_top(inst, top, cells, placed_all)
        occ = Counter(t for t in placed_all.values() if s <= t < e0)
        etrace = EdfTrace()
        tplaced, tdisc = edf_insert(inst, windows, occ, s, e0, trace=etrace)
        discarded.update(tdisc)
        starts.update(tplaced)
        degen = frozenset(w.job for w in windows if w.degenerate)
        traces.append(
            CallTrace(
                depth=depth,
                interval=(s, e0),
                level=node.level,
                partition_level=p,
                cells=cells,
                lam=fam.level_lengths[p],
                pins=dict(new_pins),
                tops=top,
                windows=windows,
                top1=top & tops_at(range(node.level, p)),
                top2=top & tops_at((p,)),
                placed_tops=dict(tplaced),
                edf=etrace,
                degenerate=degen,
                edf_discarded=frozenset(tdisc) - degen,
            )
        )
        return starts

    root = fam.find(0, fam.T)
    starts = call(root, frozenset(range(inst.n)), {}, 0)
    return traces, starts, discarded


def _merge_margin(name: str, reports) -> AuditReport:
    # Per-call bounds differ, so the merged row carries margins against 0.
    return AuditReport(
        name=name,
        population=sum(r.population for r in reports),
        violations=sum(r.violations for r in reports),
        worst=max((r.worst - r.bound for r in reports), default=0.0),
        bound=0.0,
    )


def audit_instance(
    inst: Instance,
    eps=Fraction(1),
    divide_by_m: bool = True,
    cap: int = EXACT_CAP,
) -> dict[str, AuditReport]:
    """Run every auditor against one instance and an exact optimal schedule.

    Pads the instance to a power-of-two horizon, assigns levels against the
    padded optimum, picks the best offset, replays the pinned recursion, and
    returns one report per claim. window-slack, degenerate-count and
    idle-slots aggregate the per-call reports into margin rows (bound 0.0).
    Two informational rows record the replay depth against the analysis
    recursion-depth limit. Needs at least 2 jobs and an oracle-sized
    instance.
    """
    e = check_eps(eps)
    if inst.n < 2:
        raise ValueError(f"need at least 2 jobs to audit, got {inst.n}")
    T = optimal_makespan(inst, cap=cap)
    padded, tstar = pad_to_power_of_two(inst, T)
    if padded.n > cap:
        raise ValueError(
            f"padded instance has {padded.n} jobs, above the oracle cap {cap}"
        )
    opt = optimal_schedule(padded, cap=cap)
    fam = build_laminar(tstar, padded.n, e)
    assign = assign_levels(padded, opt, fam, e, divide_by_m)
    a, _ = best_offset(assign, padded.m, e, tstar)
    traces, _, _ = run_oracle_pinned(padded, opt, fam, e, a, assign, divide_by_m)
    m = padded.m
    reports = {
        "unique-level": check_unique_level(assign),
        "shift-bound": check_shift_bound(assign, m, e, tstar),
        "level-count": check_level_count(fam, padded.n, e),
        "window-slack": _merge_margin(
            "window-slack",
            [check_window_slack(opt, tr.windows, tr.lam, tr.pins) for tr in traces],
        ),
        "degenerate-count": _merge_margin(
            "degenerate-count",
            [
                count_degenerate(
                    [w for w in tr.windows if w.job in tr.top1],
                    m,
                    e,
                    padded.n,
                    tr.interval[1] - tr.interval[0],
                )
                for tr in traces
            ],
        ),
        "idle-slots": _merge_margin(
            "idle-slots", [audit_idle_slots(tr, m, e, padded.n) for tr in traces]
        ),
    }
    # Informational rows: replay depth against the working cap and against
    # the analysis limit. Not part of either claim set.
    deepest = max((tr.depth for tr in traces), default=0)
    for name, limit in (
        ("recursion-depth", default_depth_max(padded.n, m, e)),
        ("recursion-depth-analysis", analysis_depth_limit(padded.n, m, e)),
    ):
        reports[name] = AuditReport(
            name=name,
            population=len(traces),
            violations=sum(1 for tr in traces if tr.depth > limit),
            worst=float(deepest),
            bound=float(limit),
        )
    return reports
