"""Core data model for unit-job scheduling under precedence constraints.

Jobs are integers 0..n-1, every job takes exactly one time slot, and up to m
identical machines run in parallel. The precedence relation is stored
transitively closed, so (u, w) is present whenever (u, v) and (v, w) are.
Schedules record start slots only; machine assignment is irrelevant for
unit jobs because any slot with at most m jobs can be mapped to machines
arbitrarily.
"""

from __future__ import annotations

from dataclasses import dataclass, field

JobId = int


class CycleError(ValueError):
    """The precedence edges contain a cycle (self-loops included)."""


class BadMachineCount(ValueError):
    """Machine count must be a positive integer."""


@dataclass(frozen=True)
class Instance:
    """A scheduling instance with a transitively closed precedence DAG.

    prec holds (pred, succ) pairs meaning pred must complete before succ
    starts. pred_masks/succ_masks are bitmask views of the same relation,
    derived at construction; they do not participate in equality.
    """

    n: int
    m: int
    prec: frozenset[tuple[JobId, JobId]]
    pred_masks: tuple[int, ...] = field(compare=False, repr=False, default=())
    succ_masks: tuple[int, ...] = field(compare=False, repr=False, default=())

    def __post_init__(self) -> None:
        if not self.pred_masks:
            preds = [0] * self.n
            succs = [0] * self.n
            for u, v in self.prec:
                succs[u] |= 1 << v
                preds[v] |= 1 << u
            object.__setattr__(self, "pred_masks", tuple(preds))
            object.__setattr__(self, "succ_masks", tuple(succs))


def _check_job(inst: Instance, j: JobId) -> None:
    if not 0 <= j < inst.n:
        raise IndexError(f"job {j} outside 0..{inst.n - 1}")


def predecessors(inst: Instance, j: JobId) -> frozenset[JobId]:
    """All jobs that must finish before j starts (closure, not just direct)."""
    _check_job(inst, j)
    return frozenset(_bits(inst.pred_masks[j]))


def successors(inst: Instance, j: JobId) -> frozenset[JobId]:
    """All jobs that cannot start before j finishes."""
    _check_job(inst, j)
    return frozenset(_bits(inst.succ_masks[j]))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_instance(n: int, m: int, edges) -> Instance:
    """Validate inputs, reject cycles, and return the transitively closed instance.

    Raises CycleError on any cycle (a self-loop is a cycle), IndexError on an
    edge endpoint outside 0..n-1, BadMachineCount for m < 1. n = 0 is legal.
    """
    if m < 1:
        raise BadMachineCount(f"m must be >= 1, got {m}")
    if n < 0:
        raise IndexError(f"n must be >= 0, got {n}")
    direct = [0] * n
    indeg = [0] * n
    edge_list = []
    for u, v in edges:
        if not 0 <= u < n:
            raise IndexError(f"edge endpoint {u} outside 0..{n - 1}")
        if not 0 <= v < n:
            raise IndexError(f"edge endpoint {v} outside 0..{n - 1}")
        if u == v:
            raise CycleError(f"self-loop at job {u}")
        if not direct[u] >> v & 1:
            direct[u] |= 1 << v
            indeg[v] += 1
            edge_list.append((u, v))

    # Kahn's algorithm: a topological order exists iff the digraph is acyclic.
    order = [j for j in range(n) if indeg[j] == 0]
    head = 0
    indeg_work = list(indeg)
    while head < len(order):
        u = order[head]
        head += 1
        for v in _bits(direct[u]):
            indeg_work[v] -= 1
            if indeg_work[v] == 0:
                order.append(v)
    if len(order) != n:
        stuck = [j for j in range(n) if indeg_work[j] > 0]
        raise CycleError(f"cycle through jobs {stuck}")

    # Closure by one reverse-topological pass: desc(u) = direct(u) plus desc of each direct succ.
    desc = [0] * n
    for u in reversed(order):
        mask = direct[u]
        acc = mask
        for v in _bits(mask):
            acc |= desc[v]
        desc[u] = acc

    closed = frozenset(
        (u, v) for u in range(n) for v in _bits(desc[u])
    )
    return Instance(n=n, m=m, prec=closed)


@dataclass
class Schedule:
    """Start slots for (a subset of) jobs within a declared horizon.

    horizon is the declared number of slots; the schedule file format calls
    this value "makespan". validate_schedule reports the observed makespan
    (latest completion) separately.
    """

    start: dict[JobId, int]
    horizon: int

    def makespan(self) -> int:
        return max(self.start.values()) + 1 if self.start else 0


@dataclass(frozen=True)
class Violation:
    kind: str  # capacity | precedence | horizon | unknown-job
    detail: tuple[int, ...]


@dataclass
class ValidationReport:
    feasible: bool
    complete: bool
    makespan: int
    violations: list[Violation]


def validate_schedule(inst: Instance, sched: Schedule) -> ValidationReport:
    """Check capacity, precedence and horizon. Never raises.

    feasible means no violations among the scheduled jobs; complete means
    every job of the instance has a start slot. Partial schedules (solver
    fragments) are validated the same way, just with complete=False.
    """
    violations: list[Violation] = []
    load: dict[int, int] = {}
    for j, t in sched.start.items():
        if not 0 <= j < inst.n:
            violations.append(Violation("unknown-job", (j,)))
            continue
        if t < 0 or t >= sched.horizon:
            violations.append(Violation("horizon", (j, t)))
        load[t] = load.get(t, 0) + 1
    for t in sorted(load):
        if load[t] > inst.m:
            violations.append(Violation("capacity", (t, load[t])))
    for u, v in sorted(inst.prec):
        if u in sched.start and v in sched.start:
            if sched.start[u] + 1 > sched.start[v]:
                violations.append(Violation("precedence", (u, v)))
    known = [t for j, t in sched.start.items() if 0 <= j < inst.n]
    makespan = max(known) + 1 if known else 0
    complete = all(j in sched.start for j in range(inst.n))
    return ValidationReport(
        feasible=not violations,
        complete=complete,
        makespan=makespan,
        violations=violations,
    )


def longest_chain(inst: Instance, subset=None) -> int:
    """Length (job count) of the longest precedence chain inside subset.

    subset=None means all jobs. A chain here is a set of pairwise comparable
    jobs; with a closed relation that equals a directed path. Unit jobs make
    this a makespan lower bound: max(ceil(n/m), longest_chain).
    """
    if subset is None:
        members = range(inst.n)
        member_mask = (1 << inst.n) - 1
    else:
        members = sorted(subset)
        member_mask = 0
        for j in members:
            _check_job(inst, j)
            member_mask |= 1 << j
    depth: dict[int, int] = {}

    def chain_from(j: int) -> int:
        got = depth.get(j)
        if got is not None:
            return got
        best = 0
        rest = inst.succ_masks[j] & member_mask
        for v in _bits(rest):
            cand = chain_from(v)
            if cand > best:
                best = cand
        depth[j] = best + 1
        return best + 1

    best = 0
    for j in members:
        best = max(best, chain_from(j))
    return best
