"""Laminar interval families and the level assignment used for analysis.

The horizon [0, T) is subdivided recursively: an interval of length at least
2^rho splits into 2^rho equal children, a shorter interval (length over 1)
splits into unit children, and unit intervals are leaves. rho depends on the
job count and the accuracy parameter, so the tree is very shallow: the
number of levels grows like log T / log log n.

assign_levels replays an optimal schedule against this family and sorts
every job into exactly one guess set or one top set at exactly one level.
A job belongs to the level where its feasible window (under the pins made
so far) still straddles at least two child intervals; long chains of such
flexible jobs get their per-child first and last members pinned to their
optimal slots until no long chain remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .model import Instance, JobId, Schedule, build_instance


class BadHorizon(ValueError):
    """Horizon must be a power of two for laminar construction."""


class BadEps(ValueError):
    """Accuracy parameter out of range, or m/eps not an integer where required."""


class EmptyWindow(ValueError):
    """Pinned neighbors leave no legal slot for a job."""


def check_eps(eps) -> Fraction:
    e = Fraction(eps)
    if not 0 < e <= 1:
        raise BadEps(f"eps must be in (0, 1], got {eps}")
    return e


@dataclass(frozen=True)
class IntervalNode:
    start: int
    end: int
    level: int

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def key(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class LaminarFamily:
    """Uniform laminar subdivision of [0, T); all nodes of a level share a length."""

    T: int
    rho: int
    level_lengths: tuple[int, ...]

    def level_count(self) -> int:
        return len(self.level_lengths)

    @property
    def deepest(self) -> int:
        return len(self.level_lengths) - 1

    def intervals(self, level: int) -> list[IntervalNode]:
        length = self.level_lengths[level]
        return [
            IntervalNode(i * length, (i + 1) * length, level)
            for i in range(self.T // length)
        ]

    def find(self, start: int, end: int) -> IntervalNode:
        length = end - start
        for level, cand in enumerate(self.level_lengths):
            if cand == length and start % length == 0:
                return IntervalNode(start, end, level)
        raise KeyError(f"[{start}, {end}) is not a family interval")

    def children(self, node: IntervalNode) -> list[IntervalNode]:
        if node.level >= self.deepest:
            return []
        return self.descendants(node, node.level + 1)

    def descendants(self, node: IntervalNode, level: int) -> list[IntervalNode]:
        if not node.level <= level <= self.deepest:
            raise KeyError(f"no level {level} below {node}")
        length = self.level_lengths[level]
        return [
            IntervalNode(s, s + length, level)
            for s in range(node.start, node.end, length)
        ]


def build_laminar(T: int, n: int, eps) -> LaminarFamily:
    """Build the family over [0, T) for an n-job instance at accuracy eps.

    T must be a power of two (pad_to_power_of_two arranges that), n >= 2.
    rho = ceil(log2(log2(n)/eps)), clamped to at least 1 so splitting always
    makes progress (at n = 2, eps = 1 the raw formula gives 0).
    """
    e = check_eps(eps)
    if T < 1 or T & (T - 1):
        raise BadHorizon(f"T must be a positive power of two, got {T}")
    if n < 2:
        raise ValueError(f"need at least 2 jobs for the level machinery, got {n}")
    rho = max(1, math.ceil(math.log2(math.log2(n) / float(e))))
    lengths = [T]
    while lengths[-1] > 1:
        cur = lengths[-1]
        lengths.append(cur // (1 << rho) if cur >= 1 << rho else 1)
    return LaminarFamily(T=T, rho=rho, level_lengths=tuple(lengths))


def pad_to_power_of_two(inst: Instance, T: int) -> tuple[Instance, int]:
    """Append dummy jobs so the optimal makespan becomes the next power of two.

    T* is the least power of two >= T. m parallel chains of T* - T dummies
    are added, with every original job preceding every dummy. When T is the
    instance's optimal makespan the padded optimum is exactly T* (originals
    finish at T, then the chains run back to back); for larger T the padded
    optimum is smaller than T*.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    tstar = 1 << (T - 1).bit_length()
    extra = tstar - T
    if extra == 0:
        return inst, tstar
    n = inst.n
    edges = list(inst.prec)
    for c in range(inst.m):
        base = n + c * extra
        for i in range(extra):
            for j in range(i + 1, extra):
                edges.append((base + i, base + j))
    for orig in range(n):
        for d in range(n, n + inst.m * extra):
            edges.append((orig, d))
    return build_instance(n + inst.m * extra, inst.m, edges), tstar


def feasible_window(inst: Instance, j: JobId, pinned, T: int) -> tuple[int, int]:
    """Start slots [lo, hi) where j can legally sit given pinned neighbors.

    lo is the latest pinned-predecessor completion, hi the earliest pinned-
    successor start. Raises EmptyWindow when lo >= hi. The job's own pin,
    if any, is not consulted.
    """
    lo = 0
    hi = T
    mask = inst.pred_masks[j]
    while mask:
        low = mask & -mask
        p = low.bit_length() - 1
        mask ^= low
        s = pinned.get(p)
        if s is not None and s + 1 > lo:
            lo = s + 1
    mask = inst.succ_masks[j]
    while mask:
        low = mask & -mask
        q = low.bit_length() - 1
        mask ^= low
        s = pinned.get(q)
        if s is not None and s < hi:
            hi = s
    if lo >= hi:
        raise EmptyWindow(f"job {j}: window [{lo}, {hi}) is empty")
    return lo, hi


@dataclass
class LevelAssignment:
    """guess[level][interval] and top[level][interval] partition all jobs."""

    fam: LaminarFamily
    opt: Schedule
    n: int
    guess: dict[int, dict[tuple[int, int], frozenset[JobId]]] = field(default_factory=dict)
    top: dict[int, dict[tuple[int, int], frozenset[JobId]]] = field(default_factory=dict)

    def memberships(self, j: JobId) -> list[tuple[str, int, tuple[int, int]]]:
        out = []
        for kind, table in (("guess", self.guess), ("top", self.top)):
            for level, per_interval in table.items():
                for key, jobs in per_interval.items():
                    if j in jobs:
                        out.append((kind, level, key))
        return out

    def top_at_level(self, level: int) -> frozenset[JobId]:
        acc: set[JobId] = set()
        for jobs in self.top.get(level, {}).values():
            acc |= jobs
        return frozenset(acc)

    def guess_at_level(self, level: int) -> frozenset[JobId]:
        acc: set[JobId] = set()
        for jobs in self.guess.get(level, {}).values():
            acc |= jobs
        return frozenset(acc)


def _longest_chain_member(inst: Instance, flex: set[JobId]):
    """Longest chain within flex plus a deterministic witness path."""
    flex_mask = 0
    for j in flex:
        flex_mask |= 1 << j
    length: dict[int, int] = {}

    def depth(j: int) -> int:
        got = length.get(j)
        if got is not None:
            return got
        best = 0
        mask = inst.succ_masks[j] & flex_mask
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            mask ^= low
            cand = depth(v)
            if cand > best:
                best = cand
        length[j] = best + 1
        return best + 1

    best_len = 0
    head = None
    for j in sorted(flex):
        d = depth(j)
        if d > best_len:
            best_len = d
            head = j
    if head is None:
        return 0, []
    path = [head]
    cur = head
    while length[cur] > 1:
        mask = inst.succ_masks[cur] & flex_mask
        nxt = None
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            mask ^= low
            if length[v] == length[cur] - 1 and (nxt is None or v < nxt):
                nxt = v
        path.append(nxt)
        cur = nxt
    return best_len, path


def chain_threshold(I_len: int, n: int, m: int, eps, divide_by_m: bool = True) -> Fraction:
    """Minimum chain length that triggers guessing inside an interval."""
    e = check_eps(eps)
    scale = 1 << math.ceil(math.log2(math.log2(n))) if n > 2 else 1
    den = (m if divide_by_m else 1) * scale
    return e * I_len / den


def assign_levels(
    inst: Instance,
    opt: Schedule,
    fam: LaminarFamily,
    eps,
    divide_by_m: bool = True,
) -> LevelAssignment:
    """Sort every job into one guess or top set at one level.

    Processes levels top-down and intervals left to right. Membership in an
    interval's job pool uses windows under pins from strictly earlier
    levels; flexibility (straddling two or more children) tracks pins made
    at the current level too. At unit leaves every remaining pool member
    becomes top, which is what makes the partition total.
    """
    e = check_eps(eps)
    n, m, T = inst.n, inst.m, fam.T
    if opt.makespan() > T or any(j not in opt.start for j in range(n)):
        raise ValueError("opt must be complete with makespan <= T")
    slot = opt.start
    lo = [0] * n
    hi = [T] * n
    assigned: set[int] = set()
    out = LevelAssignment(fam=fam, opt=opt, n=n)

    def pin(x: int) -> None:
        assigned.add(x)
        sx = slot[x]
        mask = inst.succ_masks[x]
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            mask ^= low
            if sx + 1 > lo[v]:
                lo[v] = sx + 1
        mask = inst.pred_masks[x]
        while mask:
            low = mask & -mask
            u = low.bit_length() - 1
            mask ^= low
            if sx < hi[u]:
                hi[u] = sx

    for level in range(fam.level_count()):
        lo_snap = lo[:]
        hi_snap = hi[:]
        guess_row: dict[tuple[int, int], frozenset[int]] = {}
        top_row: dict[tuple[int, int], frozenset[int]] = {}
        for node in fam.intervals(level):
            pool = [
                j
                for j in range(n)
                if j not in assigned
                and lo_snap[j] >= node.start
                and hi_snap[j] <= node.end
            ]
            if not pool:
                continue
            children = fam.children(node)
            if not children:
                top_row[node.key] = frozenset(pool)
                assigned.update(pool)
                continue
            child_len = children[0].length
            thresh = chain_threshold(node.length, n, m, e, divide_by_m)

            def flexible_now() -> set[int]:
                flex = set()
                for j in pool:
                    if j in assigned:
                        continue
                    first = (lo[j] - node.start) // child_len
                    last = (hi[j] - 1 - node.start) // child_len
                    if last > first:
                        flex.add(j)
                return flex

            guessed: set[int] = set()
            while True:
                flex = flexible_now()
                best_len, chain = _longest_chain_member(inst, flex)
                if best_len == 0 or Fraction(best_len) < thresh:
                    break
                for child in children:
                    inside = sorted(
                        (j for j in chain if child.start <= slot[j] < child.end),
                        key=lambda j: slot[j],
                    )
                    if inside:
                        for x in {inside[0], inside[-1]}:
                            guessed.add(x)
                            pin(x)
            if guessed:
                guess_row[node.key] = frozenset(guessed)
            tops = flexible_now()
            if tops:
                top_row[node.key] = frozenset(tops)
                assigned.update(tops)
        if guess_row:
            out.guess[level] = guess_row
        if top_row:
            out.top[level] = top_row
    return out


def best_offset(assign: LevelAssignment, m: int, eps, T: int) -> tuple[int, int]:
    """Offset a in 0..m/eps-1 minimizing tops on levels a + r*(m/eps) + 1.

    Those bucket unions are disjoint across offsets and cover all levels
    >= 1, so the smallest bucket holds at most eps*T jobs when the
    assignment came from an optimal schedule (n <= m*T). Ties pick the
    smallest offset. m/eps must be a positive integer.
    """
    e = check_eps(eps)
    stride_frac = Fraction(m) / e
    if stride_frac.denominator != 1 or stride_frac < 1:
        raise BadEps(f"m/eps must be a positive integer, got {stride_frac}")
    stride = int(stride_frac)
    best = None
    for a in range(stride):
        total = 0
        level = a + 1
        while level <= assign.fam.deepest:
            total += len(assign.top_at_level(level))
            level += stride
        if best is None or total < best[1]:
            best = (a, total)
    return best


def lambda_for_depth(fam: LaminarFamily, m: int, eps, depth: int, offset: int = 0) -> int:
    """Cell length used by a depth-`depth` call under the given offset."""
    e = check_eps(eps)
    stride = Fraction(m) / e
    if stride.denominator != 1 or stride < 1:
        raise BadEps(f"m/eps must be a positive integer, got {stride}")
    level = min(offset + depth * int(stride) + 1, fam.deepest)
    return fam.level_lengths[level]


def analysis_guess_budget(n: int, m: int, eps) -> float:
    """Guess budget from the coarse analysis: (m log2 n / eps)^(m/eps + 1)."""
    e = float(check_eps(eps))
    if n < 2:
        return 1.0
    return (m * math.log2(n) / e) ** (m / e + 1)


def analysis_depth_limit(n: int, m: int, eps) -> int:
    """Recursion depth bound ceil(eps * (log2 n / log2 log2 n + 1) / m)."""
    e = check_eps(eps)
    if n <= 2:
        return 1
    inner = math.log2(math.log2(n))
    if inner <= 0:
        return 1
    return max(1, math.ceil(float(e) * (math.log2(n) / inner + 1) / m))


def default_depth_max(n: int, m: int, eps) -> int:
    """Default recursion cap ceil((eps/m) * log2 n) + 1."""
    e = check_eps(eps)
    if n < 2:
        return 1
    return math.ceil(float(e) / m * math.log2(n)) + 1
