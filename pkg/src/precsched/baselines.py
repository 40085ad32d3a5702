"""Classic polynomial baselines: Graham list scheduling and Coffman-Graham.

List scheduling sweeps time slots and greedily fills machines with eligible
jobs in priority order; its makespan is within a factor 2 - 1/m of optimal
for any priority order (Graham). Coffman-Graham computes a specific
priority order that is optimal for m = 2.
"""

from __future__ import annotations

from .model import Instance, Schedule


def _check_order(inst: Instance, order) -> list[int]:
    order = list(order)
    if sorted(order) != list(range(inst.n)):
        raise ValueError("order must be a permutation of all job ids")
    return order


def list_schedule(inst: Instance, order) -> Schedule:
    """Greedy busy schedule honoring the given priority order.

    At each slot the up to m eligible jobs (all predecessors finished)
    with the best priority run. The result is always feasible and complete,
    and no slot is idle while an eligible job waits.
    """
    order = _check_order(inst, order)
    rank = [0] * inst.n
    for pos, j in enumerate(order):
        rank[j] = pos
    start: dict[int, int] = {}
    done_mask = 0
    remaining = set(range(inst.n))
    t = 0
    while remaining:
        eligible = [
            j for j in remaining if inst.pred_masks[j] & done_mask == inst.pred_masks[j]
        ]
        eligible.sort(key=lambda j: rank[j])
        placed = eligible[: inst.m]
        for j in placed:
            start[j] = t
            remaining.discard(j)
        # Jobs starting at t finish at t+1, so they unblock successors next slot.
        for j in placed:
            done_mask |= 1 << j
        t += 1
    return Schedule(start=start, horizon=t)


def coffman_graham_labels(inst: Instance) -> list[int]:
    """Coffman-Graham labels 1..n, higher label means higher priority.

    Repeatedly pick, among unlabeled jobs whose successors are all labeled,
    the job whose decreasing-sorted tuple of successor labels is
    lexicographically smallest (ties by smallest JobId) and give it the next
    label. Successor sets come from the closed relation.
    """
    n = inst.n
    label = [0] * n
    unlabeled = set(range(n))
    for next_label in range(1, n + 1):
        best_j = None
        best_key = None
        for j in sorted(unlabeled):
            succ_labels = []
            ready = True
            mask = inst.succ_masks[j]
            while mask:
                low = mask & -mask
                v = low.bit_length() - 1
                mask ^= low
                if label[v] == 0:
                    ready = False
                    break
                succ_labels.append(label[v])
            if not ready:
                continue
            key = tuple(sorted(succ_labels, reverse=True))
            if best_key is None or key < best_key:
                best_key = key
                best_j = j
        label[best_j] = next_label
        unlabeled.discard(best_j)
    return label


def coffman_graham_schedule(inst: Instance) -> Schedule:
    """List schedule under decreasing Coffman-Graham labels (optimal at m=2)."""
    labels = coffman_graham_labels(inst)
    order = sorted(range(inst.n), key=lambda j: -labels[j])
    return list_schedule(inst, order)
