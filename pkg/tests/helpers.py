"""Independent reference implementations used to cross-check the package.

Nothing in here imports the package's algorithms: closure, feasibility and
optimal makespans are recomputed from first principles so test expectations
do not inherit implementation bugs.
"""

from __future__ import annotations

from itertools import combinations, permutations, product


def close_pairs(n: int, edges) -> frozenset:
    """Transitive closure of an edge list, by repeated relaxation."""
    pairs = set(edges)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in list(product(pairs, pairs)):
            if b == c and (a, d) not in pairs:
                pairs.add((a, d))
                changed = True
    return frozenset(pairs)


def brute_force_makespan(n: int, m: int, edges) -> int:
    """Smallest T admitting a feasible assignment of all jobs to slots < T.

    Backtracking over per-job slot choices in id order, checking capacity
    and precedence incrementally. Complete search, so exact; usable to
    n <= 8 or so.
    """
    if n == 0:
        return 0
    preds = [[] for _ in range(n)]
    succs = [[] for _ in range(n)]
    for u, v in edges:
        preds[v].append(u)
        succs[u].append(v)

    def feasible(T: int) -> bool:
        load = [0] * T
        slot = [-1] * n

        def place(j: int) -> bool:
            if j == n:
                return True
            lo = 0
            for p in preds[j]:
                if slot[p] >= 0 and slot[p] + 1 > lo:
                    lo = slot[p] + 1
            for t in range(lo, T):
                if load[t] >= m:
                    continue
                ok = True
                for s in succs[j]:
                    if 0 <= slot[s] <= t:
                        ok = False
                        break
                if not ok:
                    continue
                slot[j] = t
                load[t] += 1
                if place(j + 1):
                    return True
                slot[j] = -1
                load[t] -= 1
            return False

        return place(0)

    for T in range(1, n + 1):
        if feasible(T):
            return T
    raise AssertionError("no horizon up to n worked; instance must be cyclic")


def _desc_masks(n: int, edges):
    direct = [0] * n
    for u, v in edges:
        direct[u] |= 1 << v
    desc = [0] * n
    for u in range(n - 1, -1, -1):
        acc = direct[u]
        mask = direct[u]
        while mask:
            low = mask & -mask
            acc |= desc[low.bit_length() - 1]
            mask ^= low
        desc[u] = acc
    return desc


def _canonical_key(n: int, desc) -> int:
    """Min adjacency integer over invariant-respecting relabelings."""
    indeg = [0] * n
    for u in range(n):
        mask = desc[u]
        while mask:
            low = mask & -mask
            indeg[low.bit_length() - 1] += 1
            mask ^= low
    inv = [(bin(desc[j]).count("1"), indeg[j]) for j in range(n)]
    groups: dict[tuple[int, int], list[int]] = {}
    for j in range(n):
        groups.setdefault(inv[j], []).append(j)
    blocks = []
    pos = 0
    for key in sorted(groups):
        nodes = groups[key]
        blocks.append((nodes, list(range(pos, pos + len(nodes)))))
        pos += len(nodes)
    best = None
    for parts in product(*[permutations(nodes) for nodes, _ in blocks]):
        mapping = [0] * n
        for (nodes, positions), part in zip(blocks, parts):
            for node, p in zip(part, positions):
                mapping[node] = p
        val = 0
        for u in range(n):
            mask = desc[u]
            mu = mapping[u] * n
            while mask:
                low = mask & -mask
                val |= 1 << (mu + mapping[low.bit_length() - 1])
                mask ^= low
        if best is None or val < best:
            best = val
    return best


def enumerate_poset_classes(n: int):
    """One closed edge set per isomorphism class of DAGs on n nodes.

    Every DAG is isomorphic to one whose adjacency matrix is strictly upper
    triangular, so iterating all upper-triangular edge subsets covers every
    class. Scheduling semantics depend only on the transitive closure, so
    edge sets are first collapsed by closure, then by digraph isomorphism.
    """
    cells = list(combinations(range(n), 2))
    reps: dict[int, frozenset] = {}
    seen_closures = set()
    for bits in range(1 << len(cells)):
        edges = [cells[k] for k in range(len(cells)) if bits >> k & 1]
        desc = _desc_masks(n, edges)
        closure_sig = tuple(desc)
        if closure_sig in seen_closures:
            continue
        seen_closures.add(closure_sig)
        key = _canonical_key(n, desc)
        if key not in reps:
            pairs = set()
            for u in range(n):
                mask = desc[u]
                while mask:
                    low = mask & -mask
                    pairs.add((u, low.bit_length() - 1))
                    mask ^= low
            reps[key] = frozenset(pairs)
    return list(reps.values())
