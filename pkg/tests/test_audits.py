"""Auditor behavior on hand-checked instances plus negative controls."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from precsched.audits import (
    ADVISORY_CLAIMS,
    CONTRACTUAL_CLAIMS,
    PreconditionUnmet,
    audit_idle_slots,
    audit_instance,
    check_level_count,
    check_shift_bound,
    check_unique_level,
    check_window_slack,
    count_degenerate,
    run_oracle_pinned,
)
from precsched.laminar import (
    assign_levels,
    best_offset,
    build_laminar,
    pad_to_power_of_two,
)
from precsched.model import build_instance
from precsched.oracle import optimal_makespan, optimal_schedule
from precsched.qptas import TopWindow, windows_for_top

SQUEEZE_EDGES = [(0, 1), (1, 2), (2, 3), (0, 4), (4, 2), (1, 5), (5, 3)]


def _antichain4():
    inst = build_instance(4, 1, [])
    opt = optimal_schedule(inst)
    fam = build_laminar(4, 4, 1)
    return inst, opt, fam


def test_unique_level_clean_and_duplicated():
    inst, opt, fam = _antichain4()
    assign = assign_levels(inst, opt, fam, 1)
    rep = check_unique_level(assign)
    assert (rep.population, rep.violations, rep.worst, rep.bound) == (4, 0, 1.0, 1.0)
    # Corrupt the assignment: job 0 gains a second membership.
    assign.guess[1] = {(0, 2): frozenset({0})}
    rep = check_unique_level(assign)
    assert rep.violations == 1
    assert rep.worst == 2.0


def test_shift_bound_clean_on_squeezed_instance():
    inst = build_instance(6, 2, SQUEEZE_EDGES)
    assign = assign_levels(inst, optimal_schedule(inst), build_laminar(4, 6, 1), 1)
    rep = check_shift_bound(assign, 2, 1, 4)
    assert (rep.population, rep.violations, rep.worst, rep.bound) == (2, 0, 0.0, 4.0)


def test_shift_bound_flags_overlapping_buckets():
    inst, opt, fam = _antichain4()
    assign = assign_levels(inst, opt, fam, 1)
    # Job 0 planted in the level-1 and level-2 buckets of the same offset.
    assign.top[1] = {(0, 2): frozenset({0})}
    assign.top[2] = {(0, 1): frozenset({0})}
    assert check_shift_bound(assign, 1, 1, 4).violations == 1


def test_shift_bound_flags_overfull_horizon():
    inst, opt, fam = _antichain4()
    assign = assign_levels(inst, opt, fam, 1)
    # 4 jobs cannot fit one machine for 2 slots.
    assert check_shift_bound(assign, 1, 1, 2).violations == 1


def test_level_count_frozen_and_vacuous():
    rep = check_level_count(build_laminar(16, 16, 1), 16, 1)
    assert (rep.population, rep.violations, rep.worst, rep.bound) == (3, 0, 2.0, 3.0)
    # log2(log2 2 / 1) = 0: the bound degenerates to +inf.
    rep = check_level_count(build_laminar(1, 2, 1), 2, 1)
    assert rep.violations == 0
    assert rep.bound == float("inf")


def test_level_count_sweep_powers_of_two():
    for p in range(1, 11):
        T = 1 << p
        for m in (1, 2, 4):
            for eps in (Fraction(1), Fraction(1, 2)):
                n = T * m
                fam = build_laminar(T, n, eps)
                assert check_level_count(fam, n, eps).violations == 0, (T, m, eps)


def test_window_slack_inside_violation_and_precondition():
    inst, opt, fam = _antichain4()
    inside = [TopWindow(j, 0, 4) for j in range(4)]
    rep = check_window_slack(opt, inside, 2)
    assert (rep.population, rep.violations, rep.worst, rep.bound) == (4, 0, 0.0, 2.0)
    # Slot 0 against window [4, 4) needs slack 4.
    rep = check_window_slack(opt, [TopWindow(0, 4, 4)], 1)
    assert (rep.violations, rep.worst) == (1, 4.0)
    with pytest.raises(PreconditionUnmet):
        check_window_slack(opt, inside, 2, pins={1: 3})


def test_forced_degenerate_window_is_counted():
    tri = build_instance(3, 1, [(0, 1), (1, 2)])
    cells = [(0, 2), (2, 4)]
    # Predecessor placed at 1 and successor at 2 leave no boundary gap.
    windows = windows_for_top(tri, {1}, cells, {0: 1, 2: 2})
    assert [(w.job, w.r, w.d, w.degenerate) for w in windows] == [(1, 2, 2, True)]
    rep = count_degenerate(windows, 1, 1, 4, 4)
    assert (rep.population, rep.violations, rep.worst, rep.bound) == (1, 0, 1.0, 4.0)


def test_pinned_replay_antichain_trace_frozen():
    inst, opt, fam = _antichain4()
    assign = assign_levels(inst, opt, fam, 1)
    assert best_offset(assign, 1, 1, 4) == (0, 0)
    traces, starts, disc = run_oracle_pinned(inst, opt, fam, 1, 0, assign)
    assert starts == {0: 0, 1: 1, 2: 2, 3: 3}
    assert disc == set()
    assert len(traces) == 1
    tr = traces[0]
    assert tr.interval == (0, 4)
    assert (tr.level, tr.partition_level, tr.lam) == (0, 1, 2)
    assert tr.cells == [(0, 2), (2, 4)]
    assert tr.pins == {}
    assert tr.tops == frozenset({0, 1, 2, 3})
    assert tr.top1 == frozenset({0, 1, 2, 3})
    assert tr.top2 == frozenset()
    assert [(w.job, w.r, w.d) for w in tr.windows] == [(j, 0, 4) for j in range(4)]
    assert tr.placed_tops == {0: 0, 1: 1, 2: 2, 3: 3}
    assert tr.edf.loads == {0: 1, 1: 1, 2: 1, 3: 1}
    assert tr.degenerate == frozenset()
    assert tr.edf_discarded == frozenset()

    idle = audit_idle_slots(tr, 1, 1, 4)
    # One meta-interval spanning [0, 4); loads never dip below m = 1.
    assert (idle.population, idle.violations, idle.worst) == (1, 0, -2.0)
    slack = check_window_slack(opt, tr.windows, tr.lam, tr.pins)
    assert (slack.violations, slack.worst) == (0, 0.0)


def test_pinned_replay_squeezed_guesses_everything_reachable():
    inst = build_instance(6, 2, SQUEEZE_EDGES)
    opt = optimal_schedule(inst)
    fam = build_laminar(4, 6, 1)
    assign = assign_levels(inst, opt, fam, 1)
    a, count = best_offset(assign, 2, 1, 4)
    assert (a, count) == (1, 0)
    traces, starts, disc = run_oracle_pinned(inst, opt, fam, 1, a, assign)
    # Root pins the four guessed jobs; 4 and 5 drop to unit cells.
    assert starts == dict(opt.start)
    assert disc == set()
    assert len(traces) == 1
    assert traces[0].pins == {0: 0, 1: 1, 2: 2, 3: 3}
    assert traces[0].tops == frozenset()


CLEAN_CASES = [
    ("antichain4", 4, 1, []),
    ("chain8", 8, 2, [(i, i + 1) for i in range(7)]),
    ("squeezed", 6, 2, SQUEEZE_EDGES),
    ("diamond", 4, 2, [(0, 1), (0, 2), (1, 3), (2, 3)]),
]


@pytest.mark.parametrize("name,n,m,edges", CLEAN_CASES)
def test_audit_instance_clean(name, n, m, edges):
    reports = audit_instance(build_instance(n, m, edges))
    for claim in CONTRACTUAL_CLAIMS:
        assert reports[claim].violations == 0, (name, claim)
    for claim in ADVISORY_CLAIMS:
        assert reports[claim].violations == 0, (name, claim)


def test_audit_instance_chain8_frozen_fields():
    reports = audit_instance(build_instance(8, 2, [(i, i + 1) for i in range(7)]))
    assert reports["unique-level"].population == 8
    assert reports["shift-bound"].bound == 8.0
    # Family levels are 8, 2, 1; the whole chain is guessed at the root.
    assert reports["level-count"].worst == 2.0
    assert reports["window-slack"].population == 0
    assert reports["recursion-depth"].population == 1
    assert reports["recursion-depth"].worst == 0.0


def test_audit_instance_rejects_tiny_instances():
    with pytest.raises(ValueError):
        audit_instance(build_instance(1, 1, []))


@st.composite
def _audit_cases(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    picked = draw(st.lists(st.sampled_from(pairs), max_size=7, unique=True))
    m = draw(st.integers(min_value=1, max_value=2))
    eps = draw(st.sampled_from([Fraction(1), Fraction(1, 2)]))
    return n, picked, m, eps


@settings(max_examples=30, deadline=None)
@given(_audit_cases())
def test_pinned_replay_is_complete_and_feasible(case):
    n, edges, m, eps = case
    inst = build_instance(n, m, edges)
    padded, tstar = pad_to_power_of_two(inst, optimal_makespan(inst))
    opt = optimal_schedule(padded)
    fam = build_laminar(tstar, padded.n, eps)
    assign = assign_levels(padded, opt, fam, eps)
    a, _ = best_offset(assign, padded.m, eps, tstar)
    traces, starts, disc = run_oracle_pinned(padded, opt, fam, eps, a, assign)

    assert set(starts) | disc == set(range(padded.n))
    assert not set(starts) & disc
    loads = {}
    for j, t in starts.items():
        assert 0 <= t < tstar
        loads[t] = loads.get(t, 0) + 1
        for p in range(padded.n):
            if p in starts and (p, j) in padded.prec:
                assert starts[p] < t
    assert all(v <= padded.m for v in loads.values())


@settings(max_examples=30, deadline=None)
@given(_audit_cases())
def test_audit_instance_holds_on_random_instances(case):
    n, edges, m, eps = case
    reports = audit_instance(build_instance(n, m, edges), eps=eps)
    for claim in CONTRACTUAL_CLAIMS + ADVISORY_CLAIMS:
        assert reports[claim].violations == 0, claim
