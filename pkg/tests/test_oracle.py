import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from precsched.model import build_instance, longest_chain, validate_schedule
from precsched.oracle import (
    BudgetExhausted,
    TooLarge,
    optimal_makespan,
    optimal_schedule,
)

from helpers import brute_force_makespan, enumerate_poset_classes

DIAMOND = [(0, 1), (0, 2), (1, 3), (2, 3)]


def test_diamond_m2():
    inst = build_instance(4, 2, DIAMOND)
    assert brute_force_makespan(4, 2, DIAMOND) == 3
    assert optimal_makespan(inst) == 3
    sched = optimal_schedule(inst)
    assert sched.start == {0: 0, 1: 1, 2: 1, 3: 2}
    report = validate_schedule(inst, sched)
    assert report.feasible and report.complete and report.makespan == 3


def test_chain_and_antichain_hit_lower_bounds():
    for n, m in [(1, 1), (4, 2), (6, 3)]:
        chain = build_instance(n, m, [(i, i + 1) for i in range(n - 1)])
        assert optimal_makespan(chain) == n == longest_chain(chain)
        anti = build_instance(n, m, [])
        assert optimal_makespan(anti) == math.ceil(n / m)


def test_empty_instance():
    inst = build_instance(0, 2, [])
    assert optimal_makespan(inst) == 0
    assert optimal_schedule(inst).start == {}


def test_matches_brute_force_on_all_small_posets():
    # The n <= 6 sweep runs in the acceptance suite; n <= 5 here keeps this fast.
    for n in range(0, 6):
        for closed in enumerate_poset_classes(n):
            for m in (1, 2, 3):
                inst = build_instance(n, m, closed)
                assert optimal_makespan(inst) == brute_force_makespan(n, m, closed)


def test_schedule_is_optimal_feasible_deterministic():
    for n in (4, 5):
        for closed in enumerate_poset_classes(n):
            inst = build_instance(n, 2, closed)
            sched = optimal_schedule(inst)
            again = optimal_schedule(inst)
            assert sched.start == again.start
            report = validate_schedule(inst, sched)
            assert report.feasible and report.complete
            assert report.makespan == optimal_makespan(inst) == sched.horizon


def test_too_large_and_cap_override():
    inst = build_instance(25, 3, [])
    with pytest.raises(TooLarge):
        optimal_makespan(inst)
    assert optimal_makespan(inst, cap=25) == 9


def test_budget_exhausted():
    inst = build_instance(8, 2, [(0, 1), (2, 3), (4, 5), (6, 7)])
    with pytest.raises(BudgetExhausted):
        optimal_makespan(inst, limit=2)


def test_makespan_never_below_lower_bounds():
    for n in (5,):
        for closed in enumerate_poset_classes(n):
            for m in (1, 2):
                inst = build_instance(n, m, closed)
                opt = optimal_makespan(inst)
                assert opt >= max(math.ceil(n / m), longest_chain(inst))


@st.composite
def _dags(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    picked = draw(st.lists(st.sampled_from(pairs), max_size=8, unique=True))
    return n, picked


@settings(max_examples=50, deadline=None)
@given(_dags(), st.integers(min_value=1, max_value=3))
def test_adding_an_edge_never_helps(case, m):
    n, edges = case
    inst = build_instance(n, m, edges)
    base = optimal_makespan(inst)
    missing = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if (i, j) not in inst.prec
    ]
    if missing:
        bigger = build_instance(n, m, edges + [missing[0]])
        assert optimal_makespan(bigger) >= base
