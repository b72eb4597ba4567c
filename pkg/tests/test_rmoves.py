from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotforge.diagram import Diagram, DiagramError, change_crossing, parse_pd
from knotforge.invariants import jones, kauffman_bracket
from knotforge.laurent import LaurentPoly
from knotforge.rmoves import (
    Move,
    MoveTrace,
    SearchBudget,
    apply_move,
    canonical_key,
    enumerate_moves,
    greedy_reduce,
    is_trivial_diagram,
    simplify,
)

KINK = "X(1,1,2,2)"


def kinds(d):
    return {m.kind for m in enumerate_moves(d)}


def LA(e):
    return LaurentPoly({e: 1}, "A")


def test_kink_has_r1down():
    d = parse_pd(KINK)
    moves = enumerate_moves(d)
    down = [m for m in moves if m.kind == "R1down"]
    assert len(down) == 1
    assert apply_move(d, down[0]).crossings == ()


def test_empty_diagram_only_up_moves():
    assert kinds(Diagram((), 1, frozenset())) <= {"R1up", "R2up"}
    two = Diagram((), 2, frozenset())
    assert "R2up" in kinds(two)


def test_trefoil_is_reduced(trefoil):
    assert not kinds(trefoil) & {"R1down", "R2down", "R3"}


def test_r2_pair_restores_diagram(trefoil):
    for up in enumerate_moves(trefoil, ["R2up"])[:8]:
        bigger = apply_move(trefoil, up)
        assert len(bigger.crossings) == 5
        back = [apply_move(bigger, m) for m in enumerate_moves(bigger, ["R2down"])]
        assert any(canonical_key(b) == canonical_key(trefoil) for b in back)


def test_r3_preserves_bracket(trefoil):
    # the standard trefoil has no triangle; make one with an R2up first
    for up in enumerate_moves(trefoil, ["R2up"]):
        d = apply_move(trefoil, up)
        r3 = enumerate_moves(d, ["R3"])
        if r3:
            e = apply_move(d, r3[0])
            assert len(e.crossings) == len(d.crossings)
            assert kauffman_bracket(e) == kauffman_bracket(d)
            return
    pytest.fail("no R3 site reachable by one R2up")


def test_r1_changes_bracket_by_unit(trefoil):
    b = kauffman_bracket(trefoil)
    for m in enumerate_moves(trefoil, ["R1up"])[:6]:
        assert kauffman_bracket(apply_move(trefoil, m)) in (b * -(LA(6)), b * -(LA(-6)))


def test_mismatched_move_rejected(trefoil):
    with pytest.raises(DiagramError):
        apply_move(trefoil, Move("R1down", (0, 0)))
    with pytest.raises(DiagramError):
        apply_move(trefoil, Move("R2down", (0, 0, 9, 0)))


def test_simplify_examples(trefoil):
    end, trace = simplify(parse_pd(KINK))
    assert end.crossings == () and [m.kind for m in trace.steps] == ["R1down"]

    changed = change_crossing(trefoil, 0)
    end, trace = simplify(changed)
    assert end.crossings == ()
    assert trace.replay() == end

    end, trace = simplify(trefoil, SearchBudget(max_states=2000))
    assert len(end.crossings) == 3


def test_simplify_deterministic(figure_eight):
    d = change_crossing(figure_eight, 1)
    a = simplify(d, SearchBudget(max_states=3000))
    b = simplify(d, SearchBudget(max_states=3000))
    assert a[0] == b[0] and a[1].to_json() == b[1].to_json()


def test_budget_zero_returns_input(trefoil):
    d = change_crossing(trefoil, 0)
    end, trace = simplify(d, SearchBudget(max_states=0))
    assert end == d and trace.steps == []


def test_is_trivial_diagram():
    assert is_trivial_diagram(Diagram((), 1, frozenset()))
    assert is_trivial_diagram(Diagram((), 3, frozenset()))
    assert not is_trivial_diagram(parse_pd(KINK))


def test_trace_json_round_trip(trefoil):
    _, trace = simplify(change_crossing(trefoil, 2))
    obj = json.loads(json.dumps(trace.to_json()))
    assert set(obj) == {"initial", "steps"}
    again = MoveTrace.from_json(obj)
    assert again.replay() == trace.replay()
    assert Move.from_json(obj["steps"][0]) == trace.steps[0]


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv("KNOTFORGE_BUDGET", "1234")
    assert SearchBudget.from_env().max_states == 1234
    monkeypatch.setenv("KNOTFORGE_BUDGET", '{"max_states": 5, "slack": 4}')
    b = SearchBudget.from_env(max_states=9)
    assert (b.max_states, b.slack) == (9, 4)
    assert SearchBudget.from_json(b.to_json()) == b


def test_greedy_reduce_limit(trefoil):
    d = change_crossing(trefoil, 0)
    part, steps = greedy_reduce(d, limit=1)
    assert len(steps) == 1 and len(part.crossings) < 3


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["trefoil", "figure_eight", "kink"]))
def test_random_moves_preserve_jones(seed, start):
    from conftest import FIGURE_EIGHT, TREFOIL

    d = parse_pd({"trefoil": TREFOIL, "figure_eight": FIGURE_EIGHT, "kink": KINK}[start])
    ref = jones(d)
    rng = random.Random(seed)
    for _ in range(8):
        moves = enumerate_moves(d)
        d = apply_move(d, rng.choice(moves))
        assert d.n_components == 1
        assert jones(d) == ref
