from __future__ import annotations

import json

from hypothesis import given, settings
from hypothesis import strategies as st

from knotforge.diagram import Diagram, change_crossing, change_crossings, mirror
from knotforge.gamma import gamma
from knotforge.invariants import jones
from knotforge.oracle import Verdict, classify
from knotforge.rmoves import SearchBudget, apply_move, enumerate_moves
from oracles import braid_closure

braid_words = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=8)


def test_empty_diagrams():
    v = classify(Diagram((), 1, frozenset()))
    assert v.status == "Unknot" and v.trace.steps == []
    assert classify(Diagram((), 3, frozenset())).status == "Unlink"


def test_trefoil_knotted_by_jones(trefoil):
    v = classify(trefoil)
    assert v.status == "Knotted" and v.invariant == "jones"
    assert v.value == jones(trefoil)
    assert v.check(trefoil)
    obj = v.to_json()
    assert obj["status"] == "Knotted"
    assert obj["certificate"]["invariant"] == "jones"
    assert obj["certificate"]["value"]["var"] == "q"


def test_changed_trefoil_unknot_with_trace(trefoil):
    for i in range(3):
        d = change_crossing(trefoil, i)
        v = classify(d)
        assert v.status == "Unknot"
        assert v.check(d)
        assert v.trace.replay().crossings == ()


def test_zero_budget_forces_unknown():
    d = braid_closure([1, -2] * 10, 3)
    assert len(d.crossings) == 20
    v = classify(d, SearchBudget(max_states=0, invariant_cap=0))
    assert v.status == "Unknown"
    cert = v.to_json()["certificate"]
    assert cert["budget"]["max_states"] == 0 and "blocked" in cert["reason"]


def test_trivial_jones_never_claims_unknot():
    g = gamma(0)
    d = change_crossings(g.knot, g.marks)
    assert classify(d).status == "Unknot"
    v = classify(d, SearchBudget(max_states=0))
    assert v.status == "Unknown"
    assert "trivial value" in v.reason


def test_determinant_fallback(trefoil):
    v = classify(trefoil, SearchBudget(invariant_cap=2))
    assert v.status == "Knotted" and v.invariant == "determinant" and v.value == 3
    assert v.check(trefoil)


def test_links(hopf):
    v = classify(hopf)
    assert v.status == "Knotted" and v.components == 2
    split = apply_move(Diagram((), 2, frozenset()), enumerate_moves(Diagram((), 2, frozenset()), ["R2up"])[0])
    assert len(split.crossings) == 2
    assert classify(split).status == "Unlink"


def test_verdict_json_round_trip(trefoil):
    for d in (trefoil, change_crossing(trefoil, 0)):
        v = classify(d)
        again = Verdict.from_json(json.loads(json.dumps(v.to_json())))
        assert again.status == v.status
        assert again.check(d)
    u = classify(trefoil, SearchBudget(max_states=0, invariant_cap=0))
    assert Verdict.from_json(u.to_json()).status == "Unknown"


def test_check_rejects_wrong_certificate(trefoil, figure_eight):
    v = classify(trefoil)
    assert not v.check(figure_eight)
    u = classify(change_crossing(trefoil, 0))
    assert not u.check(trefoil)


@settings(max_examples=30, deadline=None)
@given(braid_words)
def test_mirror_same_status_and_monotone(word):
    d = braid_closure([g for g in word if abs(g) < 3] or [1], 3)
    statuses = []
    for states in (0, 50, 5000):
        b = SearchBudget(max_states=states)
        s, m = classify(d, b).status, classify(mirror(d), b).status
        if d.n_components == 1 and "Unknown" not in (s, m):
            assert s == m
        statuses.append(s)
    conclusive = {s for s in statuses if s != "Unknown"}
    assert len(conclusive) <= 1
