from __future__ import annotations

import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIGURE_EIGHT, TREFOIL
from knotforge.diagram import (
    Diagram,
    DiagramError,
    ErrorKind,
    change_crossing,
    change_crossings,
    drop_components,
    mirror,
    parse,
    parse_gauss,
    parse_json,
    parse_pd,
    serialize,
    writhe,
)
from knotforge.invariants import alexander, jones
from oracles import braid_closure

braid_words = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=9)


def edge_counts(d: Diagram) -> Counter:
    return Counter(e for x in d.crossings for e in x.edges)


def test_trefoil_pd_parses(trefoil):
    assert len(trefoil.crossings) == 3
    assert trefoil.n_components == 1
    assert set(edge_counts(trefoil).values()) == {2}
    assert sorted(edge_counts(trefoil)) == list(range(1, 7))


def test_empty_code_needs_hint():
    d = parse_pd("", n_components_hint=1)
    assert d.crossings == () and d.n_components == 1
    with pytest.raises(DiagramError) as err:
        parse_pd("")
    assert err.value.kind is ErrorKind.SyntaxError


def test_single_kink_is_valid():
    d = parse_pd("X(1,1,2,2)")
    assert d.n_components == 1 and len(d.crossings) == 1
    assert d.signs == (1,)


@pytest.mark.parametrize(
    "text, kind",
    [
        ("X(1,2,3", ErrorKind.SyntaxError),
        ("X(1,2,3,4) Y(1,2,3,4)", ErrorKind.SyntaxError),
        ("X(1,2,3,4)", ErrorKind.DanglingEdge),
        ("X(1,1,1,2) X(2,3,3,4)", ErrorKind.DuplicateEdge),
    ],
)
def test_pd_errors(text, kind):
    with pytest.raises(DiagramError) as err:
        parse_pd(text)
    assert err.value.kind is kind


def test_components_traced(hopf):
    assert hopf.n_components == 2
    assert len(hopf.components()) == 2


def test_gauss_trefoil_matches_pd_up_to_mirror(trefoil):
    g = parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+")
    assert len(g.crossings) == 3 and g.n_components == 1
    assert alexander(g) == alexander(trefoil)
    assert jones(g) == jones(trefoil).invert_variable()


def test_gauss_kink():
    k = parse_gauss("O1+ U1+")
    assert len(k.crossings) == 1
    assert serialize(k, "gauss") == "O1+ U1+"


def test_gauss_nonplanar_rejected():
    with pytest.raises(DiagramError) as err:
        parse_gauss("O1+ O2+ U1+ U2+")
    assert err.value.kind is ErrorKind.NonRealizable


def test_gauss_syntax_error():
    with pytest.raises(DiagramError) as err:
        parse_gauss("O1+ Q1+")
    assert err.value.kind is ErrorKind.SyntaxError


def test_serialize_examples(trefoil, unknot):
    assert serialize(trefoil, "pd") == TREFOIL
    assert serialize(unknot, "json") == '{"crossings":[],"components":1,"marks":[]}'
    obj = json.loads(serialize(trefoil.with_marks([0, 2]), "json"))
    assert list(obj) == ["crossings", "components", "marks"]
    assert obj["marks"] == [0, 2]


@pytest.mark.parametrize("fmt", ["pd", "gauss", "json"])
@pytest.mark.parametrize("text", [TREFOIL, FIGURE_EIGHT, "X(4,1,3,2) X(2,3,1,4)"])
def test_round_trip_corpus(text, fmt):
    d = parse_pd(text)
    back = parse(serialize(d, fmt), fmt)
    assert back.n_components == d.n_components
    assert jones(back) == jones(d)
    if fmt != "gauss":
        assert back == d


@settings(max_examples=60, deadline=None)
@given(braid_words, st.sampled_from([2, 3]))
def test_round_trip_random_braids(word, strands):
    word = [g for g in word if abs(g) < strands] or [1]
    d = braid_closure(word, strands)
    for fmt in ("pd", "json"):
        assert parse(serialize(d, fmt), fmt) == d
    back = parse_gauss(serialize(d, "gauss"))
    assert back.n_components == d.n_components
    assert writhe(back) == writhe(d)
    if len(d.crossings) <= 10:
        assert jones(back) == jones(d)


def test_change_crossing_involution(trefoil):
    d = trefoil.with_marks([1])
    for i in range(3):
        once = change_crossing(d, i)
        assert once.signs[i] == -d.signs[i]
        assert once.marks == d.marks and once.n_components == 1
        assert change_crossing(once, i) == d
    with pytest.raises(DiagramError) as err:
        change_crossing(trefoil, 7)
    assert err.value.kind is ErrorKind.BadIndex


def test_mirror_and_writhe(trefoil, unknot):
    assert mirror(unknot) == unknot
    assert mirror(mirror(trefoil)) == trefoil
    assert writhe(unknot) == 0
    assert writhe(trefoil) == -3
    assert writhe(mirror(trefoil)) == 3
    assert mirror(trefoil).signs == tuple(-s for s in trefoil.signs)
    assert jones(mirror(trefoil)) == jones(trefoil).invert_variable()


@settings(max_examples=40, deadline=None)
@given(braid_words, st.data())
def test_edits_keep_edges_paired(word, data):
    d = braid_closure([g for g in word if abs(g) < 3] or [1], 3)
    ids = data.draw(st.sets(st.integers(0, len(d.crossings) - 1)))
    e = change_crossings(d, ids)
    assert set(edge_counts(e).values()) == {2}
    assert e.n_components == d.n_components


def test_marks_validated():
    with pytest.raises(DiagramError) as err:
        parse_json({"crossings": [[1, 1, 2, 2]], "components": 1, "marks": [3]})
    assert err.value.kind is ErrorKind.BadIndex


def test_drop_components(hopf):
    one = drop_components(hopf, [0])
    assert one.crossings == () and one.n_components == 1
    assert drop_components(hopf, [0, 1]) == hopf
    with pytest.raises(DiagramError):
        drop_components(hopf, [2])
