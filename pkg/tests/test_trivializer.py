from __future__ import annotations

import json
from itertools import combinations

import pytest

from knotforge.diagram import DiagramError, ErrorKind, parse_pd
from knotforge.gamma import gamma
from knotforge.invariants import GenusBracket
from knotforge.trivializer import (
    SCHEMA,
    EmptyCandidate,
    NotKnotted,
    NotVerified,
    TrivializerReport,
    audit_bound,
    ordered_subsets,
    search_trivializers,
    verify_trivializer,
)


def test_subset_order():
    assert ordered_subsets([2, 0, 1]) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]


def test_trefoil_pair_verified(trefoil):
    rep = verify_trivializer(trefoil, {0, 1})
    assert rep.status == "Verified" and rep.order == 1
    assert list(rep.subset_verdicts) == [(0,), (1,), (0, 1)]
    assert all(v.status == "Unknot" and v.trace.replay().crossings == () for v in rep.subset_verdicts.values())
    assert rep.overall_json() == {"status": "Verified", "order": 1}


def test_trefoil_triple_refuted(trefoil):
    rep = verify_trivializer(trefoil, [0, 1, 2])
    assert rep.status == "Refuted"
    assert rep.witness == (0, 1, 2)
    v = rep.subset_verdicts[(0, 1, 2)]
    assert v.invariant == "jones"
    assert len(rep.subset_verdicts) == 7


def test_candidate_errors(trefoil, hopf):
    with pytest.raises(EmptyCandidate):
        verify_trivializer(trefoil, [])
    with pytest.raises(DiagramError) as err:
        verify_trivializer(trefoil, [0, 5])
    assert err.value.kind is ErrorKind.BadIndex
    with pytest.raises(DiagramError):
        verify_trivializer(hopf, [0])


def test_search_trefoil(trefoil, unknot):
    found = search_trivializers(trefoil, 1)
    assert [r.candidate for r in found] == [(0, 1), (0, 2), (1, 2)]
    assert search_trivializers(trefoil, 2) == []
    assert search_trivializers(unknot, 1) == []
    with pytest.raises(ValueError):
        search_trivializers(trefoil, -1)


def test_search_figure_eight(figure_eight):
    found = search_trivializers(figure_eight, 1)
    assert found and all(r.status == "Verified" for r in found)


def test_report_shape_and_round_trip(trefoil):
    rep = verify_trivializer(trefoil, [0, 2])
    obj = rep.to_json({"command": "verify"})
    assert obj["header"]["schema"] == SCHEMA
    assert "projection" in obj["header"]["scope"]
    assert obj["header"]["run_config"] == {"command": "verify"}
    assert len(obj["subsets"]) == 2 ** (rep.order + 1) - 1
    again = TrivializerReport.from_json(json.loads(json.dumps(obj)))
    assert again.status == rep.status and again.candidate == rep.candidate
    with pytest.raises(ValueError):
        TrivializerReport.from_json({"header": {"schema": "other"}})


def test_reports_deterministic(figure_eight):
    a = json.dumps(verify_trivializer(figure_eight, [0, 2]).to_json())
    b = json.dumps(verify_trivializer(figure_eight, [0, 2]).to_json())
    assert a == b


def test_subset_closure():
    g = gamma(1)
    rep = verify_trivializer(g.knot, g.marks)
    assert rep.status == "Verified"
    for k in range(1, len(g.marks)):
        for sub in combinations(g.marks, k):
            smaller = verify_trivializer(g.knot, sub)
            assert smaller.status == "Verified"
            for s, v in smaller.subset_verdicts.items():
                assert rep.subset_verdicts[s].status == v.status


def test_audit_statuses(trefoil):
    rep = verify_trivializer(trefoil, [0, 1])
    assert audit_bound(rep, GenusBracket(1, 1)).status == "Tight"
    assert audit_bound(rep, GenusBracket(1, 2)).status == "Consistent"
    g = gamma(1)
    order2 = verify_trivializer(g.knot, g.marks)
    assert order2.order == 2
    assert audit_bound(order2, GenusBracket(1, 1)).status == "Violation"


def test_audit_refusals(trefoil):
    with pytest.raises(NotVerified):
        audit_bound(verify_trivializer(trefoil, [0, 1, 2]), GenusBracket(1, 1))
    kink = parse_pd("X(1,1,2,2)")
    rep = verify_trivializer(kink, [0])
    assert rep.status == "Verified"
    with pytest.raises(NotKnotted):
        audit_bound(rep, GenusBracket(0, 0))
