"""Strong trivializers: exhaustive subset verification, search and the genus audit.

Order ``m`` means a set of ``m + 1`` crossings.  Every claim is about the
given projection only; a failed search says nothing about other diagrams of
the same knot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .diagram import Diagram, DiagramError, ErrorKind, change_crossings, parse_json
from .invariants import GenusBracket
from .oracle import Verdict, classify
from .rmoves import SearchBudget

__all__ = [
    "EmptyCandidate",
    "NotVerified",
    "NotKnotted",
    "TrivializerReport",
    "AuditResult",
    "ordered_subsets",
    "verify_trivializer",
    "search_trivializers",
    "audit_bound",
    "SCHEMA",
]

SCHEMA = "report_v1"
SCOPE = "claims hold for this projection only"


class EmptyCandidate(ValueError):
    pass


class NotVerified(ValueError):
    pass


class NotKnotted(ValueError):
    pass


def ordered_subsets(candidate) -> list[tuple[int, ...]]:
    """Nonempty subsets by size, lexicographic within a size."""
    cand = sorted(candidate)
    return [s for k in range(1, len(cand) + 1) for s in combinations(cand, k)]


@dataclass
class TrivializerReport:
    base: Diagram
    candidate: tuple[int, ...]
    subset_verdicts: dict[tuple[int, ...], Verdict]
    budget: SearchBudget = field(default_factory=SearchBudget)

    @property
    def order(self) -> int:
        return len(self.candidate) - 1

    @property
    def status(self) -> str:
        vs = list(self.subset_verdicts.values())
        if vs and all(v.status == "Unknot" for v in vs):
            return "Verified"
        if any(v.status == "Knotted" for v in vs):
            return "Refuted"
        return "Inconclusive"

    @property
    def witness(self) -> tuple[int, ...] | None:
        for s, v in self.subset_verdicts.items():
            if v.status == "Knotted":
                return s
        return None

    @property
    def unknown(self) -> list[tuple[int, ...]]:
        return [s for s, v in self.subset_verdicts.items() if v.status not in ("Unknot", "Knotted")]

    def overall_json(self) -> dict:
        st = self.status
        if st == "Verified":
            return {"status": st, "order": self.order}
        if st == "Refuted":
            return {"status": st, "witness": list(self.witness)}
        return {"status": st, "unknown": [list(s) for s in self.unknown]}

    def to_json(self, run_config: dict | None = None) -> dict:
        header = {"schema": SCHEMA, "scope": SCOPE, "budget": self.budget.to_json()}
        if run_config is not None:
            header["run_config"] = run_config
        return {
            "header": header,
            "base": self.base.to_json_obj(),
            "candidate": list(self.candidate),
            "order": self.order,
            "subsets": [
                {"subset": list(s), "verdict": v.to_json()} for s, v in self.subset_verdicts.items()
            ],
            "overall": self.overall_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "TrivializerReport":
        if obj.get("header", {}).get("schema") != SCHEMA:
            raise ValueError("not a report_v1 document")
        base = parse_json(obj["base"])
        verdicts = {tuple(e["subset"]): Verdict.from_json(e["verdict"]) for e in obj["subsets"]}
        budget = SearchBudget.from_json(obj["header"].get("budget", {}))
        return cls(base, tuple(obj["candidate"]), verdicts, budget)


def _check_candidate(d: Diagram, candidate) -> tuple[int, ...]:
    cand = tuple(sorted(set(candidate)))
    if not cand:
        raise EmptyCandidate("candidate set is empty")
    for c in cand:
        if not isinstance(c, int) or not 0 <= c < len(d.crossings):
            raise DiagramError(ErrorKind.BadIndex, f"crossing {c} out of range")
    return cand


def verify_trivializer(d: Diagram, candidate, budget: SearchBudget | None = None, cache=None) -> TrivializerReport:
    """Classify the diagram with each nonempty subset of ``candidate`` changed."""
    budget = budget or SearchBudget()
    cand = _check_candidate(d, candidate)
    if d.n_components != 1:
        raise DiagramError(ErrorKind.SyntaxError, "strong trivializers are defined for knots")
    verdicts: dict[tuple[int, ...], Verdict] = {}
    for s in ordered_subsets(cand):
        if cache is not None and s in cache:
            verdicts[s] = cache[s]
            continue
        v = classify(change_crossings(d, s), budget)
        verdicts[s] = v
        if cache is not None:
            cache[s] = v
    return TrivializerReport(d, cand, verdicts, budget)


def search_trivializers(d: Diagram, m: int, budget: SearchBudget | None = None) -> list[TrivializerReport]:
    """All verified trivializers of order ``m`` on this projection.

    A crossing whose single change does not unknot cannot be in any
    trivializer, and likewise any set containing a failing subset is skipped.
    """
    budget = budget or SearchBudget()
    if m < 0:
        raise ValueError("order must be non-negative")
    n = len(d.crossings)
    if n < m + 1:
        return []
    cache: dict[tuple[int, ...], Verdict] = {}
    good = []
    for c in range(n):
        v = classify(change_crossings(d, [c]), budget)
        cache[(c,)] = v
        if v.status == "Unknot":
            good.append(c)
    failed: set[tuple[int, ...]] = set()
    out = []
    for cand in combinations(good, m + 1):
        if any(s in failed for k in range(2, m + 1) for s in combinations(cand, k)):
            continue
        rep = verify_trivializer(d, cand, budget, cache)
        if rep.status == "Verified":
            out.append(rep)
        else:
            failed.update(s for s, v in rep.subset_verdicts.items() if v.status != "Unknot")
    return out


@dataclass(frozen=True)
class AuditResult:
    order: int
    genus: GenusBracket
    status: str

    def to_json(self) -> dict:
        return {"order": self.order, "genus": self.genus.to_json(), "status": self.status}


def _audit_status(m: int, g: GenusBracket) -> str:
    if m > 3 * g.upper - 2:
        return "Violation"
    if g.lower == g.upper and m == 3 * g.upper - 2:
        return "Tight"
    return "Consistent"


def audit_bound(report: TrivializerReport, genus: GenusBracket, base_verdict: Verdict | None = None) -> AuditResult:
    """Compare a verified order against the bound ``m <= 3g - 2``."""
    if report.status != "Verified":
        raise NotVerified(f"report is {report.status}, only verified reports can be audited")
    if base_verdict is None:
        base_verdict = classify(report.base, report.budget)
    if base_verdict.status != "Knotted":
        raise NotKnotted(f"base diagram is {base_verdict.status}, not certified knotted")
    return AuditResult(report.order, genus, _audit_status(report.order, genus))
