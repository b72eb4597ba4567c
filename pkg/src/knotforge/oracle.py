"""Three-valued classification of diagrams with checkable certificates."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram
from .invariants import CapExceeded, alexander, determinant, jones, unlink_jones
from .laurent import LaurentPoly
from .rmoves import MoveTrace, SearchBudget, greedy_reduce, simplify

__all__ = ["Verdict", "classify", "STATUSES"]

STATUSES = ("Unknot", "Unlink", "Knotted", "Unknown")

# determinant and Alexander run by modular elimination and tolerate larger inputs
FALLBACK_FACTOR = 4


@dataclass
class Verdict:
    status: str
    trace: MoveTrace | None = None
    invariant: str | None = None
    value: object = None
    reason: str | None = None
    budget: SearchBudget | None = None
    components: int = 1

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def certificate(self):
        if self.status in ("Unknot", "Unlink"):
            return self.trace
        if self.status == "Knotted":
            return {"invariant": self.invariant, "value": self.value}
        return {"reason": self.reason, "budget": self.budget.to_json() if self.budget else None}

    def to_json(self) -> dict:
        if self.status in ("Unknot", "Unlink"):
            cert = self.trace.to_json()
        elif self.status == "Knotted":
            val = self.value.to_json() if isinstance(self.value, LaurentPoly) else self.value
            cert = {"invariant": self.invariant, "value": val}
        else:
            cert = {"reason": self.reason, "budget": self.budget.to_json() if self.budget else None}
        return {"status": self.status, "certificate": cert}

    @classmethod
    def from_json(cls, obj) -> "Verdict":
        st = obj["status"]
        cert = obj["certificate"]
        if st in ("Unknot", "Unlink"):
            tr = MoveTrace.from_json(cert)
            return cls(st, trace=tr, components=tr.initial.n_components)
        if st == "Knotted":
            val = cert["value"]
            if isinstance(val, dict):
                val = LaurentPoly.from_json(val)
            return cls(st, invariant=cert["invariant"], value=val)
        b = cert.get("budget")
        return cls(st, reason=cert.get("reason"), budget=SearchBudget.from_json(b) if b else None)

    def check(self, d: Diagram) -> bool:
        """Re-derive the certificate against ``d``."""
        if self.status in ("Unknot", "Unlink"):
            if self.trace is None or self.trace.initial != d:
                return False
            end = self.trace.replay()
            return not end.crossings and end.n_components == d.n_components
        if self.status == "Knotted":
            if self.invariant == "jones":
                v = jones(d, cap=None)
                return v == self.value and v != unlink_jones(d.n_components)
            if self.invariant == "determinant":
                return determinant(d) == self.value != 1
            if self.invariant == "alexander":
                v = alexander(d)
                return v == self.value and v != LaurentPoly.one("t")
            return False
        return True


def classify(d: Diagram, budget: SearchBudget | None = None) -> Verdict:
    """Unknot/Unlink by a move trace, Knotted by an invariant, else Unknown."""
    budget = budget or SearchBudget()
    n = d.n_components
    trivial = "Unknot" if n == 1 else "Unlink"
    if not d.crossings:
        return Verdict(trivial, trace=MoveTrace(d, []), components=n)
    # Cheap pass first: monotone reduction, then Jones on what is left.  A
    # nontrivial Jones value rules out any trace, so no search is wasted on
    # diagrams that are certainly knotted; the verdict is the same either way.
    reduced, steps = greedy_reduce(d, limit=budget.max_states)
    if not reduced.crossings:
        return Verdict(trivial, trace=MoveTrace(d, steps), components=n)
    reasons = []
    cap = budget.invariant_cap
    jones_val = None
    try:
        jones_val = jones(reduced, cap=cap)
    except CapExceeded:
        pass
    if jones_val is not None and jones_val != unlink_jones(n):
        return Verdict("Knotted", invariant="jones", value=jones_val, components=n)

    searched, trace = simplify(d, budget)
    if not searched.crossings:
        return Verdict(trivial, trace=trace, components=n)
    if len(searched.crossings) < len(reduced.crossings):
        reduced = searched
    # invariants are computed on the reduced diagram; they agree with d's
    if jones_val is None:
        try:
            jones_val = jones(reduced, cap=cap)
            if jones_val != unlink_jones(n):
                return Verdict("Knotted", invariant="jones", value=jones_val, components=n)
        except CapExceeded as exc:
            reasons.append(f"jones blocked: {exc}")
    if jones_val is not None:
        reasons.append("jones equals the trivial value")
    if n == 1:
        fcap = cap * FALLBACK_FACTOR
        if len(reduced.crossings) > fcap:
            reasons.append(f"determinant blocked: {len(reduced.crossings)} crossings exceed {fcap}")
        else:
            delta = alexander(reduced)
            det = abs(int(delta(-1)))
            if det != 1:
                return Verdict("Knotted", invariant="determinant", value=det, components=n)
            if delta != LaurentPoly.one("t"):
                return Verdict("Knotted", invariant="alexander", value=delta, components=n)
            reasons.append("alexander equals the trivial value")
    reasons.append(f"simplification stalled at {len(reduced.crossings)} crossings")
    return Verdict("Unknown", reason="; ".join(reasons), budget=budget, components=n)
