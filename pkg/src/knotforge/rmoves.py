"""Reidemeister moves on planar diagrams and a budgeted simplifier.

Moves act on slots: a dart ``(c, s)`` leaves crossing ``c`` through slot
``s`` and runs along that edge.  Faces are traced with the face on the
left, so after arriving at ``(y, t)`` the walk continues from ``(y, t-1)``.
"""

from __future__ import annotations

import heapq
import json
import os
from dataclasses import dataclass, field
from typing import Iterable

from .diagram import Crossing, Diagram, DiagramError, ErrorKind, from_oriented, parse_json

__all__ = [
    "Move",
    "MoveTrace",
    "SearchBudget",
    "KINDS",
    "enumerate_moves",
    "apply_move",
    "simplify",
    "greedy_reduce",
    "is_trivial_diagram",
    "canonical_key",
    "faces",
]

KINDS = ("R1down", "R1up", "R2down", "R2up", "R3")
DOWN = ("R1down", "R2down")


@dataclass(frozen=True)
class Move:
    kind: str
    site: tuple[int, ...]

    def to_json(self) -> dict:
        return {"kind": self.kind, "site": list(self.site)}

    @classmethod
    def from_json(cls, obj) -> "Move":
        if obj.get("kind") not in KINDS:
            raise DiagramError(ErrorKind.SyntaxError, f"unknown move kind {obj.get('kind')!r}")
        return cls(obj["kind"], tuple(int(v) for v in obj["site"]))


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 200_000
    slack: int = 2
    max_crossings: int | None = None
    invariant_cap: int = 128  # covers every Γ_j diagram for j <= 2 (at most 96 crossings)

    def crossing_cap(self, d: Diagram) -> int:
        return self.max_crossings if self.max_crossings is not None else len(d.crossings) + self.slack

    def to_json(self) -> dict:
        return {
            "max_states": self.max_states,
            "slack": self.slack,
            "max_crossings": self.max_crossings,
            "invariant_cap": self.invariant_cap,
        }

    @classmethod
    def from_json(cls, obj) -> "SearchBudget":
        return cls(**{k: obj[k] for k in ("max_states", "slack", "max_crossings", "invariant_cap") if k in obj})

    @classmethod
    def from_env(cls, **overrides) -> "SearchBudget":
        """Default budget, with ``KNOTFORGE_BUDGET`` (an int or a JSON object) applied."""
        raw = os.environ.get("KNOTFORGE_BUDGET")
        fields = {}
        if raw:
            raw = raw.strip()
            if raw.startswith("{"):
                fields.update(json.loads(raw))
            else:
                fields["max_states"] = int(raw)
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**fields)


@dataclass
class MoveTrace:
    initial: Diagram
    steps: list[Move] = field(default_factory=list)

    def replay(self) -> Diagram:
        d = self.initial
        for m in self.steps:
            d = apply_move(d, m)
        return d

    def to_json(self) -> dict:
        return {"initial": self.initial.to_json_obj(), "steps": [m.to_json() for m in self.steps]}

    @classmethod
    def from_json(cls, obj) -> "MoveTrace":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(parse_json(obj["initial"]), [Move.from_json(s) for s in obj["steps"]])


# ---------------------------------------------------------------------------
# planar map helpers
# ---------------------------------------------------------------------------

class _Map:
    """Slot-level view of a diagram."""

    __slots__ = ("d", "t", "oi", "ends")

    def __init__(self, d: Diagram):
        self.d = d
        self.t = [list(x.edges) for x in d.crossings]
        self.oi = [x.over_in for x in d.crossings]
        ends: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(self.t):
            for s, e in enumerate(x):
                ends.setdefault(e, []).append((ci, s))
        self.ends = ends

    def across(self, ci: int, s: int) -> tuple[int, int]:
        a, b = self.ends[self.t[ci][s]]
        return b if a == (ci, s) else a

    def is_in(self, ci: int, s: int) -> bool:
        return s == 0 or s == self.oi[ci]

    def is_over(self, ci: int, s: int) -> bool:
        return s % 2 == 1

    def faces(self) -> list[list[tuple[int, int]]]:
        seen = set()
        out = []
        for ci in range(len(self.t)):
            for s in range(4):
                if (ci, s) in seen:
                    continue
                face = []
                cur = (ci, s)
                while cur not in seen:
                    seen.add(cur)
                    face.append(cur)
                    y, t = self.across(*cur)
                    cur = (y, (t - 1) % 4)
                out.append(face)
        return out

    def new_label(self) -> int:
        return max(self.ends, default=0) + 1


def faces(d: Diagram) -> list[list[tuple[int, int]]]:
    return _Map(d).faces()


def _build(entries) -> tuple[list[int], int]:
    """Crossing from a counterclockwise list of (edge, incoming, over)."""
    start = next(i for i, (_, inc, ov) in enumerate(entries) if inc and not ov)
    rot = [entries[(start + k) % 4] for k in range(4)]
    oi = next(k for k, (_, inc, ov) in enumerate(rot) if inc and ov)
    return [e for e, _, _ in rot], oi


def _finish(d: Diagram, tuples, oi, marks=None) -> Diagram:
    return from_oriented(
        tuples, oi, d.n_components, d.marks if marks is None else marks, validate=False
    )


def _remove(d: Diagram, m: _Map, drop: set[int], joins: list[tuple[int, int]]) -> Diagram:
    """Delete crossings in ``drop``; each join merges two edge labels."""
    parent: dict[int, int] = {}

    def find(a):
        while parent.get(a, a) != a:
            a = parent[a]
        return a

    for a, b in joins:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    keep = [ci for ci in range(len(m.t)) if ci not in drop]
    index = {ci: k for k, ci in enumerate(keep)}
    tuples = [[find(e) for e in m.t[ci]] for ci in keep]
    oi = [m.oi[ci] for ci in keep]
    marks = frozenset(index[i] for i in d.marks if i in index)
    return _finish(d, tuples, oi, marks)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _r1down_sites(m: _Map):
    for ci, x in enumerate(m.t):
        for s in range(4):
            if x[s] == x[(s + 1) % 4]:
                yield (ci, s)
                break


def _r2down_sites(m: _Map, fs):
    for f in fs:
        if len(f) != 2:
            continue
        (x, s), (y, t1) = f
        if x == y:
            continue
        # edge e1 runs from (x, s) to (y, t) with t = t1 + 1
        t = (t1 + 1) % 4
        if m.across(x, s) != (y, t):
            continue
        if s % 2 == t % 2:
            yield (x, s, y, t)


def _r3_sites(m: _Map, fs):
    for f in fs:
        if len(f) != 3:
            continue
        cs = [c for c, _ in f]
        if len(set(cs)) != 3:
            continue
        # f = [(X, sX), (Y, tY-1), (Z, tZ-1)]
        (x, sx), (y, sy), (z, sz) = f
        tY = (sy + 1) % 4
        tZ = (sz + 1) % 4
        lines = [
            ((x, sx), (y, tY)),
            ((y, sy), (z, tZ)),
            ((z, sz), (x, (sx + 1) % 4)),
        ]
        if any(m.is_over(*p) and m.is_over(*q) for p, q in lines):
            k = min(range(3), key=lambda i: f[i])
            rot = f[k:] + f[:k]
            yield tuple(v for dart in rot for v in dart)


def _r2up_sites(m: _Map, fs):
    for f in fs:
        n = len(f)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                d1, d2 = f[i], f[j]
                if m.t[d1[0]][d1[1]] == m.t[d2[0]][d2[1]]:
                    continue
                for over in (1, 0):
                    yield (d1[0], d1[1], d2[0], d2[1], over)


def _r1up_sites(m: _Map):
    for ci in range(len(m.t)):
        for s in range(4):
            for over in (1, 0):
                yield (ci, s, over)


def enumerate_moves(d: Diagram, kinds: Iterable[str] = KINDS) -> list[Move]:
    """All applicable moves of the requested kinds, in a fixed order."""
    kinds = set(kinds)
    for k in kinds:
        if k not in KINDS:
            raise ValueError(f"unknown move kind {k!r}")
    out: list[Move] = []
    if not d.crossings:
        if "R1up" in kinds:
            out += [Move("R1up", (-1, sg)) for sg in (1, -1)]
        if "R2up" in kinds and d.n_components >= 2:
            out += [Move("R2up", (-1, ov)) for ov in (1, 0)]
        return out
    m = _Map(d)
    fs = m.faces() if kinds & {"R2down", "R3", "R2up"} else []
    if "R1down" in kinds:
        out += [Move("R1down", s) for s in _r1down_sites(m)]
    if "R2down" in kinds:
        out += [Move("R2down", s) for s in _r2down_sites(m, fs)]
    if "R3" in kinds:
        out += [Move("R3", s) for s in _r3_sites(m, fs)]
    if "R2up" in kinds:
        out += [Move("R2up", s) for s in _r2up_sites(m, fs)]
    if "R1up" in kinds:
        out += [Move("R1up", s) for s in _r1up_sites(m)]
    return out


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------

def _bad(move: Move, why: str) -> DiagramError:
    return DiagramError(ErrorKind.BadIndex, f"{move.kind} {list(move.site)}: {why}")


def _check_slot(m: _Map, move: Move, ci: int, s: int) -> None:
    if not (0 <= ci < len(m.t) and 0 <= s < 4):
        raise _bad(move, "slot out of range")


def _apply_r1down(d, m, move):
    if len(move.site) != 2:
        raise _bad(move, "site needs 2 entries")
    ci, s = move.site
    _check_slot(m, move, ci, s)
    x = m.t[ci]
    if x[s] != x[(s + 1) % 4]:
        raise _bad(move, "no kink here")
    return _remove(d, m, {ci}, [(x[(s + 2) % 4], x[(s + 3) % 4])])


def _apply_r2down(d, m, move):
    if len(move.site) != 4:
        raise _bad(move, "site needs 4 entries")
    x, s, y, t = move.site
    _check_slot(m, move, x, s)
    _check_slot(m, move, y, t)
    if x == y or m.across(x, s) != (y, t) or m.across(y, (t - 1) % 4) != (x, (s + 1) % 4):
        raise _bad(move, "no bigon here")
    if s % 2 != t % 2:
        raise _bad(move, "bigon is alternating")
    X, Y = m.t[x], m.t[y]
    joins = [(X[(s + 2) % 4], Y[(t + 2) % 4]), (X[(s + 3) % 4], Y[(t + 1) % 4])]
    return _remove(d, m, {x, y}, joins)


def _apply_r3(d, m, move):
    if len(move.site) != 6:
        raise _bad(move, "site needs 6 entries")
    x, sx, y, sy, z, sz = move.site
    for c, s in ((x, sx), (y, sy), (z, sz)):
        _check_slot(m, move, c, s)
    tY, tZ = (sy + 1) % 4, (sz + 1) % 4
    if (
        len({x, y, z}) != 3
        or m.across(x, sx) != (y, tY)
        or m.across(y, sy) != (z, tZ)
        or m.across(z, sz) != (x, (sx + 1) % 4)
    ):
        raise _bad(move, "no triangle here")
    # each line: (crossing, triangle slot) at both ends
    lines = [((x, sx), (y, tY)), ((y, sy), (z, tZ)), ((z, sz), (x, (sx + 1) % 4))]
    if not any(m.is_over(*p) and m.is_over(*q) for p, q in lines):
        raise _bad(move, "no strand passes over both its crossings")
    tuples = [list(r) for r in m.t]
    nxt = m.new_label()
    for (p, ps), (q, qs) in lines:
        po, qo = (ps + 2) % 4, (qs + 2) % 4
        outer_p, outer_q = m.t[p][po], m.t[q][qo]
        tuples[p][ps] = outer_q
        tuples[q][qs] = outer_p
        tuples[p][po] = nxt
        tuples[q][qo] = nxt
        nxt += 1
    return _finish(d, tuples, m.oi)


def _apply_r2up(d, m, move):
    if not d.crossings:
        if len(move.site) != 2 or move.site[0] != -1 or d.n_components < 2:
            raise _bad(move, "needs two crossingless components")
        over = move.site[1]
        # two round circles pushed across each other; the first is under
        tuples = [[1, 3, 2, 4], [2, 3, 1, 4]]
        oi = [1, 3]
        out = from_oriented(tuples, oi, d.n_components, validate=False)
        if over:
            from .diagram import mirror

            out = mirror(out)
        return out
    if len(move.site) != 5:
        raise _bad(move, "site needs 5 entries")
    a, sa, b, sb, over = move.site
    _check_slot(m, move, a, sa)
    _check_slot(m, move, b, sb)
    e1, e2 = m.t[a][sa], m.t[b][sb]
    if e1 == e2:
        raise _bad(move, "darts lie on the same edge")
    face = None
    for f in m.faces():
        if (a, sa) in f:
            face = f
            break
    if face is None or (b, sb) not in face:
        raise _bad(move, "darts are not on a common face")
    u1, v1 = (a, sa), m.across(a, sa)
    u2, v2 = (b, sb), m.across(b, sb)
    fwd1 = not m.is_in(*u1)  # e1 oriented along the traversal
    fwd2 = not m.is_in(*u2)
    nl = m.new_label()
    n1, n2, n3, n4 = nl, nl + 1, nl + 2, nl + 3
    tuples = [list(r) for r in m.t]
    tuples[v1[0]][v1[1]] = n2
    tuples[v2[0]][v2[1]] = n4
    o1, o2 = bool(over), not over
    # X_L ccw: S (e1 from u1), E (e2 from X_R), N (e1 to X_R), W (e2 to v2)
    xl = _build([(e1, fwd1, o1), (n3, fwd2, o2), (n1, not fwd1, o1), (n4, not fwd2, o2)])
    # X_R ccw: S (e1 to v1), E (e2 from u2), N (e1 from X_L), W (e2 to X_L)
    xr = _build([(n2, not fwd1, o1), (e2, fwd2, o2), (n1, fwd1, o1), (n3, not fwd2, o2)])
    tuples += [xl[0], xr[0]]
    return _finish(d, tuples, m.oi + [xl[1], xr[1]])


def _apply_r1up(d, m, move):
    if not d.crossings:
        if len(move.site) != 2 or move.site[0] != -1 or d.free_loops < 1:
            raise _bad(move, "needs a crossingless component")
        sign = move.site[1]
        tuples = [[1, 1, 2, 2]] if sign > 0 else [[1, 2, 2, 1]]
        return from_oriented(tuples, [3 if sign > 0 else 1], d.n_components, validate=False)
    if len(move.site) != 3:
        raise _bad(move, "site needs 3 entries")
    ci, s, over = move.site
    _check_slot(m, move, ci, s)
    e = m.t[ci][s]
    v = m.across(ci, s)
    fwd = not m.is_in(ci, s)
    nl = m.new_label()
    loop, out = nl, nl + 1
    tuples = [list(r) for r in m.t]
    tuples[v[0]][v[1]] = out
    o_we, o_ns = bool(over), not over
    # ccw: W (from u), S (to v), E (loop start), N (loop end)
    k = _build([(e, fwd, o_we), (out, not fwd, o_ns), (loop, not fwd, o_we), (loop, fwd, o_ns)])
    tuples.append(k[0])
    return _finish(d, tuples, m.oi + [k[1]])


_APPLY = {
    "R1down": _apply_r1down,
    "R2down": _apply_r2down,
    "R3": _apply_r3,
    "R2up": _apply_r2up,
    "R1up": _apply_r1up,
}


def apply_move(d: Diagram, move: Move) -> Diagram:
    if move.kind not in _APPLY:
        raise _bad(move, "unknown kind")
    if not d.crossings and move.kind in ("R1down", "R2down", "R3"):
        raise _bad(move, "diagram has no crossings")
    m = _Map(d) if d.crossings else None
    return _APPLY[move.kind](d, m, move)


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _code_from(d: Diagram, m: _Map, succ: dict[int, int], start: int, comp_of: dict[int, int]):
    elabel: dict[int, int] = {}
    cnum: dict[int, int] = {}
    corder: list[int] = []
    n_edges = len(succ)

    def walk(e0):
        e = e0
        while e not in elabel:
            elabel[e] = len(elabel) + 1
            for ci, _s in m.ends[e]:
                if ci not in cnum:
                    cnum[ci] = len(corder)
                    corder.append(ci)
            e = succ[e]

    walk(start)
    k = 0
    while len(elabel) < n_edges:
        nxt = None
        while k < len(corder) and nxt is None:
            for e in m.t[corder[k]]:
                if e not in elabel:
                    nxt = e
                    break
            else:
                k += 1
        if nxt is None:
            nxt = min(e for e in succ if e not in elabel)
        walk(nxt)
    code = []
    for ci in corder:
        code.extend(elabel[e] for e in m.t[ci])
        code.append(m.oi[ci])
    return tuple(code)


def canonical_key(d: Diagram) -> tuple:
    """Relabelling-invariant key: least traversal code over all start edges."""
    if not d.crossings:
        return (d.n_components,)
    m = _Map(d)
    succ = {}
    for ci, x in enumerate(m.t):
        succ[x[0]] = x[2]
        succ[x[m.oi[ci]]] = x[(m.oi[ci] + 2) % 4]
    best = None
    for e in succ:
        c = _code_from(d, m, succ, e, {})
        if best is None or c < best:
            best = c
    return (d.n_components, best)


# ---------------------------------------------------------------------------
# simplification search
# ---------------------------------------------------------------------------

def is_trivial_diagram(d: Diagram) -> bool:
    return not d.crossings


def _first_down(d: Diagram) -> Move | None:
    m = _Map(d)
    for s in _r1down_sites(m):
        return Move("R1down", s)
    for s in _r2down_sites(m, m.faces()):
        return Move("R2down", s)
    return None


def greedy_reduce(d: Diagram, limit: int | None = None) -> tuple[Diagram, list[Move]]:
    """Apply R1down/R2down moves until none remain (or ``limit`` moves)."""
    steps: list[Move] = []
    while d.crossings and (limit is None or len(steps) < limit):
        mv = _first_down(d)
        if mv is None:
            break
        d = apply_move(d, mv)
        steps.append(mv)
    return d, steps


def simplify(d: Diagram, budget: SearchBudget | None = None) -> tuple[Diagram, MoveTrace]:
    """Greedy monotone reduction, then best-first search over R3 and R2up.

    Every diagram produced by a move counts against ``budget.max_states``.
    Returns the least-crossing diagram found and a trace reaching it.
    """
    budget = budget or SearchBudget()
    cap = budget.crossing_cap(d)
    states = 0
    cur, steps = greedy_reduce(d, limit=budget.max_states)
    states += len(steps)
    if not cur.crossings or states >= budget.max_states:
        return cur, MoveTrace(d, steps)

    root_key = canonical_key(cur)
    best = (len(cur.crossings), root_key, cur, steps)
    visited = {root_key}
    heap = [(len(cur.crossings), 0, root_key, cur, steps)]
    tick = 0
    while heap and states < budget.max_states:
        _n, _t, _key, node, path = heapq.heappop(heap)
        kinds = ["R3"]
        if len(node.crossings) + 2 <= cap:
            kinds.append("R2up")
        for mv in enumerate_moves(node, kinds):
            if states >= budget.max_states:
                break
            child = apply_move(node, mv)
            states += 1
            red, extra = greedy_reduce(child, limit=budget.max_states - states)
            states += len(extra)
            if len(red.crossings) > cap:
                continue
            key = canonical_key(red)
            if key in visited:
                continue
            visited.add(key)
            cpath = path + [mv] + extra
            cand = (len(red.crossings), key)
            if cand < best[:2]:
                best = (len(red.crossings), key, red, cpath)
                if not red.crossings:
                    return red, MoveTrace(d, cpath)
            tick += 1
            heapq.heappush(heap, (len(red.crossings), tick, key, red, cpath))
    return best[2], MoveTrace(d, best[3])
