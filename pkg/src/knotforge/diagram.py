"""Oriented link diagrams in planar-diagram (PD) encoding.

Conventions
-----------
A crossing is a 4-tuple of edge ids listed counterclockwise, starting at the
incoming under-strand.  Slots 0 and 2 therefore carry the under-strand
(in, out).  The over-strand enters at slot 1 or slot 3; a crossing is
positive (right-handed, sign +1) when it enters at slot 3, i.e. the
over-strand passes from left to right over the oriented under-strand.

Edge ids are normalised to ``1..2c`` with consecutive ids along each
component.  Crossingless components are carried only through
``n_components``; they are split round circles.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Crossing",
    "Diagram",
    "DiagramError",
    "ErrorKind",
    "parse_pd",
    "parse_gauss",
    "parse_json",
    "parse",
    "serialize",
    "change_crossing",
    "change_crossings",
    "mirror",
    "writhe",
    "drop_components",
]


class ErrorKind(str, enum.Enum):
    DuplicateEdge = "DuplicateEdge"
    DanglingEdge = "DanglingEdge"
    NonRealizable = "NonRealizable"
    BadIndex = "BadIndex"
    SyntaxError = "SyntaxError"


class DiagramError(ValueError):
    """Raised when a diagram fails a well-formedness rule."""

    def __init__(self, kind: ErrorKind, detail: str = ""):
        self.kind = ErrorKind(kind)
        self.detail = detail
        super().__init__(f"{self.kind.value}: {detail}")


@dataclass(frozen=True)
class Crossing:
    edges: tuple[int, int, int, int]
    sign: int

    @property
    def over_in(self) -> int:
        """Slot at which the over-strand enters."""
        return 3 if self.sign > 0 else 1

    @property
    def over_out(self) -> int:
        return 1 if self.sign > 0 else 3

    def __iter__(self):
        return iter(self.edges)

    def __getitem__(self, i):
        return self.edges[i]


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    n_components: int
    marks: frozenset = field(default_factory=frozenset)

    # ---- derived structure -------------------------------------------------
    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def __len__(self):
        return len(self.crossings)

    def edge_ends(self) -> dict[int, list[tuple[int, int]]]:
        """edge id -> [(crossing, slot), (crossing, slot)]"""
        ends: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(self.crossings):
            for s, e in enumerate(x.edges):
                ends.setdefault(e, []).append((ci, s))
        return ends

    def components(self) -> list[list[int]]:
        """Edge cycles of the components that pass through crossings."""
        head = {}  # edge -> (crossing, slot) where it ends
        for ci, x in enumerate(self.crossings):
            head[x.edges[0]] = (ci, 0)
            head[x.edges[x.over_in]] = (ci, x.over_in)
        seen: set[int] = set()
        comps = []
        for e in sorted(head):
            if e in seen:
                continue
            cyc = []
            cur = e
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                ci, s = head[cur]
                cur = self.crossings[ci].edges[(s + 2) % 4]
            comps.append(cyc)
        return comps

    def component_of_edge(self) -> dict[int, int]:
        return {e: i for i, cyc in enumerate(self.components()) for e in cyc}

    @property
    def free_loops(self) -> int:
        """Number of crossingless components."""
        return self.n_components - len(self.components())

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(x.sign for x in self.crossings)

    # ---- text forms ---------------------------------------------------------
    def to_pd(self) -> str:
        return " ".join("X({},{},{},{})".format(*x.edges) for x in self.crossings)

    def to_json_obj(self) -> dict:
        return {
            "crossings": [list(x.edges) for x in self.crossings],
            "components": self.n_components,
            "marks": sorted(self.marks),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    def to_gauss(self) -> str:
        lines = []
        tail = {}  # edge -> (crossing, slot) where it starts
        for ci, x in enumerate(self.crossings):
            tail[x.edges[2]] = (ci, 2)
            tail[x.edges[x.over_out]] = (ci, x.over_out)
        for cyc in self.components():
            start = min(cyc)
            tokens = []
            e = start
            while True:
                ci, s = tail[e]
                x = self.crossings[ci]
                level = "U" if s == 2 else "O"
                tokens.append(f"{level}{ci + 1}{'+' if x.sign > 0 else '-'}")
                e = x.edges[s]
                # follow the edge to its head, then out of that crossing
                nxt = _next_edge(self, e)
                e = nxt
                if e == start:
                    break
            lines.append(" ".join(_rotate_gauss(tokens)))
        lines.extend("" for _ in range(self.free_loops))
        return "\n".join(lines)

    def __str__(self):
        if not self.crossings:
            return f"<Diagram: {self.n_components}-component, 0 crossings>"
        return f"<Diagram: {self.to_pd()}>"

    def with_marks(self, marks: Iterable[int]) -> "Diagram":
        marks = frozenset(marks)
        for m in marks:
            if not 0 <= m < len(self.crossings):
                raise DiagramError(ErrorKind.BadIndex, f"mark {m} out of range")
        return Diagram(self.crossings, self.n_components, marks)


def _next_edge(d: Diagram, e: int) -> int:
    for x in d.crossings:
        if x.edges[0] == e:
            return x.edges[2]
        if x.edges[x.over_in] == e:
            return x.edges[x.over_out]
    raise KeyError(e)


def _rotate_gauss(tokens: list[str]) -> list[str]:
    # to_gauss walks from the tail of the smallest edge, so the first token is
    # the crossing it leaves; the token list is already in traversal order
    return tokens


# ---------------------------------------------------------------------------
# construction and normalisation
# ---------------------------------------------------------------------------

def _check_multiplicity(tuples: Sequence[Sequence[int]]) -> None:
    counts: dict[int, int] = {}
    for t in tuples:
        for e in t:
            if not isinstance(e, int) or e <= 0:
                raise DiagramError(ErrorKind.SyntaxError, f"edge id {e!r} is not a positive integer")
            counts[e] = counts.get(e, 0) + 1
    for e, n in sorted(counts.items()):
        if n > 2:
            raise DiagramError(ErrorKind.DuplicateEdge, f"edge {e} appears {n} times")
        if n < 2:
            raise DiagramError(ErrorKind.DanglingEdge, f"edge {e} appears once")


def _edge_classes(tuples: Sequence[Sequence[int]]) -> list[list[int]]:
    parent: dict[int, int] = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for t in tuples:
        for e in t:
            find(e)
        parent[find(t[0])] = find(t[2])
        parent[find(t[1])] = find(t[3])
    groups: dict[int, list[int]] = {}
    for e in parent:
        groups.setdefault(find(e), []).append(e)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def infer_over_in(tuples: Sequence[Sequence[int]]) -> list[int]:
    """Work out, for each crossing, whether the over-strand enters at slot 1 or 3.

    Head/tail constraints from the under-strands are propagated first; what
    remains is settled by the consecutive-numbering convention.
    """
    n = len(tuples)
    ends: dict[int, list[tuple[int, int]]] = {}
    for ci, t in enumerate(tuples):
        for s, e in enumerate(t):
            ends.setdefault(e, []).append((ci, s))
    role: dict[tuple[int, int], str] = {}
    for ci in range(n):
        role[(ci, 0)] = "in"
        role[(ci, 2)] = "out"
    over_in: list[int | None] = [None] * n

    def other_end(ci, s):
        a, b = ends[tuples[ci][s]]
        return b if a == (ci, s) else a

    def settle(ci, slot_in):
        over_in[ci] = slot_in
        role[(ci, slot_in)] = "in"
        role[(ci, (slot_in + 2) % 4)] = "out"

    def propagate():
        changed = True
        while changed:
            changed = False
            for ci in range(n):
                if over_in[ci] is not None:
                    continue
                for s in (1, 3):
                    o = other_end(ci, s)
                    r = role.get(o)
                    if r is None:
                        continue
                    if r == "in":
                        settle(ci, (s + 2) % 4)
                    else:
                        settle(ci, s)
                    changed = True
                    break

    propagate()
    if any(v is None for v in over_in):
        succ: dict[int, int] = {}
        ambiguous: set[int] = set()
        for cls in _edge_classes(tuples):
            lo, hi = cls[0], cls[-1]
            if hi - lo + 1 != len(cls):
                continue
            for e in cls:
                succ[e] = lo if e == hi else e + 1
            if len(cls) == 2:
                ambiguous.update(cls)
        for ci in range(n):
            if over_in[ci] is not None:
                continue
            b, dd = tuples[ci][1], tuples[ci][3]
            if b in ambiguous:
                # 2-edge over-only component: over enters along the smaller id
                # at the first crossing it meets
                settle(ci, 1 if b < dd else 3)
            elif succ.get(b) == dd:
                settle(ci, 1)
            elif succ.get(dd) == b:
                settle(ci, 3)
            else:
                raise DiagramError(
                    ErrorKind.NonRealizable,
                    f"cannot orient over-strand at crossing {ci}: ids {b},{dd} not consecutive",
                )
            propagate()
    # consistency: every edge has one head and one tail
    for e, occ in ends.items():
        roles = sorted(role[o] for o in occ)
        if roles != ["in", "out"]:
            raise DiagramError(ErrorKind.NonRealizable, f"edge {e} cannot be oriented consistently")
    return [int(v) for v in over_in]


def _faces(tuples: Sequence[Sequence[int]]) -> list[list[tuple[int, int]]]:
    ends: dict[int, list[tuple[int, int]]] = {}
    for ci, t in enumerate(tuples):
        for s, e in enumerate(t):
            ends.setdefault(e, []).append((ci, s))

    def across(ci, s):
        a, b = ends[tuples[ci][s]]
        return b if a == (ci, s) else a

    seen = set()
    faces = []
    for ci in range(len(tuples)):
        for s in range(4):
            if (ci, s) in seen:
                continue
            face = []
            cur = (ci, s)
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                y, t = across(*cur)
                cur = (y, (t - 1) % 4)
            faces.append(face)
    return faces


def _pieces(tuples: Sequence[Sequence[int]]) -> int:
    parent = list(range(len(tuples)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    first: dict[int, int] = {}
    for ci, t in enumerate(tuples):
        for e in t:
            if e in first:
                parent[find(ci)] = find(first[e])
            else:
                first[e] = ci
    return len({find(i) for i in range(len(tuples))})


def check_planar(tuples: Sequence[Sequence[int]]) -> None:
    if not tuples:
        return
    v = len(tuples)
    e = 2 * v
    f = len(_faces(tuples))
    if v - e + f != 2 * _pieces(tuples):
        raise DiagramError(ErrorKind.NonRealizable, f"rotation system has Euler characteristic {v - e + f}")


def from_oriented(
    tuples: Sequence[Sequence[int]],
    over_in: Sequence[int],
    n_components: int | None = None,
    marks: Iterable[int] = (),
    validate: bool = True,
) -> Diagram:
    """Build a normalised Diagram from tuples with known over-strand entry slots.

    Edge ids are relabelled to ``1..2c``; components are numbered in order of
    their smallest original id and each starts at its smallest original id.
    """
    tuples = [tuple(t) for t in tuples]
    if validate:
        _check_multiplicity(tuples)
        check_planar(tuples)
    head = {}
    for ci, t in enumerate(tuples):
        head[t[0]] = (ci, 0)
        head[t[over_in[ci]]] = (ci, over_in[ci])
    relabel: dict[int, int] = {}
    comps = 0
    nxt = 1
    first_crossing = {}
    for ci, t in enumerate(tuples):
        for e in t:
            first_crossing.setdefault(e, ci)
    for e0 in sorted(head):
        if e0 in relabel:
            continue
        comps += 1
        cyc = []
        cur = e0
        while cur not in relabel and cur not in cyc:
            cyc.append(cur)
            ci, s = head[cur]
            cur = tuples[ci][(s + 2) % 4]
        if len(cyc) == 2 and _over_only(tuples, over_in, cyc):
            # the decoder reads orientation of such a component from the
            # smaller label entering the first crossing it meets
            ci = min(first_crossing[cyc[0]], first_crossing[cyc[1]])
            entering = tuples[ci][over_in[ci]]
            if cyc[0] != entering:
                cyc = [cyc[1], cyc[0]]
        for e in cyc:
            relabel[e] = nxt
            nxt += 1
    if n_components is None:
        n_components = comps
    if n_components < comps:
        raise DiagramError(ErrorKind.SyntaxError, f"component count {n_components} below traced {comps}")
    if n_components < 1 and not tuples:
        raise DiagramError(ErrorKind.SyntaxError, "a diagram needs at least one component")
    crossings = []
    for ci, t in enumerate(tuples):
        oi = over_in[ci]
        crossings.append(Crossing(tuple(relabel[e] for e in t), 1 if oi == 3 else -1))
    marks = frozenset(marks)
    for m in marks:
        if not 0 <= m < len(crossings):
            raise DiagramError(ErrorKind.BadIndex, f"mark {m} out of range")
    return Diagram(tuple(crossings), n_components, marks)


def _over_only(tuples, over_in, cyc) -> bool:
    s = set(cyc)
    return not any(t[0] in s or t[2] in s for t in tuples)


def from_tuples(tuples: Sequence[Sequence[int]], n_components: int | None = None, marks=()) -> Diagram:
    tuples = [tuple(int(e) for e in t) for t in tuples]
    for t in tuples:
        if len(t) != 4:
            raise DiagramError(ErrorKind.SyntaxError, f"crossing {t} does not have four edges")
    _check_multiplicity(tuples)
    over_in = infer_over_in(tuples)
    return from_oriented(tuples, over_in, n_components, marks)


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

_PD_ENTRY = re.compile(r"X\[?\(?\s*([^()\[\]]*?)\s*\)?\]?$")


def parse_pd(text: str, n_components_hint: int | None = None, marks=()) -> Diagram:
    """Parse ``"X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"``-style PD text."""
    body = text.strip()
    if body.upper().startswith("PD"):
        body = body[2:].strip()
        if body.startswith(("[", "(")) and body.endswith(("]", ")")):
            body = body[1:-1]
    tuples = []
    for m in re.finditer(r"X\s*[\(\[]([^\)\]]*)[\)\]]", body):
        parts = [p.strip() for p in m.group(1).split(",")]
        if len(parts) != 4 or not all(re.fullmatch(r"\d+", p) for p in parts):
            raise DiagramError(ErrorKind.SyntaxError, f"malformed entry {m.group(0)!r}")
        tuples.append(tuple(int(p) for p in parts))
    leftover = re.sub(r"X\s*[\(\[][^\)\]]*[\)\]]", "", body)
    if leftover.replace(",", "").strip():
        raise DiagramError(ErrorKind.SyntaxError, f"unparsed text {leftover.strip()!r}")
    if not tuples:
        if n_components_hint is None:
            raise DiagramError(ErrorKind.SyntaxError, "empty PD code needs an explicit component count")
        if n_components_hint < 1:
            raise DiagramError(ErrorKind.SyntaxError, "component count must be positive")
        return Diagram((), int(n_components_hint), frozenset())
    return from_tuples(tuples, n_components_hint, marks)


_GAUSS_TOKEN = re.compile(r"([OU])(\d+)([+\-−])")


def parse_gauss(text: str) -> Diagram:
    """Parse a signed Gauss code, one component per line.

    Tokens look like ``O1+`` or ``U2-``; a blank line is a crossingless
    component.  Codes whose rotation system is not planar raise
    ``NonRealizable``.
    """
    lines = text.splitlines() if text.strip() else [""]
    # strip trailing blank lines beyond the first so "O1+ U1+\n" is one component
    while len(lines) > 1 and not lines[-1].strip():
        lines.pop()
    comps: list[list[tuple[str, int, int]]] = []
    for line in lines:
        toks = line.replace(",", " ").split()
        comp = []
        for tok in toks:
            m = _GAUSS_TOKEN.fullmatch(tok)
            if not m:
                raise DiagramError(ErrorKind.SyntaxError, f"bad Gauss token {tok!r}")
            comp.append((m.group(1), int(m.group(2)), 1 if m.group(3) == "+" else -1))
        comps.append(comp)
    seen: dict[int, list[tuple[str, int]]] = {}
    for comp in comps:
        for lvl, k, sg in comp:
            seen.setdefault(k, []).append((lvl, sg))
    for k, occ in seen.items():
        lv = sorted(o[0] for o in occ)
        if lv != ["O", "U"]:
            raise DiagramError(ErrorKind.SyntaxError, f"crossing {k} must occur once over and once under")
        if occ[0][1] != occ[1][1]:
            raise DiagramError(ErrorKind.SyntaxError, f"crossing {k} carries inconsistent signs")
    labels = sorted(seen)
    index = {k: i for i, k in enumerate(labels)}
    n = len(labels)
    under_in = [0] * n
    under_out = [0] * n
    over_in_e = [0] * n
    over_out_e = [0] * n
    sign = [0] * n
    edge = 0
    for comp in comps:
        if not comp:
            continue
        first_edge = edge + 1
        m = len(comp)
        for j, (lvl, k, sg) in enumerate(comp):
            ci = index[k]
            e_in = first_edge + (j - 1) % m
            e_out = first_edge + j
            sign[ci] = sg
            if lvl == "U":
                under_in[ci], under_out[ci] = e_in, e_out
            else:
                over_in_e[ci], over_out_e[ci] = e_in, e_out
        edge += m
    tuples = []
    slots = []
    for ci in range(n):
        if sign[ci] > 0:
            tuples.append((under_in[ci], over_out_e[ci], under_out[ci], over_in_e[ci]))
            slots.append(3)
        else:
            tuples.append((under_in[ci], over_in_e[ci], under_out[ci], over_out_e[ci]))
            slots.append(1)
    if n == 0:
        return Diagram((), len(comps), frozenset())
    return from_oriented(tuples, slots, n_components=len(comps))


def parse_json(text_or_obj) -> Diagram:
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    try:
        tuples = [tuple(int(e) for e in t) for t in obj["crossings"]]
        comps = obj.get("components")
        marks = obj.get("marks", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramError(ErrorKind.SyntaxError, f"bad diagram JSON: {exc}") from None
    if not tuples:
        if comps is None or int(comps) < 1:
            raise DiagramError(ErrorKind.SyntaxError, "0-crossing diagram needs a positive component count")
        return Diagram((), int(comps), frozenset())
    return from_tuples(tuples, comps, marks)


def parse(text: str, fmt: str | None = None) -> Diagram:
    """Parse text in ``pd``, ``gauss`` or ``json`` form (sniffed when ``fmt`` is None)."""
    s = text.strip()
    if fmt is None:
        if s.startswith("{"):
            fmt = "json"
        elif "X" in s or s.upper().startswith("PD"):
            fmt = "pd"
        elif _GAUSS_TOKEN.search(s):
            fmt = "gauss"
        else:
            raise DiagramError(ErrorKind.SyntaxError, "cannot tell the diagram format")
    if fmt == "json":
        try:
            return parse_json(s)
        except json.JSONDecodeError as exc:
            raise DiagramError(ErrorKind.SyntaxError, str(exc)) from None
    if fmt == "pd":
        return parse_pd(s)
    if fmt == "gauss":
        return parse_gauss(text)
    raise ValueError(f"unknown format {fmt!r}")


def serialize(d: Diagram, format: str = "pd") -> str:
    if format == "pd":
        return d.to_pd()
    if format == "json":
        return d.to_json()
    if format == "gauss":
        return d.to_gauss()
    raise ValueError(f"unknown format {format!r}")


# ---------------------------------------------------------------------------
# crossing-level edits
# ---------------------------------------------------------------------------

def _swapped(x: Crossing) -> tuple[tuple[int, ...], int]:
    e = x.edges
    oi = x.over_in
    # the old over-strand becomes the under-strand; rotate so it enters at slot 0
    t = tuple(e[(oi + k) % 4] for k in range(4))
    # the old under-in now sits at slot (4 - oi) % 4, which is the new over entry
    return t, (4 - oi) % 4


def change_crossings(d: Diagram, ids: Iterable[int]) -> Diagram:
    ids = set(ids)
    for i in ids:
        if not isinstance(i, int) or not 0 <= i < len(d.crossings):
            raise DiagramError(ErrorKind.BadIndex, f"crossing {i} out of range 0..{len(d.crossings) - 1}")
    new = []
    for ci, x in enumerate(d.crossings):
        if ci in ids:
            t, oi = _swapped(x)
            new.append(Crossing(t, 1 if oi == 3 else -1))
        else:
            new.append(x)
    return Diagram(tuple(new), d.n_components, d.marks)


def change_crossing(d: Diagram, i: int) -> Diagram:
    """Swap over and under at crossing ``i``; labels and marks are kept."""
    return change_crossings(d, [i])


def mirror(d: Diagram) -> Diagram:
    return change_crossings(d, range(len(d.crossings)))


def writhe(d: Diagram) -> int:
    return sum(x.sign for x in d.crossings)


def drop_components(d: Diagram, keep: Iterable[int]) -> Diagram:
    """Sub-diagram on the components ``keep`` (indices into ``d.components()``).

    Crossings touching a dropped component disappear and the kept strands
    pass straight through.  Crossingless components of ``d`` are dropped.
    """
    comps = d.components()
    keep = sorted(set(keep))
    if not keep:
        raise DiagramError(ErrorKind.BadIndex, "keep at least one component")
    for k in keep:
        if not isinstance(k, int) or not 0 <= k < len(comps):
            raise DiagramError(ErrorKind.BadIndex, f"component {k} out of range 0..{len(comps) - 1}")
    if len(keep) == len(comps):
        return Diagram(d.crossings, len(comps), d.marks)
    kept_edges = {e for k in keep for e in comps[k]}
    kept = [ci for ci, x in enumerate(d.crossings) if all(e in kept_edges for e in x.edges)]
    kept_set = set(kept)
    head = {}
    for ci, x in enumerate(d.crossings):
        head[x.edges[0]] = ci
        head[x.edges[x.over_in]] = ci
    relabel: dict[int, int] = {}
    free = 0
    nxt = 1
    for k in keep:
        cyc = comps[k]
        cuts = [i for i, e in enumerate(cyc) if head[e] in kept_set]
        if not cuts:
            free += 1
            continue
        # runs start right after a kept crossing
        start = (cuts[0] + 1) % len(cyc)
        order = cyc[start:] + cyc[:start]
        for e in order:
            relabel[e] = nxt
            if head[e] in kept_set:
                nxt += 1
    if not kept:
        return Diagram((), max(1, len(keep)), frozenset())
    tuples = [tuple(relabel[e] for e in d.crossings[ci].edges) for ci in kept]
    over_in = [d.crossings[ci].over_in for ci in kept]
    marks = [i for i, ci in enumerate(kept) if ci in d.marks]
    return from_oriented(tuples, over_in, n_components=len(keep), marks=marks)
