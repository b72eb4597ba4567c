"""The Γ family: arc systems over an unknot, arc doubling and realisation.

Geometry
--------
The unknot k′ is the boundary of the box ``[-X, X] x [-Y, Y]``, oriented
counterclockwise.  An arc is a polyline inside the box with both endpoints
on the boundary, leaving and meeting it at right angles, and a height per
vertex; where two arcs cross in the plane the higher one is on top.

The base system has two hairpins clasped once: arc 0 enters from the left
(legs at y = ±0.1, turning at x = 0) and arc 1 from the right (legs at
y = ±0.5, turning at x = -0.5).  The upper leg of arc 0 passes over the
turn of arc 1 and the lower leg under it, so the arcs together with k′
complete to a Hopf link.

Doubling replaces an arc P by a near arc and a far arc (a Bing double):

* the near arc runs out along P (offset d) from one end to just past
  ``σ1``, turns back, follows k′ on the inside to the other end, and runs
  out along P from there to just before ``σ2`` and back;
* the far arc is a loop around ``P[σ1, σ2]`` at offset 5d, tied back to k′
  by a tether at offsets 3d and 4d alongside the first stretch of P.

The two arcs clasp once at each of ``σ1`` and ``σ2``, the near arc's inner
legs passing over the far arc and the outer legs under it.  All crossings
of P with other arcs lie between ``σ1`` and ``σ2`` and are inherited by the
far arc, which becomes the most recent arc.

Realisation
-----------
The knot pushes a finger of k′ along every arc, from the endpoint met first
along k′ to the other one, and hooks the finger tip around k′ there.  The
inner strand of the hook passes over k′ and the outer strand under; the
inner crossing is marked.  Changing it turns the hook into a bigon that R2
removes, which undoes the twist on that arc.  The auxiliary link is k′
together with one thin loop c_i around each arc, reaching past k′ at both
ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .diagram import Diagram, drop_components, parse_json
from .geometry import Curve, offset_polyline, to_diagram

__all__ = [
    "Arc",
    "ArcSystem",
    "GammaInstance",
    "base_system",
    "double_arc",
    "system",
    "realize",
    "gamma",
    "twisted",
    "sublink",
    "completed_link",
    "brunnian_check",
    "BrunnianReport",
    "BOX",
]

BOX = (4.0, 2.0)
TOP = 10.0  # height of hook strands above or below k′
LOCAL = 0.1  # ratio between successive height scales


# ---------------------------------------------------------------------------
# polyline helpers
# ---------------------------------------------------------------------------

def _cum(points):
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _at(points, values, s):
    cum = _cum(points)
    s = min(max(s, 0.0), cum[-1])
    k = int(np.searchsorted(cum, s, side="right") - 1)
    k = min(k, len(points) - 2)
    t = (s - cum[k]) / (cum[k + 1] - cum[k])
    return points[k] + t * (points[k + 1] - points[k]), values[k] + t * (values[k + 1] - values[k])


def _sub(points, values, a, b):
    """Restriction of the polyline to arclength [a, b]."""
    cum = _cum(points)
    pa, va = _at(points, values, a)
    pb, vb = _at(points, values, b)
    inner = [(points[k], values[k]) for k in range(len(points)) if a + 1e-12 < cum[k] < b - 1e-12]
    pts = [pa] + [p for p, _ in inner] + [pb]
    vals = [va] + [v for _, v in inner] + [vb]
    return np.array(pts), np.array(vals)


def _length(points):
    return float(_cum(points)[-1])


def _boundary_pos(pt):
    """Counterclockwise arclength of a boundary point from the lower-left corner."""
    X, Y = BOX
    x, y = pt
    if abs(y + Y) < 1e-9:
        return x + X
    if abs(x - X) < 1e-9:
        return 2 * X + (y + Y)
    if abs(y - Y) < 1e-9:
        return 2 * X + 2 * Y + (X - x)
    if abs(x + X) < 1e-9:
        return 4 * X + 2 * Y + (Y - y)
    raise ValueError(f"{pt} is not on the boundary")


def _perimeter():
    X, Y = BOX
    return 4 * X + 4 * Y


def _boundary_point(pos, inset=0.0):
    X, Y = BOX
    X, Y = X - inset, Y - inset
    pos = pos % _perimeter()
    Xo, Yo = BOX
    # walk the inset box using the outer box's parametrisation
    if pos < 2 * Xo:
        return np.array([pos - Xo, -Y]) if inset == 0 else np.array([np.clip(pos - Xo, -X, X), -Y])
    pos -= 2 * Xo
    if pos < 2 * Yo:
        return np.array([X, np.clip(pos - Yo, -Y, Y)])
    pos -= 2 * Yo
    if pos < 2 * Xo:
        return np.array([np.clip(Xo - pos, -X, X), Y])
    pos -= 2 * Xo
    return np.array([-X, np.clip(Yo - pos, -Y, Y)])


def _outward(pt):
    X, Y = BOX
    x, y = pt
    if abs(x - X) < 1e-9:
        return np.array([1.0, 0.0])
    if abs(x + X) < 1e-9:
        return np.array([-1.0, 0.0])
    if abs(y - Y) < 1e-9:
        return np.array([0.0, 1.0])
    return np.array([0.0, -1.0])


def _short_span(pa, pb):
    """(start, length) of the shorter boundary stretch between two points, ccw."""
    per = _perimeter()
    a, b = _boundary_pos(pa), _boundary_pos(pb)
    fwd = (b - a) % per
    if fwd <= per / 2:
        return a, fwd
    return b, per - fwd


def _inset_path(pa, pb, inset):
    """Path just inside the boundary from near ``pa`` to near ``pb`` (short way)."""
    per = _perimeter()
    a, b = _boundary_pos(pa), _boundary_pos(pb)
    fwd = (b - a) % per
    step = 1 if fwd <= per / 2 else -1
    length = fwd if step == 1 else per - fwd
    X, Y = BOX
    corners = [0.0, 2 * X, 2 * X + 2 * Y, 4 * X + 2 * Y]
    pts = [_inset_at(a, pa, inset)]
    for c in sorted(((c - a) * step) % per for c in corners):
        if 0 < c < length:
            pts.append(_boundary_point(a + step * c, inset))
    pts.append(_inset_at(b, pb, inset))
    return np.array(pts)


def _inset_at(pos, pt, inset):
    return np.asarray(pt, dtype=float) - inset * _outward(pt)


def _signed_area(pts):
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


# ---------------------------------------------------------------------------
# arcs and systems
# ---------------------------------------------------------------------------

@dataclass
class Arc:
    """Polyline from one boundary point to another, with vertex heights."""

    points: np.ndarray
    heights: np.ndarray
    name: str
    scale: float  # feature size; offsets for this arc's children are a fraction of it

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.heights = np.asarray(self.heights, dtype=float)

    @property
    def length(self) -> float:
        return _length(self.points)

    def inner_sign(self) -> int:
        """+1 when the region cut off with the short boundary stretch is on the left."""
        p, q = self.points[0], self.points[-1]
        start, length = _short_span(p, q)
        # close the loop with the boundary stretch from q back to p
        per = _perimeter()
        n = max(2, int(length / 0.05))
        if abs(_boundary_pos(q) - start) < 1e-9:
            back = [_boundary_point(start + length * k / n) for k in range(1, n)]
        else:
            back = [_boundary_point(start + length * (n - k) / n) for k in range(1, n)]
        loop = np.vstack([self.points, np.array(back).reshape(-1, 2)])
        return 1 if _signed_area(loop) > 0 else -1

    def offset(self, w: float, a: float = 0.0, b: float | None = None):
        """Offset of ``P[a, b]`` by ``w`` towards the outer side (negative = inner)."""
        b = self.length if b is None else b
        pts, hs = _sub(self.points, self.heights, a, b)
        return offset_polyline(pts, -self.inner_sign() * w), hs

    def reversed(self) -> "Arc":
        return Arc(self.points[::-1].copy(), self.heights[::-1].copy(), self.name, self.scale)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "scale": self.scale,
            "points": [[float(x), float(y)] for x, y in self.points],
            "heights": [float(h) for h in self.heights],
        }

    @classmethod
    def from_json(cls, obj) -> "Arc":
        return cls(np.array(obj["points"]), np.array(obj["heights"]), obj["name"], obj["scale"])


@dataclass
class ArcSystem:
    arcs: list[Arc]
    generation: int
    clasps: list[tuple[int, int, str]] = field(default_factory=list)
    level: int = 0  # number of doublings applied, sets the height scale

    def __len__(self):
        return len(self.arcs)

    def crossings(self) -> list[tuple[int, int]]:
        """Pairs of arcs crossing in the plane, one entry per crossing."""
        out = []
        for i, j in combinations(range(len(self.arcs)), 2):
            out += [(i, j)] * _count_crossings(self.arcs[i].points, self.arcs[j].points)
        return out

    def to_json(self) -> dict:
        return {
            "generation": self.generation,
            "arcs": [a.to_json() for a in self.arcs],
            "clasps": [list(c) for c in self.clasps],
        }


def _count_crossings(p, q) -> int:
    n = 0
    for i in range(len(p) - 1):
        a, b = p[i], p[i + 1]
        for j in range(len(q) - 1):
            c, d = q[j], q[j + 1]
            r, s = b - a, d - c
            den = r[0] * s[1] - r[1] * s[0]
            if abs(den) < 1e-15:
                continue
            w = c - a
            t = (w[0] * s[1] - w[1] * s[0]) / den
            u = (w[0] * r[1] - w[1] * r[0]) / den
            if 0 < t < 1 and 0 < u < 1:
                n += 1
    return n


def _crossing_params(arc: Arc, others: list[Arc]) -> list[float]:
    """Arclength positions along ``arc`` where other arcs cross it."""
    cum = _cum(arc.points)
    out = []
    for o in others:
        q = o.points
        for i in range(len(arc.points) - 1):
            a, b = arc.points[i], arc.points[i + 1]
            for j in range(len(q) - 1):
                c, d = q[j], q[j + 1]
                r, s = b - a, d - c
                den = r[0] * s[1] - r[1] * s[0]
                if abs(den) < 1e-15:
                    continue
                w = c - a
                t = (w[0] * s[1] - w[1] * s[0]) / den
                u = (w[0] * r[1] - w[1] * r[0]) / den
                if 0 < t < 1 and 0 < u < 1:
                    out.append(cum[i] + t * (cum[i + 1] - cum[i]))
    return sorted(out)


def base_system() -> ArcSystem:
    """Two hairpins clasped once; with k′ they complete to a Hopf link."""
    X, _ = BOX
    a0 = Arc(
        [[-X, -0.1], [0.0, -0.1], [0.0, 0.1], [-X, 0.1]],
        [-1.0, -1.0, 1.0, 1.0],
        "a0",
        0.1,
    )
    a1 = Arc(
        [[X, -0.5], [-0.5, -0.5], [-0.5, 0.5], [X, 0.5]],
        [0.0, 0.0, 0.0, 0.0],
        "a1",
        0.5,
    )
    return ArcSystem([a0, a1], 0, [(0, 1, "hopf")], 0)


def double_arc(s: ArcSystem, i: int, sigma1: float | None = None, sigma2: float | None = None) -> ArcSystem:
    """Bing-double arc ``i``: it becomes the near arc, the far arc is appended."""
    if not isinstance(i, int) or not 0 <= i < len(s.arcs):
        from .diagram import DiagramError, ErrorKind

        raise DiagramError(ErrorKind.BadIndex, f"arc {i} out of range 0..{len(s.arcs) - 1}")
    P = s.arcs[i]
    others = [a for k, a in enumerate(s.arcs) if k != i]
    params = _crossing_params(P, others)
    L = P.length
    d = P.scale / 25.0
    if not params:
        params = [L / 2]
    if sigma1 is None:
        sigma1 = params[0] / 2
    if sigma2 is None:
        sigma2 = (params[-1] + L) / 2
    eps = 2 * d
    jog = 2 * d
    inset = d / 2
    if not (12 * d < sigma1 < sigma2 - 4 * eps and sigma2 < L - 12 * d):
        raise ValueError("doubling sites too close together or to the boundary")
    h = LOCAL ** (s.level + 1)

    # near arc: out along the outer side, back on the inner side, along k′, and again
    o1, ho1 = P.offset(d, 0.0, sigma1 + eps)
    i1, hi1 = P.offset(-d, inset, sigma1 + eps)
    i2, hi2 = P.offset(-d, sigma2 - eps, L - inset)
    o2, ho2 = P.offset(d, sigma2 - eps, L)
    along = _inset_path(P.points[0] - d * P.inner_sign() * 0 + _inner_shift(P, d, 0), _q_inner(P, d), inset)
    pts = np.vstack([o1, i1[::-1], along[1:-1], i2[::-1], o2])
    hts = np.concatenate(
        [
            ho1 - h,
            hi1[::-1] + h,
            np.full(len(along) - 2, float(np.mean([hi1[0], hi2[-1]])) + h),
            hi2[::-1] + h,
            ho2 - h,
        ]
    )
    near = Arc(pts, hts, P.name + "n", d)

    # far arc: tether out at 4d, loop at 5d around P[σ1, σ2], tether back at 3d
    t_out, h_out = P.offset(4 * d, 0.0, sigma1 - eps - jog)
    side_o, h_so = P.offset(5 * d, sigma1 - eps - jog, sigma2 + eps)
    side_i, h_si = P.offset(-5 * d, sigma1 - eps, sigma2 + eps)
    t_back, h_back = P.offset(3 * d, 0.0, sigma1 - eps)
    pts = np.vstack([t_out, side_o, side_i[::-1], t_back[::-1]])
    hts = np.concatenate([h_out, h_so, h_si[::-1], h_back[::-1]])
    far = Arc(pts, hts, P.name + "f", d)

    arcs = list(s.arcs)
    arcs[i] = near
    arcs.append(far)
    far_id = len(arcs) - 1
    clasps = [(a if a != i else far_id, b if b != i else far_id, k) for a, b, k in s.clasps]
    clasps = [(min(a, b), max(a, b), k) for a, b, k in clasps]
    clasps += [(i, far_id, "bing-boundary"), (i, far_id, "bing-middle")]
    return ArcSystem(arcs, s.generation + 1, clasps, s.level + 1)


def _inner_shift(P: Arc, w, end):
    pts = P.points
    if end == 0:
        dirv = pts[1] - pts[0]
    else:
        dirv = pts[-1] - pts[-2]
    dirv = dirv / np.linalg.norm(dirv)
    left = np.array([-dirv[1], dirv[0]])
    return P.inner_sign() * w * left


def _q_inner(P: Arc, w):
    return P.points[-1] + _inner_shift(P, w, 1)


def system(j: int) -> ArcSystem:
    """Generation ``j``: the base system doubled ``j`` times at the newest arc."""
    if j < 0:
        raise ValueError("generation must be non-negative")
    s = base_system()
    for _ in range(j):
        s = double_arc(s, len(s.arcs) - 1)
    return s


# ---------------------------------------------------------------------------
# realisation
# ---------------------------------------------------------------------------

def _oriented(arc: Arc) -> tuple[Arc, float]:
    """Arc oriented from its base (met first along k′) to its tip."""
    p, q = arc.points[0], arc.points[-1]
    start, _ = _short_span(p, q)
    if abs(_boundary_pos(p) - start) < 1e-9:
        return arc, _boundary_pos(p)
    r = arc.reversed()
    return r, _boundary_pos(q)


def _band(arc: Arc, w: float, ext: float, both_ends: bool):
    """Offset strands of the arc extended past k′ at the tip (and base)."""
    pts, hs = arc.points, arc.heights
    a = min(w, ext) / 2
    tip = pts[-1]
    out_t = _outward(tip)
    core, hcore = _sub(pts, hs, a if both_ends else 0.0, arc.length - a)
    ext_pts = [core]
    if both_ends:
        base = pts[0]
        out_b = _outward(base)
        core = np.vstack([[base + ext * out_b, base + a * out_b], core])
        hcore = np.concatenate([[np.nan, np.nan], hcore])
    core = np.vstack([core, [tip + a * out_t, tip + ext * out_t]])
    hcore = np.concatenate([hcore, [np.nan, np.nan]])
    sgn = arc.inner_sign()
    outer = offset_polyline(core, -sgn * w)
    inner = offset_polyline(core, sgn * w)
    h_out = np.where(np.isnan(hcore), -TOP, hcore)
    h_in = np.where(np.isnan(hcore), TOP, hcore)
    return outer, h_out, inner, h_in


def _finger_scale(s: ArcSystem) -> float:
    return min(a.scale for a in s.arcs) / 8.0


def knot_curves(s: ArcSystem, arcs=None):
    X, Y = BOX
    f = _finger_scale(s)
    ext = 4 * f
    per = _perimeter()
    fingers = []
    for idx, arc in enumerate(s.arcs):
        if arcs is not None and idx not in arcs:
            continue
        oa, pos = _oriented(arc)
        outer, h_out, inner, h_in = _band(oa, f, ext, both_ends=False)
        fingers.append((pos, idx, outer, h_out, inner, h_in))
    fingers.sort()
    corners = [0.0, 2 * X, 2 * X + 2 * Y, 4 * X + 2 * Y]
    pts, hts, tags = [], [], []
    events = sorted([(c, "corner", None) for c in corners] + [(fg[0], "finger", fg) for fg in fingers], key=lambda e: e[0])
    for pos, kind, fg in events:
        if kind == "corner":
            pts.append(_boundary_point(pos))
            hts.append(0.0)
            tags.append(("k",))
            continue
        _pos, idx, outer, h_out, inner, h_in = fg
        n = len(outer)
        for k in range(n):
            pts.append(outer[k])
            hts.append(h_out[k])
            tags.append(("finger", idx, "outer", "hook" if k == n - 3 else ""))
        for k in range(n - 1, -1, -1):
            pts.append(inner[k])
            hts.append(h_in[k])
            tags.append(("finger", idx, "inner", "hook" if k == n - 2 else "") if k > 0 else ("k",))
    # the segment leaving the last inner point runs along k′
    return [Curve(np.array(pts), np.array(hts), tags)]


def aux_curves(s: ArcSystem, subset=None):
    X, Y = BOX
    g = _finger_scale(s)
    ext = 4 * g
    k0 = Curve(
        np.array([[-X, -Y], [X, -Y], [X, Y], [-X, Y]]),
        np.zeros(4),
        [("k",)] * 4,
    )
    curves = [k0]
    idxs = range(len(s.arcs)) if subset is None else subset
    for idx in idxs:
        outer, h_out, inner, h_in = _band(s.arcs[idx], g, ext, both_ends=True)
        pts = np.vstack([outer, inner[::-1]])
        hts = np.concatenate([h_out, h_in[::-1]])
        curves.append(Curve(pts, hts, [("c", idx)] * len(pts)))
    return curves


def completed_curves(s: ArcSystem, arcs=None):
    """Each arc closed up along its short boundary stretch, pushed under everything."""
    idxs = range(len(s.arcs)) if arcs is None else sorted(arcs)
    step = min(a.scale for a in s.arcs) / (4 * (len(s.arcs) + 2))
    curves = []
    for rank, idx in enumerate(idxs):
        arc = s.arcs[idx]
        e = (idx + 1) * step
        pts, hs = _sub(arc.points, arc.heights, e, arc.length - e)
        back = _inset_path(arc.points[-1], arc.points[0], e)
        curves.append(
            Curve(
                np.vstack([pts, back[1:-1]]),
                np.concatenate([hs, np.full(len(back) - 2, -TOP)]),
                [("arc", idx)] * (len(pts) + len(back) - 2),
            )
        )
    return curves


def completed_link(s: ArcSystem, arcs=None) -> Diagram:
    """Link formed by the arcs (all, or the given ones) and their boundary stretches."""
    curves = completed_curves(s, arcs)
    d, _ = to_diagram(curves)
    return d


def _is_hook(info) -> bool:
    for a, b in ((info.over, info.under), (info.under, info.over)):
        ta, tb = a[2], b[2]
        if ta and ta[0] == "finger" and ta[2] == "inner" and ta[3] == "hook" and tb == ("k",):
            return True
    return False


@dataclass
class GammaInstance:
    knot: Diagram
    aux_link: Diagram
    generation: int
    arc_of_mark: dict[int, int] = field(default_factory=dict)

    @property
    def marks(self) -> tuple[int, ...]:
        return tuple(sorted(self.knot.marks))

    def to_json(self) -> dict:
        return {
            "knot": self.knot.to_json_obj(),
            "aux_link": self.aux_link.to_json_obj(),
            "generation": self.generation,
        }

    @classmethod
    def from_json(cls, obj) -> "GammaInstance":
        return cls(parse_json(obj["knot"]), parse_json(obj["aux_link"]), int(obj["generation"]))


def realize(s: ArcSystem) -> GammaInstance:
    knot, info = to_diagram(knot_curves(s), marks_at=_is_hook)
    arc_of_mark = {}
    for k in knot.marks:
        t = info[k].over[2] if info[k].over[2][0] == "finger" else info[k].under[2]
        arc_of_mark[k] = t[1]
    if len(knot.marks) != len(s.arcs):
        raise AssertionError(f"expected {len(s.arcs)} hook crossings, found {len(knot.marks)}")
    aux, _ = to_diagram(aux_curves(s))
    return GammaInstance(knot, aux, s.generation, arc_of_mark)


def twisted(s: ArcSystem, arcs) -> Diagram:
    """k′ with twists inserted along the given arcs only (marks on their hooks)."""
    d, _ = to_diagram(knot_curves(s, set(arcs)), marks_at=_is_hook)
    return d


def gamma(j: int) -> GammaInstance:
    return realize(system(j))


def sublink(s: ArcSystem, subset) -> Diagram:
    """k′ together with the linking circles of the arcs in ``subset``."""
    d, _ = to_diagram(aux_curves(s, sorted(subset)))
    return d


@dataclass
class BrunnianEntry:
    circles: tuple[int, ...]
    expected: str
    verdict: object  # oracle.Verdict

    @property
    def ok(self) -> bool:
        return self.verdict.status == self.expected

    def to_json(self) -> dict:
        return {
            "circles": list(self.circles),
            "expected": self.expected,
            "ok": self.ok,
            "verdict": self.verdict.to_json(),
        }


@dataclass
class BrunnianReport:
    generation: int
    entries: list[BrunnianEntry]

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def unknown(self) -> list[tuple[int, ...]]:
        return [e.circles for e in self.entries if e.verdict.status == "Unknown"]

    def to_json(self) -> dict:
        return {
            "generation": self.generation,
            "passed": self.passed,
            "unknown": [list(c) for c in self.unknown],
            "entries": [e.to_json() for e in self.entries],
        }


def brunnian_check(inst: GammaInstance, budget=None) -> BrunnianReport:
    """Classify k′ with every subset of the linking circles.

    Proper subsets should give the unknot or an unlink; all circles together
    should give a link certified as nontrivial.  Component 0 of the aux link
    is k′, component i + 1 is the circle around arc i.
    """
    from .oracle import classify

    n = inst.aux_link.n_components - 1
    entries = []
    for k in range(n + 1):
        for sub in combinations(range(n), k):
            d = drop_components(inst.aux_link, [0] + [i + 1 for i in sub])
            want = ("Unknot" if k == 0 else "Unlink") if k < n else "Knotted"
            entries.append(BrunnianEntry(sub, want, classify(d, budget)))
    return BrunnianReport(inst.generation, entries)
