"""Closed polylines with heights, projected to a PD diagram.

Each component is a closed polyline in the plane whose vertices carry a
height; at a crossing the strand with the larger interpolated height is on
top.  Any such arrangement in general position gives a valid diagram.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagram import Diagram, from_oriented

__all__ = ["Curve", "offset_polyline", "to_diagram", "CrossingInfo"]

EPS = 1e-12


@dataclass
class Curve:
    """Closed polyline; the last vertex connects back to the first."""

    points: np.ndarray  # (n, 2)
    heights: np.ndarray  # (n,)
    tags: list | None = None  # optional per-segment labels

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.heights = np.asarray(self.heights, dtype=float)
        if self.points.shape[0] != self.heights.shape[0]:
            raise ValueError("one height per vertex")
        if self.tags is not None and len(self.tags) != len(self.points):
            raise ValueError("one tag per segment")


@dataclass(frozen=True)
class CrossingInfo:
    """Where a crossing came from: (component, segment, tag) for both strands."""

    over: tuple
    under: tuple
    point: tuple[float, float]


def offset_polyline(points, w: float) -> np.ndarray:
    """Offset an open polyline by ``w`` to its left, mitring the corners."""
    p = np.asarray(points, dtype=float)
    n = len(p)
    d = np.diff(p, axis=0)
    d /= np.linalg.norm(d, axis=1)[:, None]
    normals = np.stack([-d[:, 1], d[:, 0]], axis=1)
    out = np.empty_like(p)
    out[0] = p[0] + w * normals[0]
    out[-1] = p[-1] + w * normals[-1]
    for i in range(1, n - 1):
        m = normals[i - 1] + normals[i]
        nm = np.linalg.norm(m)
        if nm < 1e-9:
            raise ValueError("polyline doubles back on itself")
        m /= nm
        out[i] = p[i] + m * (w / float(np.dot(m, normals[i])))
    return out


def _segments(curves):
    starts, ends, h0, h1, comp, seg = [], [], [], [], [], []
    for ci, c in enumerate(curves):
        p = c.points
        q = np.roll(p, -1, axis=0)
        starts.append(p)
        ends.append(q)
        h0.append(c.heights)
        h1.append(np.roll(c.heights, -1))
        comp.append(np.full(len(p), ci))
        seg.append(np.arange(len(p)))
    return (
        np.concatenate(starts),
        np.concatenate(ends),
        np.concatenate(h0),
        np.concatenate(h1),
        np.concatenate(comp),
        np.concatenate(seg),
    )


def _intersections(curves, chunk: int = 512):
    P, Q, H0, H1, C, S = _segments(curves)
    sizes = {ci: len(c.points) for ci, c in enumerate(curves)}
    D = Q - P
    n = len(P)
    lo = np.minimum(P, Q)
    hi = np.maximum(P, Q)
    hits = []
    for a0 in range(0, n, chunk):
        a = slice(a0, min(n, a0 + chunk))
        # bounding-box prefilter against every later segment
        ov = (
            (lo[a, None, 0] <= hi[None, :, 0])
            & (hi[a, None, 0] >= lo[None, :, 0])
            & (lo[a, None, 1] <= hi[None, :, 1])
            & (hi[a, None, 1] >= lo[None, :, 1])
        )
        ii, jj = np.nonzero(ov)
        ii = ii + a0
        keep = jj > ii
        ii, jj = ii[keep], jj[keep]
        same = C[ii] == C[jj]
        m = np.array([sizes[c] for c in C[ii]]) if len(ii) else np.zeros(0, int)
        adj = same & (
            (np.abs(S[ii] - S[jj]) == 1) | ((S[ii] == 0) & (S[jj] == m - 1)) | ((S[jj] == 0) & (S[ii] == m - 1))
        )
        ii, jj = ii[~adj], jj[~adj]
        if not len(ii):
            continue
        d1, d2 = D[ii], D[jj]
        r = P[jj] - P[ii]
        den = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (r[:, 0] * d2[:, 1] - r[:, 1] * d2[:, 0]) / den
            u = (r[:, 0] * d1[:, 1] - r[:, 1] * d1[:, 0]) / den
        ok = (np.abs(den) > EPS) & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
        near = (np.abs(den) <= EPS) & (np.abs(r[:, 0] * d1[:, 1] - r[:, 1] * d1[:, 0]) <= EPS)
        if near.any():
            raise ValueError("collinear overlapping segments; perturb the curves")
        for k in np.nonzero(ok)[0]:
            i, j = int(ii[k]), int(jj[k])
            tt, uu = float(t[k]), float(u[k])
            if min(tt, 1 - tt, uu, 1 - uu) < 1e-9:
                raise ValueError("crossing at a vertex; perturb the curves")
            hi_ = H0[i] + tt * (H1[i] - H0[i])
            hj = H0[j] + uu * (H1[j] - H0[j])
            if abs(hi_ - hj) < 1e-12:
                raise ValueError(f"tied heights at a crossing near {P[i] + tt * D[i]}")
            hits.append((i, tt, j, uu, hi_ > hj))
    return hits, P, D, C, S


def to_diagram(curves: list[Curve], marks_at=None) -> tuple[Diagram, list[CrossingInfo]]:
    """Project curves to a diagram; returns the diagram and crossing provenance.

    ``marks_at`` is an optional predicate on CrossingInfo selecting marked
    crossings.
    """
    hits, P, D, C, S = _intersections(curves)
    # events per component, ordered along the curve
    events: dict[int, list[tuple[float, int, int]]] = {ci: [] for ci in range(len(curves))}
    for k, (i, t, j, u, i_over) in enumerate(hits):
        events[int(C[i])].append((S[i] + t, k, 0 if i_over else 1))
        events[int(C[j])].append((S[j] + u, k, 1 if i_over else 0))
    # role 0 = over, 1 = under
    edge_in: dict[tuple[int, int], int] = {}
    edge_out: dict[tuple[int, int], int] = {}
    label = 0
    for ci in range(len(curves)):
        ev = sorted(events[ci])
        if not ev:
            continue
        first = label + 1
        for idx, (_pos, k, role) in enumerate(ev):
            e_in = first + (idx - 1) % len(ev)
            e_out = first + idx
            edge_in[(k, role)] = e_in
            edge_out[(k, role)] = e_out
        label += len(ev)
    tuples, slots, info = [], [], []
    for k, (i, t, j, u, i_over) in enumerate(hits):
        o, un = (i, j) if i_over else (j, i)
        cr = D[o, 0] * D[un, 1] - D[o, 1] * D[un, 0]
        ui, uo = edge_in[(k, 1)], edge_out[(k, 1)]
        oi, oo = edge_in[(k, 0)], edge_out[(k, 0)]
        if cr > 0:
            tuples.append((ui, oo, uo, oi))
            slots.append(3)
        else:
            tuples.append((ui, oi, uo, oo))
            slots.append(1)
        pt = P[i] + t * D[i]

        def tag(s):
            c = curves[int(C[s])]
            return (int(C[s]), int(S[s]), None if c.tags is None else c.tags[int(S[s])])

        info.append(CrossingInfo(tag(o), tag(un), (float(pt[0]), float(pt[1]))))
    marks = [k for k, ci in enumerate(info) if marks_at(ci)] if marks_at else []
    if not tuples:
        return Diagram((), len(curves), frozenset()), info
    d = from_oriented(tuples, slots, n_components=len(curves), marks=marks)
    return d, info
