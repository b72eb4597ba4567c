"""Polynomial invariants and genus bounds for link diagrams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagram import Diagram
from .laurent import LaurentPoly

__all__ = [
    "CapExceeded",
    "MultiComponent",
    "GenusBracket",
    "DEFAULT_CAP",
    "kauffman_bracket",
    "jones",
    "unlink_jones",
    "alexander",
    "determinant",
    "seifert_circles",
    "genus_bracket",
    "contraction_order",
]

DEFAULT_CAP = 24


class CapExceeded(RuntimeError):
    def __init__(self, n: int, cap: int):
        self.n, self.cap = n, cap
        super().__init__(f"{n} crossings exceed the invariant cap {cap}")


class MultiComponent(ValueError):
    pass


# ---------------------------------------------------------------------------
# Kauffman bracket by planar contraction
# ---------------------------------------------------------------------------

def _padd(acc: dict, poly: dict, shift: int = 0) -> None:
    for e, c in poly.items():
        k = e + shift
        v = acc.get(k, 0) + c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def _times_delta(poly: dict) -> dict:
    out: dict[int, int] = {}
    for e, c in poly.items():
        out[e + 2] = out.get(e + 2, 0) - c
        out[e - 2] = out.get(e - 2, 0) - c
    return {e: c for e, c in out.items() if c}


def _div_delta(poly: dict) -> dict:
    """Exact division by -A^2 - A^-2."""
    rem = dict(poly)
    floor = min(poly) if poly else 0
    out: dict[int, int] = {}
    while rem:
        top = max(rem)
        if top - 2 < floor:
            raise ArithmeticError("bracket sum not divisible by delta")
        q = -rem.pop(top)
        out[top - 2] = q
        v = rem.get(top - 4, 0) + q
        if v:
            rem[top - 4] = v
        else:
            rem.pop(top - 4, None)
    return out


def _greedy_order(nb: list[list[int]], start: int, prefer_recent: bool) -> list[int]:
    n = len(nb)
    done = [False] * n
    links: dict[int, int] = {}
    stamp: dict[int, int] = {}
    order = []
    cur = start
    for step in range(n):
        if order:
            cands = [c for c in links if not done[c]] or [i for i in range(n) if not done[i]]
            if prefer_recent:
                cur = max(cands, key=lambda c: (links.get(c, 0), stamp.get(c, -1), -c))
            else:
                cur = max(cands, key=lambda c: (links.get(c, 0), -stamp.get(c, n), -c))
        done[cur] = True
        order.append(cur)
        links.pop(cur, None)
        for cj in nb[cur]:
            if not done[cj]:
                links[cj] = links.get(cj, 0) + 1
                stamp[cj] = step
    return order


def order_width(d: Diagram, order) -> int:
    """Largest number of open edges while contracting in ``order``."""
    open_e: set[int] = set()
    w = 0
    for ci in order:
        for e in d.crossings[ci].edges:
            if e in open_e:
                open_e.remove(e)
            else:
                open_e.add(e)
        w = max(w, len(open_e))
    return w


def contraction_order(d: Diagram, tries: int = 96) -> list[int]:
    """Crossing order keeping the open boundary small.

    Grows a region greedily by shared edges from several start crossings and
    keeps the order with the narrowest boundary.
    """
    n = len(d.crossings)
    if n == 0:
        return []
    ends = d.edge_ends()
    nb = [[cj for e in d.crossings[ci].edges for cj, _ in ends[e] if cj != ci] for ci in range(n)]
    step = max(1, n // tries)
    best, best_w = None, None
    for start in range(0, n, step):
        for recent in (True, False):
            o = _greedy_order(nb, start, recent)
            w = order_width(d, o)
            if best_w is None or w < best_w:
                best, best_w = o, w
    return best


def _join(m: dict, x: int, y: int) -> int:
    """Add an arc x--y to the boundary matching ``m``; return closed loops."""
    if x == y:
        return 1
    ex = m.pop(x, None)
    ey = m.pop(y, None)
    if ex is None and ey is None:
        m[x] = y
        m[y] = x
    elif ey is None:
        m[ex] = y
        m[y] = ex
    elif ex is None:
        m[ey] = x
        m[x] = ey
    elif ex == y:
        return 1
    else:
        m[ex] = ey
        m[ey] = ex
    return 0


def _bracket_dict(d: Diagram) -> dict:
    states: dict[tuple, dict] = {(): {0: 1}}
    for ci in contraction_order(d):
        a, b, c, dd = d.crossings[ci].edges
        nxt: dict[tuple, dict] = {}
        for key, poly in states.items():
            for shift, pairs in ((1, ((a, b), (c, dd))), (-1, ((a, dd), (b, c)))):
                m = dict(key)
                loops = _join(m, *pairs[0]) + _join(m, *pairs[1])
                p = poly
                for _ in range(loops):
                    p = _times_delta(p)
                nk = tuple(sorted(m.items()))
                tgt = nxt.get(nk)
                if tgt is None:
                    tgt = nxt[nk] = {}
                _padd(tgt, p, shift)
        states = {k: v for k, v in nxt.items() if v}
    total = states.get((), {})
    return total


def kauffman_bracket(d: Diagram, cap: int | None = DEFAULT_CAP) -> LaurentPoly:
    """Kauffman bracket in A, normalised so the round circle is 1."""
    n = len(d.crossings)
    if cap is not None and n > cap:
        raise CapExceeded(n, cap)
    if n == 0:
        poly = {0: 1}
        for _ in range(d.n_components - 1):
            poly = _times_delta(poly)
        return LaurentPoly({2 * e: c for e, c in poly.items()}, "A")
    poly = _div_delta(_bracket_dict(d))
    for _ in range(d.free_loops):
        poly = _times_delta(poly)
    return LaurentPoly({2 * e: c for e, c in poly.items()}, "A")


def jones(d: Diagram, cap: int | None = DEFAULT_CAP) -> LaurentPoly:
    """Jones polynomial in q = t^(1/2), with t = A^-4."""
    br = kauffman_bracket(d, cap)
    w = sum(x.sign for x in d.crossings)
    sign = -1 if w % 2 else 1
    # (-A^3)^(-w) <D>, then A^k -> q^(-k/2); stored exponents are doubled
    out = {}
    for e2, c in br.terms.items():
        a_exp = e2 // 2 - 3 * w
        out[-a_exp] = sign * c
    return LaurentPoly(out, "q")


def unlink_jones(n: int) -> LaurentPoly:
    base = LaurentPoly({2: -1, -2: -1}, "q")
    return base ** (n - 1) if n > 1 else LaurentPoly.one("q")


# ---------------------------------------------------------------------------
# Alexander polynomial via Fox calculus, evaluated modulo primes
# ---------------------------------------------------------------------------

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _primes(start: int = 2_000_000_011):
    p = start
    while True:
        p -= 2
        if _is_prime(p):
            yield p


def wirtinger_arcs(d: Diagram) -> dict[int, int]:
    """edge id -> arc (generator) index; under-passes split arcs."""
    parent = {e: e for x in d.crossings for e in x.edges}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in d.crossings:
        parent[find(x.edges[1])] = find(x.edges[3])
    roots = sorted({find(e) for e in parent})
    idx = {r: i for i, r in enumerate(roots)}
    return {e: idx[find(e)] for e in parent}


def alexander_matrix(d: Diagram) -> list[list[tuple[int, int, int]]]:
    """Rows as (column, const, t-coefficient) contributions, entries linear in t."""
    arc = wirtinger_arcs(d)
    rows = []
    for x in d.crossings:
        k = arc[x.edges[1]]
        i = arc[x.edges[0]]
        j = arc[x.edges[2]]
        if x.sign > 0:
            rows.append([(k, 1, -1), (i, 0, 1), (j, -1, 0)])
        else:
            rows.append([(k, -1, 1), (i, 1, 0), (j, 0, -1)])
    return rows


def _det_mod(mat: np.ndarray, p: int) -> int:
    a = mat.copy() % p
    n = a.shape[0]
    det = 1
    for col in range(n):
        piv = np.nonzero(a[col:, col])[0]
        if piv.size == 0:
            return 0
        r = col + int(piv[0])
        if r != col:
            a[[col, r]] = a[[r, col]]
            det = -det
        pv = int(a[col, col])
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        if col + 1 < n:
            f = (a[col + 1:, col] * inv) % p
            a[col + 1:, col:] = (a[col + 1:, col:] - (f[:, None] * a[col, col:][None, :]) % p) % p
    return det % p


def _interpolate_mod(xs: list[int], ys: list[int], p: int) -> list[int]:
    """Coefficients (low to high) of the polynomial through the points, mod p."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], p - 2, p) % p
    poly = [0] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [0] * n
        for k in range(n - 1):
            new[k + 1] = poly[k]
        for k in range(n):
            new[k] = (new[k] - xs[i] * poly[k]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    return poly


def _raw_alexander(d: Diagram) -> list[int]:
    rows = alexander_matrix(d)
    n = len(rows)
    if n <= 1:
        return [1]
    size = n - 1
    const = np.zeros((size, size), dtype=np.int64)
    lin = np.zeros((size, size), dtype=np.int64)
    for r, row in enumerate(rows[:-1]):
        for col, c0, c1 in row:
            if col == n - 1:
                continue
            const[r, col] += c0
            lin[r, col] += c1
    xs = list(range(2, size + 3))
    prev = None
    modulus = 1
    acc: list[int] = []
    for p in _primes():
        ys = [_det_mod((const + lin * x) % p, p) for x in xs]
        cs = _interpolate_mod(xs, ys, p)
        if modulus == 1:
            acc = cs
        else:
            # CRT combine
            inv = pow(modulus, -1, p)
            acc = [a + modulus * (((c - a) * inv) % p) for a, c in zip(acc, cs)]
        modulus *= p
        lifted = [a - modulus if a > modulus // 2 else a for a in acc]
        if lifted == prev:
            return lifted
        prev = lifted
        if modulus.bit_length() > 4000:
            raise ArithmeticError("Alexander coefficients failed to stabilise")
    raise AssertionError("unreachable")


def alexander(d: Diagram) -> LaurentPoly:
    """Alexander polynomial, symmetric with Δ(1) = 1."""
    if d.n_components != 1:
        raise MultiComponent(f"Alexander polynomial needs a knot, got {d.n_components} components")
    if not d.crossings:
        return LaurentPoly.one("t")
    coeffs = _raw_alexander(d)
    nz = [i for i, c in enumerate(coeffs) if c]
    if not nz:
        raise ArithmeticError("vanishing Alexander determinant for a knot diagram")
    lo, hi = nz[0], nz[-1]
    if (lo + hi) % 2:
        raise ArithmeticError("Alexander polynomial is not symmetric")
    mid = (lo + hi) // 2
    poly = LaurentPoly({2 * (i - mid): c for i, c in enumerate(coeffs) if c}, "t")
    if poly(1) < 0:
        poly = -poly
    return poly


def determinant(d: Diagram) -> int:
    return abs(int(alexander(d)(-1)))


# ---------------------------------------------------------------------------
# Seifert circles and the genus bracket
# ---------------------------------------------------------------------------

def seifert_circles(d: Diagram) -> int:
    head = {}
    for x in d.crossings:
        head[x.edges[0]] = x.edges[x.over_out]
        head[x.edges[x.over_in]] = x.edges[2]
    seen = set()
    count = 0
    for e in head:
        if e in seen:
            continue
        count += 1
        while e not in seen:
            seen.add(e)
            e = head[e]
    return count + d.free_loops


@dataclass(frozen=True)
class GenusBracket:
    lower: int
    upper: int

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper:
            raise ValueError(f"inconsistent genus bracket ({self.lower}, {self.upper})")

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper}

    @classmethod
    def from_json(cls, obj) -> "GenusBracket":
        if isinstance(obj, (list, tuple)):
            return cls(int(obj[0]), int(obj[1]))
        return cls(int(obj["lower"]), int(obj["upper"]))

    def __iter__(self):
        return iter((self.lower, self.upper))


def genus_bracket(d: Diagram) -> GenusBracket:
    delta = alexander(d)
    lower = int(delta.span()) // 2
    upper = (len(d.crossings) - seifert_circles(d) + 1) // 2
    return GenusBracket(lower, upper)
