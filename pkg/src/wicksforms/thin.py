"""Binary subdivision of geodesic polygons and companion vertices.

A polygon is a closed path ``g0 g1 ... gn`` of geodesic sides. It is
padded with empty sides to ``2**k`` sides after ``g0`` and cut into
geodesic triangles: node ``b`` (a binary string) spans the vertices
``P[s(b)]`` to ``P[s(b) + 2**(k - len(b))]`` where ``P[j]`` is the end of
side ``j``. The root runs backwards along ``g0`` and the leaves are the
sides themselves.

Companions are found by pushing a vertex through the triangles with the
tripod projection: a point at distance ``t`` from a triangle corner moves
to the point at the same distance from that corner on the neighbouring
side that the corner's Gromov product selects.

Positions are ``(side, offset)`` pairs with offsets counted in the
direction of travel around the polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .oracle import GroupOracle
from .words import _w, inverse

Position = tuple[int, int]


def r_index(b: str, k: int) -> int:
    """Index of the side whose end splits node ``b`` of a depth ``k`` tree.

    >>> r_index("", 3), r_index("01", 3), r_index("11", 3)
    (4, 3, 7)
    """
    m = len(b)
    if m > k - 1:
        raise DomainError(f"binary string {b!r} too long for depth {k}")
    if any(ch not in "01" for ch in b):
        raise DomainError(f"not a binary string: {b!r}")
    return sum(int(bit) << (k - i - 1) for i, bit in enumerate(b)) + (1 << (k - m - 1))


@dataclass
class GeodesicPolygon:
    sides: list[str]
    oracle: GroupOracle

    def __post_init__(self):
        self.sides = [self.oracle.check_word(_w(s)) for s in self.sides]
        if len(self.sides) < 2:
            raise DomainError("a polygon needs at least two sides")

    def validate(self) -> None:
        o = self.oracle
        for i, s in enumerate(self.sides):
            if not o.is_minimal(s):
                raise DomainError(f"side {i} ({s!r}) is not minimal")
        if not o.is_identity("".join(self.sides)):
            raise DomainError("the sides do not close up")

    @property
    def n(self) -> int:
        return len(self.sides) - 1


@dataclass
class Node:
    bits: str
    start: int  # polygon vertex index of the start (P index)
    end: int
    label: str
    start_word: str  # path from the base point to the start vertex


@dataclass
class Subdivision:
    polygon: GeodesicPolygon
    k: int
    pads: int
    sides: list[str]  # padded, index 0 is g0
    prefix: list[str]  # prefix[j] = word of the end of side j
    nodes: dict[str, Node] = field(default_factory=dict)

    def point(self, pos: Position) -> str:
        """Word from the base point (start of g0) to a polygon position."""
        side, off = pos
        before = self.prefix[side - 1] if side > 0 else ""
        return before + self.sides[side][:off]

    def d_q(self, pos: Position) -> int:
        side, off = pos
        return sum(len(s) for s in self.sides[:side]) + off

    def leaf_side(self, bits: str) -> int:
        return int(bits, 2) + 1

    def internal_geodesics(self) -> int:
        """Diagonals ``q_b`` with ``1 <= |b| <= k - 1``."""
        return sum(1 for b in self.nodes if 0 < len(b) < self.k)

    def triangles(self) -> int:
        return sum(1 for b in self.nodes if len(b) < self.k)


def build_subdivision(p: GeodesicPolygon) -> Subdivision:
    o = p.oracle
    n = p.n
    k = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    total = 1 << k
    pads = total - n
    sides = list(p.sides) + [""] * pads
    prefix: list[str] = []
    acc = ""
    for s in sides:
        acc += s
        prefix.append(acc)
    sub = Subdivision(p, k, pads, sides, prefix)
    # root: backwards along g0, from P[0] to P[total] (= start of g0)
    sub.nodes[""] = Node("", 0, total, inverse(sides[0]), prefix[0])
    frontier = [""]
    for depth in range(1, k + 1):
        nxt = []
        for b in frontier:
            parent = sub.nodes[b]
            mid = (parent.start + parent.end) // 2
            for bit, (s, e) in (("0", (parent.start, mid)), ("1", (mid, parent.end))):
                bits = b + bit
                if depth == k:
                    label = sides[e]  # leaf: the side ending at P[e]
                else:
                    label = o.shortlex_geodesic(inverse(prefix[s]) + prefix[e])
                sub.nodes[bits] = Node(bits, s, e, label, prefix[s])
                nxt.append(bits)
        frontier = nxt
    return sub


@dataclass
class Companion:
    zeta: Position
    eta: Position
    dist: int
    path: list[tuple[str, int]]  # (node bits, offset) visited

    def to_dict(self) -> dict:
        return {"zeta": list(self.zeta), "eta": list(self.eta), "dist": self.dist}


def _tripod(L: int, L0: int, L1: int) -> tuple[float, float]:
    """Gromov products at the start corner and the middle corner."""
    return (L + L0 - L1) / 2, (L0 + L1 - L) / 2


def _descend(sub: Subdivision, bits: str, t: int, path: list[tuple[str, int]]) -> tuple[str, int]:
    while len(bits) < sub.k:
        node = sub.nodes[bits]
        c0, c1 = sub.nodes[bits + "0"], sub.nodes[bits + "1"]
        L, L0, L1 = len(node.label), len(c0.label), len(c1.label)
        at_start, _ = _tripod(L, L0, L1)
        if t <= at_start:
            bits = bits + "0"
        else:
            bits, t = bits + "1", L1 - (L - t)
        path.append((bits, t))
    return bits, t


def _leaf_position(sub: Subdivision, bits: str, t: int) -> Position:
    side = sub.leaf_side(bits)
    n = sub.polygon.n
    if side > n:  # zero-length pad: the vertex is the end of the last real side
        return (n, len(sub.sides[n]))
    return (side, t)


def _root_offset(sub: Subdivision, zeta: Position) -> int:
    side, off = zeta
    if side != 0:
        raise DomainError("position must lie on side 0")
    g0 = len(sub.sides[0])
    if not 0 < off < g0:
        raise DomainError("position must be interior to side 0")
    return g0 - off


def project_from_base(sub: Subdivision, zeta: Position) -> Companion:
    """Push an interior vertex of side 0 down to a leaf."""
    t = _root_offset(sub, zeta)
    path = [("", t)]
    bits, t = _descend(sub, "", t, path)
    eta = _leaf_position(sub, bits, t)
    dist = sub.polygon.oracle.distance(sub.point(zeta), sub.point(eta))
    return Companion(zeta, eta, dist, path)


def companion_bound(delta: int, n: int) -> float:
    return delta * (math.log2(n) + 1) if n >= 1 else 0.0


def find_companions(sub: Subdivision, zeta1: Position, zeta2: Position) -> tuple[Companion, Companion]:
    """Companions of two interior vertices of side 0 (``zeta1`` nearer its start)."""
    if not (zeta1[0] == zeta2[0] == 0 and zeta1[1] < zeta2[1]):
        raise DomainError("need two vertices on side 0 with zeta1 before zeta2")
    return project_from_base(sub, zeta1), project_from_base(sub, zeta2)


def find_inner_companion(sub: Subdivision, zeta3: Position, first: Companion) -> Companion:
    """Companion of a vertex lying between ``first.zeta`` and ``first.eta`` along the polygon."""
    side, off = zeta3
    if not sub.d_q(first.zeta) < sub.d_q(zeta3) < sub.d_q(first.eta):
        raise DomainError("zeta3 must lie strictly between zeta1 and eta1")
    if side == 0:
        return project_from_base(sub, zeta3)
    if side > sub.polygon.n or not 0 < off < len(sub.sides[side]):
        raise DomainError("zeta3 must be an interior vertex of a side")
    bits = format(side - 1, "b").zfill(sub.k)
    t = off
    path = [(bits, t)]
    while True:
        parent_bits, eps = bits[:-1], bits[-1]
        parent = sub.nodes[parent_bits]
        c0, c1 = sub.nodes[parent_bits + "0"], sub.nodes[parent_bits + "1"]
        L, L0, L1 = len(parent.label), len(c0.label), len(c1.label)
        _, at_mid = _tripod(L, L0, L1)
        if eps == "0":
            from_mid = L0 - t
            if from_mid < at_mid:
                bits, t = parent_bits + "1", from_mid
                sideways = True
            else:
                bits, t = parent_bits, t
                sideways = False
        else:
            if t < at_mid:
                bits, t = parent_bits + "0", L0 - t
                sideways = True
            else:
                bits, t = parent_bits, L - (L1 - t)
                sideways = False
        path.append((bits, t))
        if sideways:
            bits, t = _descend(sub, bits, t, path)
            eta = _leaf_position(sub, bits, t)
            break
        if bits == "":
            eta = (0, len(sub.sides[0]) - t)
            break
    dist = sub.polygon.oracle.distance(sub.point(zeta3), sub.point(eta))
    return Companion(zeta3, eta, dist, path)


def interior_positions(sub: Subdivision, side: int) -> list[Position]:
    return [(side, o) for o in range(1, len(sub.sides[side]))]


@dataclass
class CompanionReport:
    k: int
    pads: int
    n: int
    delta: int
    companions: list[Companion]
    inner: list[Companion]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "pads": self.pads,
            "companions": [c.to_dict() for c in self.companions],
            "inner": [c.to_dict() for c in self.inner],
            "bound": companion_bound(self.delta, self.n),
            "inner_bound": 2 * companion_bound(self.delta, self.n),
            "violations": self.violations,
        }


def check_polygon(p: GeodesicPolygon, delta: int, inner: bool = True) -> CompanionReport:
    """Run every companion construction on ``p`` and check the stated properties."""
    sub = build_subdivision(p)
    n = p.n
    bound = companion_bound(delta, n)
    comps: list[Companion] = []
    inners: list[Companion] = []
    bad: list[str] = []
    zetas = interior_positions(sub, 0)
    by_zeta = {z: project_from_base(sub, z) for z in zetas}
    for z in zetas:
        c = by_zeta[z]
        comps.append(c)
        if c.dist > bound + 1e-9:
            bad.append(f"distance {c.dist} > {bound:.3f} at {z}")
        if c.eta[0] == 0:
            bad.append(f"companion of {z} lies on side 0")
    for i, z1 in enumerate(zetas):
        for z2 in zetas[i + 1:]:
            c1, c2 = by_zeta[z1], by_zeta[z2]
            if not sub.d_q(c1.eta) > sub.d_q(c2.eta):
                bad.append(f"order fails for {z1}, {z2}")
            if c1.eta[0] == c2.eta[0] != 0:
                o = p.oracle
                d_eta = o.distance(sub.point(c1.eta), sub.point(c2.eta))
                if d_eta != z2[1] - z1[1]:
                    bad.append(f"gap {d_eta} != {z2[1] - z1[1]} for {z1}, {z2}")
    if inner:
        for z1 in zetas:
            c1 = by_zeta[z1]
            lo, hi = sub.d_q(z1), sub.d_q(c1.eta)
            for side in range(0, n + 1):
                for z3 in interior_positions(sub, side):
                    if not lo < sub.d_q(z3) < hi:
                        continue
                    c3 = find_inner_companion(sub, z3, c1)
                    inners.append(c3)
                    if c3.dist > 2 * bound + 1e-9:
                        bad.append(f"inner distance {c3.dist} > {2 * bound:.3f} at {z3}")
                    if c3.eta == z3:
                        bad.append(f"inner companion of {z3} is itself")
                    if not sub.d_q(c1.eta) > sub.d_q(c3.eta):
                        bad.append(f"inner order fails at {z3} (eta1 {c1.eta}, eta3 {c3.eta})")
    return CompanionReport(sub.k, sub.pads, n, delta, comps, inners, bad)


# -- thinness scan ------------------------------------------------------------


@dataclass
class DeltaScan:
    delta: int
    radius: int
    pairs: int
    witness: tuple[str, str, int] | None  # (w, z, overlap) attaining delta


def delta_scan(o: GroupOracle, radius: int, detail: bool = False):
    """Exhaustive thin-triangle scan over all pairs of ball representatives.

    For every pair ``w``, ``z`` of shortlex geodesics of length at most
    ``radius`` and every admissible overlap ``j`` the distance between the
    ``j``-th vertices back along ``w`` and forward along ``z`` is
    measured; the maximum is returned.

    Lengths of products are read off the multiplication table of a ball
    two steps larger than ``radius``. When a product leaves that ball
    only a lower bound on its length is known; the pair is resolved with
    an exact geodesic computation unless the bound already shows it
    cannot raise the running maximum.
    """
    reps = o.ball(radius)
    work = radius
    for extra in (2, 1):
        try:
            o.ball(min(o.max_radius, radius + extra))
            work = min(o.max_radius, radius + extra)
            break
        except Exception:  # cap reached: use what is built
            continue
    work = min(work, o.radius_built)
    edges, lengths = o._edges, o._lengths
    letter_index = o._letter_index
    rep_id = {w: i for i, w in enumerate(reps)}
    # z-trie in shortlex order: parent position and letter index for each rep
    parent = [-1] * len(reps)
    letter = [-1] * len(reps)
    for i, w in enumerate(reps):
        if w:
            parent[i] = rep_id[w[:-1]]
            letter[i] = letter_index[w[-1]]
    zlen = [len(w) for w in reps]
    boundary = o.radius_built
    memo: dict[tuple[int, int], int] = {}

    def overlap(w: str, z: str, j: int) -> int:
        key = (rep_id[w[len(w) - j:]], rep_id[z[:j]])
        val = memo.get(key)
        if val is None:
            val = o.geodesic_length(w[len(w) - j:] + z[:j])
            memo[key] = val
        return val

    best = 0
    witness = None
    pairs = 0
    count = len(reps)
    state = [0] * count  # element id of w*z, or -(exit depth) - 1 once outside the table
    for wi, w in enumerate(reps):
        if not w:
            continue
        lw = len(w)
        state[0] = wi
        for zi in range(1, count):
            pairs += 1
            ps = state[parent[zi]]
            if ps >= 0:
                nxt = edges[ps][letter[zi]]
                if nxt == -1 and not o.parity and lengths[ps] == boundary:
                    nxt = o.step(ps, reps[zi][-1])
                state[zi] = nxt if nxt >= 0 else -(zlen[zi]) - 1
            else:
                state[zi] = ps
            s = state[zi]
            lz = zlen[zi]
            if s >= 0:
                m = (lw + lz - lengths[s]) // 2
            else:
                exit_depth = -s - 1
                lower = boundary + 1 - (lz - exit_depth)
                m = (lw + lz - lower) // 2
                if 2 * min(m, lw, lz) <= best:
                    continue
                m = (lw + lz - o.geodesic_length(w + reps[zi])) // 2
            top = min(m, lw, lz)
            if 2 * top <= best:
                continue
            z = reps[zi]
            for j in range(best // 2 + 1, top + 1):
                v = overlap(w, z, j)
                if v > best:
                    best, witness = v, (w, z, j)
    if detail:
        return DeltaScan(best, radius, pairs, witness)
    return best
