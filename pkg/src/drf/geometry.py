"""Euclidean metric data of the lattice building blocks.

Two block shapes occur: the triangle-based frustum (equilateral base s1,
equilateral top s2, concentric and same orientation, three lateral edges a)
and the cap tetrahedron (equilateral rim face s, three spokes lam*s meeting
at an apex over the face center).  Everything here is intrinsic to a single
block; curvature lives in how blocks are glued (see `curvature`).

All dihedral angles are measured in a canonical E3 embedding of the block:
base triangle in the z=0 plane, top triangle concentric at z=h with the same
orientation.  The vectorized `frustum_arrays` evaluates the same in-face
perpendicular construction in closed form; a unit test pins the two routes
against each other.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCap, NonPositiveLength, NotIncident, RealizabilityError

SQRT3 = math.sqrt(3.0)

# Circumradius of a regular icosahedron with unit edge; also the default
# apex-spoke factor of the end caps (the cap is then a solid icosahedron
# coned at its center, which makes the spoke edges deficit-free).
ICOSA_CIRCUMRADIUS_FACTOR = math.sqrt(10.0 + 2.0 * math.sqrt(5.0)) / 4.0

# Vertex directions of the canonical embedding (base triangle, z=0 plane).
_TRI_ANGLES = np.deg2rad([90.0, 210.0, 330.0])
_TRI_U = np.stack([np.cos(_TRI_ANGLES), np.sin(_TRI_ANGLES), np.zeros(3)], axis=1)


def embed_frustum(s1: float, s2: float, a: float) -> tuple[np.ndarray, np.ndarray]:
    """Vertices (base[3,3], top[3,3]) of the frustum in the canonical embedding."""
    h = frustum_height(s1, s2, a)
    base = (s1 / SQRT3) * _TRI_U
    top = (s2 / SQRT3) * _TRI_U + np.array([0.0, 0.0, h])
    return base, top


def frustum_height(s1: float, s2: float, a: float) -> float:
    h2 = a * a - (s1 - s2) ** 2 / 3.0
    if h2 <= 0.0:
        raise RealizabilityError(1, a=a, ds=s1 - s2)
    return math.sqrt(h2)


def _dihedral_between(p0, p1, q1, q2) -> float:
    """Interior dihedral at edge (p0,p1) between the faces holding q1 and q2.

    Measured between in-face perpendiculars to the shared edge, each oriented
    into its face.
    """
    e = p1 - p0
    w1 = np.cross(np.cross(e, q1 - p0), e)
    w2 = np.cross(np.cross(e, q2 - p0), e)
    w1 = w1 / np.linalg.norm(w1)
    w2 = w2 / np.linalg.norm(w2)
    if np.dot(w1, q1 - p0) < 0:
        w1 = -w1
    if np.dot(w2, q2 - p0) < 0:
        w2 = -w2
    return float(np.arccos(np.clip(np.dot(w1, w2), -1.0, 1.0)))


@dataclass(frozen=True)
class FrustumMetrics:
    s1: float
    s2: float
    a: float
    h: float
    dihedral_base_lateral: float
    dihedral_top_lateral: float
    dihedral_lateral_lateral: float
    volume: float
    z_c: float
    well_centered: bool
    # face circumdata
    base_circumradius: float          # of the base triangle
    top_circumradius: float
    lateral_height: float             # trapezoid height between the parallel sides
    lateral_circumcenter_height: float  # above the s1 side, within the trapezoid
    lateral_circumradius: float


@dataclass(frozen=True)
class CapMetrics:
    s: float
    lam: float
    apex_height: float                # over the rim face plane
    dihedral_rim: float               # at a rim edge, base face vs spoke face
    dihedral_spoke: float             # at a spoke edge, between adjacent spoke faces
    angle_rim_spoke: float            # face angle at a rim vertex (rim edge vs spoke)
    angle_apex: float                 # face angle at the apex between adjacent spokes
    volume: float                     # of one tetrahedron (20 per cap)
    z_c: float                        # tetra circumcenter height over the rim face
    spoke_length: float


class FrustumArrays:
    """Vectorized per-gap metric data; inputs are equal-length 1-d arrays.

    Field naming: `bl`/`tl`/`ll` are the base-lateral / top-lateral /
    lateral-lateral dihedrals, `beta_b`/`beta_t` the trapezoid face angles at
    a bottom / top vertex, and the `piece_*` fields are the signed
    circumcentric dual-area contributions of one block to one edge (see
    `curvature.duals`).
    """

    __slots__ = (
        "s1", "s2", "a", "h", "h_t", "z_c", "bl", "tl", "ll", "beta_b",
        "beta_t", "volume", "r1", "r2", "y_c", "d_leg", "db_bot", "db_top",
        "db_lat", "piece_s_bottom", "piece_s_top", "piece_a", "well_centered",
    )

    def __init__(self, s1, s2, a):
        s1 = np.asarray(s1, dtype=float)
        s2 = np.asarray(s2, dtype=float)
        a = np.asarray(a, dtype=float)
        ds = s1 - s2
        h2 = a * a - ds * ds / 3.0
        if np.any(h2 <= 0.0):
            bad = int(np.argmax(h2 <= 0.0))
            raise RealizabilityError(bad + 1, a=float(a[bad]), ds=float(ds[bad]))
        h = np.sqrt(h2)
        h_t = np.sqrt(a * a - ds * ds / 4.0)       # lateral trapezoid height
        z_c = ((s2 * s2 - s1 * s1) / 3.0 + h2) / (2.0 * h)
        r1 = s1 / (2.0 * SQRT3)                    # triangle inradii
        r2 = s2 / (2.0 * SQRT3)
        # dihedrals from the canonical embedding, in closed form
        cos_bl = ds / (2.0 * SQRT3 * h_t)
        bl = np.arccos(np.clip(cos_bl, -1.0, 1.0))
        tl = np.pi - bl
        ll = _lateral_lateral_dihedral(s1, s2, a, h)
        # trapezoid face angles at a bottom/top vertex (between base side and leg)
        beta_b = np.arccos(np.clip(ds / (2.0 * a), -1.0, 1.0))
        beta_t = np.pi - beta_b
        volume = (h / 3.0) * (SQRT3 / 4.0) * (s1 * s1 + s1 * s2 + s2 * s2)
        # trapezoid circumcenter height over the s1 side, and signed distances
        y_c = ((s2 * s2 - s1 * s1) / 4.0 + h_t * h_t) / (2.0 * h_t)
        d_leg = (h_t * s1 / 2.0 + 0.5 * (s2 - s1) * y_c) / a
        db_bot = z_c
        db_top = h - z_c
        db_lat = (h * r1 + (r2 - r1) * z_c) / h_t
        self.s1, self.s2, self.a = s1, s2, a
        self.h, self.h_t, self.z_c = h, h_t, z_c
        self.bl, self.tl, self.ll = bl, tl, ll
        self.beta_b, self.beta_t = beta_b, beta_t
        self.volume = volume
        self.r1, self.r2, self.y_c, self.d_leg = r1, r2, y_c, d_leg
        self.db_bot, self.db_top, self.db_lat = db_bot, db_top, db_lat
        self.piece_s_bottom = 0.5 * (r1 * z_c + y_c * db_lat)
        self.piece_s_top = 0.5 * (r2 * (h - z_c) + (h_t - y_c) * db_lat)
        self.piece_a = d_leg * db_lat
        self.well_centered = (z_c > 0.0) & (z_c < h)


def _lateral_lateral_dihedral(s1, s2, a, h):
    """Dihedral at a lateral edge, between the two adjacent trapezoids.

    Evaluates the in-face perpendicular construction on the canonical
    embedding: edge B1->T1, neighbor base vertices B0 and B2.
    """
    R1 = s1 / SQRT3
    R2 = s2 / SQRT3
    # edge direction (unnormalized): T1 - B1 = (R2-R1) u1 + h z
    # B0 - B1 = R1 (u0 - u1); (u0 - u1).u1 = -3/2, |u0 - u1|^2 = 3.
    # By the 3-fold symmetry both perpendiculars have the same norm and their
    # dot product is evaluated with u0.u2 = u0.u1 = -1/2.
    t = R1 * (R2 - R1) * (-1.5) / a          # (B0-B1).e_hat with e_hat=(T1-B1)/a
    # p_k = (Bk - B1) - t * e_hat, k in {0, 2}
    # |p|^2 = 3 R1^2 - t^2 ; p0.p2 = R1^2 (u0-u1).(u2-u1) - t^2
    # (u0-u1).(u2-u1) = u0.u2 - u0.u1 - u1.u2 + 1 = 3/2
    norm2 = 3.0 * R1 * R1 - t * t
    dot = 1.5 * R1 * R1 - t * t
    return np.arccos(np.clip(dot / norm2, -1.0, 1.0))


def frustum_metrics(s1: float, s2: float, a: float) -> FrustumMetrics:
    """Full metric data of one frustum block.

    Dihedrals are measured on the E3 embedding; height, circumcenter and
    volume use the closed forms h = sqrt(a^2 - (s1-s2)^2/3),
    z_c = (R2^2 - R1^2 + h^2)/(2h) and the prismatoid rule
    V = (h/3)(A1 + A2 + sqrt(A1 A2)).
    """
    for name, v in (("s1", s1), ("s2", s2), ("a", a)):
        if not v > 0.0:
            raise NonPositiveLength(1, kind=name, value=v)
    h = frustum_height(s1, s2, a)
    base, top = embed_frustum(s1, s2, a)
    dbl = _dihedral_between(base[0], base[1], base[2], top[0])
    dtl = _dihedral_between(top[0], top[1], top[2], base[0])
    dll = _dihedral_between(base[1], top[1], base[0], base[2])
    A1 = SQRT3 / 4.0 * s1 * s1
    A2 = SQRT3 / 4.0 * s2 * s2
    volume = (h / 3.0) * (A1 + A2 + math.sqrt(A1 * A2))
    z_c = ((s2 * s2 - s1 * s1) / 3.0 + h * h) / (2.0 * h)
    h_t = math.sqrt(a * a - (s1 - s2) ** 2 / 4.0)
    y_c = ((s2 * s2 - s1 * s1) / 4.0 + h_t * h_t) / (2.0 * h_t)
    return FrustumMetrics(
        s1=s1, s2=s2, a=a, h=h,
        dihedral_base_lateral=dbl,
        dihedral_top_lateral=dtl,
        dihedral_lateral_lateral=dll,
        volume=volume,
        z_c=z_c,
        well_centered=bool(0.0 < z_c < h),
        base_circumradius=s1 / SQRT3,
        top_circumradius=s2 / SQRT3,
        lateral_height=h_t,
        lateral_circumcenter_height=y_c,
        lateral_circumradius=math.hypot(y_c, s1 / 2.0),
    )


class CapArrays:
    """Metric data of a cap tetrahedron (scalar inputs; arrays not needed)."""

    __slots__ = (
        "s", "lam", "h_c", "z_c", "dihedral_rim", "dihedral_spoke",
        "angle_rim_spoke", "angle_apex", "volume", "r_face", "H_spoke",
        "y0", "d_sp", "db_base", "db_spoke", "piece_rim", "piece_spoke",
        "spoke_length",
    )

    def __init__(self, s: float, lam: float):
        if s <= 0.0:
            raise NonPositiveLength(1, kind="s", value=s)
        if lam * lam <= 1.0 / 3.0:
            raise DegenerateCap(s, lam)
        self.s = s
        self.lam = lam
        self.spoke_length = lam * s
        r = s / SQRT3
        h_c = s * math.sqrt(lam * lam - 1.0 / 3.0)
        self.h_c = h_c
        self.r_face = r
        base = r * _TRI_U
        apex = np.array([0.0, 0.0, h_c])
        self.dihedral_rim = _dihedral_between(base[0], base[1], base[2], apex)
        self.dihedral_spoke = _dihedral_between(base[0], apex, base[1], base[2])
        self.angle_rim_spoke = math.acos(1.0 / (2.0 * lam))
        self.angle_apex = math.acos(1.0 - 1.0 / (2.0 * lam * lam))
        self.volume = (SQRT3 / 4.0 * s * s) * h_c / 3.0
        self.z_c = (h_c * h_c - s * s / 3.0) / (2.0 * h_c)
        # spoke face: isoceles triangle, base s, equal sides lam*s, height H
        H = s * math.sqrt(lam * lam - 0.25)
        self.H_spoke = H
        self.y0 = (H * H - s * s / 4.0) / (2.0 * H)      # circumcenter over the rim edge
        self.d_sp = (H - self.y0) / (2.0 * lam)          # circumcenter to a spoke side
        self.db_base = self.z_c
        # signed distance from the tetra circumcenter to a spoke face plane,
        # positive toward the block interior
        n = np.cross(base[1] - base[0], apex - base[0])
        n = n / np.linalg.norm(n)
        if np.dot(n, base[2] - base[0]) < 0:
            n = -n
        self.db_spoke = float(np.dot(n, np.array([0.0, 0.0, self.z_c]) - base[0]))
        # signed dual-area contributions of one tetra
        self.piece_rim = 0.5 * (r / 2.0 * self.z_c + self.y0 * self.db_spoke)
        self.piece_spoke = self.d_sp * self.db_spoke


def cap_metrics(s: float, lam: float = ICOSA_CIRCUMRADIUS_FACTOR) -> CapMetrics:
    """Metric data of the 20 congruent cap tetrahedra closing an open end."""
    c = CapArrays(s, lam)
    return CapMetrics(
        s=s, lam=lam,
        apex_height=c.h_c,
        dihedral_rim=c.dihedral_rim,
        dihedral_spoke=c.dihedral_spoke,
        angle_rim_spoke=c.angle_rim_spoke,
        angle_apex=c.angle_apex,
        volume=c.volume,
        z_c=c.z_c,
        spoke_length=c.spoke_length,
    )


# ---------------------------------------------------------------------------
# Angles between edges sharing a vertex
# ---------------------------------------------------------------------------
#
# Edge classes are ("s", i), ("a", i) or ("spoke", end); vertex classes are
# ("v", i) or ("apex", end), indices 1-based, end in {"left", "right"}.
# Edges spanning a common planar face get the in-face (law of cosines) angle;
# any other pair gets the fan development: the minimal sum of in-face angles
# along a path of faces around the shared vertex.

# Icosahedron vertex adjacency (0..11); used for fan development at a cap apex.
_ICOSA_ADJ = {
    0: (1, 2, 3, 4, 5), 1: (0, 2, 5, 6, 7), 2: (0, 1, 3, 7, 8),
    3: (0, 2, 4, 8, 9), 4: (0, 3, 5, 9, 10), 5: (0, 1, 4, 6, 10),
    6: (1, 5, 7, 10, 11), 7: (1, 2, 6, 8, 11), 8: (2, 3, 7, 9, 11),
    9: (3, 4, 8, 10, 11), 10: (4, 5, 6, 9, 11), 11: (6, 7, 8, 9, 10),
}


def _icosa_graph_distance(i: int, j: int) -> int:
    if i == j:
        return 0
    if j in _ICOSA_ADJ[i]:
        return 1
    if set(_ICOSA_ADJ[i]) & set(_ICOSA_ADJ[j]):
        return 2
    return 3


def _star_at_vertex(lattice, i0: int) -> tuple[list, dict]:
    """Edges at interior/rim vertex class i0 (0-based) and their face-angle pairs.

    Returns (nodes, pairs) where nodes are edge descriptors and pairs maps
    frozenset({m, n}) -> in-face angle for node indices m, n sharing a face.
    Distinct same-class s-edges are expanded (five around the vertex) so the
    fan can walk between them.
    """
    n = lattice.n
    s = lattice.s
    a = lattice.a
    nodes: list = [("s", i0, k) for k in range(5)]
    pairs: dict = {}
    # consecutive s-edges around the vertex span an equilateral face
    for k in range(5):
        pairs[frozenset((k, (k + 1) % 5))] = math.pi / 3.0
    idx = len(nodes)
    extras = {}
    if i0 < n - 1:  # a-edge up, shares a trapezoid with each s-edge
        beta = math.acos(max(-1.0, min(1.0, (s[i0] - s[i0 + 1]) / (2.0 * a[i0]))))
        extras[("a", i0)] = beta
    if i0 > 0:      # a-edge down
        beta = math.pi - math.acos(max(-1.0, min(1.0, (s[i0 - 1] - s[i0]) / (2.0 * a[i0 - 1]))))
        extras[("a", i0 - 1)] = beta
    end = None
    if i0 == 0 and lattice.end_treatment[0] == "cap":
        end = "left"
    elif i0 == n - 1 and lattice.end_treatment[1] == "cap":
        end = "right"
    if end is not None:
        lam = lattice.cap_lambda
        extras[("spoke", end)] = math.acos(1.0 / (2.0 * lam))
    if i0 == 0 and lattice.end_treatment[0] == "mirror" and n > 1:
        beta = math.acos(max(-1.0, min(1.0, (s[0] - s[1]) / (2.0 * a[0]))))
        extras[("ghost-a", "left")] = beta
    if i0 == n - 1 and lattice.end_treatment[1] == "mirror" and n > 1:
        beta = math.pi - math.acos(max(-1.0, min(1.0, (s[n - 2] - s[n - 1]) / (2.0 * a[n - 2]))))
        extras[("ghost-a", "right")] = beta
    for desc, ang in extras.items():
        nodes.append(desc)
        for k in range(5):
            pairs[frozenset((k, idx))] = ang
        idx += 1
    return nodes, pairs


def _min_fan_angle(nodes, pairs, starts, goals) -> float:
    """Dijkstra over the edge star; weights are in-face angles."""
    dist = {m: math.inf for m in range(len(nodes))}
    heap = []
    for m in starts:
        dist[m] = 0.0
        heapq.heappush(heap, (0.0, m))
    best = math.inf
    while heap:
        d, m = heapq.heappop(heap)
        if d > dist[m]:
            continue
        if m in goals and d > 0.0:
            best = min(best, d)
        for key, w in pairs.items():
            if m in key:
                (other,) = key - {m}
                nd = d + w
                if nd < dist[other]:
                    dist[other] = nd
                    heapq.heappush(heap, (nd, other))
    return best


def angle_between(lattice, edge_class_1, edge_class_2, shared_vertex_class) -> float:
    """Angle between two edge classes at a shared vertex class.

    For a pair spanning a common planar face this is the in-face angle; other
    pairs get the minimal fan development around the vertex.  When the two
    classes coincide the minimal realization over distinct representatives is
    returned.
    """
    kind_v = shared_vertex_class[0]
    if kind_v == "apex":
        end = shared_vertex_class[1]
        for ec in (edge_class_1, edge_class_2):
            if ec[0] != "spoke" or ec[1] != end:
                raise NotIncident(f"{ec} is not incident on apex({end})")
        lam = lattice.cap_lambda
        # minimal realization: adjacent spokes span a cap face
        return math.acos(1.0 - 1.0 / (2.0 * lam * lam))
    if kind_v != "v":
        raise NotIncident(f"unknown vertex class {shared_vertex_class}")
    i0 = shared_vertex_class[1] - 1
    n = lattice.n
    if not 0 <= i0 < n:
        raise NotIncident(f"vertex index {shared_vertex_class[1]} out of range")
    nodes, pairs = _star_at_vertex(lattice, i0)

    def locate(ec):
        kind = ec[0]
        if kind == "s":
            if ec[1] - 1 != i0:
                raise NotIncident(f"{ec} not incident on v({i0 + 1})")
            return [m for m, d in enumerate(nodes) if d[0] == "s"]
        if kind == "a":
            j = ec[1] - 1
            if j not in (i0, i0 - 1):
                raise NotIncident(f"{ec} not incident on v({i0 + 1})")
            hits = [m for m, d in enumerate(nodes) if d == ("a", j)]
        elif kind == "spoke":
            hits = [m for m, d in enumerate(nodes) if d == ("spoke", ec[1])]
        else:
            raise NotIncident(f"unknown edge class {ec}")
        if not hits:
            raise NotIncident(f"{ec} not incident on v({i0 + 1})")
        return hits

    starts = locate(edge_class_1)
    goals = set(locate(edge_class_2))
    # same-face pairs resolve directly through a single shared angle
    direct = math.inf
    for m in starts:
        for g in goals:
            if m == g:
                continue
            key = frozenset((m, g))
            if key in pairs:
                direct = min(direct, pairs[key])
    if math.isfinite(direct):
        return direct
    ang = _min_fan_angle(nodes, pairs, starts, goals)
    if not math.isfinite(ang):
        raise NotIncident(f"no face path between {edge_class_1} and {edge_class_2}")
    return ang
