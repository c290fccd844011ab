"""Forman-Ricci curvature on weighted graphs, and the lattice-to-graph
weight correspondence export.

For an edge e = (v1, v2) with node weights w(v) and edge weights w(e):

    Rc_F = (1/2) (w(v1)/w(e) + w(v2)/w(e))
           - sum_{e' ~ v1, e' != e} (1/2) w(v1)/sqrt(w(e) w(e'))
           - sum_{e' ~ v2, e' != e} (1/2) w(v2)/sqrt(w(e) w(e'))

With unit weights this reduces to (4 - deg(v1) - deg(v2))/2.

The correspondence export emits, for every (edge, neighbor-edge, endpoint)
flag of a lattice curvature field, the quantities cos^2(theta) * eps and A
that play the roles of the vertex weight and of sqrt(w(e) w(e')) in the
formula above, plus a comparison between the lattice Ricci value and Rc_F
evaluated with globally fitted weights induced by those rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import CurvatureField
from .errors import ZeroEdgeWeight


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph; node and edge weights in [0, 1]."""

    nodes: tuple                      # node ids, ordered
    edges: tuple                      # (u, v) pairs
    node_weight: dict = field(default_factory=dict)
    edge_weight: dict = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {u}-{v}")
            seen.add(key)
        object.__setattr__(self, "node_weight",
                           {v: float(self.node_weight.get(v, 1.0)) for v in self.nodes})
        ew = {}
        for u, v in self.edges:
            w = float(self.edge_weight.get((u, v), self.edge_weight.get((v, u), 1.0)))
            if w == 0.0:
                raise ZeroEdgeWeight((u, v))
            ew[frozenset((u, v))] = w
        object.__setattr__(self, "edge_weight", ew)
        for v, w in self.node_weight.items():
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"node weight out of [0,1] at {v}: {w}")
        for k, w in ew.items():
            if not 0.0 < w <= 1.0:
                raise ValueError(f"edge weight out of (0,1] at {tuple(k)}: {w}")

    def incident(self, v):
        return [e for e in self.edges if v in e]

    def w_edge(self, u, v) -> float:
        try:
            return self.edge_weight[frozenset((u, v))]
        except KeyError:
            raise ZeroEdgeWeight((u, v)) from None


def graph_from_dict(data: dict) -> WeightedGraph:
    """Build from the JSON form {"nodes": [{"id","w"}], "edges": [{"u","v","w"}]};
    weights default to 1."""
    nodes = []
    node_w = {}
    for item in data["nodes"]:
        if isinstance(item, dict):
            nodes.append(item["id"])
            if "w" in item:
                node_w[item["id"]] = item["w"]
        else:
            nodes.append(item)
    edges = []
    edge_w = {}
    for item in data["edges"]:
        u, v = item["u"], item["v"]
        edges.append((u, v))
        if "w" in item:
            edge_w[(u, v)] = item["w"]
    return WeightedGraph(nodes=tuple(nodes), edges=tuple(edges),
                         node_weight=node_w, edge_weight=edge_w)


def forman_curvature(graph: WeightedGraph, edge) -> float:
    """Weighted Forman-Ricci curvature of one edge."""
    u, v = edge
    we = graph.w_edge(u, v)
    total = 0.5 * (graph.node_weight[u] + graph.node_weight[v]) / we
    for end in (u, v):
        wv = graph.node_weight[end]
        for e2 in graph.incident(end):
            if frozenset(e2) == frozenset((u, v)):
                continue
            total -= 0.5 * wv / math.sqrt(we * graph.w_edge(*e2))
    return total


def forman_all(graph: WeightedGraph) -> list:
    """(u, v, w(e), Rc_F) for every edge, in input order."""
    return [(u, v, graph.w_edge(u, v), forman_curvature(graph, (u, v)))
            for u, v in graph.edges]


# ---------------------------------------------------------------------------
# Lattice correspondence
# ---------------------------------------------------------------------------

def _lattice_flags(fieldc: CurvatureField):
    """Neighbor flags per edge class with multiplicities.

    Yields (edge_key, vertex_section, neighbor_key, count_per_edge,
    cos2_theta) where keys are ("s", i) / ("a", i) / ("spoke", end), indices
    1-based.  count_per_edge is the number of physical neighbor edges a
    single representative of the class meets at that endpoint with that
    angle.
    """
    lat = fieldc.lattice
    n = lat.n
    from .geometry import CapArrays, FrustumArrays

    G = FrustumArrays(lat.s[:-1], lat.s[1:], lat.a)
    bb, bt = G.beta_b, G.beta_t
    caps = {}
    for end in fieldc.caps:
        caps[end] = CapArrays(float(lat.s[0] if end == "left" else lat.s[-1]),
                              lat.cap_lambda)
    left_mirror = lat.end_treatment[0] == "mirror"
    right_mirror = lat.end_treatment[1] == "mirror"

    def s_star(i):
        """Neighbor flags of one s-edge at one endpoint vertex in section i."""
        flags = [(("s", i + 1), 2, math.pi / 3.0), (("s", i + 1), 2, 2.0 * math.pi / 3.0)]
        if i < n - 1:
            flags.append((("a", i + 1), 1, float(bb[i])))
        if i > 0:
            flags.append((("a", i), 1, float(bt[i - 1])))
        if i == 0:
            if "left" in caps:
                flags.append((("spoke", "left"), 1, caps["left"].angle_rim_spoke))
            elif left_mirror:
                flags.append((("a", 1), 1, float(bb[0])))
        if i == n - 1:
            if "right" in caps:
                flags.append((("spoke", "right"), 1, caps["right"].angle_rim_spoke))
            elif right_mirror:
                flags.append((("a", n - 1), 1, float(bt[-1])))
        return flags

    for i in range(n):  # s-edge classes: both endpoints sit in section i
        for nb, cnt, theta in s_star(i):
            yield ("s", i + 1), i + 1, nb, 2 * cnt, math.cos(theta) ** 2
    for i in range(n - 1):  # a-edge classes
        yield ("a", i + 1), i + 1, ("s", i + 1), 5, math.cos(bb[i]) ** 2
        if i > 0:
            yield ("a", i + 1), i + 1, ("a", i), 1, math.cos(bt[i - 1] + bb[i]) ** 2
        elif "left" in caps:
            yield ("a", 1), 1, ("spoke", "left"), 1, \
                math.cos(caps["left"].angle_rim_spoke + bb[0]) ** 2
        elif left_mirror:
            yield ("a", 1), 1, ("a", 1), 1, math.cos(2.0 * bb[0]) ** 2
        yield ("a", i + 1), i + 2, ("s", i + 2), 5, math.cos(bt[i]) ** 2
        if i < n - 2:
            yield ("a", i + 1), i + 2, ("a", i + 2), 1, math.cos(bt[i] + bb[i + 1]) ** 2
        elif "right" in caps:
            yield ("a", n - 1), n, ("spoke", "right"), 1, \
                math.cos(bt[-1] + caps["right"].angle_rim_spoke) ** 2
        elif right_mirror:
            yield ("a", n - 1), n, ("a", n - 1), 1, math.cos(2.0 * bt[-1]) ** 2
    for end, cap in caps.items():
        rim = 1 if end == "left" else n
        i = 0 if end == "left" else n - 1
        key = ("spoke", end)
        yield key, rim, ("s", rim), 5, math.cos(cap.angle_rim_spoke) ** 2
        beta = float(bb[0]) if end == "left" else float(bt[-1])
        a_idx = 1 if end == "left" else n - 1
        yield key, rim, ("a", a_idx), 1, math.cos(cap.angle_rim_spoke + beta) ** 2
        ta = cap.angle_apex
        for dist, cnt in ((1, 5), (2, 5), (3, 1)):
            yield key, 0, key, cnt, math.cos(dist * ta) ** 2


def _class_values(fieldc: CurvatureField):
    lat = fieldc.lattice
    eps = {}
    area = {}
    rc = {}
    length = {}
    for i in range(lat.n):
        eps[("s", i + 1)] = float(fieldc.eps_s[i])
        area[("s", i + 1)] = float(fieldc.A_s[i])
        rc[("s", i + 1)] = float(fieldc.Rc_s[i])
        length[("s", i + 1)] = float(lat.s[i])
    for i in range(lat.n - 1):
        eps[("a", i + 1)] = float(fieldc.eps_a[i])
        area[("a", i + 1)] = float(fieldc.A_a[i])
        rc[("a", i + 1)] = float(fieldc.Rc_a[i])
        length[("a", i + 1)] = float(lat.a[i])
    for end, c in fieldc.caps.items():
        eps[("spoke", end)] = c.eps
        area[("spoke", end)] = c.A
        rc[("spoke", end)] = c.Rc
        length[("spoke", end)] = c.spoke_length
    return eps, area, rc, length


def induced_weights(fieldc: CurvatureField):
    """Globally fitted Forman weights from the correspondence rows.

    Vertex weights: per edge class, the flag-count weighted mean of
    cos^2(theta) eps(e') over its neighbor rows (the quantity standing in
    for w(v) in every term of that edge's sum).  Edge weights: least squares
    on log w(e) + log w(e') = 2 log A(e'), then a single global rescale into
    (0, 1] (Rc_F is invariant under joint rescaling of all weights).
    """
    eps, area, _, _ = _class_values(fieldc)
    keys = sorted(area.keys(), key=str)
    pos = {k: j for j, k in enumerate(keys)}
    rows = []
    rhs_ln = []
    wv_num = {k: 0.0 for k in keys}
    wv_den = {k: 0.0 for k in keys}
    for ekey, _vtx, nkey, cnt, c2 in _lattice_flags(fieldc):
        if area[nkey] <= 0.0:
            continue
        r = np.zeros(len(keys))
        r[pos[ekey]] += 1.0
        r[pos[nkey]] += 1.0
        for _ in range(cnt):
            rows.append(r)
            rhs_ln.append(2.0 * math.log(area[nkey]))
        wv_num[ekey] += cnt * c2 * eps[nkey]
        wv_den[ekey] += cnt
    A = np.asarray(rows)
    b = np.asarray(rhs_ln)
    u, *_ = np.linalg.lstsq(A, b, rcond=None)
    w_edge = {k: math.exp(u[pos[k]]) for k in keys}
    w_vert = {k: wv_num[k] / wv_den[k] if wv_den[k] else 0.0 for k in keys}
    scale = max(max(w_edge.values()), max(abs(v) for v in w_vert.values()), 1e-300)
    return ({k: w_vert[k] / scale for k in keys},
            {k: w_edge[k] / scale for k in keys})


def rc_forman_induced(fieldc: CurvatureField):
    """Rc_F per lattice edge class, evaluated with the fitted weights."""
    w_vert, w_edge = induced_weights(fieldc)
    flags = list(_lattice_flags(fieldc))
    out = {}
    for ekey in w_edge:
        we = w_edge[ekey]
        # both endpoints carry the edge's own induced vertex value
        total = w_vert[ekey] / we
        for ekey2, _vtx, nkey, cnt, _c2 in flags:
            if ekey2 != ekey:
                continue
            total -= cnt * 0.5 * w_vert[ekey] / math.sqrt(we * w_edge[nkey])
        out[ekey] = total
    return out


def correspondence_rows(fieldc: CurvatureField):
    """Rows for the weights CSV.

    Columns: edge class, endpoint section (0 for the cap apex), neighbor
    class, flag count per physical edge, cos^2 theta, eps(e'), the induced
    vertex-weight value cos^2(theta) eps(e'), the induced sqrt(w w') value
    A(e'), and per-edge Rc_drf vs Rc_F(induced).
    """
    eps, area, rc, _ = _class_values(fieldc)
    rcf = rc_forman_induced(fieldc)
    for ekey, vtx, nkey, cnt, c2 in _lattice_flags(fieldc):
        yield (ekey[0], ekey[1], vtx, nkey[0], nkey[1], cnt, c2,
               eps[nkey], c2 * eps[nkey], area[nkey], rc[ekey], rcf[ekey])
