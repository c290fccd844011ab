"""Regge deficits, circumcentric duals and the per-edge Ricci field.

Conventions (calibrated on the uniform icosahedral cylinder, where the axial
Ricci value must vanish and the cross-section value must be positive, and on
the round lattice sphere, which must shrink):

* deficit:    eps_e = 2*pi - sum of block dihedrals at e
* sectional:  K_e = (1/2) [ sum_{e' ~ v1, e' != e} cos^2(theta) eps/A
                           + sum_{e' ~ v2, e' != e} cos^2(theta) eps/A ]
* vertex:     R_v = (1/V_v) sum_{e ~ v} l_e eps_e        (full eps, no halving)
* edge:       R_e = (R_v1 + R_v2)/2
* Ricci:      Rc_e = R_e/2 - K_e

so that the flow law is d(l_e)/dt = l_e (K_e - R_e/2) = -l_e Rc_e.

Dual measures are circumcentric and signed: the contribution of block b to
the dual area of edge e is (1/2) d_f(e) d_b(f) summed over the two faces of
b at e, where d_f is the in-face signed distance from the face circumcenter
to the edge line and d_b the signed distance from the block circumcenter to
the face plane (positive toward the interior).  Vertex volumes follow from
the exact flag decomposition V_v = (1/3) sum_{e ~ v} (l_e/2) A_e, which makes
the multiplicity-weighted sum of V_v equal the total block volume to machine
precision on cap-ended lattices.  Signed measures stay positive on mildly
off-centered blocks; `NotWellCentered` is raised only when a measure becomes
non-positive, which is the condition under which the flow is undefined.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NotWellCentered
from .geometry import _ICOSA_ADJ, _icosa_graph_distance, CapArrays, FrustumArrays
from .lattice import NeckpinchLattice

TWO_PI = 2.0 * math.pi

# Spoke-to-spoke fan distances at a cap apex: around one icosahedron vertex
# the other eleven sit at graph distances 1, 2, 3 with these counts.
_APEX_DIST_COUNTS = {1: 0, 2: 0, 3: 0}
for _j in range(1, 12):
    _APEX_DIST_COUNTS[_icosa_graph_distance(0, _j)] += 1
assert _APEX_DIST_COUNTS == {1: 5, 2: 5, 3: 1}, _ICOSA_ADJ


@dataclass(frozen=True)
class CapClassData:
    end: str                      # "left" | "right"
    rim_section: int              # 1-based
    spoke_length: float
    eps: float                    # spoke deficit
    A: float                      # spoke dual area
    K: float
    Re: float
    Rc: float
    V_apex: float
    R_apex: float
    dihedral_rim: float
    block_volume: float           # one tetrahedron


@dataclass(frozen=True)
class Deficits:
    eps_s: np.ndarray
    eps_a: np.ndarray
    eps_spoke: dict  # end -> float


@dataclass(frozen=True)
class Duals:
    A_s: np.ndarray
    A_a: np.ndarray
    A_spoke: dict    # end -> float
    V: np.ndarray
    V_apex: dict     # end -> float


@dataclass(frozen=True)
class CurvatureField:
    lattice: NeckpinchLattice
    eps_s: np.ndarray
    eps_a: np.ndarray
    A_s: np.ndarray
    A_a: np.ndarray
    V: np.ndarray
    R_v: np.ndarray
    K_s: np.ndarray
    K_a: np.ndarray
    Re_s: np.ndarray
    Re_a: np.ndarray
    Rc_s: np.ndarray
    Rc_a: np.ndarray
    caps: dict       # end -> CapClassData
    total_volume: float

    @property
    def max_abs_rc(self) -> float:
        m = float(np.max(np.abs(self.Rc_s)))
        if self.Rc_a.size:
            m = max(m, float(np.max(np.abs(self.Rc_a))))
        return m


class _Pre:
    """Shared intermediate data for one lattice."""

    __slots__ = ("lat", "G", "caps", "eps_s", "eps_a", "eps_spoke", "A_s",
                 "A_a", "A_spoke", "V", "V_apex", "rs", "ra", "rsp",
                 "cb2", "ct2", "left", "right", "total_volume")

    def __init__(self, lat: NeckpinchLattice):
        self.lat = lat
        n = lat.n
        s, a = lat.s, lat.a
        self.G = G = FrustumArrays(s[:-1], s[1:], a)
        self.left, self.right = lat.end_treatment
        self.caps = {}
        if self.left == "cap":
            self.caps["left"] = CapArrays(float(s[0]), lat.cap_lambda)
        if self.right == "cap":
            self.caps["right"] = CapArrays(float(s[-1]), lat.cap_lambda)

        eps_a = TWO_PI - 5.0 * G.ll
        eps_s = np.full(n, TWO_PI)
        eps_s[1:] -= 2.0 * G.tl
        eps_s[:-1] -= 2.0 * G.bl
        if self.left == "cap":
            eps_s[0] -= 2.0 * self.caps["left"].dihedral_rim
        else:
            eps_s[0] -= 2.0 * G.bl[0]
        if self.right == "cap":
            eps_s[-1] -= 2.0 * self.caps["right"].dihedral_rim
        else:
            eps_s[-1] -= 2.0 * G.tl[-1]
        self.eps_s, self.eps_a = eps_s, eps_a
        self.eps_spoke = {e: TWO_PI - 5.0 * c.dihedral_spoke for e, c in self.caps.items()}

        A_a = 5.0 * G.piece_a
        A_s = np.zeros(n)
        A_s[1:] += 2.0 * G.piece_s_top
        A_s[:-1] += 2.0 * G.piece_s_bottom
        if self.left == "cap":
            A_s[0] += 2.0 * self.caps["left"].piece_rim
        else:
            A_s[0] += 2.0 * G.piece_s_bottom[0]
        if self.right == "cap":
            A_s[-1] += 2.0 * self.caps["right"].piece_rim
        else:
            A_s[-1] += 2.0 * G.piece_s_top[-1]
        self.A_s, self.A_a = A_s, A_a
        self.A_spoke = {e: 5.0 * c.piece_spoke for e, c in self.caps.items()}

        # V_v = (1/3) sum over incident edges of (half length) * (dual area)
        V = 2.5 * s * A_s
        V[:-1] += 0.5 * a * A_a
        V[1:] += 0.5 * a * A_a
        if self.left == "cap":
            V[0] += 0.5 * self.caps["left"].spoke_length * self.A_spoke["left"]
        else:
            V[0] += 0.5 * a[0] * A_a[0]
        if self.right == "cap":
            V[-1] += 0.5 * self.caps["right"].spoke_length * self.A_spoke["right"]
        else:
            V[-1] += 0.5 * a[-1] * A_a[-1]
        V /= 3.0
        self.V = V
        self.V_apex = {e: 2.0 * c.spoke_length * self.A_spoke[e]
                       for e, c in self.caps.items()}

        self._positivity_guard()

        self.rs = eps_s / A_s
        self.ra = eps_a / A_a
        self.rsp = {e: self.eps_spoke[e] / self.A_spoke[e] for e in self.caps}
        self.cb2 = np.cos(G.beta_b) ** 2
        self.ct2 = np.cos(G.beta_t) ** 2
        self.total_volume = 20.0 * (float(np.sum(G.volume))
                                    + sum(c.volume for c in self.caps.values()))

    def _positivity_guard(self):
        bad = min(
            float(self.A_s.min()), float(self.A_a.min()), float(self.V.min()),
            min(self.A_spoke.values(), default=1.0),
            min(self.V_apex.values(), default=1.0),
        )
        if bad <= 0.0:
            G = self.G
            score = np.minimum(G.z_c, G.h - G.z_c) / G.h
            worst = int(np.argmin(score))
            raise NotWellCentered(worst + 1, detail=f"min dual measure {bad}")


def deficits(lattice: NeckpinchLattice) -> Deficits:
    """Deficit angle per edge class: 2*pi minus the incident block dihedrals."""
    p = _Pre(lattice)
    return Deficits(eps_s=p.eps_s, eps_a=p.eps_a, eps_spoke=dict(p.eps_spoke))


def duals(lattice: NeckpinchLattice) -> Duals:
    """Signed circumcentric dual areas and vertex volumes.

    Raises NotWellCentered if any measure is non-positive (remesh and retry).
    """
    p = _Pre(lattice)
    return Duals(A_s=p.A_s, A_a=p.A_a, A_spoke=dict(p.A_spoke),
                 V=p.V, V_apex=dict(p.V_apex))


def _end_terms(p: _Pre):
    """Scalar neighbor-sum contributions at the two ends.

    Returns (left_s, left_a, right_s, right_a): the end term entering K_s at
    the first/last section and the end term entering the bottom sum of
    K_a[0] / top sum of K_a[n-2].
    """
    G = p.G
    if p.left == "cap":
        cap = p.caps["left"]
        t = cap.angle_rim_spoke
        left_s = math.cos(t) ** 2 * p.rsp["left"]
        left_a = math.cos(t + float(G.beta_b[0])) ** 2 * p.rsp["left"]
    else:
        left_s = float(p.cb2[0] * p.ra[0])
        left_a = math.cos(2.0 * float(G.beta_b[0])) ** 2 * float(p.ra[0])
    if p.right == "cap":
        cap = p.caps["right"]
        t = cap.angle_rim_spoke
        right_s = math.cos(t) ** 2 * p.rsp["right"]
        right_a = math.cos(float(G.beta_t[-1]) + t) ** 2 * p.rsp["right"]
    else:
        right_s = float(p.ct2[-1] * p.ra[-1])
        right_a = math.cos(2.0 * float(G.beta_t[-1])) ** 2 * float(p.ra[-1])
    return left_s, left_a, right_s, right_a


def _fill_K(p: _Pre, lo: int, hi: int, K_s: np.ndarray, K_a: np.ndarray, ends):
    """Neighbor sums for section classes [lo, hi) and gap classes [lo, min(hi, n-1)).

    Pure slicing of precomputed arrays; chunk boundaries cannot change any
    floating-point result.
    """
    n = p.lat.n
    rs, ra = p.rs, p.ra
    cb2, ct2 = p.cb2, p.ct2
    bb, bt = p.G.beta_b, p.G.beta_t
    left_s, left_a, right_s, right_a = ends

    # --- K over s-classes ------------------------------------------------
    # Four same-section neighbors at each endpoint: two at pi/3 and two at
    # 2*pi/3, cos^2 = 1/4 each, so they contribute exactly rs[i].
    Ks = rs[lo:hi].copy()
    m_up = min(hi, n - 1)
    if m_up > lo:
        Ks[: m_up - lo] += cb2[lo:m_up] * ra[lo:m_up]
    j = max(lo, 1)
    if hi > j:
        Ks[j - lo:] += ct2[j - 1: hi - 1] * ra[j - 1: hi - 1]
    if lo == 0:
        Ks[0] += left_s
    if hi == n:
        Ks[-1] += right_s
    K_s[lo:hi] = Ks

    # --- K over a-classes -------------------------------------------------
    m = min(hi, n - 1)
    if m <= lo:
        return
    bot = 5.0 * cb2[lo:m] * rs[lo:m]
    top = 5.0 * ct2[lo:m] * rs[lo + 1: m + 1]
    j = max(lo, 1)
    if m > j:  # fan to the a-edge below, through the shared section
        bot[j - lo:] += np.cos(bt[j - 1: m - 1] + bb[j:m]) ** 2 * ra[j - 1: m - 1]
    mm = min(m, n - 2)
    if mm > lo:  # fan to the a-edge above
        top[: mm - lo] += np.cos(bt[lo:mm] + bb[lo + 1: mm + 1]) ** 2 * ra[lo + 1: mm + 1]
    if lo == 0:
        bot[0] += left_a
    if m == n - 1:
        top[-1] += right_a
    K_a[lo:m] = 0.5 * (bot + top)


def ricci(lattice: NeckpinchLattice, threads: int = 1) -> CurvatureField:
    """Full curvature field of a lattice.

    `threads` splits the class-index range across a thread pool; results are
    bit-identical for any thread count.
    """
    p = _Pre(lattice)
    n = lattice.n
    s, a = lattice.s, lattice.a

    ell_eps = 5.0 * s * p.eps_s
    ell_eps[:-1] += a * p.eps_a
    ell_eps[1:] += a * p.eps_a
    if p.left == "cap":
        ell_eps[0] += p.caps["left"].spoke_length * p.eps_spoke["left"]
    else:
        ell_eps[0] += a[0] * p.eps_a[0]
    if p.right == "cap":
        ell_eps[-1] += p.caps["right"].spoke_length * p.eps_spoke["right"]
    else:
        ell_eps[-1] += a[-1] * p.eps_a[-1]
    R_v = ell_eps / p.V

    ends = _end_terms(p)
    K_s = np.empty(n)
    K_a = np.empty(n - 1)
    if threads <= 1:
        _fill_K(p, 0, n, K_s, K_a, ends)
    else:
        k = min(threads, n)
        bounds = [(n * w // k, n * (w + 1) // k) for w in range(k)]
        with ThreadPoolExecutor(max_workers=k) as ex:
            futs = [ex.submit(_fill_K, p, lo, hi, K_s, K_a, ends) for lo, hi in bounds]
            for f in futs:
                f.result()

    Re_s = R_v
    Re_a = 0.5 * (R_v[:-1] + R_v[1:])
    Rc_s = 0.5 * Re_s - K_s
    Rc_a = 0.5 * Re_a - K_a

    caps = {}
    for end, cap in p.caps.items():
        rim = 0 if end == "left" else n - 1
        R_apex = 12.0 * cap.spoke_length * p.eps_spoke[end] / p.V_apex[end]
        t = cap.angle_rim_spoke
        beta = float(p.G.beta_b[0]) if end == "left" else float(p.G.beta_t[-1])
        sum_rim = (5.0 * math.cos(t) ** 2 * p.rs[rim]
                   + math.cos(t + beta) ** 2 * (p.ra[0] if end == "left" else p.ra[-1]))
        ta = cap.angle_apex
        sum_apex = (5.0 * math.cos(ta) ** 2 + 5.0 * math.cos(2.0 * ta) ** 2
                    + math.cos(3.0 * ta) ** 2) * p.rsp[end]
        K_sp = 0.5 * (sum_rim + sum_apex)
        Re_sp = 0.5 * (float(R_v[rim]) + R_apex)
        caps[end] = CapClassData(
            end=end, rim_section=rim + 1,
            spoke_length=cap.spoke_length,
            eps=p.eps_spoke[end], A=p.A_spoke[end],
            K=K_sp, Re=Re_sp, Rc=0.5 * Re_sp - K_sp,
            V_apex=p.V_apex[end], R_apex=R_apex,
            dihedral_rim=cap.dihedral_rim,
            block_volume=cap.volume,
        )

    return CurvatureField(
        lattice=lattice,
        eps_s=p.eps_s, eps_a=p.eps_a,
        A_s=p.A_s, A_a=p.A_a, V=p.V,
        R_v=R_v, K_s=K_s, K_a=K_a,
        Re_s=Re_s, Re_a=Re_a, Rc_s=Rc_s, Rc_a=Rc_a,
        caps=caps, total_volume=p.total_volume,
    )


def curvature_rows(field: CurvatureField):
    """Rows for the curvature CSV: class_type, index, multiplicity, length,
    eps, A_or_V, K, R, Rc.  Vertex/apex rows carry V and R_v, with the
    edge-only columns empty."""
    lat = field.lattice
    n = lat.n
    for i in range(n):
        yield ("s", i + 1, 30, float(lat.s[i]), float(field.eps_s[i]),
               float(field.A_s[i]), float(field.K_s[i]), float(field.Re_s[i]),
               float(field.Rc_s[i]))
    for i in range(n - 1):
        yield ("a", i + 1, 12, float(lat.a[i]), float(field.eps_a[i]),
               float(field.A_a[i]), float(field.K_a[i]), float(field.Re_a[i]),
               float(field.Rc_a[i]))
    for end in ("left", "right"):
        if end in field.caps:
            c = field.caps[end]
            yield ("spoke", c.rim_section, 12, c.spoke_length, c.eps, c.A,
                   c.K, c.Re, c.Rc)
    for i in range(n):
        yield ("vertex", i + 1, 12, None, None, float(field.V[i]), None,
               float(field.R_v[i]), None)
    for end in ("left", "right"):
        if end in field.caps:
            c = field.caps[end]
            yield ("apex", c.rim_section, 1, None, None, c.V_apex, None,
                   c.R_apex, None)
