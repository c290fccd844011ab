"""Pinch detection and manifold surgery.

Surgery removes the waist axial edge, caps the two cut ends with solid
icosahedra (rim edge lengths taken from the sections on either side of the
removed edge), remeshes both children and hands them back for continued
evolution.  A spherical-cap variant reassigns the last three s values and
two a values near the cut so the meridian profile lies on a circle centered
on the symmetry axis, tangent to the profile three sections in from the cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoValidCircle, RealizabilityError
from .lattice import NeckpinchLattice
from .profiles import RHO_FACTOR


@dataclass(frozen=True)
class SurgeryEvent:
    t: float
    waist_a_index: int            # 1-based, the removed axial edge
    left: NeckpinchLattice
    right: NeckpinchLattice
    method: str                   # "icosa" | "spherical"
    notes: tuple = ()


@dataclass(frozen=True)
class SphericalCapResult:
    lattice: NeckpinchLattice
    applied: bool
    reason: str = ""


def detect_pinch(lattice: NeckpinchLattice, pinch_threshold: float) -> int | None:
    """Waist a-index (1-based) if a genuine interior pinch is below threshold.

    The minimizing section must sit at least 3 sections from each end;
    otherwise the lobe is collapsing as a whole rather than pinching.
    """
    s = lattice.s
    i0 = int(np.argmin(s))  # ties resolve to the lower index
    if s[i0] > pinch_threshold:
        return None
    n = lattice.n
    if i0 < 3 or i0 > n - 4:
        return None
    # waist axial edge lies between i0 and its smaller neighbor
    if s[i0 - 1] <= s[i0 + 1]:
        return i0  # a-edge (i0-1, i0) in 0-based, i.e. index i0 1-based
    return i0 + 1


def _raw_split(lattice: NeckpinchLattice, k: int):
    """Children of removing a-edge k (1-based): sections 1..k and k+1..n."""
    s, a = lattice.s, lattice.a
    base = lattice.lobe_label
    prefix = "" if base == "initial" else base + "."
    left = NeckpinchLattice(
        n=k, s=s[:k], a=a[: k - 1],
        end_treatment=(lattice.end_treatment[0], "cap"),
        lobe_label=prefix + "left", cap_lambda=lattice.cap_lambda)
    right = NeckpinchLattice(
        n=lattice.n - k, s=s[k:], a=a[k:],
        end_treatment=("cap", lattice.end_treatment[1]),
        lobe_label=prefix + "right", cap_lambda=lattice.cap_lambda)
    return left, right


def split_and_cap(lattice: NeckpinchLattice, waist_a_index: int,
                  method: str = "icosa"):
    """Split at the waist, cap, optionally refine, and remesh both children.

    Returns (left, right, notes); notes record a skipped spherical refine.
    """
    k = waist_a_index
    if not 1 <= k <= lattice.n - 1:
        raise ValueError(f"waist a-index {k} out of range")
    left, right = _raw_split(lattice, k)
    notes = []
    if method == "spherical":
        res = spherical_cap_refine(left, "right")
        left = res.lattice
        if not res.applied:
            notes.append(f"left lobe: {res.reason}")
        res = spherical_cap_refine(right, "left")
        right = res.lattice
        if not res.applied:
            notes.append(f"right lobe: {res.reason}")
    elif method != "icosa":
        raise ValueError(f"unknown surgery method {method!r}")
    from .remesh import resample

    left = resample(left)
    right = resample(right)
    return left, right, tuple(notes)


def spherical_cap_refine(lattice: NeckpinchLattice, side: str) -> SphericalCapResult:
    """Reassign the last three s and last two a values near the cut end so the
    meridian points lie on an axis-centered circle tangent-matched at the
    third section from the cap.

    The fit never raises: an impossible circle (flat or ascending profile,
    or a pole far beyond the cut window) returns the input unchanged with
    the reason recorded.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    flip = side == "left"
    s = lattice.s[::-1].copy() if flip else lattice.s.copy()
    a = lattice.a[::-1].copy() if flip else lattice.a.copy()
    n = lattice.n
    if n < 5:
        return SphericalCapResult(lattice, False, "lobe too short for a cap fit")
    # embedded meridian of the tail
    rho = RHO_FACTOR * s
    drho = np.diff(rho)
    rad = a ** 2 - drho ** 2
    if np.any(rad[-4:] <= 0.0):
        return SphericalCapResult(lattice, False, "tail not embeddable")
    z = np.concatenate(([0.0], np.cumsum(np.sqrt(np.maximum(rad, 0.0)))))
    m = n - 1
    j = m - 2  # matching section, third from the cap
    sigma = (rho[j] - rho[j - 1]) / (z[j] - z[j - 1])
    if sigma >= 0.0:
        return SphericalCapResult(
            lattice, False, "profile not descending toward the cut")
    x0 = z[j] + sigma * rho[j]
    R = rho[j] * np.hypot(1.0, sigma)
    z_pole = x0 + R
    window = z[m] - z[j]
    if z_pole - z[j] > 3.0 * window:
        return SphericalCapResult(
            lattice, False, "circle closes far beyond the cut window")
    if z[m] >= z_pole:
        return SphericalCapResult(
            lattice, False, "cut sections lie beyond the circle pole")
    rho_new = rho.copy()
    for i in (m - 1, m):
        rho_new[i] = np.sqrt(R * R - (z[i] - x0) ** 2)
    s_new = s.copy()
    s_new[m - 1:] = rho_new[m - 1:] / RHO_FACTOR
    a_new = a.copy()
    for i in (m - 2, m - 1):
        a_new[i] = np.hypot(z[i + 1] - z[i], rho_new[i + 1] - rho_new[i])
    if flip:
        s_new, a_new = s_new[::-1], a_new[::-1]
    from .lattice import check_realizable

    try:
        out = lattice.with_arrays(s_new, a_new)
        check_realizable(out)
    except RealizabilityError as ex:
        return SphericalCapResult(lattice, False, f"refined gaps unrealizable: {ex}")
    return SphericalCapResult(out, True)


__all__ = [
    "SurgeryEvent", "SphericalCapResult", "detect_pinch", "split_and_cap",
    "spherical_cap_refine", "NoValidCircle",
]
