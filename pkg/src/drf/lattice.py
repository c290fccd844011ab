"""Topology and state of the axisymmetric icosahedral-frustum lattice.

A lattice is a stack of `n` icosahedral cross-sections with edge lengths
`s[i]`, the gaps between consecutive sections filled by 20 congruent
triangle-based frustum blocks with lateral edge lengths `a[i]`.  Axial
symmetry collapses the full complex (30n + 12(n-1) edges for open ends) to
one class per section and per gap; these classes are the degrees of freedom
the flow evolves.

Open ends are either closed by a cap (20 tetrahedra coned over the end
icosahedron's center, spoke length `cap_lambda * s_end`, slaved to the rim)
or mirrored (even reflection, for experiments).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NonPositiveLength, RealizabilityError
from .geometry import ICOSA_CIRCUMRADIUS_FACTOR, CapArrays, FrustumArrays

END_TREATMENTS = ("cap", "mirror")


def _normalize_ends(end_treatment) -> tuple[str, str]:
    if isinstance(end_treatment, str):
        ends = (end_treatment, end_treatment)
    else:
        ends = tuple(end_treatment)
    if len(ends) != 2 or any(e not in END_TREATMENTS for e in ends):
        raise ValueError(f"end_treatment must be 'cap', 'mirror' or a pair, got {end_treatment!r}")
    return ends  # type: ignore[return-value]


@dataclass(frozen=True)
class NeckpinchLattice:
    n: int
    s: np.ndarray
    a: np.ndarray
    end_treatment: tuple[str, str] = ("cap", "cap")
    lobe_label: str = "initial"
    cap_lambda: float = ICOSA_CIRCUMRADIUS_FACTOR

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        a = np.array(self.a, dtype=float)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "end_treatment", _normalize_ends(self.end_treatment))
        if self.n < 2:
            raise ValueError("need at least two cross-sections")
        if s.shape != (self.n,):
            raise ValueError(f"s must have length n={self.n}, got {s.shape}")
        if a.shape != (self.n - 1,):
            raise ValueError(f"a must have length n-1={self.n - 1}, got {a.shape}")
        for kind, arr in (("s", s), ("a", a)):
            bad = np.flatnonzero(~(arr > 0.0))
            if bad.size:
                i = int(bad[0])
                raise NonPositiveLength(i + 1, kind=kind, value=float(arr[i]))
        s.setflags(write=False)
        a.setflags(write=False)

    @property
    def degrees_of_freedom(self) -> int:
        return 2 * self.n - 1

    def capped_ends(self) -> tuple[str, ...]:
        ends = []
        if self.end_treatment[0] == "cap":
            ends.append("left")
        if self.end_treatment[1] == "cap":
            ends.append("right")
        return tuple(ends)

    def with_arrays(self, s, a) -> "NeckpinchLattice":
        """Same topology and metadata, new edge lengths."""
        return replace(self, s=np.asarray(s, dtype=float), a=np.asarray(a, dtype=float))

    def with_label(self, label: str) -> "NeckpinchLattice":
        return replace(self, lobe_label=label)

    def meridian_knots(self) -> np.ndarray:
        """Cumulative meridian position of each section: x1=0, x_{i+1}=x_i+a_i."""
        x = np.empty(self.n)
        x[0] = 0.0
        np.cumsum(self.a, out=x[1:])
        return x


def make_lattice(s, a, end_treatment="cap", lobe_label="initial",
                 cap_lambda=ICOSA_CIRCUMRADIUS_FACTOR) -> NeckpinchLattice:
    s = np.asarray(s, dtype=float)
    return NeckpinchLattice(n=len(s), s=s, a=np.asarray(a, dtype=float),
                            end_treatment=end_treatment, lobe_label=lobe_label,
                            cap_lambda=cap_lambda)


def check_realizable(lattice: NeckpinchLattice) -> None:
    """Raise RealizabilityError on the first gap whose frustum has no real height."""
    ds = lattice.s[:-1] - lattice.s[1:]
    margin = lattice.a ** 2 - ds ** 2 / 3.0
    bad = np.flatnonzero(margin <= 0.0)
    if bad.size:
        i = int(bad[0])
        raise RealizabilityError(i + 1, a=float(lattice.a[i]), ds=float(ds[i]))


def build_lattice(profile) -> NeckpinchLattice:
    """Build a validated lattice from a ProfileSpec (see `profiles`)."""
    from .profiles import make_profile

    s, a = make_profile(profile)
    lat = make_lattice(s, a, end_treatment=profile.end_treatment,
                       lobe_label=profile.label)
    check_realizable(lat)
    return lat


@dataclass(frozen=True)
class OrbitTable:
    """Symmetry classes with multiplicities.

    Non-cap edge classes: one per section (multiplicity 30, the icosahedron
    edges) and one per gap (multiplicity 12, the lateral edges).  Each capped
    end adds one spoke class (multiplicity 12), one apex vertex and one class
    of 20 cap tetrahedra.
    """

    n: int
    cap_ends: tuple[str, ...] = ()
    s_edge_multiplicity: int = field(default=30)
    a_edge_multiplicity: int = field(default=12)
    vertex_multiplicity: int = field(default=12)
    block_multiplicity: int = field(default=20)
    spoke_multiplicity: int = field(default=12)

    @property
    def s_edge_classes(self) -> int:
        return self.n

    @property
    def a_edge_classes(self) -> int:
        return self.n - 1

    @property
    def vertex_classes(self) -> int:
        return self.n

    @property
    def frustum_block_classes(self) -> int:
        return self.n - 1

    @property
    def cap_block_classes(self) -> int:
        return len(self.cap_ends)

    @property
    def total_edges(self) -> int:
        """Edge count excluding cap spokes."""
        return 30 * self.n + 12 * (self.n - 1)

    @property
    def total_spokes(self) -> int:
        return 12 * len(self.cap_ends)

    @property
    def total_vertices(self) -> int:
        """Vertex count excluding cap apexes."""
        return 12 * self.n

    @property
    def total_apexes(self) -> int:
        return len(self.cap_ends)

    @property
    def total_frustum_blocks(self) -> int:
        return 20 * (self.n - 1)

    @property
    def total_cap_blocks(self) -> int:
        return 20 * len(self.cap_ends)


def orbits(lattice: NeckpinchLattice) -> OrbitTable:
    return OrbitTable(n=lattice.n, cap_ends=lattice.capped_ends())


@dataclass(frozen=True)
class ValidationReport:
    n: int
    realizable: np.ndarray          # per gap
    well_centered: np.ndarray       # per gap; False where unrealizable
    cap_well_centered: dict         # end -> bool, for capped ends
    s_min: float
    s_max: float
    a_min: float
    a_max: float

    @property
    def all_realizable(self) -> bool:
        return bool(np.all(self.realizable))

    @property
    def all_well_centered(self) -> bool:
        return bool(np.all(self.well_centered)) and all(self.cap_well_centered.values())


def validate(lattice: NeckpinchLattice) -> ValidationReport:
    """Per-gap realizability and strict circumcenter containment; never raises."""
    s, a = lattice.s, lattice.a
    ds = s[:-1] - s[1:]
    margin = a ** 2 - ds ** 2 / 3.0
    realizable = margin > 0.0
    well = np.zeros_like(realizable)
    if np.any(realizable):
        idx = np.flatnonzero(realizable)
        f = FrustumArrays(s[:-1][idx], s[1:][idx], a[idx])
        well[idx] = f.well_centered
    cap_wc = {}
    for end in lattice.capped_ends():
        s_end = s[0] if end == "left" else s[-1]
        c = CapArrays(s_end, lattice.cap_lambda)
        cap_wc[end] = bool(0.0 < c.z_c < c.h_c)
    return ValidationReport(
        n=lattice.n,
        realizable=realizable,
        well_centered=well,
        cap_well_centered=cap_wc,
        s_min=float(s.min()), s_max=float(s.max()),
        a_min=float(a.min()), a_max=float(a.max()),
    )
