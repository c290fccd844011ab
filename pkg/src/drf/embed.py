"""Isometric meridian embedding into R^3 profile coordinates (z, rho).

Tracks the vertex rings: rho_i = RHO_FACTOR * s_i and z chosen so that
consecutive rings are a_i apart in space, i.e. dz = sqrt(a^2 - (d rho)^2).
A gap with a^2 < (d rho)^2 cannot be embedded; its dz is clamped to zero and
the gap flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import NeckpinchLattice
from .profiles import RHO_FACTOR


@dataclass(frozen=True)
class MeridianPolyline:
    z: np.ndarray
    rho: np.ndarray
    embeddable: np.ndarray  # per gap

    @property
    def all_embeddable(self) -> bool:
        return bool(np.all(self.embeddable))


def embed_meridian(lattice: NeckpinchLattice) -> MeridianPolyline:
    rho = RHO_FACTOR * lattice.s
    drho = np.diff(rho)
    rad = lattice.a ** 2 - drho ** 2
    embeddable = rad >= 0.0
    dz = np.sqrt(np.maximum(rad, 0.0))
    z = np.concatenate(([0.0], np.cumsum(dz)))
    return MeridianPolyline(z=z, rho=rho, embeddable=embeddable)
