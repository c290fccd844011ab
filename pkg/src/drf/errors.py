"""Exception types shared across the package.

All indices reported in errors are 1-based, matching the file formats and
the CLI output.
"""


class DrfError(Exception):
    """Base class for all domain errors raised by this package."""

    def payload(self) -> dict:
        """Machine-readable form, used by the CLI error channel."""
        return {"error": type(self).__name__, "message": str(self)}


class NonPositiveLength(DrfError):
    def __init__(self, index: int, kind: str = "s", value: float | None = None):
        self.index = index
        self.kind = kind
        self.value = value
        msg = f"{kind}[{index}] must be strictly positive"
        if value is not None:
            msg += f" (got {value})"
        super().__init__(msg)


class RealizabilityError(DrfError):
    """Frustum block of gap `index` has no real height: a^2 <= (ds)^2 / 3."""

    def __init__(self, index: int, a: float | None = None, ds: float | None = None):
        self.index = index
        self.a = a
        self.ds = ds
        msg = f"gap {index} not realizable: a^2 <= (delta s)^2 / 3"
        if a is not None and ds is not None:
            msg += f" (a={a}, delta_s={ds})"
        super().__init__(msg)


class NotWellCentered(DrfError):
    """Circumcentric dual measures degenerate; the lattice needs a remesh."""

    def __init__(self, block_class: int, detail: str = ""):
        self.block_class = block_class
        msg = f"dual measures non-positive near block class {block_class}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DegenerateCap(DrfError):
    def __init__(self, s: float, lam: float):
        self.s = s
        self.lam = lam
        super().__init__(
            f"cap apex not above face plane: lambda={lam} <= 1/sqrt(3) for rim edge s={s}"
        )


class NotIncident(DrfError):
    def __init__(self, what: str):
        super().__init__(what)


class NonMonotoneKnots(DrfError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"knot positions must be strictly increasing (violated at {index})")


class NoValidCircle(DrfError):
    """Spherical-cap fit impossible; the caller keeps the plain icosahedral cap."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class ZeroEdgeWeight(DrfError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"edge {edge} has zero weight (appears in denominators)")
