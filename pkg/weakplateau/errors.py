"""Named failures raised across the toolkit."""


class PlateauError(Exception):
    """Base class for every toolkit error."""


# Input problems (CLI exit code 2)

class InvalidCurve(PlateauError, ValueError):
    pass


class CurvesTooClose(PlateauError, ValueError):
    pass


class OnSurface(PlateauError, ValueError):
    pass


class DegenerateHull(PlateauError, ValueError):
    pass


class PointNotOnHull(PlateauError, ValueError):
    pass


class RoutingFailed(PlateauError, ValueError):
    pass


class HookNotSimple(PlateauError, ValueError):
    pass


class SideAmbiguous(PlateauError, ValueError):
    pass


class BoundaryOutsideRegion(PlateauError, ValueError):
    pass


class SpliceSelfIntersect(PlateauError, ValueError):
    pass


class SchemaError(PlateauError, ValueError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class MalformedObj(PlateauError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"{message} (line {line})" if line is not None else message)


# Numerical and verification failures

class NonIntegerResult(PlateauError, RuntimeError):
    pass


class AllInterior(PlateauError, RuntimeError):
    pass


class NonConvergence(PlateauError, RuntimeError):
    """Solver hit max_iterations with a large residual; the mesh is kept."""

    def __init__(self, message, mesh=None, stats=None):
        super().__init__(message)
        self.mesh = mesh
        self.stats = stats


class CarveFailed(PlateauError, RuntimeError):
    pass


class WeldFailed(PlateauError, RuntimeError):
    pass


class NotClosed(PlateauError, RuntimeError):
    pass


class NotEmbedded(PlateauError, RuntimeError):
    pass


VERIFICATION_ERRORS = (CarveFailed, WeldFailed, NotClosed, NotEmbedded)
