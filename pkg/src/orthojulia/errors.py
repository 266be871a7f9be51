"""Exception hierarchy shared by all modules."""


class OrthoJuliaError(Exception):
    """Base class for every error raised by this package."""


class InvalidGeometryError(OrthoJuliaError, ValueError):
    pass


class InvalidPolynomialError(OrthoJuliaError, ValueError):
    pass


class InvalidMeasureError(OrthoJuliaError, ValueError):
    pass


class MeasureParseError(OrthoJuliaError, ValueError):
    """Malformed measure or sequence file; ``field`` names the offending entry."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class NumericError(OrthoJuliaError, ArithmeticError):
    pass


class PreconditionError(OrthoJuliaError, ValueError):
    pass


class RankDeficiencyError(OrthoJuliaError, ValueError):
    pass


class DegenerateMeasureError(OrthoJuliaError, ValueError):
    def __init__(self, message, degree):
        self.degree = degree
        super().__init__(message)


class EmptySetError(OrthoJuliaError, ValueError):
    pass


class NearSingularityError(OrthoJuliaError, ValueError):
    pass
