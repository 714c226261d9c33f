from __future__ import annotations


class PathSeriesError(Exception):
    """Base class for every error raised by pathseries."""


class NonUnitConstantTerm(PathSeriesError, ArithmeticError):
    pass


class InexactDivision(PathSeriesError, ArithmeticError):
    pass


class NonIntegralGrading(PathSeriesError, ArithmeticError):
    """lambda - WT(b) did not land on nonnegative integer alpha-coordinates."""


class NonTerminating(PathSeriesError, ArithmeticError):
    pass


class NoGroundElement(PathSeriesError, ValueError):
    pass


class UnsupportedWeight(PathSeriesError, ValueError):
    pass


class InvalidDivisor(PathSeriesError, ValueError):
    pass


class RepresentativeDependence(PathSeriesError, ArithmeticError):
    pass


class MatrixMismatch(PathSeriesError, ArithmeticError):
    def __init__(self, cells: list[tuple[int, int, tuple[int, int], tuple[int, int]]]):
        self.cells = cells
        preview = ", ".join(
            f"({r},{c}): computed x^{got[0]}q^{got[1]} vs displayed x^{want[0]}q^{want[1]}"
            for r, c, got, want in cells[:8]
        )
        super().__init__(f"{len(cells)} matrix cells differ under every index reading: {preview}")


class WindowNotStable(PathSeriesError, RuntimeError):
    pass


class UnknownIdentity(PathSeriesError, ValueError):
    pass


class UnknownSeries(PathSeriesError, ValueError):
    pass
