from typing import Any, List, Optional, Sequence


class ToricError(Exception):
    exit_code = 2


class ParseError(ToricError):
    exit_code = 1

    def __init__(self, message: str, source: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.source = source

    def __str__(self) -> str:
        if self.source:
            return f"{self.source}: {self.message}"
        return self.message


class PreconditionError(ToricError):
    exit_code = 2


class ConsistencyError(ToricError):
    "An identity that holds for every valid input failed to verify."
    exit_code = 3


class DimensionError(PreconditionError):
    pass


class PolynomialError(PreconditionError):
    pass


class FanValidationError(PreconditionError):
    def __init__(self, diagnostics: Sequence[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)

    def __str__(self) -> str:
        return "invalid fan:\n" + "\n".join(f"  {d}" for d in self.diagnostics)


class NotAConeError(PreconditionError):
    def __init__(self, rays: Sequence[int]):
        super().__init__(rays)
        self.rays = tuple(rays)

    def __str__(self) -> str:
        return f"rays {_one_based(self.rays)} do not span a cone of the fan"


class PoleError(PreconditionError):
    def __init__(self, cone: Sequence[int]):
        super().__init__(cone)
        self.cone = tuple(cone)

    def __str__(self) -> str:
        return f"zero denominator in the term of cone {_one_based(self.cone)}"


class NotSimpleError(PreconditionError):
    def __init__(self, point: Sequence[Any], active: Sequence[int]):
        super().__init__(point, active)
        self.point = tuple(point)
        self.active = tuple(active)

    def __str__(self) -> str:
        coords = ", ".join(str(c) for c in self.point)
        return (
            f"vertex ({coords}) is not simple: "
            f"active facets {_one_based(self.active)}"
        )


class UnboundedError(PreconditionError):
    pass


class EmptyPolytopeError(PreconditionError):
    pass


class NotASimplexError(PreconditionError):
    pass


class WallNotActiveError(PreconditionError):
    pass


class NotPrimitiveError(PreconditionError):
    def __init__(self, rays: Sequence[int]):
        super().__init__(rays)
        self.rays = tuple(rays)

    def __str__(self) -> str:
        return f"rays {_one_based(self.rays)} are not a primitive collection"


class NonlinearFactorError(PreconditionError):
    def __init__(self, collection: Sequence[int], factor: str):
        super().__init__(collection, factor)
        self.collection = tuple(collection)
        self.factor = factor

    def __str__(self) -> str:
        return (
            f"primitive collection {_one_based(self.collection)} has the "
            f"nonlinear factor {self.factor}; use the factored-cover output"
        )


class NotBarFanError(PreconditionError):
    pass


class NotAPolygonError(PreconditionError):
    pass


class ConvergenceError(PreconditionError):
    def __init__(self, iterations: int, last_iterate: List[float]):
        super().__init__(iterations, last_iterate)
        self.iterations = iterations
        self.last_iterate = list(last_iterate)

    def __str__(self) -> str:
        return (
            f"no convergence after {self.iterations} iterations, "
            f"last iterate {self.last_iterate}"
        )


def _one_based(indices: Sequence[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in indices) + "}"
