"""Exception types raised by sicqb."""


class SicqbError(Exception):
    """Base class for all library errors."""


class DimensionError(SicqbError, ValueError):
    """Shapes or dimensions of the inputs do not agree."""


class UnsupportedDimensionError(DimensionError):
    pass


class SicNotFoundError(SicqbError):
    """The fiducial search ran out of restarts without converging."""

    def __init__(self, d, best_residual, restarts):
        self.d = d
        self.best_residual = best_residual
        self.restarts = restarts
        super().__init__(
            f"no SIC fiducial found in d={d} after {restarts} restarts "
            f"(best overlap residual {best_residual:.3e})"
        )


class FundamentalInequalityError(SicqbError):
    """A ground probability fell outside [0, 1]."""

    def __init__(self, outcome, value):
        self.outcome = outcome
        self.value = value
        super().__init__(
            f"fundamental inequality violated at outcome j={outcome}: q(j)={value!r}"
        )


class UndefinedPosteriorError(SicqbError):
    def __init__(self, outcome):
        self.outcome = outcome
        super().__init__(f"outcome j={outcome} has zero total likelihood; posterior undefined")


class DecompositionError(SicqbError):
    def __init__(self, k, residual):
        self.k = k
        self.residual = residual
        super().__init__(
            f"C_k decomposition failed for k={k}: residual {residual:.3e} "
            "(input is probably not a SIC)"
        )


class InconsistentPairError(SicqbError):
    pass


class NotUnitaryError(SicqbError, ValueError):
    pass


class ConstraintError(SicqbError, ValueError):
    """An input violates a defining algebraic constraint."""
