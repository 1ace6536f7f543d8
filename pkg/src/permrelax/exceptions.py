"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Two matrices that must share a shape do not."""


class NotAPermutationError(ValueError):
    """A matrix or index map fails to describe a permutation."""


class DomainError(ValueError):
    """A scalar argument lies outside the function's domain."""


class TooLargeError(ValueError):
    """Problem size exceeds what an exhaustive routine will attempt."""


class ZeroSumError(ArithmeticError):
    """A row or column sums to zero, so rescaling it is undefined.

    Attributes carry which axis ('row' or 'column') and which index failed.
    """

    def __init__(self, axis, index):
        self.axis = axis
        self.index = int(index)
        super().__init__(f"{axis} {index} sums to zero; cannot rescale")


class CollisionError(ValueError):
    """Row-wise argmax rounding sent two rows to the same column.

    `rows` is the tuple of colliding row indices, `col` the shared column.
    """

    def __init__(self, rows, col):
        self.rows = tuple(int(r) for r in rows)
        self.col = int(col)
        super().__init__(f"rows {self.rows} all round to column {self.col}")


class NoConvergenceError(RuntimeError):
    """Iteration budget exhausted before the tolerance was met.

    The best iterate reached so far is attached as `best`.
    """

    def __init__(self, best, iterations, violation):
        self.best = best
        self.iterations = int(iterations)
        self.violation = float(violation)
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(violation {violation:.3e})"
        )


class OptimizationError(RuntimeError):
    """An optimization run failed; the partial trace is attached."""

    def __init__(self, message, trace):
        self.trace = list(trace)
        super().__init__(message)
