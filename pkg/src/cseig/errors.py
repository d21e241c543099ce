"""Exception hierarchy shared by the solver modules and the CLI."""


class CSEigError(Exception):
    """Base class for all solver errors."""


class BreakdownError(CSEigError):
    """A complex-orthogonal transformation hit an (almost) isotropic vector."""


class IsotropicBreakdown(BreakdownError):
    def __init__(self, step=None, ratio=None):
        self.step = step
        self.ratio = ratio
        msg = "isotropic Householder vector: <v,v>_* vanishes"
        if step is not None:
            msg += f" at reduction step {step}"
        if ratio is not None:
            msg += f" (|<v,v>_*|/|v|^2 = {ratio:.3e})"
        super().__init__(msg)


class RotationBreakdown(BreakdownError):
    def __init__(self, position=None, ratio=None):
        self.position = position
        self.ratio = ratio
        msg = "isotropic rotation radicand c^2 + s^2 vanishes"
        if position is not None:
            msg += f" at position {position}"
        if ratio is not None:
            msg += f" (relative size {ratio:.3e})"
        super().__init__(msg)


class NoConvergence(CSEigError):
    def __init__(self, index=None, iterations=None, what="eigenvalue"):
        self.index = index
        self.iterations = iterations
        msg = f"{what} did not converge"
        if index is not None:
            msg += f" (index {index})"
        if iterations is not None:
            msg += f" after {iterations} iterations"
        super().__init__(msg)


class NotSymmetricError(CSEigError, ValueError):
    """Input matrix is not complex symmetric within tolerance."""


class NonFiniteError(CSEigError, ValueError):
    """Input or intermediate values contain NaN or Inf."""
