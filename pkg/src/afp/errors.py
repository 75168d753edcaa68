"""Exception hierarchy shared by every module."""


class AFPError(Exception):
    """Base class for all toolkit errors."""


class LatticeError(AFPError):
    """A candidate structure is not a finite lattice."""

    def __init__(self, violation):
        super().__init__(violation)
        self.violation = violation


class CapExceeded(AFPError):
    """An exhaustive operation would exceed a configured size cap."""


class ShapeMismatch(AFPError):
    pass


class NotPMonotone(AFPError):
    """A pair function is not monotone for the precision order.

    ``witness`` is a pair of inputs ``(p, q)`` with ``p <=_p q`` whose
    images are not ``<=_p``-related; ``values`` holds those images.
    """

    def __init__(self, witness, values=None):
        p, q = witness
        msg = f"not <=_p-monotone: {p} <=_p {q}"
        if values is not None:
            msg += f" but f{p} = {values[0]}, f{q} = {values[1]}"
        super().__init__(msg)
        self.witness = witness
        self.values = values


class FixpointError(AFPError):
    """Kleene iteration did not stabilise within the lattice height."""


class ProgramSyntaxError(AFPError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
