"""Exception hierarchy for modblob."""


class ModblobError(Exception):
    """Base class for every error raised by this package."""


class InvalidDiagram(ModblobError):
    """An operation that needs a structurally valid diagram got a broken one."""

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(str(v) for v in self.violations[:3]) or "invalid diagram"
        super().__init__(msg)


class OrientationInconsistent(ModblobError):
    pass


class NotFillable(ModblobError):
    """Some face of the oriented doodle would get a negative multiplicity."""

    def __init__(self, faces, message="doodle does not bound an immersed blob"):
        self.faces = faces
        super().__init__(message)


class BaseMismatch(ModblobError):
    pass


class UnorientedInput(ModblobError):
    pass


class NotEmbedded(ModblobError):
    pass


class IllegalMove(ModblobError):
    pass


class NormalizationStuck(ModblobError):
    pass


class DepthExceeded(ModblobError):
    """Bounded search ran out of depth: inconclusive, not a proof of inequivalence."""


class TripleRootDetected(ModblobError):
    def __init__(self, theta, message=None):
        self.theta = theta
        super().__init__(message or f"zero of multiplicity >= 3 near theta={float(theta):.6g}")


class NonTransversalDiscriminantCrossing(ModblobError):
    def __init__(self, theta, message=None):
        self.theta = theta
        super().__init__(message or f"family touches the discriminant non-transversally near theta={float(theta):.6g}")


class BasepointViolation(ModblobError):
    pass


class PrecisionExhausted(ModblobError):
    pass


class GenericityViolation(ModblobError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations[:3]))


class EventCollision(ModblobError):
    """Two events closer than the separation tolerance; perturb the input."""

    def __init__(self, theta_a, theta_b):
        self.thetas = (theta_a, theta_b)
        super().__init__(
            f"events at theta={float(theta_a):.6g} and theta={float(theta_b):.6g} collide; "
            "perturb the input so that every fiber carries at most one event")
