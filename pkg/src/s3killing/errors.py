"""Exception types raised by the library."""


class KillingError(ValueError):
    """Base class for all domain errors."""


class SymmetryViolation(KillingError):
    def __init__(self, which: str, residual: float):
        self.which = which
        self.residual = float(residual)
        super().__init__(f"{which} symmetry violated (max residual {residual:.3e})")


class BianchiViolation(SymmetryViolation):
    def __init__(self, residual: float):
        super().__init__("Bianchi", residual)


class NotDiagonalisable(KillingError):
    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"tensor is not diagonalisable (residual {residual:.3e})")


class RankOne(KillingError):
    pass


class NotOnVariety(KillingError):
    pass


class SingularPoint(KillingError):
    pass


class NotSpecial(KillingError):
    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"Weyl part does not vanish (norm {residual:.3e})")


class DegenerateChartPoint(KillingError):
    pass


class AllEqual(KillingError):
    pass


class InvalidLine(KillingError):
    pass
