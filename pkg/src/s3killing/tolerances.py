from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by all verdict functions.

    ``eq`` is the scale-free threshold for "this residual is zero";
    ``grouping`` decides when two eigenvalues count as equal (relative to
    the spread of the spectrum); ``rank`` is the relative singular-value
    cutoff used for rank decisions on 3x3 matrices.
    """

    eq: float = 1e-10
    grouping: float = 1e-8
    rank: float = 1e-9
    symmetry: float = 1e-12


DEFAULT = ToleranceConfig()
