"""
CoverageReport, the result type of both evaluation paths.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from utils.errors import require

METHODS = ('analytic-exact', 'analytic-rayleigh', 'analytic-approx', 'montecarlo')

PROBABILITY_FIELDS = (
    'c_access_I', 'c_access_O', 'c_backhaul_I', 'c_backhaul_O', 'c_I', 'c_O', 'c_u',
)


@dataclass
class CoverageReport:
    """Per-mode access/backhaul coverage and the typical-user mixture"""
    c_access_I: float
    c_access_O: float
    c_backhaul_I: float
    c_backhaul_O: float
    c_I: float
    c_O: float
    c_u: float
    method: str
    q: float
    error: float = 0.0
    half_widths: Dict[str, float] = field(default_factory=dict)
    drops: Optional[int] = None
    resampled: Optional[int] = None
    flags: List[str] = field(default_factory=list)

    def __post_init__(self):
        require(self.method in METHODS, f"unknown coverage method '{self.method}'")
        for name in PROBABILITY_FIELDS:
            value = getattr(self, name)
            require(-1e-12 <= value <= 1.0 + 1e-12, f"{name}={value} is not a probability")
            setattr(self, name, min(1.0, max(0.0, float(value))))

    @classmethod
    def compose(cls, c_access_I: float, c_access_O: float, c_backhaul_I: float,
                c_backhaul_O: float, q: float, method: str, **extra) -> 'CoverageReport':
        """Per-mode products and the q-mixture"""
        c_I = c_access_I * c_backhaul_I
        c_O = c_access_O * c_backhaul_O
        return cls(
            c_access_I=c_access_I,
            c_access_O=c_access_O,
            c_backhaul_I=c_backhaul_I,
            c_backhaul_O=c_backhaul_O,
            c_I=c_I,
            c_O=c_O,
            c_u=q * c_I + (1.0 - q) * c_O,
            method=method,
            q=q,
            **extra,
        )

    def probabilities(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in PROBABILITY_FIELDS}


__all__ = ['CoverageReport', 'METHODS', 'PROBABILITY_FIELDS']
