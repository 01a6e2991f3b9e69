"""
Parameter types shared by the analytic and Monte Carlo paths.
"""

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import config
from utils.errors import DomainError, require


class Mode(str, Enum):
    """Backhaul duplexing mode of an SBS"""
    IBFD = "IBFD"
    OBFD = "OBFD"


class Scheme(str, Enum):
    """Backhaul interference mitigation scheme"""
    NONE = "none"
    IR = "interference-rejection"
    BIA_SERVING = "bia-serving-only"
    BIA_ALL = "bia-all-cns"
    DISTRIBUTED = "distributed-mode-selection"

    @property
    def uses_bia(self) -> bool:
        return self in (Scheme.BIA_SERVING, Scheme.BIA_ALL)


@dataclass(frozen=True)
class NetworkParams:
    """
    Raw deployment parameters (intensities before displacement)

    Fading laws are Gamma(k, 1/k) so the mean fading power is one.
    Shadowing is log-normal with natural-log parameters shadow_mu, shadow_sigma.
    """
    lambda_c_raw: float = 10.0
    lambda_s_raw: float = 50.0
    lambda_u_raw: float = 50.0
    P_c: float = 10.0
    P_s: float = 2.0
    beta: float = 4.0
    xi_db: float = 120.0
    M: int = 500
    S_max: int = 50
    R_th: float = 1.0
    q: float = 0.5
    shadow_mu: float = 1.0
    shadow_sigma: float = 2.0
    k_user: float = 2.0
    k_sbs: float = 0.5
    N0: float = 0.0
    mode_selection_raw_intensities: bool = True

    def __post_init__(self):
        require(self.beta > 2.0, f"beta must exceed 2, got {self.beta}", field='beta')
        require(0.0 <= self.q <= 1.0, f"q must lie in [0, 1], got {self.q}", field='q')
        require(self.M >= 1, f"M must be >= 1, got {self.M}", field='M')
        require(self.S_max >= 1, f"S_max must be >= 1, got {self.S_max}", field='S_max')
        for name in ('lambda_c_raw', 'lambda_s_raw', 'lambda_u_raw', 'P_c', 'P_s', 'k_user', 'k_sbs'):
            value = getattr(self, name)
            require(value > 0.0 and math.isfinite(value), f"{name} must be positive, got {value}", field=name)
        require(self.N0 >= 0.0, f"N0 must be >= 0, got {self.N0}", field='N0')
        require(self.shadow_sigma >= 0.0, f"shadow_sigma must be >= 0, got {self.shadow_sigma}",
                field='shadow_sigma')
        require(self.R_th > 0.0, f"R_th must be positive, got {self.R_th}", field='R_th')

    @classmethod
    def from_defaults(cls, **overrides) -> 'NetworkParams':
        """Baseline deployment from config.NETWORK_DEFAULTS with overrides"""
        values = dict(config.NETWORK_DEFAULTS)
        values.update(overrides)
        return cls(**values)

    @property
    def theta_user(self) -> float:
        return 1.0 / self.k_user

    @property
    def theta_sbs(self) -> float:
        return 1.0 / self.k_sbs

    @property
    def xi_linear(self) -> float:
        return 10.0 ** (self.xi_db / 10.0)

    @property
    def delta(self) -> float:
        """2/beta, the exponent that recurs in every transform"""
        return 2.0 / self.beta


def with_overrides(p: NetworkParams, **changes) -> NetworkParams:
    """Validated copy with some fields replaced"""
    unknown = set(changes) - {f.name for f in dataclasses.fields(NetworkParams)}
    require(not unknown, f"unknown network parameter(s): {', '.join(sorted(unknown))}")
    if 'M' in changes:
        changes['M'] = int(round(changes['M']))
    if 'S_max' in changes:
        changes['S_max'] = int(round(changes['S_max']))
    return dataclasses.replace(p, **changes)


@dataclass(frozen=True)
class MitigationConfig:
    """Active interference mitigation scheme"""
    scheme: Scheme = Scheme.NONE
    tau: Optional[float] = None
    pilot_contamination: bool = False

    def __post_init__(self):
        if not isinstance(self.scheme, Scheme):
            try:
                object.__setattr__(self, 'scheme', Scheme(self.scheme))
            except ValueError:
                raise DomainError(f"unknown mitigation scheme '{self.scheme}'", field='scheme')
        if self.scheme is Scheme.DISTRIBUTED:
            require(self.tau is not None and self.tau > 0.0,
                    "distributed mode selection needs tau > 0", field='tau')


__all__ = [
    'Mode',
    'Scheme',
    'NetworkParams',
    'MitigationConfig',
    'with_overrides',
]
