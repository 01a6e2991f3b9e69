"""
Per-drop SINR evaluation for the typical user and its serving SBS.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

import config
from network.model import backhaul_access_prob, backhaul_threshold, combinatorial_access_prob
from network.params import MitigationConfig, Mode, NetworkParams, Scheme
from simulation.topology import Topology
from utils.errors import require

logger = logging.getLogger(__name__)


@dataclass
class DropResult:
    """SINRs, thresholds and coverage indicators of one drop"""
    sinr_access_I: float
    sinr_access_O: float
    sir_backhaul_I: float
    sir_backhaul_O: float
    threshold_backhaul_I: float
    threshold_backhaul_O: float
    access_I: bool
    access_O: bool
    backhaul_I: bool
    backhaul_O: bool
    r_su: float
    r_cs: float
    load: int
    alpha: float
    tagged_mode: Mode
    selected_mode: Optional[Mode] = None
    bia_power: Optional[float] = None
    n_cn: int = 0
    n_sbs: int = 0
    index: Optional[int] = None
    flags: List[str] = field(default_factory=list)

    def covered(self, mode: Mode) -> bool:
        if mode is Mode.IBFD:
            return self.access_I and self.backhaul_I
        return self.access_O and self.backhaul_O

    def to_record(self) -> Dict[str, Any]:
        record = dataclasses.asdict(self)
        for key, value in record.items():
            if isinstance(value, Mode):
                record[key] = value.value
            elif isinstance(value, (np.floating, np.integer, np.bool_)):
                record[key] = value.item()
        return record


def bia_stream_powers(gain, interference, threshold, P_c: float, margin: Optional[float] = None):
    """
    Reduced IBFD stream powers, min(P_c, gamma_b,I I_agg / g)

    gain is S r^-beta of the desired link and interference the aggregate
    measured at full power. The margin keeps the reduced stream strictly
    above the threshold in floating point.
    """
    margin = config.SIMULATION_SETTINGS['bia_margin'] if margin is None else margin
    gain = np.asarray(gain, dtype=float)
    require(bool(np.all(gain > 0.0)), "BIA needs a positive desired-link gain")
    power = np.asarray(threshold, dtype=float) * np.asarray(interference, dtype=float) / gain * (1.0 + margin)
    return np.minimum(P_c, power)


def select_mode(t: Topology, p: NetworkParams, tau: float) -> Mode:
    """
    Received-power mode rule for the tagged SBS

    IBFD when P_s r_s^-beta / (P_c r_c^-beta) >= tau, path loss only,
    r_c the distance to the nearest CN.
    """
    require(tau > 0.0, f"tau must be positive, got {tau}", field='tau')
    require(t.is_associated, "mode selection needs an associated topology")
    r_cu, r_su = t.user_distances()
    ratio = (p.P_s * r_su[t.serving_sbs] ** (-p.beta)) / (p.P_c * r_cu.min() ** (-p.beta))
    return Mode.IBFD if ratio >= tau else Mode.OBFD


def _cn_interference(power: np.ndarray, g_cs: np.ndarray, serving_cn: np.ndarray) -> np.ndarray:
    """Per-SBS sum of CN-originated power from every CN but its own"""
    total = power @ g_cs
    own = power[serving_cn] * g_cs[serving_cn, np.arange(g_cs.shape[1])]
    return np.maximum(total - own, 0.0)


def _ratio(signal: float, interference: float) -> float:
    return math.inf if interference <= 0.0 else float(signal / interference)


def _pilot_weights(t: Topology, p: NetworkParams) -> np.ndarray:
    """(M - m + 1) / m for CNs sharing the tagged pilot, zero otherwise"""
    m = np.minimum(t.load, p.S_max).astype(float)
    reuse = (t.load > 0) & (t.pilot_draw < np.minimum(1.0, m / p.S_max))
    weights = np.zeros(t.n_cn)
    weights[reuse] = (p.M - m[reuse] + 1.0) / m[reuse]
    return weights


def evaluate_drop(t: Topology, p: NetworkParams, m: Optional[MitigationConfig] = None,
                  sinr_gating: bool = False) -> DropResult:
    """
    Access SINR and backhaul SIR of the tagged SBS in both modes

    Args:
        t: Associated topology
        p: Network parameters
        m: Mitigation scheme and pilot-contamination flag
        sinr_gating: Interfering SBSs must also pass their own backhaul SIR

    Returns:
        DropResult with both mode variants evaluated
    """
    m = m or MitigationConfig()
    require(t.is_associated, "evaluate_drop needs an associated topology")
    beta = p.beta
    s0 = t.serving_sbs
    c0 = int(t.serving_cn[s0])
    sbs_index = np.arange(t.n_sbs)
    flags = []

    # path gains with shadowing, fading on the SBS links
    r_cu, r_su = t.user_distances()
    g_su = t.shadow_su * t.fading_su * r_su ** (-beta)
    g_cu = t.shadow_cu * r_cu ** (-beta)
    g_cs = t.shadow_cs * t.cn_sbs_distances() ** (-beta)
    g_ss = t.shadow_ss * t.fading_ss * t.sbs_sbs_distances() ** (-beta)
    own_gain = g_cs[t.serving_cn, sbs_index]

    # tagged mode, overridden by the received-power rule
    ibfd = t.ibfd.copy()
    tagged_mode = Mode.IBFD if ibfd[s0] else Mode.OBFD
    selected = None
    if m.scheme is Scheme.DISTRIBUTED:
        selected = select_mode(t, p, m.tau)
        tagged_mode = selected
        ibfd[s0] = selected is Mode.IBFD

    i_si = p.P_s / p.xi_linear
    full_power = np.full(t.n_cn, p.P_c)
    pilot = _pilot_weights(t, p) if m.pilot_contamination else np.zeros(t.n_cn)
    if m.pilot_contamination:
        flags.append("pilot_contamination")

    # full-power backhaul interference at every SBS
    active = t.served.copy()
    i_ss_full = p.P_s * ((active & ibfd) @ g_ss)
    i_cs_full = _cn_interference(full_power * (1.0 + pilot), g_cs, t.serving_cn)

    # per-SBS thresholds at each serving CN load
    needs_thresholds = sinr_gating or m.scheme.uses_bia
    if needs_thresholds:
        th_I = np.asarray(backhaul_threshold(t.load[t.serving_cn], p, Mode.IBFD), dtype=float).reshape(-1)
        th_O = np.asarray(backhaul_threshold(t.load[t.serving_cn], p, Mode.OBFD), dtype=float).reshape(-1)

    if sinr_gating:
        with np.errstate(divide='ignore'):
            own_sir = p.P_c * own_gain / (i_ss_full + i_cs_full + np.where(ibfd, i_si, 0.0))
        passed = own_sir > np.where(ibfd, th_I, th_O)
        active = active & (passed | (sbs_index == s0))
        i_ss_full = p.P_s * ((active & ibfd) @ g_ss)
        flags.append("sinr_gating")

    # BIA: reduced IBFD stream powers, averaged per CN
    cn_power = full_power
    stream_power = None
    if m.scheme.uses_bia:
        streams = active.copy()
        streams[s0] = True
        ibfd_streams = streams & ibfd
        ibfd_streams[s0] = True
        interference = i_ss_full + i_cs_full + i_si
        stream_power = np.where(
            ibfd_streams,
            bia_stream_powers(own_gain, interference, th_I, p.P_c),
            p.P_c,
        )
        counts = np.bincount(t.serving_cn[streams], minlength=t.n_cn)
        sums = np.bincount(t.serving_cn[streams], weights=stream_power[streams], minlength=t.n_cn)
        reduced = counts > 0
        if m.scheme is Scheme.BIA_SERVING:
            reduced = np.zeros(t.n_cn, dtype=bool)
            reduced[c0] = True
        cn_power = np.where(reduced, sums / np.maximum(counts, 1), p.P_c)
        flags.append(m.scheme.value)

    # access link of the typical user
    others = active & (sbs_index != s0)
    signal = p.P_s * g_su[s0]
    i_su_I = p.P_s * g_su[others & ibfd].sum()
    i_su_O = p.P_s * g_su[others & ~ibfd].sum()
    cn_terms = cn_power * g_cu
    if m.scheme is Scheme.IR:
        cn_terms = cn_terms.copy()
        cn_terms[c0] = 0.0
        flags.append(m.scheme.value)
    sinr_access_I = _ratio(signal, i_su_I + cn_terms.sum() + p.N0)
    sinr_access_O = _ratio(signal, i_su_O + p.N0)

    # backhaul link of the tagged SBS
    desired = own_gain[s0]
    i_ss = p.P_s * float((others & ibfd) @ g_ss[:, s0])
    interferer_power = cn_power * (1.0 + pilot)
    i_cs = float(interferer_power @ g_cs[:, s0] - interferer_power[c0] * desired)
    i_cs = max(i_cs, 0.0)
    bia_power = float(stream_power[s0]) if stream_power is not None else None
    desired_I = (bia_power if bia_power is not None else p.P_c) * desired
    sir_backhaul_I = desired_I / (i_ss + i_cs + i_si)
    sir_backhaul_O = _ratio(p.P_c * desired, i_ss + i_cs)

    # load-dependent thresholds and backhaul access share
    load = int(t.load[c0])
    thresholds = backhaul_threshold(load, p, Mode.IBFD), backhaul_threshold(load, p, Mode.OBFD)
    alpha = float(t.served[t.serving_cn == c0].mean())
    assert math.isclose(alpha, backhaul_access_prob(load, p.S_max), rel_tol=1e-12), \
        f"realised backhaul access {alpha} disagrees with min(1, S/N) at N={load}"
    assert math.isclose(alpha, combinatorial_access_prob(load, p.S_max), rel_tol=1e-12), \
        f"realised backhaul access {alpha} disagrees with the subset count at N={load}"

    # OBFD halves the bandwidth
    gamma_aI = 2.0 ** p.R_th - 1.0
    gamma_aO = 2.0 ** (2.0 * p.R_th) - 1.0
    return DropResult(
        sinr_access_I=float(sinr_access_I),
        sinr_access_O=float(sinr_access_O),
        sir_backhaul_I=float(sir_backhaul_I),
        sir_backhaul_O=float(sir_backhaul_O),
        threshold_backhaul_I=float(thresholds[0]),
        threshold_backhaul_O=float(thresholds[1]),
        access_I=bool(sinr_access_I > gamma_aI),
        access_O=bool(sinr_access_O > gamma_aO),
        backhaul_I=bool(sir_backhaul_I > thresholds[0]),
        backhaul_O=bool(sir_backhaul_O > thresholds[1]),
        r_su=float(r_su[s0]),
        r_cs=float(np.hypot(*(t.cn_xy[c0] - t.sbs_xy[s0]))),
        load=load,
        alpha=alpha,
        tagged_mode=tagged_mode,
        selected_mode=selected,
        bia_power=bia_power,
        n_cn=t.n_cn,
        n_sbs=t.n_sbs,
        flags=flags,
    )


__all__ = [
    'DropResult',
    'bia_stream_powers',
    'select_mode',
    'evaluate_drop',
]
