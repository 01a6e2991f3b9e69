import csv
import dataclasses
from io import StringIO

import numpy as np
import pytest

from network.model import derive_model
from network.params import NetworkParams
from simulation.topology import Topology, associate


@pytest.fixture
def defaults():
    return NetworkParams.from_defaults()


@pytest.fixture
def rayleigh():
    """Baseline deployment with Rayleigh access fading and no noise"""
    return NetworkParams.from_defaults(k_user=1.0, N0=0.0)


@pytest.fixture
def rayleigh_model(rayleigh):
    return derive_model(rayleigh)


def make_topology(p, cn_xy, sbs_xy, ibfd=None, served_priority=None):
    """Hand-placed drop with unit shadowing and fading"""
    cn_xy = np.asarray(cn_xy, dtype=float).reshape(-1, 2)
    sbs_xy = np.asarray(sbs_xy, dtype=float).reshape(-1, 2)
    n_cn, n_sbs = len(cn_xy), len(sbs_xy)
    t = Topology(
        region_radius=10.0,
        cn_xy=cn_xy,
        sbs_xy=sbs_xy,
        ibfd=np.ones(n_sbs, dtype=bool) if ibfd is None else np.asarray(ibfd, dtype=bool),
        shadow_cu=np.ones(n_cn),
        shadow_su=np.ones(n_sbs),
        shadow_cs=np.ones((n_cn, n_sbs)),
        shadow_ss=np.ones((n_sbs, n_sbs)),
        fading_su=np.ones(n_sbs),
        fading_ss=np.ones((n_sbs, n_sbs)),
        priority=np.arange(n_sbs, dtype=float) if served_priority is None else np.asarray(served_priority),
        pilot_draw=np.zeros(n_cn),
    )
    return associate(t, p)


def replace_model(d, **changes):
    return dataclasses.replace(d, **changes)


def read_rows(content):
    """Parse a result CSV back into dicts, skipping '#' comment lines"""
    lines = [line for line in content.splitlines() if not line.startswith('#')]
    return list(csv.DictReader(StringIO("\n".join(lines))))
