"""Commutative limit of the two-dimensional gauge vacuum."""

from __future__ import annotations

import logging
import math

import numpy as np

from moyal_lab.errors import DomainError
from moyal_lab.gauge.model import GaugeModel
from moyal_lab.gauge.sequences import vacuum_sequence_2d
from moyal_lab.models import CommutativeLimitRow
from moyal_lab.moyal.params import MoyalParams

logger = logging.getLogger(__name__)


def limit_kappa(omega: float, theta: float) -> float:
    """κ(Ω) = −Ω√2/θ, the choice that keeps u_m continuous at Ω = 0."""
    return -omega * math.sqrt(2.0) / theta


def commutative_limit_check(omega_list, theta: float = 1.0, m_max: int = 10) -> list[CommutativeLimitRow]:
    """max_m |u_m − m/θ| and its ratio to Ω for each Ω in the sweep."""
    params = MoyalParams(theta=theta, dim=2)
    rows: list[CommutativeLimitRow] = []
    for omega in omega_list:
        omega = float(omega)
        if not 0.0 < omega <= 0.1:
            raise DomainError(f"commutative limit needs omega in (0, 0.1], got {omega}")
        kappa = limit_kappa(omega, theta)
        seq = vacuum_sequence_2d(GaugeModel(params, omega2=omega * omega, kappa=kappa), m_max=m_max)
        m = np.arange(m_max + 1)
        defect = float(np.abs(np.asarray(seq.u) - m / theta).max())
        rows.append(CommutativeLimitRow(omega=omega, kappa=kappa, max_defect=defect,
                                        scaled_defect=defect / omega))
        logger.debug("commutative limit: omega=%g defect=%.3e", omega, defect)
    return rows
