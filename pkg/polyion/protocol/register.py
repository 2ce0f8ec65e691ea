"""
Register Module

This module defines MoleculeRegister, the single trapped molecule whose
internal state the protocols query. The register owns the hidden truth and
the random generator used for every stochastic event touching it.
"""

import logging
from typing import Dict, Mapping, Optional, Sequence

import numpy as np

from ..core.errors import ConfigError
from ..molspec.levels import LevelTable
from ..molspec.thermal import thermal_candidates, thermal_populations

logger = logging.getLogger(__name__)

PRIOR_TOLERANCE = 1e-9


class MoleculeRegister:
    """
    One molecule with a hidden internal state

    Protocol code reads the outcomes of measurements only; `truth` is exposed
    for simulation bookkeeping and tests.

    Attributes:
        prior (Dict[int, float]): Population prior over state ids, summing to 1
        rng (np.random.Generator): Generator for projections and classifier noise
        clock (float): Accumulated model time in s
    """

    def __init__(self, truth: int, prior: Mapping[int, float], seed=None):
        total = sum(prior.values())
        if abs(total - 1) > PRIOR_TOLERANCE:
            raise ConfigError(f"prior must sum to 1, got {total}")
        if truth not in prior:
            raise ConfigError(f"state {truth} is outside the prior support")
        self.prior = dict(prior)
        self.rng = np.random.default_rng(seed)
        self.clock = 0.0
        self._truth = int(truth)

    @classmethod
    def thermal(cls, table: LevelTable, T: float, seed=None,
                n_max: Optional[int] = None) -> "MoleculeRegister":
        """
        Register whose truth is drawn from the Boltzmann distribution

        Args:
            table: Solved levels
            T: Rotational temperature in K
            seed: Seed for the draw and every later event
            n_max: Keep only the n_max most populated states, renormalized
        """
        populations = thermal_populations(table, T)
        ids: Sequence[int] = (thermal_candidates(table, T, n_max) if n_max is not None
                              else table.ids)
        weights = populations[list(ids)]
        weights = weights / weights.sum()
        rng = np.random.default_rng(seed)
        truth = int(ids[rng.choice(len(ids), p=weights)])
        register = cls(truth, dict(zip(ids, weights)), seed=rng)
        logger.debug("thermal register over %d states, truth %d", len(ids), truth)
        return register

    @classmethod
    def uniform(cls, ids: Sequence[int], seed=None) -> "MoleculeRegister":
        rng = np.random.default_rng(seed)
        truth = int(ids[rng.integers(len(ids))])
        return cls(truth, {i: 1 / len(ids) for i in ids}, seed=rng)

    @property
    def truth(self) -> int:
        return self._truth

    @property
    def support(self):
        return sorted(i for i, p in self.prior.items() if p > 0)

    def project(self, state_id: int) -> None:
        """Replace the hidden state after a projection or a deterministic swap"""
        self._truth = int(state_id)

    def advance(self, duration: float) -> None:
        self.clock += duration

    def __str__(self) -> str:
        return f"MoleculeRegister({len(self.prior)} prior states, t={self.clock * 1e3:.3f} ms)"
