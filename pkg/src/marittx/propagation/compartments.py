"""Compartments and node-state containers for the propagation model.

Every infrastructure node is in exactly one of six conditions: Susceptible,
Exposed (compromised but dormant), Resistant (hardened or cleaned), Degraded
(actively attacked, partial service), Unavailable (service down), Destroyed
(needs rebuild). Mean-field mode tracks per-node occupancy fractions over the
six compartments; agent mode tracks one discrete label per node.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

SUM_TOL = 1e-9       # per-node occupancy must sum to 1 within this
NEG_TOL = 1e-12      # occupancies below -NEG_TOL are an integration failure

S, E, R, D, U, X = range(6)


class Compartment(IntEnum):
    """Node condition; integer values index occupancy vectors."""

    S = 0  # Susceptible
    E = 1  # Exposed
    R = 2  # Resistant
    D = 3  # Degraded
    U = 4  # Unavailable
    X = 5  # Destroyed


COMPARTMENTS = tuple(Compartment)
LETTERS = tuple(c.name for c in COMPARTMENTS)


class Mode(str, Enum):
    MEAN_FIELD = "meanfield"
    AGENT = "agent"


class StateError(ValueError):
    """Raised for malformed compartment states."""


@dataclass
class CompartmentState:
    """Per-node compartment occupancy at a simulation time (hours).

    ``occupancy`` is an (n, 6) float array in MEAN_FIELD mode; ``labels`` is an
    (n,) int8 array of Compartment values in AGENT mode. Exactly one of the two
    is set.
    """

    mode: Mode
    time: float
    occupancy: np.ndarray | None = None
    labels: np.ndarray | None = None

    @classmethod
    def mean_field(cls, occupancy: np.ndarray, time: float = 0.0) -> "CompartmentState":
        state = cls(Mode.MEAN_FIELD, float(time), occupancy=np.asarray(occupancy, dtype=np.float64))
        state.validate()
        return state

    @classmethod
    def agent(cls, labels, time: float = 0.0) -> "CompartmentState":
        arr = np.asarray(
            [int(l) for l in labels] if not isinstance(labels, np.ndarray) else labels,
            dtype=np.int8,
        )
        state = cls(Mode.AGENT, float(time), labels=arr)
        state.validate()
        return state

    @classmethod
    def uniform(cls, n_nodes: int, compartment: Compartment, mode: Mode,
                time: float = 0.0) -> "CompartmentState":
        """All nodes in a single compartment."""
        if mode is Mode.AGENT:
            return cls.agent(np.full(n_nodes, int(compartment), dtype=np.int8), time)
        occ = np.zeros((n_nodes, 6), dtype=np.float64)
        occ[:, int(compartment)] = 1.0
        return cls.mean_field(occ, time)

    @property
    def n_nodes(self) -> int:
        arr = self.occupancy if self.mode is Mode.MEAN_FIELD else self.labels
        return int(arr.shape[0])

    def validate(self) -> None:
        if self.time < 0:
            raise StateError(f"time must be >= 0, got {self.time}")
        if self.mode is Mode.MEAN_FIELD:
            occ = self.occupancy
            if occ is None or occ.ndim != 2 or occ.shape[1] != 6:
                raise StateError("mean-field occupancy must be an (n, 6) array")
            if not np.all(np.isfinite(occ)):
                raise StateError("occupancy contains non-finite values")
            if occ.min(initial=0.0) < -NEG_TOL:
                raise StateError(f"negative occupancy beyond tolerance: {occ.min()}")
            sums = occ.sum(axis=1)
            worst = np.abs(sums - 1.0).max(initial=0.0)
            if worst > SUM_TOL:
                raise StateError(f"per-node occupancy does not sum to 1 (max drift {worst:.3e})")
        else:
            labels = self.labels
            if labels is None or labels.ndim != 1:
                raise StateError("agent labels must be an (n,) array")
            if labels.size and (labels.min() < 0 or labels.max() > 5):
                raise StateError("agent labels must be Compartment values 0..5")

    def as_occupancy(self) -> np.ndarray:
        """(n, 6) occupancy fractions; agent labels become one-hot indicators."""
        if self.mode is Mode.MEAN_FIELD:
            return self.occupancy
        onehot = np.zeros((self.labels.shape[0], 6), dtype=np.float64)
        onehot[np.arange(self.labels.shape[0]), self.labels.astype(np.int64)] = 1.0
        return onehot

    def copy(self) -> "CompartmentState":
        return CompartmentState(
            self.mode,
            self.time,
            occupancy=None if self.occupancy is None else self.occupancy.copy(),
            labels=None if self.labels is None else self.labels.copy(),
        )
