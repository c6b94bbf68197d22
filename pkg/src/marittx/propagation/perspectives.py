"""The three monitored perspectives and trajectory containers.

Every sampled instant reports (i) the network situation as a global
compartment histogram plus a scalar healthy fraction, (ii) the level of
service availability, and (iii) the overall cyber risk posture. Formula
weights are defaults and can be overridden per scenario.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .compartments import LETTERS, CompartmentState, Mode
from .params import PropagationParams

# Availability contribution per compartment, order S, E, R, D, U, X.
DEFAULT_AVAILABILITY = (1.0, 0.9, 1.0, 0.4, 0.0, 0.0)
DEFAULT_RISK_COMPROMISED = 0.6
DEFAULT_RISK_THREAT = 0.4


class PerspectiveError(ValueError):
    """Raised for invalid perspective weight overrides."""


@dataclass(frozen=True)
class PerspectiveWeights:
    availability: tuple[float, ...] = DEFAULT_AVAILABILITY
    risk_compromised: float = DEFAULT_RISK_COMPROMISED
    risk_threat: float = DEFAULT_RISK_THREAT

    def __post_init__(self):
        if len(self.availability) != 6:
            raise PerspectiveError("availability weights must cover all 6 compartments")
        for value in self.availability:
            if not 0.0 <= value <= 1.0:
                raise PerspectiveError(f"availability weight out of [0, 1]: {value}")
        for value in (self.risk_compromised, self.risk_threat):
            if not 0.0 <= value <= 1.0:
                raise PerspectiveError(f"risk weight out of [0, 1]: {value}")

    @classmethod
    def from_wire(cls, mapping) -> "PerspectiveWeights":
        if mapping is None:
            return cls()
        availability = list(DEFAULT_AVAILABILITY)
        for letter, value in mapping.get("availability", {}).items():
            if letter not in LETTERS:
                raise PerspectiveError(f"unknown compartment in availability weights: {letter}")
            availability[LETTERS.index(letter)] = float(value)
        risk = mapping.get("risk", {})
        return cls(
            availability=tuple(availability),
            risk_compromised=float(risk.get("compromised", DEFAULT_RISK_COMPROMISED)),
            risk_threat=float(risk.get("threat", DEFAULT_RISK_THREAT)),
        )

    def to_wire(self) -> dict:
        return {
            "availability": dict(zip(LETTERS, self.availability)),
            "risk": {"compromised": self.risk_compromised, "threat": self.risk_threat},
        }


@dataclass(frozen=True)
class PerspectiveSnapshot:
    time: float
    histogram: tuple[float, ...]       # node-uniform mean occupancy, order S..X
    healthy_fraction: float
    service_availability: float
    cyber_risk: float

    def to_wire(self) -> dict:
        return {
            "time": self.time,
            "networkSituation": {
                "histogram": dict(zip(LETTERS, self.histogram)),
                "healthyFraction": self.healthy_fraction,
            },
            "serviceAvailability": self.service_availability,
            "cyberRisk": self.cyber_risk,
        }

    @classmethod
    def from_wire(cls, doc) -> "PerspectiveSnapshot":
        situation = doc["networkSituation"]
        return cls(
            time=float(doc["time"]),
            histogram=tuple(float(situation["histogram"][letter]) for letter in LETTERS),
            healthy_fraction=float(situation["healthyFraction"]),
            service_availability=float(doc["serviceAvailability"]),
            cyber_risk=float(doc["cyberRisk"]),
        )


def compute_perspectives(state: CompartmentState, topology, params: PropagationParams,
                         weights: PerspectiveWeights | None = None) -> PerspectiveSnapshot:
    """Evaluate the three monitored perspectives for one state."""
    weights = weights or PerspectiveWeights()
    occ = state.as_occupancy()
    hist = occ.mean(axis=0)
    healthy = float(hist[0] + hist[2])
    availability = float(
        topology.service_weights() @ (occ @ np.asarray(weights.availability))
    )
    compromised = float(hist[1] + hist[3] + hist[4] + hist[5])
    risk = weights.risk_compromised * compromised + (
        weights.risk_threat * params.threat_level * float(hist[0])
    )
    return PerspectiveSnapshot(
        time=state.time,
        histogram=tuple(float(v) for v in hist),
        healthy_fraction=min(max(healthy, 0.0), 1.0),
        service_availability=min(max(availability, 0.0), 1.0),
        cyber_risk=min(max(risk, 0.0), 1.0),
    )


@dataclass
class Trajectory:
    """One simulation run: perspective samples plus the final state."""

    run_id: int
    mode: Mode
    seed: int | None
    samples: list[PerspectiveSnapshot]
    final_state: CompartmentState
    raw_states: list[CompartmentState] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.run_id < 1:
            raise ValueError(f"run_id must be >= 1, got {self.run_id}")
        times = [snap.time for snap in self.samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("sample times must be strictly increasing")

    def to_wire(self) -> dict:
        return {
            "runId": self.run_id,
            "mode": self.mode.value,
            "seed": self.seed,
            "samples": [snap.to_wire() for snap in self.samples],
        }

    def availability_series(self) -> list[float]:
        return [snap.service_availability for snap in self.samples]

    def risk_series(self) -> list[float]:
        return [snap.cyber_risk for snap in self.samples]
