"""Propagation rates and the event/course delta mechanism.

Transition structure (all rates per hour):

    S --lambda--> E      exposure via contacts (see force_of_infection)
    S --eta-----> R      proactive hardening
    E --sigma---> D      activation of the compromise
    E --alpha---> R      early detection and cleanup
    D --upsilon-> U      degradation saturates into outage
    D --rho-----> R      containment
    U --xi------> X      destruction of the asset
    U --gamma---> R      restoration from backup
    X --nu------> S      rebuild from scratch
    R --omega---> S      hardening wanes

``kappa_e`` scales how infectious E is relative to D; ``threat_level`` is the
scenario-driven attacker intensity feeding the risk perspective.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, fields, replace

import numpy as np

RATE_FIELDS = ("beta", "sigma", "alpha", "upsilon", "rho", "xi", "gamma", "nu", "eta", "omega")
UNIT_FIELDS = ("kappa_e", "threat_level")  # clamped to [0, 1]

# Wire names (scenario files, HTTP payloads) to dataclass fields.
WIRE_NAMES = {
    "beta": "beta",
    "kappaE": "kappa_e",
    "sigma": "sigma",
    "alpha": "alpha",
    "upsilon": "upsilon",
    "rho": "rho",
    "xi": "xi",
    "gamma": "gamma",
    "nu": "nu",
    "eta": "eta",
    "omega": "omega",
    "threatLevel": "threat_level",
}
FIELD_TO_WIRE = {v: k for k, v in WIRE_NAMES.items()}

# Order used by the kernels; threat_level is last and only read by perspectives.
KERNEL_ORDER = ("beta", "kappa_e", "sigma", "alpha", "upsilon", "rho",
                "xi", "gamma", "nu", "eta", "omega", "threat_level")


class ParamError(ValueError):
    """Raised for invalid parameter values or unknown parameter names."""


class ParameterClampWarning(UserWarning):
    """Emitted when a delta pushes a parameter outside its valid range."""


@dataclass(frozen=True)
class PropagationParams:
    beta: float = 0.0          # transmission rate per contact
    kappa_e: float = 0.5       # relative infectiousness of E vs D, in [0, 1]
    sigma: float = 0.0         # E -> D activation
    alpha: float = 0.0         # E -> R early detection
    upsilon: float = 0.0       # D -> U saturation
    rho: float = 0.0           # D -> R containment
    xi: float = 0.0            # U -> X destruction
    gamma: float = 0.0         # U -> R restoration
    nu: float = 0.0            # X -> S rebuild
    eta: float = 0.0           # S -> R hardening
    omega: float = 0.0         # R -> S waning
    threat_level: float = 0.0  # attacker intensity, in [0, 1]

    def __post_init__(self):
        for name in RATE_FIELDS:
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ParamError(f"{FIELD_TO_WIRE[name]} must be a finite rate >= 0, got {value}")
        for name in UNIT_FIELDS:
            value = getattr(self, name)
            if not np.isfinite(value) or not 0.0 <= value <= 1.0:
                raise ParamError(f"{FIELD_TO_WIRE[name]} must be in [0, 1], got {value}")

    def as_vector(self) -> np.ndarray:
        """Parameters in KERNEL_ORDER as a float64 vector."""
        return np.array([getattr(self, name) for name in KERNEL_ORDER], dtype=np.float64)

    def to_wire(self) -> dict[str, float]:
        return {FIELD_TO_WIRE[f.name]: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_wire(cls, mapping) -> "PropagationParams":
        kwargs = {}
        for key, value in mapping.items():
            if key not in WIRE_NAMES:
                raise ParamError(f"unknown parameter: {key}")
            kwargs[WIRE_NAMES[key]] = float(value)
        return cls(**kwargs)


_DELTA_OPS = ("set", "add", "mul")


def _normalize_name(name: str) -> str:
    if name in WIRE_NAMES:
        return WIRE_NAMES[name]
    if name in FIELD_TO_WIRE:
        return name
    raise ParamError(f"unknown parameter: {name}")


def validate_deltas(deltas) -> None:
    """Check delta names and operations without applying them."""
    for name, spec in deltas.items():
        _normalize_name(name)
        if not isinstance(spec, dict) or len(spec) != 1 or next(iter(spec)) not in _DELTA_OPS:
            raise ParamError(
                f"delta for {name} must be exactly one of {{'set'|'add'|'mul'}}: value"
            )
        float(next(iter(spec.values())))


def apply_param_deltas(params: PropagationParams, deltas) -> PropagationParams:
    """Apply named set/add/mul overrides, clamping back into valid ranges.

    Rates clamp at 0; kappaE and threatLevel clamp to [0, 1]. Every clamp is
    reported with a ParameterClampWarning. Unknown names raise ParamError.
    """
    if not deltas:
        return params
    validate_deltas(deltas)
    updates: dict[str, float] = {}
    for name, spec in deltas.items():
        field_name = _normalize_name(name)
        op, operand = next(iter(spec.items()))
        current = updates.get(field_name, getattr(params, field_name))
        operand = float(operand)
        if op == "set":
            value = operand
        elif op == "add":
            value = current + operand
        else:
            value = current * operand
        lo, hi = (0.0, 1.0) if field_name in UNIT_FIELDS else (0.0, float("inf"))
        clamped = min(max(value, lo), hi)
        if clamped != value:
            warnings.warn(
                f"{FIELD_TO_WIRE[field_name]} clamped from {value} to {clamped}",
                ParameterClampWarning,
                stacklevel=2,
            )
        updates[field_name] = clamped
    return replace(params, **updates)
