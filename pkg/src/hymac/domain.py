"""Shared protocol constants, network description types and scenario config I/O.

All durations are stored internally in microseconds; powers in watts;
arrival rates in packets per second.  Scenario files mirror the reference
parameter table, where the frame and transmission slot are given in
milliseconds and the short control messages in microseconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import yaml

US_PER_MS = 1000.0
US_PER_S = 1_000_000.0


class ConfigError(ValueError):
    """Raised on an invalid scenario document or invalid type fields."""


@dataclass(frozen=True)
class TimingConstants:
    """Protocol timing and power constants (durations in us, powers in W)."""

    t_frame_us: float = 1000.0 * US_PER_MS
    t_r_us: float = 2.0 * US_PER_MS
    t_req_us: float = 22.2
    t_nof_us: float = 10.0
    t_anc_us: float = 10.0
    t_ack_us: float = 7.5
    sifs_us: float = 2.5
    bifs_us: float = 7.5
    delta_idle_us: float = 10.0
    p_tx_w: float = 1.5
    p_rx_w: float = 1.0
    p_idle_w: float = 0.5

    def __post_init__(self):
        for name in ("t_frame_us", "t_r_us", "t_req_us", "t_nof_us",
                     "t_anc_us", "t_ack_us", "sifs_us", "bifs_us",
                     "delta_idle_us", "p_tx_w", "p_rx_w", "p_idle_w"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be strictly positive")
        if self.t_r_us >= self.t_frame_us:
            raise ConfigError("transmission slot must be shorter than the frame")
        if self.t_req_us + self.sifs_us + self.t_ack_us + self.bifs_us >= self.t_frame_us:
            raise ConfigError("a single successful contention must fit in a frame")

    @property
    def delta_coll_us(self) -> float:
        return self.t_req_us + self.bifs_us

    @property
    def delta_succ_us(self) -> float:
        return self.t_req_us + self.sifs_us + self.t_ack_us + self.bifs_us


def slot_durations(tc: TimingConstants) -> tuple[float, float, float]:
    """Idle, collision and success contention-slot lengths in us."""
    return tc.delta_idle_us, tc.delta_coll_us, tc.delta_succ_us


@dataclass(frozen=True)
class ClassConfig:
    """Priority-class layout and contention parameters.

    Class index q = 1 is the lowest priority (smallest preliminary
    contending probability); class sizes are listed for q = 1..Q.
    """

    class_sizes: tuple[int, ...]
    p_inl: float
    alpha: float
    arrival_rate: float  # packets per second, identical for every device

    def __post_init__(self):
        if not self.class_sizes or any(k < 0 for k in self.class_sizes):
            raise ConfigError("class sizes must be a non-empty list of counts >= 0")
        if not 0.0 < self.p_inl <= 1.0:
            raise ConfigError("p_inl must lie in (0, 1]")
        if self.alpha <= 0:
            raise ConfigError("alpha must be strictly positive")
        if self.arrival_rate < 0:
            raise ConfigError("arrival rate must be nonnegative")
        object.__setattr__(self, "class_sizes", tuple(int(k) for k in self.class_sizes))

    @property
    def q_count(self) -> int:
        return len(self.class_sizes)

    @property
    def total_devices(self) -> int:
        return sum(self.class_sizes)

    def arrival_probability(self, tc: TimingConstants) -> float:
        """Probability that a device sees at least one arrival in a frame."""
        return -math.expm1(-self.arrival_rate * tc.t_frame_us / US_PER_S)


@dataclass(frozen=True)
class PopulationState:
    """Expected active-device counts keyed by (class q, failure count d).

    The virtual class of a (q, d) cell is q + d - 1; cells of equal
    virtual class share one contending probability and are aggregated by
    ``virtual_counts``.
    """

    frame_index: int
    counts: dict = field(default_factory=dict)  # (q, d) -> expected count

    def __post_init__(self):
        clean = {}
        for (q, d), n in self.counts.items():
            if q < 1 or d < 0:
                raise ConfigError(f"invalid population cell (q={q}, d={d})")
            if n < 0:
                raise ConfigError(f"negative count in population cell (q={q}, d={d})")
            if n > 0:
                clean[(int(q), int(d))] = float(n)
        object.__setattr__(self, "counts", clean)

    @property
    def virtual_counts(self) -> dict[int, float]:
        agg: dict[int, float] = {}
        for (q, d), n in self.counts.items():
            rho = q + d - 1
            agg[rho] = agg.get(rho, 0.0) + n
        return agg

    @property
    def theta(self) -> int:
        vc = self.virtual_counts
        return max(vc) if vc else 0

    @property
    def total(self) -> float:
        return sum(self.counts.values())


@dataclass(frozen=True)
class Scenario:
    """One fully resolved experiment description."""

    name: str
    timing: TimingConstants
    classes: ClassConfig
    variant: str = "hybrid"
    horizon: int = 200
    seeds: tuple[int, ...] = tuple(range(1, 11))
    escalation: bool = True
    sweep: dict = field(default_factory=dict)  # axis name -> list of values

    def __post_init__(self):
        if self.variant not in ("hybrid", "csma", "tdma", "all"):
            raise ConfigError(f"unknown protocol variant {self.variant!r}")
        if self.horizon < 1:
            raise ConfigError("horizon must be at least one frame")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))

    def with_overrides(self, **kw) -> "Scenario":
        return replace(self, **kw)


# Scenario (de)serialization.  Keys in the `timing` section use the
# reference units: frame and data slot in ms, control messages in us.

_TIMING_KEYS_MS = {"t_frame": "t_frame_us", "t_r": "t_r_us"}
_TIMING_KEYS_US = {
    "t_req": "t_req_us", "t_nof": "t_nof_us", "t_anc": "t_anc_us",
    "t_ack": "t_ack_us", "sifs": "sifs_us", "bifs": "bifs_us",
    "delta_idle": "delta_idle_us",
}
_TIMING_KEYS_W = {"p_tx": "p_tx_w", "p_rx": "p_rx_w", "p_idle": "p_idle_w"}


def timing_from_dict(doc: dict) -> TimingConstants:
    kw = {}
    for key, attr in _TIMING_KEYS_MS.items():
        if key in doc:
            kw[attr] = float(doc[key]) * US_PER_MS
    for key, attr in {**_TIMING_KEYS_US, **_TIMING_KEYS_W}.items():
        if key in doc:
            kw[attr] = float(doc[key])
    unknown = set(doc) - set(_TIMING_KEYS_MS) - set(_TIMING_KEYS_US) - set(_TIMING_KEYS_W)
    if unknown:
        raise ConfigError(f"unknown timing keys: {sorted(unknown)}")
    return TimingConstants(**kw)


def timing_to_dict(tc: TimingConstants) -> dict:
    doc = {key: getattr(tc, attr) / US_PER_MS for key, attr in _TIMING_KEYS_MS.items()}
    doc.update({key: getattr(tc, attr) for key, attr in _TIMING_KEYS_US.items()})
    doc.update({key: getattr(tc, attr) for key, attr in _TIMING_KEYS_W.items()})
    return doc


def scenario_from_dict(doc: dict, name: str = "scenario") -> Scenario:
    if not isinstance(doc, dict):
        raise ConfigError("scenario document must be a mapping")
    timing = timing_from_dict(doc.get("timing", {}))
    cls = doc.get("classes", {})
    arrival = doc.get("arrival", {})
    try:
        classes = ClassConfig(
            class_sizes=tuple(cls.get("sizes", (1,))),
            p_inl=float(cls.get("p_inl", 0.1)),
            alpha=float(cls.get("alpha", 1.0)),
            arrival_rate=float(arrival.get("lambda", 1.0)),
        )
    except (TypeError, AttributeError) as exc:
        raise ConfigError(f"bad classes/arrival section: {exc}") from exc
    proto = doc.get("protocol", {})
    return Scenario(
        name=doc.get("name", name),
        timing=timing,
        classes=classes,
        variant=proto.get("variant", "hybrid"),
        horizon=int(proto.get("horizon", 200)),
        seeds=tuple(proto.get("seeds", range(1, 11))),
        escalation=bool(proto.get("escalation", True)),
        sweep={k: list(v) for k, v in doc.get("sweep", {}).items()},
    )


def scenario_to_dict(sc: Scenario) -> dict:
    doc = {
        "name": sc.name,
        "timing": timing_to_dict(sc.timing),
        "classes": {
            "sizes": list(sc.classes.class_sizes),
            "p_inl": sc.classes.p_inl,
            "alpha": sc.classes.alpha,
        },
        "arrival": {"lambda": sc.classes.arrival_rate},
        "protocol": {
            "variant": sc.variant,
            "horizon": sc.horizon,
            "seeds": list(sc.seeds),
            "escalation": sc.escalation,
        },
    }
    if sc.sweep:
        doc["sweep"] = {k: list(v) for k, v in sc.sweep.items()}
    return doc


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if doc is None:
        doc = {}
    return scenario_from_dict(doc)


def dump_scenario(sc: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(scenario_to_dict(sc), fh, sort_keys=False)
