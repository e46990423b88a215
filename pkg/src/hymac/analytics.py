"""Closed-form contention model for the slotted p-persistent access period.

Slot-level success/collision probabilities, expected collisions and idle
time per successful contention, the expected contention-period duration,
per-class success shares, expected new arrivals, and the large-population
asymptotic form of the contention duration together with its Hessian.

Products of many (1 - p) factors are evaluated in log space so mixtures
with thousands of devices do not underflow.  The single-transmitter
probability includes the p factor of each candidate transmitter (the
probabilistically correct form, cross-checked against exhaustive
enumeration in the test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .domain import US_PER_S, TimingConstants
from .priority import escalated_probability


class DegenerateMixtureError(ValueError):
    """No device can ever transmit (or the channel can never be busy)."""


class DivergentExpectationError(ArithmeticError):
    """A success is impossible, so waiting times have no finite mean."""


@dataclass(frozen=True)
class ContentionMixture:
    """Occupied virtual classes: (contending probability, device count).

    Counts may be fractional; the optimizer propagates expected values.
    """

    entries: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ent = []
        for p, n in self.entries:
            if not 0.0 < p <= 1.0:
                raise ValueError(f"contending probability {p} outside (0, 1]")
            if n < 0:
                raise ValueError("device count must be nonnegative")
            if n > 0:
                ent.append((float(p), float(n)))
        object.__setattr__(self, "entries", tuple(ent))

    @classmethod
    def from_virtual_counts(cls, virtual_counts: dict[int, float],
                            alpha: float, p_inl: float) -> "ContentionMixture":
        return cls(tuple(
            (escalated_probability(rho, alpha, p_inl), n)
            for rho, n in sorted(virtual_counts.items())
        ))

    @property
    def total(self) -> float:
        return sum(n for _, n in self.entries)


@dataclass(frozen=True)
class CopExpectation:
    """Expected per-success contention cost and total contention duration."""

    e_collisions: float
    e_idle_us: float
    e_attempt_us: float
    e_tcop_us: float
    idle_component_us: float
    collision_component_us: float
    success_component_us: float


def _log_survive(mix: ContentionMixture):
    """Sum of n*log(1-p) over entries with p < 1, and the count of
    entries whose (1-p)^n factor is exactly zero."""
    log_sum = 0.0
    zero_entries = 0
    for p, n in mix.entries:
        if p >= 1.0:
            zero_entries += 1
        else:
            log_sum += n * math.log1p(-p)
    return log_sum, zero_entries


def prob_no_transmission(mix: ContentionMixture) -> float:
    """P(no device transmits in a slot) = prod (1 - p)^n."""
    log_sum, zeros = _log_survive(mix)
    if zeros:
        return 0.0
    return math.exp(log_sum)


def _prob_busy(mix: ContentionMixture) -> float:
    """1 - P(N_cd = 0), computed without cancellation."""
    log_sum, zeros = _log_survive(mix)
    if zeros:
        return 1.0
    return -math.expm1(log_sum)


def _single_transmitter_terms(mix: ContentionMixture) -> list[float]:
    """Per-entry probability that exactly one device transmits and it
    belongs to that entry: n*p*(1-p)^(n-1) * prod_other (1-p)^n."""
    log_sum, zeros = _log_survive(mix)
    terms = []
    for p, n in mix.entries:
        if p >= 1.0:
            if n == 1 and zeros == 1:
                term = n * p * math.exp(log_sum)
            else:
                term = 0.0
        elif zeros:
            term = 0.0
        else:
            term = n * p * math.exp(log_sum - math.log1p(-p))
        terms.append(term)
    return terms


def prob_single_transmission(mix: ContentionMixture) -> float:
    """Unconditional P(exactly one device transmits in a slot)."""
    return sum(_single_transmitter_terms(mix))


def prob_success_given_busy(mix: ContentionMixture) -> float:
    """P(exactly one transmitter | at least one transmitter)."""
    busy = _prob_busy(mix)
    if busy <= 0.0:
        raise DegenerateMixtureError("no device can transmit in this mixture")
    return min(1.0, prob_single_transmission(mix) / busy)


def prob_collision_given_busy(mix: ContentionMixture) -> float:
    """P(two or more transmitters | at least one transmitter)."""
    return 1.0 - prob_success_given_busy(mix)


def expected_collisions(mix: ContentionMixture) -> float:
    """Mean number of collisions preceding one successful contention."""
    p_succ = prob_success_given_busy(mix)
    if p_succ <= 0.0:
        raise DivergentExpectationError(
            "success probability is zero; collisions never terminate")
    return 1.0 / p_succ - 1.0


def expected_idle(mix: ContentionMixture, delta_idle_us: float) -> float:
    """Mean idle time preceding one busy slot."""
    busy = _prob_busy(mix)
    if busy <= 0.0:
        raise DegenerateMixtureError("channel can never become busy")
    return delta_idle_us * prob_no_transmission(mix) / busy


def expected_tcop(m: int, mix: ContentionMixture, tc: TimingConstants) -> CopExpectation:
    """Expected contention-period duration for m successful contentions."""
    if m < 0:
        raise ValueError("number of successes must be nonnegative")
    if m == 0:
        return CopExpectation(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    e_nc = expected_collisions(mix)
    e_idle = expected_idle(mix, tc.delta_idle_us)
    idle_part = (e_nc + 1.0) * e_idle
    coll_part = e_nc * tc.delta_coll_us
    succ_part = tc.delta_succ_us
    e_attempt = idle_part + coll_part + succ_part
    return CopExpectation(
        e_collisions=e_nc,
        e_idle_us=e_idle,
        e_attempt_us=e_attempt,
        e_tcop_us=m * e_attempt,
        idle_component_us=idle_part,
        collision_component_us=coll_part,
        success_component_us=succ_part,
    )


def success_share(mix: ContentionMixture, index: int) -> float:
    """Probability that entry `index` owns the lone transmitter, given a
    successful slot."""
    return success_shares(mix)[index]


def success_shares(mix: ContentionMixture) -> list[float]:
    terms = _single_transmitter_terms(mix)
    total = sum(terms)
    if total <= 0.0:
        raise DegenerateMixtureError("no entry can produce a lone transmitter")
    return [t / total for t in terms]


def expected_new_arrivals(empty_count: float, arrival_rate: float,
                          t_frame_us: float) -> float:
    """Mean number of empty devices gaining a packet during one frame."""
    if empty_count < 0:
        raise ValueError("empty device count must be nonnegative")
    if arrival_rate < 0:
        raise ValueError("arrival rate must be nonnegative")
    g = -math.expm1(-arrival_rate * t_frame_us / US_PER_S)
    return empty_count * g


# Large-population asymptotics: every active device is mapped onto one
# effective contending probability x = (1 + alpha) * p_inl over l_total
# devices.  Values grow like (1 - x)^(-l_total), so the evaluation runs
# in arbitrary precision and only the final cast may overflow to inf.

_ASYM_DPS = 60


def _asym_attempt_mp(alpha, p_inl, l_total, tc: TimingConstants):
    x = (mp.mpf(1) + mp.mpf(alpha)) * mp.mpf(p_inl)
    if x > 1:
        raise ValueError("(1 + alpha) * p_inl must not exceed one")
    if x >= 1:
        raise DivergentExpectationError("effective probability one never succeeds")
    big_l = mp.mpf(l_total)
    inv_lx = 1 / (big_l * x)
    v = inv_lx * (1 - x) ** (-(big_l - 1))
    return (tc.delta_idle_us * inv_lx
            + tc.delta_coll_us * (v - inv_lx - 1)
            + tc.delta_succ_us)


def asymptotic_tcop(m: int, alpha: float, p_inl: float, l_total: int,
                    tc: TimingConstants) -> float:
    """Asymptotic expected contention duration for m successes (us)."""
    if m < 0:
        raise ValueError("number of successes must be nonnegative")
    if m == 0:
        return 0.0
    if l_total < 1:
        raise ValueError("population must be at least one device")
    with mp.workdps(_ASYM_DPS):
        val = m * _asym_attempt_mp(alpha, p_inl, l_total, tc)
        try:
            return float(val)
        except OverflowError:
            return math.inf


def _hessian_mp(m, alpha, p_inl, l_total, tc: TimingConstants):
    """Analytic Hessian of the asymptotic contention duration with
    respect to (m, p_inl, alpha), as an mpmath matrix."""
    one = mp.mpf(1)
    a = mp.mpf(alpha)
    p = mp.mpf(p_inl)
    big_l = mp.mpf(l_total)
    d_i = mp.mpf(tc.delta_idle_us)
    d_c = mp.mpf(tc.delta_coll_us)
    x = (one + a) * p
    if x > 1:
        raise ValueError("(1 + alpha) * p_inl must not exceed one")
    if x >= 1:
        raise DivergentExpectationError("effective probability one never succeeds")
    v = (big_l * x) ** -1 * (1 - x) ** (-(big_l - 1))
    c1 = (big_l - 1) / (1 - x) - 1 / x
    # first and second derivatives of the per-success cost with respect to x
    h1 = -d_i / (big_l * x ** 2) + d_c * (v * c1 + 1 / (big_l * x ** 2))
    h2 = (2 * d_i / (big_l * x ** 3)
          + d_c * (v * (c1 ** 2 + (big_l - 1) / (1 - x) ** 2 + 1 / x ** 2)
                   - 2 / (big_l * x ** 3)))
    big_m = mp.mpf(m)
    hess = mp.matrix(3, 3)
    hess[0, 0] = mp.mpf(0)
    hess[0, 1] = hess[1, 0] = h1 * (one + a)
    hess[0, 2] = hess[2, 0] = h1 * p
    hess[1, 1] = big_m * h2 * (one + a) ** 2
    hess[2, 2] = big_m * h2 * p ** 2
    hess[1, 2] = hess[2, 1] = big_m * (h2 * p * (one + a) + h1)
    return hess


def tcop_hessian(m: int, alpha: float, p_inl: float, l_total: int,
                 tc: TimingConstants, normalize: bool = False) -> np.ndarray:
    """Hessian of asymptotic_tcop in the axis order (m, p_inl, alpha).

    With normalize=True the matrix is divided by its trace before the
    cast to float, which keeps the entries representable even where the
    raw values overflow double precision.
    """
    with mp.workdps(_ASYM_DPS):
        hess = _hessian_mp(m, alpha, p_inl, l_total, tc)
        if normalize:
            trace = hess[0, 0] + hess[1, 1] + hess[2, 2]
            if trace > 0:
                hess = hess / trace
        out = np.empty((3, 3))
        for i in range(3):
            for j in range(3):
                try:
                    out[i, j] = float(hess[i, j])
                except OverflowError:
                    out[i, j] = math.copysign(math.inf, 1 if hess[i, j] > 0 else -1)
    return out
