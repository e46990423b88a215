"""Frame-by-frame stochastic simulation of the hybrid access protocol,
plus contention-only (p-persistent) and reservation-only (TDMA) baselines.

One run is a single sequential event loop over frames driven by one seeded
RNG, so identical inputs reproduce identical reports.  Contention slots are
sampled per virtual class (devices inside a class are exchangeable); the
winning device of a successful slot is drawn uniformly from its class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import US_PER_S, ClassConfig, TimingConstants
from .priority import escalated_probability

_BLOCK = 512


class PlanMismatchError(ValueError):
    """Plan horizon or dimensions do not match the requested run."""


@dataclass(frozen=True)
class CopOutcome:
    """Aggregate result of one contention period (or slot batch)."""

    success_groups: tuple[int, ...]        # group index per success, in order
    success_times_us: tuple[float, ...]    # elapsed time at each success
    t_elapsed_us: float
    n_idle_slots: int
    n_collisions: int
    idle_time_us: float
    idle_final_time_us: float              # idle runs directly preceding a success
    coll_time_us: float
    coll_tx_time_us: float                 # collision durations weighted by transmitters
    listen_time_us: float                  # contender time spent listening, not transmitting
    n_slots: int


@dataclass(frozen=True)
class FrameSummary:
    """Per-frame realization consumed by the metrics module."""

    frame: int
    n_active: int
    m_realized: int
    t_cop_us: float
    n_idle_slots: int
    n_collisions: int
    idle_time_us: float
    idle_final_time_us: float
    coll_time_us: float
    coll_tx_time_us: float
    listen_time_us: float
    winner_wait_time_us: float             # winners staying awake until the end of COP
    tdma_idle_slots: int = 0               # owned data slots wasted on empty buffers


@dataclass(frozen=True)
class FrameTrace:
    """Detailed event log of one frame (produced on request)."""

    frame: int
    events: tuple                           # (kind, start_us, duration_us, n_transmitters)
    winners: tuple                          # (device id, top slot index) in order
    mode_time_us: np.ndarray                # (K, 4) time per device in tx/rx/idle/sleep
    d_before: np.ndarray | None = None      # per-device failure count at contention time


@dataclass
class SimReport:
    """Outcome of one simulation run."""

    variant: str
    seed: int
    frames: int
    tc: TimingConstants
    cfg: ClassConfig
    per_frame: list[FrameSummary] = field(default_factory=list)
    device_class: np.ndarray | None = None
    generated: np.ndarray | None = None
    dropped: np.ndarray | None = None
    delivered: np.ndarray | None = None
    delay_frames_sum: np.ndarray | None = None
    traces: list[FrameTrace] | None = None

    @property
    def m_per_frame(self) -> list[int]:
        return [f.m_realized for f in self.per_frame]


def _device_classes(cfg: ClassConfig) -> np.ndarray:
    return np.repeat(np.arange(1, cfg.q_count + 1), cfg.class_sizes)


def run_cop(rng: np.random.Generator, counts: np.ndarray, probs: np.ndarray,
            tc: TimingConstants, *, m_target: int | None = None,
            time_limit_us: float | None = None, success_extra_us: float = 0.0,
            drain: bool = True, max_slots: int | None = None,
            events: list | None = None) -> CopOutcome:
    """Slotted p-persistent contention among groups of identical devices.

    Each slot every remaining contender transmits with its group
    probability: zero transmitters cost an idle slot, one a success (plus
    ``success_extra_us``, e.g. an immediate data transmission), two or
    more a collision.  Stops when the winner target or time limit is
    reached, or when ``max_slots`` slots have elapsed.
    """
    counts = counts.astype(np.int64).copy()
    probs = np.asarray(probs, dtype=float)
    d_idle, d_coll = tc.delta_idle_us, tc.delta_coll_us
    d_succ = tc.delta_succ_us + success_extra_us
    succ_groups: list[int] = []
    succ_times: list[float] = []
    elapsed = 0.0
    n_idle = n_coll = n_slots = 0
    idle_time = idle_final = coll_time = coll_tx = listen = 0.0
    idle_run = 0.0  # idle time since the last busy slot

    def done() -> bool:
        if m_target is not None and len(succ_groups) >= m_target:
            return True
        if time_limit_us is not None and elapsed >= time_limit_us:
            return True
        if max_slots is not None and n_slots >= max_slots:
            return True
        return False

    while not done():
        remaining = int(counts.sum())
        if remaining == 0:
            # nothing left to transmit: the channel idles out the clock
            if time_limit_us is None or elapsed >= time_limit_us:
                break
            gap_slots = math.ceil((time_limit_us - elapsed) / d_idle)
            if max_slots is not None:
                gap_slots = min(gap_slots, max_slots - n_slots)
            if gap_slots <= 0:
                break
            if events is not None:
                events.append(("idle", elapsed, gap_slots * d_idle, 0))
            elapsed += gap_slots * d_idle
            n_idle += gap_slots
            n_slots += gap_slots
            idle_time += gap_slots * d_idle
            break
        draws = rng.binomial(counts[:, None], probs[:, None],
                             size=(len(counts), _BLOCK))
        totals = draws.sum(axis=0)
        dur = np.where(totals == 0, d_idle, np.where(totals == 1, d_succ, d_coll))
        cum = elapsed + np.cumsum(dur)

        # how many slots of this block can be consumed before a stop
        n_take = _BLOCK
        succ_pos = np.nonzero(totals == 1)[0]
        if drain and len(succ_pos):
            # counts change after a drained success: redraw from there on
            n_take = min(n_take, int(succ_pos[0]) + 1)
        if m_target is not None:
            needed = m_target - len(succ_groups)
            if len(succ_pos) >= needed:
                n_take = min(n_take, int(succ_pos[needed - 1]) + 1)
        if time_limit_us is not None:
            over = np.nonzero(cum >= time_limit_us)[0]
            if len(over):
                n_take = min(n_take, int(over[0]) + 1)
        if max_slots is not None:
            n_take = min(n_take, max_slots - n_slots)
        if n_take <= 0:
            break

        tot = totals[:n_take]
        idx_succ = np.nonzero(tot == 1)[0]
        idx_coll = np.nonzero(tot >= 2)[0]
        n_idle_blk = n_take - len(idx_succ) - len(idx_coll)
        coll_transmitters = int(tot[idx_coll].sum())

        n_slots += n_take
        n_idle += n_idle_blk
        idle_time += n_idle_blk * d_idle
        n_coll += len(idx_coll)
        coll_time += len(idx_coll) * d_coll
        coll_tx += coll_transmitters * d_coll
        listen += (remaining * n_idle_blk * d_idle
                   + (len(idx_coll) * remaining - coll_transmitters) * d_coll
                   + len(idx_succ) * (remaining - 1) * d_succ)

        # idle runs: only the run directly preceding a success is "final"
        busy_pos = np.sort(np.concatenate([idx_succ, idx_coll]))
        for s in idx_succ:
            j = int(np.searchsorted(busy_pos, s))
            if j == 0:
                idle_final += idle_run + s * d_idle
            else:
                idle_final += (s - int(busy_pos[j - 1]) - 1) * d_idle
        if len(busy_pos):
            idle_run = (n_take - 1 - int(busy_pos[-1])) * d_idle
        else:
            idle_run += n_take * d_idle

        for s in idx_succ:
            grp = int(np.argmax(draws[:, s] == 1))
            succ_groups.append(grp)
            succ_times.append(float(cum[s]))
            if drain:
                counts[grp] -= 1
        if events is not None:
            kinds = np.where(tot == 0, "idle", np.where(tot == 1, "success",
                                                        "collision"))
            starts = np.concatenate(([elapsed], cum[:n_take - 1]))
            for s in range(n_take):
                events.append((str(kinds[s]), float(starts[s]), float(dur[s]),
                               int(tot[s])))
        elapsed = float(cum[n_take - 1])

    return CopOutcome(
        success_groups=tuple(succ_groups), success_times_us=tuple(succ_times),
        t_elapsed_us=elapsed, n_idle_slots=n_idle, n_collisions=n_coll,
        idle_time_us=idle_time, idle_final_time_us=idle_final,
        coll_time_us=coll_time, coll_tx_time_us=coll_tx,
        listen_time_us=listen, n_slots=n_slots,
    )


def simulate_cop_slots(counts_by_prob: list[tuple[float, int]], tc: TimingConstants,
                       n_slots: int, seed: int) -> CopOutcome:
    """Monte-Carlo slot process over a static mixture (winners rejoin).

    Calibration entry point: runs the simulator's contention engine for a
    fixed number of slots without draining winners.
    """
    rng = np.random.default_rng(seed)
    probs = np.array([p for p, _ in counts_by_prob])
    counts = np.array([n for _, n in counts_by_prob])
    return run_cop(rng, counts, probs, tc, drain=False, max_slots=n_slots)


def _draw_arrivals(rng: np.random.Generator, k: int, rate_per_us: float,
                   t_frame_us: float):
    """Per-device sorted arrival times for one frame."""
    counts = rng.poisson(rate_per_us * t_frame_us, size=k)
    total = int(counts.sum())
    flat = rng.random(total) * t_frame_us
    offsets = np.concatenate(([0], np.cumsum(counts)))
    times = []
    for dev in range(k):
        seg = flat[offsets[dev]:offsets[dev + 1]]
        times.append(np.sort(seg) if len(seg) > 1 else seg)
    return counts, times


def _warm_up(rng: np.random.Generator, k: int, rate_per_us: float,
             t_frame_us: float, buf_full, buf_k1, generated, dropped) -> None:
    """One arrival frame before the first protocol frame, so frame 0
    starts with the stationary share of active devices."""
    counts = rng.poisson(rate_per_us * t_frame_us, size=k)
    generated += counts
    got = counts > 0
    buf_full[got] = True
    buf_k1[got] = -1
    dropped += np.maximum(0, counts - 1)


def _apply_frame_traffic(frame: int, dev: int, arr_times, deliver_t: float | None,
                         buf_full, buf_k1, dropped, delivered, delay_sum):
    """Chronological buffer bookkeeping for one device in one frame.

    A packet arriving at a full buffer replaces it and drops the old one;
    a delivery empties the buffer and records the frame-count delay.
    """
    i = 0
    if deliver_t is not None:
        while i < len(arr_times) and arr_times[i] < deliver_t:
            dropped[dev] += 1  # replacement while still waiting for the slot
            buf_k1[dev] = frame
            i += 1
        delivered[dev] += 1
        delay_sum[dev] += frame - buf_k1[dev]
        buf_full[dev] = False
    while i < len(arr_times):
        if buf_full[dev]:
            dropped[dev] += 1
        buf_full[dev] = True
        buf_k1[dev] = frame
        i += 1


def _group_actives(active_ids: np.ndarray, q_arr: np.ndarray, d_arr: np.ndarray,
                   alpha: float, p_inl: float, escalate: bool):
    """Partition active devices into virtual-class groups with their
    contending probabilities."""
    if len(active_ids) == 0:
        return [], np.empty(0, dtype=np.int64), np.empty(0)
    rho = q_arr[active_ids] - 1 + (d_arr[active_ids] if escalate else 0)
    order = np.argsort(rho, kind="stable")
    active_sorted = active_ids[order]
    rho_sorted = rho[order]
    groups, starts = np.unique(rho_sorted, return_index=True)
    members = np.split(active_sorted, starts[1:])
    counts = np.array([len(m) for m in members], dtype=np.int64)
    probs = np.array([escalated_probability(int(r), alpha, p_inl) for r in groups])
    return [list(m) for m in members], counts, probs


def run_hybrid(cfg: ClassConfig, tc: TimingConstants, plan, frames: int, seed: int,
               *, escalation: bool = True, collect_traces: bool = False,
               arrival_script: dict | None = None,
               winner_script: dict | None = None) -> SimReport:
    """Simulate the four-period frame protocol under a contention plan.

    ``arrival_script``/``winner_script`` (frame index -> scripted arrival
    times per device / ordered winner ids) replace the random draws for
    deterministic replay scenarios.
    """
    if len(plan.per_frame) < frames:
        raise PlanMismatchError(
            f"plan covers {len(plan.per_frame)} frames, run needs {frames}")
    k = cfg.total_devices
    rng = np.random.default_rng(seed)
    q_arr = _device_classes(cfg)
    d_arr = np.zeros(k, dtype=np.int64)
    buf_full = np.zeros(k, dtype=bool)
    buf_k1 = np.zeros(k, dtype=np.int64)
    generated = np.zeros(k, dtype=np.int64)
    dropped = np.zeros(k, dtype=np.int64)
    delivered = np.zeros(k, dtype=np.int64)
    delay_sum = np.zeros(k, dtype=np.int64)
    rate_per_us = cfg.arrival_rate / US_PER_S
    report = SimReport(variant="hybrid", seed=seed, frames=frames, tc=tc, cfg=cfg,
                       device_class=q_arr, generated=generated, dropped=dropped,
                       delivered=delivered, delay_frames_sum=delay_sum,
                       traces=[] if collect_traces else None)
    overhead = tc.t_nof_us + tc.t_anc_us
    if arrival_script is None:
        _warm_up(rng, k, rate_per_us, tc.t_frame_us,
                 buf_full, buf_k1, generated, dropped)

    for frame in range(frames):
        decision = plan.per_frame[frame]
        active_ids = np.nonzero(buf_full)[0]
        n_active = len(active_ids)
        ev_log: list | None = [] if collect_traces else None
        d_snapshot = d_arr.copy() if collect_traces else None

        scripted = winner_script.get(frame) if winner_script else None
        if scripted is not None:
            winner_ids = [int(w) for w in scripted]
            active_set = set(int(a) for a in active_ids)
            for w in winner_ids:
                if w not in active_set:
                    raise ValueError(f"scripted winner {w} not active in frame {frame}")
            t_cop = len(winner_ids) * tc.delta_succ_us
            cop = CopOutcome(success_groups=tuple(range(len(winner_ids))),
                             success_times_us=tuple((j + 1) * tc.delta_succ_us
                                                    for j in range(len(winner_ids))),
                             t_elapsed_us=t_cop, n_idle_slots=0, n_collisions=0,
                             idle_time_us=0.0, idle_final_time_us=0.0,
                             coll_time_us=0.0, coll_tx_time_us=0.0,
                             listen_time_us=0.0, n_slots=len(winner_ids))
        else:
            members, counts, probs = _group_actives(active_ids, q_arr, d_arr,
                                                    cfg.alpha, cfg.p_inl, escalation)
            cop = run_cop(rng, counts, probs, tc, m_target=decision.m_opt,
                          time_limit_us=decision.t_cop_opt_us, events=ev_log)
            winner_ids = []
            for grp in cop.success_groups:
                pool = members[grp]
                pick = int(rng.integers(len(pool)))
                winner_ids.append(pool[pick])
                pool[pick] = pool[-1]
                pool.pop()

        # cap data slots to what fits after NP, COP and AP
        room = tc.t_frame_us - overhead - cop.t_elapsed_us
        m_fit = max(0, int(room / tc.t_r_us))
        winner_ids = winner_ids[:m_fit]
        m_real = len(winner_ids)

        winner_arr = np.array(winner_ids, dtype=np.int64)
        is_winner = np.zeros(k, dtype=bool)
        is_winner[winner_arr] = True
        losers = active_ids[~is_winner[active_ids]]
        if escalation:
            d_arr[losers] += 1
        d_arr[winner_arr] = 0

        top_start = tc.t_nof_us + cop.t_elapsed_us + tc.t_anc_us
        deliver_t = {int(dev): top_start + (j + 1) * tc.t_r_us
                     for j, dev in enumerate(winner_ids)}

        if arrival_script is not None:
            frame_arrivals = arrival_script.get(frame, {})
            arr_counts = np.zeros(k, dtype=np.int64)
            arr_times: list = [np.empty(0)] * k
            for dev, times in frame_arrivals.items():
                arr_counts[dev] = len(times)
                arr_times[dev] = np.sort(np.asarray(times, dtype=float))
        else:
            arr_counts, arr_times = _draw_arrivals(rng, k, rate_per_us, tc.t_frame_us)
        generated += arr_counts
        touched = np.nonzero(arr_counts > 0)[0]
        for dev in touched:
            _apply_frame_traffic(frame, dev, arr_times[dev], deliver_t.get(int(dev)),
                                 buf_full, buf_k1, dropped, delivered, delay_sum)
        for dev in winner_ids:
            if arr_counts[dev] == 0:
                _apply_frame_traffic(frame, int(dev), (), deliver_t[int(dev)],
                                     buf_full, buf_k1, dropped, delivered, delay_sum)

        winner_wait = sum(cop.t_elapsed_us - t for t in cop.success_times_us[:m_real])
        summary = FrameSummary(
            frame=frame, n_active=n_active, m_realized=m_real,
            t_cop_us=cop.t_elapsed_us, n_idle_slots=cop.n_idle_slots,
            n_collisions=cop.n_collisions, idle_time_us=cop.idle_time_us,
            idle_final_time_us=cop.idle_final_time_us, coll_time_us=cop.coll_time_us,
            coll_tx_time_us=cop.coll_tx_time_us, listen_time_us=cop.listen_time_us,
            winner_wait_time_us=winner_wait,
        )
        report.per_frame.append(summary)
        if collect_traces:
            report.traces.append(_build_trace(frame, ev_log or [], winner_ids,
                                              summary, q_arr, active_ids, tc,
                                              d_snapshot))
    return report


def _build_trace(frame: int, events: list, winner_ids, summary: FrameSummary,
                 q_arr: np.ndarray, active_ids: np.ndarray,
                 tc: TimingConstants, d_before: np.ndarray | None = None) -> FrameTrace:
    """Per-device time-in-mode ledger (tx / rx / idle / sleep).

    Contention listening and collision transmission time is attributed in
    expectation (equal shares among the frame's active devices), since
    the engine samples transmitter counts, not identities.
    """
    k = len(q_arr)
    mode = np.zeros((k, 4))
    mode[:, 1] += tc.t_nof_us                       # NP: everyone receives
    n_active = summary.n_active
    if n_active:
        mode[active_ids, 1] += tc.t_anc_us          # AP: actives receive
        share_listen = summary.listen_time_us / n_active
        share_colltx = summary.coll_tx_time_us / n_active
        mode[active_ids, 2] += share_listen
        mode[active_ids, 0] += share_colltx
    for j, dev in enumerate(winner_ids):
        mode[dev, 0] += tc.delta_succ_us + tc.t_r_us
        mode[dev, 3] += summary.m_realized * tc.t_r_us - tc.t_r_us
    loser_mask = np.zeros(k, dtype=bool)
    loser_mask[active_ids] = True
    loser_mask[np.array(winner_ids, dtype=np.int64)] = False
    mode[loser_mask, 3] += summary.m_realized * tc.t_r_us   # losers sleep out the TOP
    used = mode.sum(axis=1)
    mode[:, 3] += np.maximum(0.0, tc.t_frame_us - used)
    return FrameTrace(frame=frame, events=tuple(events),
                      winners=tuple((int(d), j) for j, d in enumerate(winner_ids)),
                      mode_time_us=mode, d_before=d_before)


def run_csma(cfg: ClassConfig, tc: TimingConstants, p: float, frames: int,
             seed: int) -> SimReport:
    """Contention-only baseline: the whole frame is one p-persistent
    contention and a winner sends its data packet immediately."""
    if not 0.0 < p <= 1.0:
        raise ValueError("contending probability must lie in (0, 1]")
    k = cfg.total_devices
    rng = np.random.default_rng(seed)
    q_arr = _device_classes(cfg)
    buf_full = np.zeros(k, dtype=bool)
    buf_k1 = np.zeros(k, dtype=np.int64)
    generated = np.zeros(k, dtype=np.int64)
    dropped = np.zeros(k, dtype=np.int64)
    delivered = np.zeros(k, dtype=np.int64)
    delay_sum = np.zeros(k, dtype=np.int64)
    rate_per_us = cfg.arrival_rate / US_PER_S
    report = SimReport(variant="csma", seed=seed, frames=frames, tc=tc, cfg=cfg,
                       device_class=q_arr, generated=generated, dropped=dropped,
                       delivered=delivered, delay_frames_sum=delay_sum)
    _warm_up(rng, k, rate_per_us, tc.t_frame_us,
             buf_full, buf_k1, generated, dropped)

    for frame in range(frames):
        active_ids = np.nonzero(buf_full)[0]
        n_active = len(active_ids)
        pool = list(active_ids)
        cop = run_cop(rng, np.array([n_active], dtype=np.int64), np.array([p]), tc,
                      time_limit_us=tc.t_frame_us, success_extra_us=tc.t_r_us)
        winner_ids = []
        for _ in cop.success_groups:
            pick = int(rng.integers(len(pool)))
            winner_ids.append(int(pool[pick]))
            pool[pick] = pool[-1]
            pool.pop()
        deliver_t = dict(zip(winner_ids, cop.success_times_us))

        arr_counts, arr_times = _draw_arrivals(rng, k, rate_per_us, tc.t_frame_us)
        generated += arr_counts
        touched = np.nonzero(arr_counts > 0)[0]
        for dev in touched:
            _apply_frame_traffic(frame, int(dev), arr_times[dev],
                                 deliver_t.get(int(dev)),
                                 buf_full, buf_k1, dropped, delivered, delay_sum)
        for dev in winner_ids:
            if arr_counts[dev] == 0:
                _apply_frame_traffic(frame, dev, (), deliver_t[dev],
                                     buf_full, buf_k1, dropped, delivered, delay_sum)

        report.per_frame.append(FrameSummary(
            frame=frame, n_active=n_active, m_realized=len(winner_ids),
            t_cop_us=cop.t_elapsed_us, n_idle_slots=cop.n_idle_slots,
            n_collisions=cop.n_collisions, idle_time_us=cop.idle_time_us,
            idle_final_time_us=cop.idle_final_time_us, coll_time_us=cop.coll_time_us,
            coll_tx_time_us=cop.coll_tx_time_us, listen_time_us=cop.listen_time_us,
            winner_wait_time_us=0.0,
        ))
    return report


def run_tdma(cfg: ClassConfig, tc: TimingConstants, frames: int, seed: int) -> SimReport:
    """Reservation-only baseline: static cyclic slot ownership spanning
    frames; an owned slot is wasted when the owner's buffer is empty."""
    k = cfg.total_devices
    rng = np.random.default_rng(seed)
    q_arr = _device_classes(cfg)
    buf_full = np.zeros(k, dtype=bool)
    buf_k1 = np.zeros(k, dtype=np.int64)
    generated = np.zeros(k, dtype=np.int64)
    dropped = np.zeros(k, dtype=np.int64)
    delivered = np.zeros(k, dtype=np.int64)
    delay_sum = np.zeros(k, dtype=np.int64)
    rate_per_us = cfg.arrival_rate / US_PER_S
    slots = int(tc.t_frame_us / tc.t_r_us)
    report = SimReport(variant="tdma", seed=seed, frames=frames, tc=tc, cfg=cfg,
                       device_class=q_arr, generated=generated, dropped=dropped,
                       delivered=delivered, delay_frames_sum=delay_sum)
    _warm_up(rng, k, rate_per_us, tc.t_frame_us,
             buf_full, buf_k1, generated, dropped)

    for frame in range(frames):
        n_active_start = int(buf_full.sum())
        owners = (frame * slots + np.arange(slots)) % k
        slot_end = (np.arange(slots) + 1) * tc.t_r_us
        opportunities: dict[int, list[float]] = {}
        for dev, t in zip(owners, slot_end):
            opportunities.setdefault(int(dev), []).append(float(t))

        arr_counts, arr_times = _draw_arrivals(rng, k, rate_per_us, tc.t_frame_us)
        generated += arr_counts
        m_real = 0
        idle_slots = 0
        touched = set(np.nonzero(arr_counts > 0)[0].tolist()) | set(opportunities)
        for dev in sorted(touched):
            times = arr_times[dev] if arr_counts[dev] > 0 else np.empty(0)
            opps = opportunities.get(dev, [])
            ai = 0
            for t_slot in opps:
                while ai < len(times) and times[ai] < t_slot:
                    if buf_full[dev]:
                        dropped[dev] += 1
                    buf_full[dev] = True
                    buf_k1[dev] = frame
                    ai += 1
                if buf_full[dev]:
                    delivered[dev] += 1
                    delay_sum[dev] += frame - buf_k1[dev]
                    buf_full[dev] = False
                    m_real += 1
                else:
                    idle_slots += 1
            while ai < len(times):
                if buf_full[dev]:
                    dropped[dev] += 1
                buf_full[dev] = True
                buf_k1[dev] = frame
                ai += 1

        report.per_frame.append(FrameSummary(
            frame=frame, n_active=n_active_start, m_realized=m_real,
            t_cop_us=0.0, n_idle_slots=0, n_collisions=0, idle_time_us=0.0,
            idle_final_time_us=0.0, coll_time_us=0.0, coll_tx_time_us=0.0,
            listen_time_us=0.0, winner_wait_time_us=0.0,
            tdma_idle_slots=idle_slots,
        ))
    return report
