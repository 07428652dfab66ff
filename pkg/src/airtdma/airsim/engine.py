"""Slot-stepped simulation of the relay chain.

Time advances in (frame, slot) ticks. Propagation always fits inside the
guard interval, so a transmission is heard within its own slot and no
sub-slot event queue is needed. Radios only reach their chain neighbours
(i - 1 and i + 1); a listener that hears both neighbours in the same slot
decodes neither.

Per slot index, every node runs stop-and-wait:

* proposed MAC: transmit in frame f, listen in f + 1 for the ACK that the
  next hop piggybacks on its relay (or a bare ACK from the ground station),
  retransmit in f + 2 when it does not arrive;
* legacy MAC: the ACK comes back inside the same slot and a retry goes out
  in f + 1.

A node that overhears its downstream neighbour send data in frame f stays
off the slot in f + 1, because that neighbour is then waiting for its own
ACK from further down the chain.
"""
from __future__ import annotations

import enum
import random
from collections import Counter, deque
from dataclasses import dataclass, field

from ..codec import PositionReport, SpecialWeather, WeatherReport, compose_payload
from ..exceptions import CapacityExhaustedError, ProtocolViolationError
from ..timing import MacVariant
from .config import ScenarioConfig
from .metrics import Delivery, HopRecord, RunMetrics, SlotConflict, TraceRecord

GS = 0
KM_PER_DEGREE = 111.195


class Mode(enum.Enum):
    TRANSMIT = "transmit"
    LISTEN = "listen"
    IDLE = "idle"


class Verdict(enum.Enum):
    ACK = "ack"
    NACK = "nack"


@dataclass(frozen=True)
class PiggybackAck:
    acked_sequence: tuple  # (origin_id, sequence)
    verdict: Verdict = Verdict.ACK


@dataclass(eq=False)
class Packet:
    origin_id: int
    sequence: int
    payload: str
    created_frame: int
    slot: int
    hop_trace: list = field(default_factory=list)

    @property
    def key(self) -> tuple:
        return (self.origin_id, self.sequence)

    @property
    def label(self) -> str:
        return f"{self.origin_id}:{self.sequence}"


class SlotState:
    """What one node knows and owes in one slot index."""

    __slots__ = ("queue", "attempts", "first_tx_frame", "awaiting_since", "ack_heard",
                 "next_tx_frame", "owe_ack", "owe_ack_frame", "heard_data_frame", "seen")

    def __init__(self):
        self.queue = deque()
        self.attempts = 0
        self.first_tx_frame = None
        self.awaiting_since = None
        self.ack_heard = None
        self.next_tx_frame = 0
        self.owe_ack = None
        self.owe_ack_frame = None
        self.heard_data_frame = None
        self.seen = set()


@dataclass
class AircraftNode:
    node_id: int
    position_km: float
    reserved_slot: int | None = None
    originates: bool = False
    slots: dict = field(default_factory=dict)

    @property
    def is_ground_station(self) -> bool:
        return self.node_id == GS

    def slot_state(self, slot) -> SlotState:
        state = self.slots.get(slot)
        if state is None:
            state = self.slots[slot] = SlotState()
        return state

    @property
    def awaiting_ack(self) -> dict:
        """Packets sent and not yet resolved: key -> (slot, frame sent, attempts)."""
        return {ss.queue[0].key: (slot, ss.awaiting_since, ss.attempts)
                for slot, ss in self.slots.items() if ss.awaiting_since is not None and ss.queue}


class _PacketStatus:
    __slots__ = ("packet", "holders", "delivered")

    def __init__(self, packet):
        self.packet = packet
        self.holders = 0
        self.delivered = False


class _Transmission:
    __slots__ = ("sender", "packet", "attempt", "ack")

    def __init__(self, sender, packet, attempt, ack):
        self.sender = sender
        self.packet = packet
        self.attempt = attempt
        self.ack = ack


def bernoulli_loss(rng: random.Random, rho: float):
    """Loss model: each (transmission, listener) pair is lost with probability rho."""
    def lost(frame, slot, sender, receiver):
        return rng.random() < rho
    return lost


class SimState:
    def __init__(self, cfg: ScenarioConfig, loss=None, trace=False, mode_log=False,
                 check_tdd=True):
        self.cfg = cfg
        self.layout = cfg.layout
        self.variant = cfg.variant
        self.rng = random.Random(f"loss:{cfg.rng_seed}")
        self.reservation_rng = random.Random(f"reserve:{cfg.rng_seed}")
        self.loss = loss or bernoulli_loss(self.rng, cfg.rho)
        self.nodes = [AircraftNode(i, i * cfg.node_interval_km) for i in range(cfg.n_nodes)]
        for nid in cfg.originator_ids():
            self.nodes[nid].originates = True
        self.slot_members: dict[int, set] = {}
        self.packets: dict[tuple, _PacketStatus] = {}
        self.sequence = Counter()
        self.metrics = RunMetrics(frame_duration_s=cfg.frame_duration)
        self.trace = [] if trace else None
        self.mode_log = {} if mode_log else None
        self.check_tdd = check_tdd
        self.reservation_frames = 0
        self.dropped = 0
        self.first_receptions = 0
        self.frames_run = 0

    @property
    def aircraft(self):
        return self.nodes[1:]

    @property
    def active_slots(self) -> list[int]:
        return sorted({n.reserved_slot for n in self.aircraft if n.reserved_slot is not None})

    def _state(self, nid, slot) -> SlotState:
        self.slot_members.setdefault(slot, set()).add(nid)
        return self.nodes[nid].slot_state(slot)

    def in_flight(self) -> int:
        return sum(1 for s in self.packets.values() if s.holders and not s.delivered)

    def conservation(self) -> tuple:
        """(generated, delivered, undelivered, in_flight)."""
        delivered = sum(1 for s in self.packets.values() if s.delivered)
        return (len(self.packets), delivered, self.dropped, self.in_flight())

    def busy(self) -> bool:
        for slot, members in self.slot_members.items():
            for nid in members:
                ss = self.nodes[nid].slots[slot]
                if ss.queue or ss.owe_ack is not None or ss.awaiting_since is not None:
                    return True
        return False


def build_scenario(cfg: ScenarioConfig, *, loss=None, trace=False, mode_log=False,
                   check_tdd=True) -> SimState:
    """Place the ground station and aircraft along the chain; nothing reserved yet."""
    return SimState(cfg, loss=loss, trace=trace, mode_log=mode_log, check_tdd=check_tdd)


def reserve_slots(state: SimState) -> SimState:
    """Reservation phase: each aircraft listens through frame 1, then claims a
    random free reserved-access slot; same-frame clashes retry next frame."""
    cfg = state.cfg
    region = list(cfg.frame.reserved_slots)
    fixed = cfg.slot_assignment or {}
    for nid, slot in fixed.items():
        state.nodes[nid].reserved_slot = slot
    pending = [n for n in state.aircraft if n.reserved_slot is None]
    taken = {n.reserved_slot for n in state.aircraft if n.reserved_slot is not None}
    if len(pending) > len(set(region) - taken):
        raise CapacityExhaustedError(
            f"{len(pending)} aircraft need a slot but only {len(set(region) - taken)} "
            f"of {len(region)} reserved-access slots are free"
        )
    frame = 1  # listening frame
    contended = bool(pending)
    while pending:
        frame += 1
        free = [s for s in region if s not in taken]
        picks = {n.node_id: state.reservation_rng.choice(free) for n in pending}
        counts = Counter(picks.values())
        still = []
        for node in pending:
            slot = picks[node.node_id]
            if counts[slot] == 1:
                node.reserved_slot = slot
                taken.add(slot)
            else:
                still.append(node)
        pending = still
    state.reservation_frames = frame if contended else 0
    for node in state.aircraft:
        state._state(node.node_id, node.reserved_slot)
    return state


def _position_report(node: AircraftNode, frame: int, frame_s: float) -> PositionReport:
    lon = (node.position_km / KM_PER_DEGREE + 180.0) % 360.0 - 180.0
    return PositionReport(
        aircraft_id=node.node_id,
        latitude=0.0,
        longitude=lon,
        altitude=35_000,
        timestamp=int(frame * frame_s) % 86_400,
    )


def _weather_report(node: AircraftNode, seq: int, frame: int, frame_s: float) -> WeatherReport:
    return WeatherReport(
        time=int(frame * frame_s) % 86_400,
        wind_dir=(37 * seq + 11 * node.node_id) % 360,
        wind_speed=(seq + node.node_id) % 90,
        vis_dir=(53 * seq) % 360,
        vis_dist=10 + seq % 40,
        cloud_amount=seq % 8,
        cloud_height=(25 + seq) % 512,
        cloud_type=node.node_id % 8,
        special=SpecialWeather((seq * 29 + node.node_id) % 256) if seq % 5 == 0 else SpecialWeather.NONE,
    )


def begin_frame(state: SimState, frame: int, generate: bool = True) -> SimState:
    """Queue fresh reports due in this frame."""
    cfg = state.cfg
    if not generate or frame % cfg.report_interval_frames:
        return state
    frame_s = cfg.frame_duration
    with_weather = cfg.weather_enabled and state.variant is MacVariant.PROPOSED
    for node in state.aircraft:
        if not node.originates:
            continue
        seq = state.sequence[node.node_id]
        state.sequence[node.node_id] += 1
        wx = _weather_report(node, seq, frame, frame_s) if with_weather else None
        packet = Packet(node.node_id, seq, compose_payload(_position_report(node, frame, frame_s),
                                                           wx, state.variant),
                        frame, node.reserved_slot)
        status = state.packets[packet.key] = _PacketStatus(packet)
        ss = state._state(node.node_id, node.reserved_slot)
        ss.queue.append(packet)
        ss.seen.add(packet.key)
        status.holders += 1
        state.metrics.generated += 1
    return state


def _trace(state, frame, slot, sender, receiver, kind, packet, attempt, outcome):
    if state.trace is not None:
        state.trace.append(TraceRecord(frame, slot, sender, receiver, kind, packet, attempt, outcome))


def _pop_head(state: SimState, ss: SlotState, frame: int):
    packet = ss.queue.popleft()
    status = state.packets[packet.key]
    status.holders -= 1
    if status.holders == 0 and not status.delivered:
        state.dropped += 1
    ss.attempts = 0
    ss.first_tx_frame = None
    ss.next_tx_frame = frame + 1


def _resolve(state: SimState, ss: SlotState, frame: int, verdict):
    """Settle the head-of-queue packet after its ACK window closed."""
    ss.awaiting_since = None
    ss.ack_heard = None
    if not ss.queue:
        return
    if verdict is Verdict.ACK:
        _pop_head(state, ss, frame)
    elif ss.attempts >= state.cfg.retry_limit:
        _pop_head(state, ss, frame)
    else:
        ss.next_tx_frame = frame + 1


def _receive_data(state: SimState, frame: int, slot: int, tx: _Transmission, receiver: int):
    """Receiver decoded a data transmission; returns the verdict it owes the sender."""
    packet = tx.packet
    node = state.nodes[receiver]
    ss = state._state(receiver, slot)
    key = packet.key
    if key in ss.seen:
        return Verdict.ACK
    if not node.is_ground_station and state.cfg.queue_limit is not None \
            and len(ss.queue) >= state.cfg.queue_limit:
        return Verdict.NACK
    ss.seen.add(key)
    sender_ss = state.nodes[tx.sender].slots[slot]
    packet.hop_trace.append(HopRecord(tx.sender, frame, slot, tx.attempt))
    state.metrics.attempts_per_hop[tx.attempt] += 1
    state.metrics.hop_delay_frames[frame - sender_ss.first_tx_frame + 1] += 1
    state.first_receptions += 1
    status = state.packets[key]
    if node.is_ground_station:
        if not status.delivered:
            status.delivered = True
            frames = frame + 1 - packet.created_frame
            state.metrics.delivered.append(
                Delivery(packet, frames, frames * state.cfg.frame.frame_ns / 1e9))
    else:
        if node.originates and node.reserved_slot == slot:
            state.metrics.slot_conflicts.append(
                SlotConflict(frame, slot, receiver, "own_slot_relay", (tx.sender,)))
        ss.queue.append(packet)
        status.holders += 1
    return Verdict.ACK


def _hear(state, frame, slot, transmitters, listening):
    """Resolve who decodes what. Returns {(sender, receiver): outcome} for
    every listener adjacent to a transmitter."""
    n = len(state.nodes)
    heard = {}
    for t in sorted(transmitters):
        for r in (t - 1, t + 1):
            if 0 <= r < n:
                heard.setdefault(r, []).append(t)
    outcomes = {}
    for r in sorted(heard):
        senders = heard[r]
        if r in transmitters:
            for t in senders:
                outcomes[(t, r)] = "deaf"
            continue
        listening.add(r)
        if len(senders) > 1:
            state.metrics.slot_conflicts.append(
                SlotConflict(frame, slot, r, "receiver_collision", tuple(senders)))
            for t in senders:
                outcomes[(t, r)] = "collision"
            continue
        t = senders[0]
        outcomes[(t, r)] = "lost" if state.loss(frame, slot, t, r) else "ok"
    return outcomes


def step_slot(state: SimState, frame: int, slot: int) -> SimState:
    members = state.slot_members.get(slot)
    if not members:
        return state
    proposed = state.variant is MacVariant.PROPOSED
    nodes = state.nodes
    transmissions = {}
    must_listen = set()

    for nid in sorted(members):
        ss = nodes[nid].slots[slot]
        waiting = ss.awaiting_since is not None and ss.awaiting_since == frame - 1
        owes = ss.owe_ack is not None and ss.owe_ack_frame == frame
        if state.check_tdd:
            state.metrics.tdd_checks += 1
            if waiting and owes:
                raise ProtocolViolationError(
                    f"node {nid} must both listen for an ACK and transmit one "
                    f"in frame {frame}, slot {slot}"
                )
        if waiting:
            must_listen.add(nid)
            continue
        packet = None
        if ss.queue and ss.next_tx_frame <= frame and ss.heard_data_frame != frame - 1:
            packet = ss.queue[0]
        if packet is None and not owes:
            continue
        attempt = 0
        if packet is not None:
            ss.attempts += 1
            attempt = ss.attempts
            if ss.first_tx_frame is None:
                ss.first_tx_frame = frame
            state.metrics.transmissions += 1
        elif owes:
            state.metrics.transmissions += 1
        transmissions[nid] = _Transmission(nid, packet, attempt, ss.owe_ack if owes else None)
        if owes:
            ss.owe_ack = None
            ss.owe_ack_frame = None

    listening = set(must_listen)
    outcomes = _hear(state, frame, slot, transmissions, listening)

    inslot_acks = {}  # legacy: receiver -> (sender, PiggybackAck)
    for t in sorted(transmissions):
        tx = transmissions[t]
        if tx.packet is not None:
            r = t - 1
            outcome = outcomes.get((t, r), "deaf")
            kind = "data" if tx.packet.origin_id == t else "relay"
            _trace(state, frame, slot, t, r, kind, tx.packet.label, tx.attempt, outcome)
            if outcome == "ok":
                verdict = _receive_data(state, frame, slot, tx, r)
                ack = PiggybackAck(tx.packet.key, verdict)
                if proposed:
                    rs = state._state(r, slot)
                    rs.owe_ack = ack
                    rs.owe_ack_frame = frame + 1
                else:
                    inslot_acks[r] = (t, ack)
            up = t + 1
            if outcomes.get((t, up)) == "ok" and up < len(nodes):
                state._state(up, slot).heard_data_frame = frame
            if proposed:
                state.nodes[t].slots[slot].awaiting_since = frame
        if tx.ack is not None:
            up = t + 1
            outcome = outcomes.get((t, up), "deaf")
            _trace(state, frame, slot, t, up, "ack", f"{tx.ack.acked_sequence[0]}:{tx.ack.acked_sequence[1]}",
                   0, outcome)
            if outcome == "ok":
                us = nodes[up].slots.get(slot)
                if us is not None and us.queue and us.queue[0].key == tx.ack.acked_sequence:
                    us.ack_heard = tx.ack.verdict

    if proposed:
        for nid in sorted(must_listen):
            ss = nodes[nid].slots[slot]
            _resolve(state, ss, frame, ss.ack_heard or Verdict.NACK)
    else:
        _legacy_ack_phase(state, frame, slot, transmissions, inslot_acks, listening)

    if state.mode_log is not None:
        modes = {}
        for nid in transmissions:
            modes[nid] = Mode.TRANSMIT
        for nid in listening:
            if nid in modes:
                raise ProtocolViolationError(f"node {nid} in transmit and listen mode")
            modes[nid] = Mode.LISTEN
        state.mode_log[(frame, slot)] = modes
    return state


def _legacy_ack_phase(state, frame, slot, transmissions, inslot_acks, listening):
    acked = {}
    if inslot_acks:
        outcomes = _hear(state, frame, slot, set(inslot_acks), set())
        for r in sorted(inslot_acks):
            t, ack = inslot_acks[r]
            outcome = outcomes.get((r, t), "deaf")
            _trace(state, frame, slot, r, t, "ack", f"{ack.acked_sequence[0]}:{ack.acked_sequence[1]}",
                   0, outcome)
            if outcome == "ok":
                acked[t] = ack.verdict
    for t in sorted(transmissions):
        tx = transmissions[t]
        if tx.packet is None:
            continue
        _resolve(state, state.nodes[t].slots[slot], frame, acked.get(t, Verdict.NACK))


def _finalize(state: SimState) -> RunMetrics:
    m = state.metrics
    m.frames_run = state.frames_run
    m.reservation_frames = state.reservation_frames
    m.undelivered_count = state.dropped + state.in_flight()
    sim_seconds = state.frames_run * state.cfg.frame.frame_ns / 1e9
    bits = sum(len(d.packet.payload) for d in m.delivered)
    m.gs_goodput_bits_per_s = bits / sim_seconds if sim_seconds else 0.0
    layout = state.layout
    m.measured_utilization = (
        state.first_receptions * layout.data_ns / (m.transmissions * layout.slot_ns)
        if m.transmissions else 0.0
    )
    return m


def simulate(state: SimState, frames: int) -> RunMetrics:
    """Run ``frames`` traffic frames, then (if configured) drain in-flight packets."""
    slots = state.active_slots
    frame = 0
    for frame in range(frames):
        begin_frame(state, frame)
        for slot in slots:
            step_slot(state, frame, slot)
    state.frames_run = frames
    if state.cfg.drain:
        limit = frames + (state.cfg.n_nodes + 1) * (2 * state.cfg.retry_limit + 2) * 4
        frame = frames
        while frame < limit and state.busy():
            for slot in slots:
                step_slot(state, frame, slot)
            frame += 1
        state.frames_run = frame
    return _finalize(state)


def run(cfg: ScenarioConfig, frames: int | None = None, *, loss=None, trace=False,
        mode_log=False, check_tdd=True):
    """Build, reserve and simulate; returns ``(metrics, state)``."""
    state = build_scenario(cfg, loss=loss, trace=trace, mode_log=mode_log, check_tdd=check_tdd)
    reserve_slots(state)
    metrics = simulate(state, cfg.sim_frames if frames is None else frames)
    return metrics, state
