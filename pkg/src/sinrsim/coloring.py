"""Distributed node coloring (and its MIS reduction) under one-way links.

Every node walks the same state machine:

    learning -> wait -> compete(0) -+-> announce -> colored
                  ^        |        |
                  |        v        |
                  +---- request -> compete(j) -> compete(j+1) ...

*Learning* is a three-way handshake that tells a node which of its incoming
links are actually bidirectional.  A node may only enter the competitive
part while no *uncolored* node dominates it (reaches it without being
reachable back).  Leadership is decided in compete(0) by a counter race:
counters drift up once per eligible slot, competitors knock each other back
by announcing counter values, and whoever crosses the finish line first
announces a leader color.  Everyone else obtains a color interval from an
adjacent leader and verifies consecutive colors in further compete rounds.

Time accounting: every second slot (relative to wake-up) is reserved for
answering neighborhood-learning requests of late wakers, so all protocol
budgets below count *eligible* slots only and span twice as many wall
slots.  Counters are kept as lazy offsets against the eligible-slot count,
which lets the event-driven engine skip the long silent stretches.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Mapping, NamedTuple, Optional

import numpy as np

from .engine import ProtocolMachine
from .errors import ProtocolViolationError
from .model import Network, NetworkParams, Node

CORE, ANSWER = 0, 1

LEARNING = "learning"
WAIT = "wait"
COMPETE = "compete"
REQUEST = "request"
ANNOUNCE = "announce"
COLORED = "colored"


# -- messages ---------------------------------------------------------------


class LearnReq(NamedTuple):
    pass


class LearnReply(NamedTuple):
    target: int


class LearnAck(NamedTuple):
    target: int


class CounterMsg(NamedTuple):
    color: int
    value: int


class ColorMsg(NamedTuple):
    color: int
    fresh: bool = False  # True while the sender is still announcing


class RequestMsg(NamedTuple):
    leader: int


class AssignMsg(NamedTuple):
    target: int
    color: int


# -- protocol constants -------------------------------------------------------


@dataclass(frozen=True)
class ColoringConstants:
    """All slot budgets and probabilities of one protocol instantiation.

    Budgets are in eligible-slot units (half the wall slots, see module
    docstring).  Combinatorial counts derived from the squared range ratio
    use ceilings, which only loosens them.
    """

    prob_std: float
    prob_leader: float
    slots_std: int
    slots_leader: int
    leader_colors: int
    compete_span: int
    listen_slots: int
    serve_delay: int
    request_budget: int
    learning_budget: int
    reply_window: int
    status_ttl: int
    stale_after: int
    floor_leader_race: int
    floor_color_race: int
    max_degree: int
    region_cap: float

    @classmethod
    def derive(
        cls,
        params: NetworkParams,
        region_cap: float,
        max_degree: int,
        range_ratio: float,
        n_hint: int,
        scale: Optional[float] = None,
    ) -> "ColoringConstants":
        scale = params.scale if scale is None else scale
        degree = max(1, max_degree)
        ratio_sq = range_ratio**2
        prob_std = region_cap / (2.0 * degree)
        prob_leader = region_cap / (18.0 * ratio_sq)
        log_n = math.log(max(2, n_hint))
        slots_std = max(1, math.ceil(scale * 8.0 * params.c_whp / prob_std * log_n))
        slots_leader = max(1, math.ceil(scale * 8.0 * params.c_whp / prob_leader * log_n))
        span = math.ceil(38.0 * ratio_sq)
        listen = (span + 3) * slots_std
        budget_sum = 9.0 * ratio_sq * prob_leader + degree * prob_std
        if budget_sum > region_cap * (1.0 + 1e-9):
            raise ValueError(
                "probability split violates the per-region budget: "
                f"{budget_sum} > {region_cap}"
            )
        return cls(
            prob_std=prob_std,
            prob_leader=prob_leader,
            slots_std=slots_std,
            slots_leader=slots_leader,
            leader_colors=math.ceil(9.0 * ratio_sq) + 1,
            compete_span=span,
            listen_slots=listen,
            serve_delay=listen,
            request_budget=(span + 4) * slots_std + degree * slots_leader,
            learning_budget=(2 * degree + 1) * slots_std,
            reply_window=slots_std,
            status_ttl=slots_std,
            stale_after=(span + 4) * slots_std + degree * slots_leader,
            floor_leader_race=-degree * slots_leader,
            floor_color_race=-span * slots_std,
            max_degree=degree,
            region_cap=region_cap,
        )

    def core_budget(self) -> int:
        """Worst-case eligible slots for one pass of the competitive part
        (compete(0), maximal consecutive competes, request, announce)."""
        compete0 = 3 * self.slots_std + self.max_degree * self.slots_leader
        competes = self.compete_span * (self.compete_span + 3) * self.slots_std
        request = self.request_budget
        announce = self.slots_leader + self.slots_std
        return compete0 + competes + request + announce

    def termination_budget(self, longest_chain: int) -> int:
        """Wall slots within which every node of a statically awake network
        must be colored: learning + initial listen + (chain + 1) passes of
        the competitive part, doubled for the answer-lane reservation."""
        ticks = (
            self.learning_budget
            + self.listen_slots
            + (longest_chain + 1) * self.core_budget()
        )
        return 2 * ticks


def free_counter_value(estimates, zeta: int) -> int:
    """Largest integer x <= 0 avoiding [d - zeta, d + zeta] for every
    estimate d."""
    x = 0
    while True:
        conflicts = [d for d in estimates if d - zeta <= x <= d + zeta]
        if not conflicts:
            return x
        x = min(d - zeta for d in conflicts) - 1


# -- the machine --------------------------------------------------------------


class ColoringMachine(ProtocolMachine):
    """One node's view of the coloring (or MIS) protocol."""

    LANES = 2

    def __init__(
        self,
        node: Node,
        rng: np.random.Generator,
        constants: ColoringConstants,
        *,
        mis: bool = False,
    ):
        super().__init__(node, rng)
        self.k = constants
        self.mis = mis

        self.phase = LEARNING
        self.color: Optional[int] = None
        self.colored_at: Optional[int] = None
        self.competes_visited = 0
        self.consecutive_competes = 0
        self.max_consecutive_competes = 0
        self.resigned_count = 0
        self.floor_violations = 0

        # link knowledge
        self.heard_from: dict[int, int] = {}  # sender -> last slot heard
        self.confirmed_out: set[int] = set()  # nodes known to hear us
        self.known_colored: dict[int, tuple[int, int]] = {}  # node -> (color, slot)
        self.taken_colors: dict[int, tuple[int, int]] = {}  # color -> (owner, slot)

        # compete bookkeeping (offsets against the eligible-slot count)
        self._compete_color = 0
        self._zeta = 0
        self._racing = False
        self._c_off = 0
        self._d_off: dict[int, int] = {}

        # request / colored bookkeeping
        self._request_leader: Optional[int] = None
        self._queue: deque[int] = deque()
        self._queued: set[int] = set()
        self._serving_enabled = False
        self._current: Optional[int] = None
        self._current_color: Optional[int] = None
        self.reuse: dict[int, int] = {}
        self._serve_count = 0
        self._resign_pending = False
        self._announce_stage = 0

        # answer lane
        self._answers: deque[tuple[str, int]] = deque()
        self._answer_pending: set[tuple[str, int]] = set()
        self._answer_done: dict[tuple[str, int], int] = {}
        self._answer_current: Optional[tuple[str, int]] = None

        self._timers: dict[str, int] = {}

    # -- eligible-slot arithmetic -----------------------------------------

    def _ticks(self, slot: int) -> int:
        """Core-eligible slots in [wake, slot)."""
        return (slot - self.node.wake_slot + 1) // 2

    def _after_ticks(self, anchor: int, ticks: int) -> int:
        """Earliest slot by which `ticks` more core-eligible slots passed."""
        return self.node.wake_slot + 2 * (self._ticks(anchor) + ticks) - 1

    def _answer_ticks(self, slot: int) -> int:
        return (slot - self.node.wake_slot) // 2

    def _after_answer_ticks(self, anchor: int, ticks: int) -> int:
        return self.node.wake_slot + 2 * (self._answer_ticks(anchor) + ticks)

    # -- timers -------------------------------------------------------------

    def _set_timer(self, name: str, slot: int) -> None:
        self._timers[name] = slot
        self._resched()

    def _clear_timer(self, name: str) -> None:
        if self._timers.pop(name, None) is not None:
            self._resched()

    def _resched(self) -> None:
        self.schedule(min(self._timers.values()) if self._timers else None)

    def poll(self, slot: int) -> None:
        due = sorted(name for name, t in self._timers.items() if t <= slot)
        for name in due:
            del self._timers[name]
        self._resched()
        for name in due:
            self._dispatch(name, slot)

    def _dispatch(self, name: str, slot: int) -> None:
        if name == "answer":
            self._answer_window_done(slot)
        elif name == "core":
            self._core_timer(slot)
        elif name == "learn_end":
            if self.phase == LEARNING:
                self._learning_over(slot)
        elif name == "timeout":
            if self.phase == REQUEST:
                self.record(slot, "request_timeout", self._request_leader)
                self._to_wait(slot)
        elif name == "serve":
            self._serve_timer(slot)

    # -- engine callbacks ----------------------------------------------------

    def wake(self, slot: int) -> None:
        self.configure_lane(CORE, 2, self.node.wake_slot % 2)
        self.configure_lane(ANSWER, 2, (self.node.wake_slot + 1) % 2)
        self.phase = LEARNING
        self.set_prob(CORE, self.k.prob_std)
        self._set_timer("core", self._after_ticks(slot, self.k.slots_std))
        self._set_timer("learn_end", self._after_ticks(slot, self.k.learning_budget))
        self.record(slot, "wake", None)

    def on_transmit(self, slot: int, lane: int) -> tuple[Any, float]:
        if lane == ANSWER:
            if self._answer_current is None:
                raise ProtocolViolationError(
                    f"node {self.node.id}: answer lane fired while idle"
                )
            kind, target = self._answer_current
            msg = LearnReply(target) if kind == "reply" else LearnAck(target)
            return msg, self.node.power
        if self.phase == LEARNING:
            return LearnReq(), self.node.power
        if self.phase == COMPETE:
            return (
                CounterMsg(self._compete_color, self._c_off + self._ticks(slot + 1)),
                self.node.power,
            )
        if self.phase == REQUEST:
            return RequestMsg(self._request_leader), self.node.power
        if self.phase == ANNOUNCE:
            return ColorMsg(self.color, True), self.node.power
        if self.phase == COLORED:
            if self._current is not None:
                return AssignMsg(self._current, self._current_color), self.node.power
            return ColorMsg(self.color, False), self.node.power
        raise ProtocolViolationError(
            f"node {self.node.id}: core lane fired in phase {self.phase}"
        )

    def on_receive(self, slot: int, messages: list[tuple[int, Any]]) -> None:
        for sender, msg in messages:
            self.heard_from[sender] = slot
            if isinstance(msg, LearnReq):
                self._queue_answer(slot, "reply", sender)
            elif isinstance(msg, LearnReply):
                if msg.target == self.node.id:
                    self.confirmed_out.add(sender)
                    self._queue_answer(slot, "ack", sender)
            elif isinstance(msg, LearnAck):
                if msg.target == self.node.id:
                    self.confirmed_out.add(sender)
            elif isinstance(msg, ColorMsg):
                self._saw_color(slot, sender, msg.color, msg.fresh)
            elif isinstance(msg, CounterMsg):
                self._saw_counter(slot, sender, msg)
            elif isinstance(msg, RequestMsg):
                if msg.leader == self.node.id:
                    self._saw_request(slot, sender)
            elif isinstance(msg, AssignMsg):
                # only colored leaders assign: keep the sender's color claim
                # alive through its long service windows, during which it
                # pauses its own color beacons
                entry = self.known_colored.get(sender)
                if entry is not None:
                    self.known_colored[sender] = (entry[0], slot)
                    owner = self.taken_colors.get(entry[0])
                    if owner is not None and owner[0] == sender:
                        self.taken_colors[entry[0]] = (sender, slot)
                if msg.target == self.node.id and self.phase == REQUEST:
                    self.record(slot, "assigned", msg.color)
                    self._clear_timer("timeout")
                    self._enter_compete(slot, msg.color)
        if self.phase in (COMPETE, REQUEST, ANNOUNCE) and self._dominated(slot):
            self.record(slot, "dominated_abort", None)
            self._to_wait(slot)

    # -- knowledge ------------------------------------------------------------

    def _status_fresh(self, slot: int, stamped: int, color: int) -> bool:
        # leader colors are beaconed at the (slower) leader probability while
        # their holder serves requests, so their claims live a leader round
        ttl = self.k.slots_leader if color < self.k.leader_colors else self.k.status_ttl
        return slot - stamped <= 2 * ttl

    def _color_of(self, slot: int, other: int) -> Optional[int]:
        entry = self.known_colored.get(other)
        if entry is not None and self._status_fresh(slot, entry[1], entry[0]):
            return entry[0]
        return None

    def _dominated(self, slot: int) -> bool:
        """An uncolored node reaches us that we cannot answer."""
        for other, heard in self.heard_from.items():
            if other in self.confirmed_out:
                continue
            if slot - heard > 2 * self.k.stale_after:
                continue  # presumed gone (asleep or dead)
            if self._color_of(slot, other) is None:
                return True
        return False

    def _free_leader_color(self, slot: int) -> int:
        for color in range(self.k.leader_colors):
            entry = self.taken_colors.get(color)
            if entry is None or not self._status_fresh(slot, entry[1], color):
                return color
        raise ProtocolViolationError(
            f"node {self.node.id}: no free leader color at slot {slot}"
        )

    # -- message reactions ----------------------------------------------------

    def _saw_color(self, slot: int, sender: int, color: int, fresh: bool) -> None:
        self.known_colored[sender] = (color, slot)
        self.taken_colors[color] = (sender, slot)
        if self.mis and color == 0 and self.phase in (WAIT, COMPETE, ANNOUNCE):
            self._decide(slot, 1)
            return
        if self.phase == COMPETE:
            if self._compete_color == 0 and not self.mis and color < self.k.leader_colors:
                if sender in self.confirmed_out:
                    self.record(slot, "lost_leadership", sender)
                    self._enter_request(slot, sender)
            elif self._compete_color > 0 and color == self._compete_color:
                self.record(slot, "lost_color", color)
                self._enter_compete(slot, color + 1, consecutive=True)
        elif self.phase == ANNOUNCE and color == self.color:
            self.record(slot, "announce_conflict", sender)
            self.color = None
            self._to_wait(slot)
        elif self.phase == COLORED and color == self.color:
            # Only a conflicting *announcement* forces resignation.  Steady
            # color beacons can also arrive from beyond the sender's
            # broadcasting range when interference happens to be low; those
            # senders are not graph neighbors, so yielding to them would
            # thrash (particularly in MIS mode, where only two colors
            # exist).  In coloring mode a steady-beacon conflict still
            # signals a genuinely broken coloring, so accept it as a
            # resignation trigger there.
            if fresh or not self.mis:
                if self._current is not None:
                    self._resign_pending = True  # finish the assignment in flight
                else:
                    self._resign(slot)

    def _saw_counter(self, slot: int, sender: int, msg: CounterMsg) -> None:
        if self.phase != COMPETE or msg.color != self._compete_color:
            return
        ticks = self._ticks(slot + 1)
        self._d_off[sender] = msg.value - ticks
        if self._racing:
            mine = self._c_off + ticks
            if abs(mine - msg.value) <= self._zeta:
                fresh = free_counter_value(
                    [off + ticks for off in self._d_off.values()], self._zeta
                )
                self._check_floor(slot, fresh)
                self.record(slot, "reset", {"from": mine, "to": fresh, "by": sender})
                self._c_off = fresh - ticks
                self._set_win_timer(slot)

    def _saw_request(self, slot: int, sender: int) -> None:
        if self.phase not in (ANNOUNCE, COLORED):
            return
        if self.color is None or self.color >= self.k.leader_colors or self.mis:
            return
        if sender != self._current and sender not in self._queued:
            self._queue.append(sender)
            self._queued.add(sender)
        if self.phase == COLORED and self._serving_enabled and self._current is None:
            self._try_serve(slot)

    # -- phase transitions ------------------------------------------------------

    def _to_wait(self, slot: int, initial: bool = False) -> None:
        self.phase = WAIT
        self.done = False
        self.color = None
        self.colored_at = None
        self.consecutive_competes = 0
        self._racing = False
        self._request_leader = None
        self._current = None
        self._current_color = None
        self._serving_enabled = False
        self._resign_pending = False
        for name in ("core", "timeout", "serve"):
            self._timers.pop(name, None)
        self._resched()
        self.set_prob(CORE, 0.0)
        wait = self.k.listen_slots if initial else self.k.slots_std
        self._set_timer("core", self._after_ticks(slot, wait))

    def _wait_test(self, slot: int) -> None:
        if self.mis:
            for other in self.heard_from:
                if self._color_of(slot, other) == 0:
                    self._decide(slot, 1)
                    return
        if self._dominated(slot):
            self._set_timer("core", self._after_ticks(slot, self.k.slots_std))
            return
        if not self.mis:
            leaders = sorted(
                other
                for other in self.confirmed_out
                if other in self.heard_from
                and (c := self._color_of(slot, other)) is not None
                and c < self.k.leader_colors
            )
            if leaders:
                self._enter_request(slot, leaders[0])
                return
        self._enter_compete(slot, 0)

    def _enter_request(self, slot: int, leader: int) -> None:
        self.phase = REQUEST
        self._racing = False
        self._request_leader = leader
        self.consecutive_competes = 0
        self.record(slot, "request", leader)
        self.set_prob(CORE, self.k.prob_std)
        self._set_timer("core", self._after_ticks(slot, self.k.slots_std))
        self._set_timer("timeout", self._after_ticks(slot, self.k.request_budget))

    def _enter_compete(self, slot: int, color: int, consecutive: bool = False) -> None:
        self.phase = COMPETE
        self._compete_color = color
        self._zeta = self.k.slots_leader if color == 0 else self.k.slots_std
        self._racing = False
        self._d_off = {}
        self.competes_visited += 1
        self.consecutive_competes = self.consecutive_competes + 1 if consecutive else 1
        self.max_consecutive_competes = max(
            self.max_consecutive_competes, self.consecutive_competes
        )
        self.record(slot, "compete", color)
        self.set_prob(CORE, 0.0)
        self._timers.pop("timeout", None)
        self._set_timer("core", self._after_ticks(slot, self.k.slots_std))

    def _start_racing(self, slot: int) -> None:
        self._racing = True
        ticks = self._ticks(slot + 1)
        start = free_counter_value(
            [off + ticks for off in self._d_off.values()], self._zeta
        )
        self._check_floor(slot, start)
        self._c_off = start - ticks
        self.set_prob(CORE, self.k.prob_std)
        self._set_win_timer(slot)

    def _check_floor(self, slot: int, value: int) -> None:
        floor = (
            self.k.floor_leader_race
            if self._compete_color == 0
            else self.k.floor_color_race
        )
        if value < floor:
            self.floor_violations += 1
            self.record(slot, "floor_violation", value)

    def _set_win_timer(self, slot: int) -> None:
        # earliest eligible slot whose pre-transmission counter value
        # exceeds the finish line
        need = self.k.slots_std + 1 - self._c_off
        win = self.node.wake_slot + 2 * (need - 1)
        self._set_timer("core", max(win, slot + 1))

    def _enter_announce(self, slot: int, color: int) -> None:
        self.phase = ANNOUNCE
        self.color = color
        self._racing = False
        self._announce_stage = 0
        self.record(slot, "announce", color)
        if color < self.k.leader_colors:
            self.set_prob(CORE, self.k.prob_leader)
            self._set_timer("core", self._after_ticks(slot, self.k.slots_leader))
        else:
            self._announce_stage = 1
            self.set_prob(CORE, self.k.prob_std)
            self._set_timer("core", self._after_ticks(slot, 2 * self.k.slots_std))

    def _enter_colored(self, slot: int) -> None:
        self.phase = COLORED
        self.colored_at = slot
        self.done = True
        self.consecutive_competes = 0
        self.record(slot, "colored", self.color)
        self.set_prob(CORE, self.k.prob_std)
        if not self.mis and self.color < self.k.leader_colors:
            self._serving_enabled = False
            self._set_timer("serve", self._after_ticks(slot, self.k.serve_delay))

    def _decide(self, slot: int, color: int) -> None:
        """MIS shortcut: adopt a final color without announcing."""
        self.color = color
        self._racing = False
        for name in ("core", "timeout", "serve"):
            self._timers.pop(name, None)
        self._resched()
        self._enter_colored(slot)

    def _resign(self, slot: int) -> None:
        self.resigned_count += 1
        self.record(slot, "resign", self.color)
        self._queue.clear()
        self._queued.clear()
        self._to_wait(slot)

    def force_resign(self, slot: int) -> None:
        """Harness hook simulating a color conflict (churn experiments)."""
        if self.phase == COLORED:
            self._resign(slot)

    # -- timer dispatch bodies ---------------------------------------------------

    def _core_timer(self, slot: int) -> None:
        if self.phase == LEARNING:
            self.set_prob(CORE, 0.0)  # request window over; keep listening
        elif self.phase == WAIT:
            self._wait_test(slot)
        elif self.phase == REQUEST:
            self.set_prob(CORE, 0.0)  # transmissions done, awaiting assignment
        elif self.phase == COMPETE:
            if not self._racing:
                self._start_racing(slot)
            else:
                color = (
                    self._compete_color
                    if self._compete_color > 0
                    else (0 if self.mis else self._free_leader_color(slot))
                )
                self.record(slot, "won", color)
                self._enter_announce(slot, color)
        elif self.phase == ANNOUNCE:
            if self._announce_stage == 0:
                self._announce_stage = 1
                self.set_prob(CORE, self.k.prob_std)
                self._set_timer("core", self._after_ticks(slot, self.k.slots_std))
            else:
                self._enter_colored(slot)

    def _serve_timer(self, slot: int) -> None:
        if self.phase != COLORED:
            return
        if not self._serving_enabled:
            self._serving_enabled = True
            self._try_serve(slot)
            return
        # a service window just ended
        self._current = None
        self._current_color = None
        if self._resign_pending:
            self._resign(slot)
            return
        self._try_serve(slot)

    def _try_serve(self, slot: int) -> None:
        if self._queue:
            target = self._queue.popleft()
            self._queued.discard(target)
            color = self.reuse.get(target)
            if color is None:
                color = self._serve_count * self.k.compete_span + self.k.compete_span
                self._serve_count += 1
                self.reuse[target] = color
            self._current = target
            self._current_color = color
            self.record(slot, "serve", {"target": target, "color": color})
            self.set_prob(CORE, self.k.prob_leader)
            self._set_timer("serve", self._after_ticks(slot, self.k.slots_leader))
        else:
            self._current = None
            self._current_color = None
            self.set_prob(CORE, self.k.prob_std)

    def _learning_over(self, slot: int) -> None:
        self.record(
            slot,
            "learned",
            {
                "in": sorted(self.heard_from),
                "out": sorted(self.confirmed_out),
            },
        )
        self._to_wait(slot, initial=True)

    # -- answer lane ---------------------------------------------------------

    def _queue_answer(self, slot: int, kind: str, target: int) -> None:
        key = (kind, target)
        if key in self._answer_pending:
            return
        last = self._answer_done.get(key)
        if last is not None and slot - last <= 4 * self.k.reply_window:
            return  # answered this handshake already
        self._answer_pending.add(key)
        self._answers.append(key)
        if self._answer_current is None:
            self._next_answer(slot)

    def _next_answer(self, slot: int) -> None:
        if self._answers:
            self._answer_current = self._answers.popleft()
            self.set_prob(ANSWER, self.k.prob_std)
            self._set_timer(
                "answer", self._after_answer_ticks(slot, self.k.reply_window)
            )
        else:
            self._answer_current = None
            self.set_prob(ANSWER, 0.0)

    def _answer_window_done(self, slot: int) -> None:
        if self._answer_current is not None:
            self._answer_pending.discard(self._answer_current)
            self._answer_done[self._answer_current] = slot
        self._next_answer(slot)


# -- validators ----------------------------------------------------------------


@dataclass
class ColoringVerdict:
    complete: bool
    valid: bool
    distinct_colors: int
    color_bound: int
    within_bound: bool
    leader_independent: bool
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.complete and self.valid and self.within_bound and self.leader_independent


def validate_coloring(
    network: Network,
    colors: Mapping[int, Optional[int]],
    constants: ColoringConstants,
) -> ColoringVerdict:
    """Check validity (no link between same-colored nodes, in either
    direction), the color-count budget, and leader independence."""
    problems: list[str] = []
    missing = [v for v in network.ids if colors.get(v) is None]
    complete = not missing
    if missing:
        problems.append(f"uncolored nodes: {missing[:8]}")

    valid = True
    for i, v in enumerate(network.ids):
        for j in np.nonzero(network.adjacency[i])[0]:
            u = network.ids[int(j)]
            if colors.get(v) is not None and colors.get(v) == colors.get(u):
                valid = False
                problems.append(f"link {v}->{u} joins equal colors {colors[v]}")

    used = {c for c in colors.values() if c is not None}
    bound = constants.leader_colors + constants.compete_span * (constants.max_degree + 1)
    within = len(used) <= bound

    leader_ok = True
    leaders = [v for v in network.ids if (c := colors.get(v)) is not None and c < constants.leader_colors]
    for a in range(len(leaders)):
        for b in range(a + 1, len(leaders)):
            i, j = network.index(leaders[a]), network.index(leaders[b])
            if network.bidirectional[i, j]:
                leader_ok = False
                problems.append(f"bidirectional leaders {leaders[a]}, {leaders[b]}")

    return ColoringVerdict(
        complete=complete,
        valid=valid and complete,
        distinct_colors=len(used),
        color_bound=bound,
        within_bound=within,
        leader_independent=leader_ok,
        problems=problems,
    )


@dataclass
class MisVerdict:
    complete: bool
    independent: bool
    dominating: bool
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.complete and self.independent and self.dominating


def validate_mis(network: Network, members: Mapping[int, Optional[bool]]) -> MisVerdict:
    """Independence: no communication link in either direction between two
    members.  Domination: every non-member hears some member (has an
    incoming link from one)."""
    problems: list[str] = []
    undecided = [v for v in network.ids if members.get(v) is None]
    complete = not undecided
    if undecided:
        problems.append(f"undecided nodes: {undecided[:8]}")

    independent = True
    dominating = True
    for i, v in enumerate(network.ids):
        if members.get(v):
            for j in np.nonzero(network.adjacency[i])[0]:
                u = network.ids[int(j)]
                if members.get(u):
                    independent = False
                    problems.append(f"linked members {v}, {u}")
        elif members.get(v) is not None:
            covered = any(
                members.get(network.ids[int(j)])
                for j in np.nonzero(network.adjacency[:, i])[0]
            )
            if not covered:
                dominating = False
                problems.append(f"non-member {v} hears no member")

    return MisVerdict(
        complete=complete,
        independent=independent,
        dominating=dominating and complete,
        problems=problems,
    )
