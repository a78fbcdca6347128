"""Shared helpers: brute-force oracles and a minimal single-machine driver."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from sinrsim.model import Network, NetworkParams, Node, build_network


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------


def brute_max_degree(network: Network) -> int:
    """Pairwise-distance count of nodes inside each transmission range."""
    best = 0
    for i in range(network.n):
        count = 0
        for j in range(network.n):
            if i == j:
                continue
            d = math.dist(
                (network.nodes[i].x, network.nodes[i].y),
                (network.nodes[j].x, network.nodes[j].y),
            )
            if d <= network.r_max[i]:
                count += 1
        best = max(best, count)
    return best


def brute_longest_chain(network: Network) -> int:
    """Exhaustive DFS over all simple paths in the one-way-link subgraph."""
    edges = {
        v: [
            network.ids[j]
            for j in np.nonzero(network.unidirectional[network.index(v)])[0]
        ]
        for v in network.ids
    }

    def dfs(v, seen):
        best = 0
        for u in edges[v]:
            if u not in seen:
                best = max(best, 1 + dfs(u, seen | {u}))
        return best

    return max(dfs(v, {v}) for v in network.ids)


def brute_ring_index(d: float, r: float):
    """Smallest ring index whose annulus contains distance d."""
    if d < 3.0 * r:
        return None
    i = 2
    while not ((i + 1) * r <= d <= (i + 2) * r):
        i += 1
    return i


def brute_free_counter(estimates, zeta: int) -> int:
    """Scan x = 0, -1, -2, ... for the first value outside all intervals."""
    x = 0
    while any(d - zeta <= x <= d + zeta for d in estimates):
        x -= 1
    return x


def brute_mis_verdict(network: Network, members: set[int]) -> tuple[bool, bool]:
    independent = True
    dominating = True
    for v in network.ids:
        if v in members:
            for u in network.out_neighbors(v):
                if u in members:
                    independent = False
        else:
            if not any(u in members for u in network.in_neighbors(v)):
                dominating = False
    return independent, dominating


# ---------------------------------------------------------------------------
# single-machine driver (engine stand-in for transition unit tests)
# ---------------------------------------------------------------------------


def drive_machine(machine, *, until: int, inbox=()) -> None:
    """Honors wake, scheduled polls and scripted receptions for one machine
    in isolation; the transmission lottery itself never fires."""
    queue = sorted(inbox)  # (slot, sender, message)
    machine.wake(machine.node.wake_slot)
    pos = 0
    slot = machine.node.wake_slot
    while slot <= until:
        cp = machine.next_checkpoint
        nxt_inbox = queue[pos][0] if pos < len(queue) else None
        candidates = [s for s in (cp, nxt_inbox) if s is not None and s <= until]
        if not candidates:
            return
        slot = min(candidates)
        if nxt_inbox == slot:
            batch = []
            while pos < len(queue) and queue[pos][0] == slot:
                batch.append((queue[pos][1], queue[pos][2]))
                pos += 1
            machine.on_receive(slot, batch)
        if machine.next_checkpoint == slot:
            machine.schedule(None)
            machine.poll(slot)


# ---------------------------------------------------------------------------
# topology snippets
# ---------------------------------------------------------------------------


@pytest.fixture
def exact_params():
    return NetworkParams.exact(alpha=3.0, beta=1.0, noise=1.0, delta=2.0, c_whp=2.0)


def pair_network(
    params: NetworkParams, d: float = 1.0, p0: float = 8.0, p1: float = 8.0, **node_kw
) -> Network:
    return build_network(
        [Node(0, 0.0, 0.0, p0, **node_kw), Node(1, d, 0.0, p1, **node_kw)], params
    )


def random_small_network(rng: np.random.Generator, n: int, params: NetworkParams) -> Network:
    side = math.sqrt(n) * 1.6
    nodes = []
    for i in range(n):
        nodes.append(
            Node(
                id=i,
                x=float(rng.uniform(0, side)),
                y=float(rng.uniform(0, side)),
                power=float(rng.uniform(1.0, 8.0)),
            )
        )
    return build_network(nodes, params)
