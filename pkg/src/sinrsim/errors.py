"""Exception types shared across the simulator."""


class ModelViolationError(RuntimeError):
    """A structural property of the network model was broken (e.g. a cycle
    of strictly unidirectional links, which the power-monotonicity of ranges
    rules out for any well-formed input)."""


class ProtocolViolationError(RuntimeError):
    """A protocol state machine was driven outside its contract (stepping a
    finished machine, transmitting while asleep, using a power outside the
    declared global bounds, ...)."""


class SimulationAbort(RuntimeError):
    """A protocol callback raised during a run; carries the offending node
    and slot so the failure is attributable."""

    def __init__(self, node_id: int, slot: int, cause: BaseException):
        super().__init__(f"protocol failure at node {node_id}, slot {slot}: {cause!r}")
        self.node_id = node_id
        self.slot = slot
        self.cause = cause
