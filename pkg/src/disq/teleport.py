"""Qubit-by-qubit teleportation of a register, with explicit resource accounting.

Each teleported qubit consumes one entangled pair from the pool and puts two
classical bits on the channel, so moving an L-qubit register costs exactly
L pairs and 2L bits.  The faithful path really executes the protocol
(entangled ancilla pair, basis-change measurement, conditioned X/Z fixups);
a relabel fast path skips the state manipulation for large runs but keeps
the accounting, and is distribution-identical because the post-fixup state
equals the input state on every measurement branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import statevec
from .statevec import StateVector

_PAIR_REG = "_tp_pair"  # transient ancilla register name, reserved during teleport

_EPR = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


class EprPoolError(RuntimeError):
    """Not enough unconsumed entangled pairs for the requested transfer."""


@dataclass
class ClassicalChannel:
    """Ordered transcript of classical bits sent between the two nodes."""

    transcript: list[int] = field(default_factory=list)

    def send(self, bit: int) -> None:
        if bit not in (0, 1):
            raise ValueError(f"channel carries single bits, got {bit!r}")
        self.transcript.append(bit)

    @property
    def bit_count(self) -> int:
        return len(self.transcript)


@dataclass
class EprPool:
    """Pre-shared entangled pairs; consumption never exceeds the allocation."""

    allocated: int
    consumed: int = 0

    @property
    def available(self) -> int:
        return self.allocated - self.consumed

    def consume(self, k: int = 1) -> None:
        if self.consumed + k > self.allocated:
            raise EprPoolError(
                f"requested {k} pair(s) with only {self.available} of {self.allocated} left"
            )
        self.consumed += k


def _teleport_qubit(state: StateVector, reg: str, k: int, rng: np.random.Generator):
    """Teleport qubit k of the register onto a fresh ancilla, in place of itself.

    Returns (state, z, x): the two classical bits are the measurement results
    that condition the remote Z/X fixups.
    """
    state = statevec.append_register(state, _PAIR_REG, 2, amplitudes=_EPR)
    state = statevec.apply_cnot(state, (reg, k), (_PAIR_REG, 1))
    state = statevec.apply_h_qubit(state, reg, k)
    z, state = statevec.measure_qubit(state, reg, k, rng)
    x, state = statevec.measure_qubit(state, _PAIR_REG, 1, rng)
    if x:
        state = statevec.apply_x_qubit(state, _PAIR_REG, 2)
    if z:
        state = statevec.apply_z_qubit(state, _PAIR_REG, 2)
    # The second ancilla half now carries the payload; swap it back into the
    # register slot and drop the two spent qubits (both in known basis states).
    state = statevec.swap_qubits(state, (reg, k), (_PAIR_REG, 2))
    state = statevec.remove_register(state, _PAIR_REG)
    return state, z, x


def teleport_register(
    state: StateVector,
    reg: str,
    channel: ClassicalChannel,
    pool: EprPool,
    rng: np.random.Generator,
    faithful: bool = True,
) -> StateVector:
    """Move a register from one node's ownership to the other's.

    The returned state has the same layout and, on every branch, exactly the
    same amplitudes (teleportation is exact); what changes is the accounting:
    width(reg) pairs consumed and 2*width(reg) bits on the channel, in
    (z, x) order per qubit.  ``faithful=False`` selects the relabel fast
    path: the state is untouched and the transcript bits are drawn uniformly,
    which is the exact distribution of the measurement results.
    """
    width = state.layout.width(reg)
    if _PAIR_REG in state.layout.names:
        raise ValueError(f"layout already contains reserved register {_PAIR_REG!r}")
    if pool.available < width:
        raise EprPoolError(
            f"register {reg!r} needs {width} pair(s), pool has {pool.available}"
        )
    for k in range(1, width + 1):
        if faithful:
            state, z, x = _teleport_qubit(state, reg, k, rng)
        else:
            z, x = int(rng.integers(0, 2)), int(rng.integers(0, 2))
        channel.send(z)
        channel.send(x)
        pool.consume(1)
    return state
