"""Teleportation pays two classical bits per qubit and moves states exactly.

Three little experiments: a random qubit crosses with fidelity 1 on all
four measurement branches; a register entangled with a bystander register
keeps the exact joint distribution; and the transcript/pool accounting is
two bits and one pair per qubit, always.
"""

import numpy as np

from disq import RegisterLayout, StateVector, marginal_probabilities, teleport_register
from disq.teleport import ClassicalChannel, EprPool


def random_state(layout, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << layout.n) + 1j * rng.normal(size=1 << layout.n)
    return StateVector.from_amplitudes(layout, amps / np.linalg.norm(amps))


print("1. a random single qubit, four different runs (different branches):")
st = random_state(RegisterLayout.of(("c", 1)), 7)
for seed in range(4):
    ch = ClassicalChannel()
    out = teleport_register(st, "c", ch, EprPool(1), np.random.default_rng(seed))
    fid = abs(np.vdot(out.amps, st.amps)) ** 2
    print(f"   branch bits {ch.transcript}: fidelity = {fid:.15f}")

print("\n2. a 3-qubit register entangled with a 2-qubit bystander:")
st = random_state(RegisterLayout.of(("bystander", 2), ("c", 3)), 11)
before = marginal_probabilities(st, ["bystander", "c"])
ch, pool = ClassicalChannel(), EprPool(3)
out = teleport_register(st, "c", ch, pool, np.random.default_rng(5))
after = marginal_probabilities(out, ["bystander", "c"])
print(f"   max |joint distribution change| = {np.max(np.abs(before - after)):.2e}")
print(f"   classical bits sent = {ch.bit_count}, pairs consumed = {pool.consumed}")

print("\n3. the relabel fast path (accounting without the circuit):")
ch_fast = ClassicalChannel()
fast = teleport_register(st, "c", ch_fast, EprPool(3), np.random.default_rng(5),
                         faithful=False)
print(f"   max |amplitude difference| vs faithful mode: {np.max(np.abs(fast.amps - out.amps)):.2e}")
print(f"   still {ch_fast.bit_count} classical bits on the channel")
