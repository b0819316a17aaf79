"""Dense state-vector simulation over named qubit registers.

A state is a flat array of 2^n complex amplitudes.  Registers occupy
contiguous global qubit positions in layout order, most significant first,
so a measured register reads as the same integer the protocol notation
assigns to it: with layout [("a", 2), ("c", 2)], global basis index
0b0111 means register a holds 1 and register c holds 3.

Controlled modular multiplication is applied as the basis permutation it
semantically is (values >= the modulus are fixed points, which keeps the
map a bijection and hence unitary); the Fourier transforms are applied as
orthonormal FFTs along the register axis.  Gate-level decompositions are
out of scope here -- circuit-cost questions are answered analytically by
the resources module.

Determinism: every random choice is drawn from the caller's
``numpy.random.Generator`` via inverse-CDF sampling, so a fixed generator
state fixes all outcomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .bitstrings import BitString

MAX_QUBITS = 26  # memory guard: at most 2^26 amplitudes (1 GiB complex128)

NORM_GUARD = 1e-8  # measurement-time probability drift that trips an error

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class CapacityError(RuntimeError):
    """A layout (or an operation's extension of one) would exceed MAX_QUBITS."""


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered, named, fixed-width qubit registers packed most-significant-first."""

    registers: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.registers]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate register names in {names}")
        for name, width in self.registers:
            if width < 1:
                raise ValueError(f"register {name!r} must have width >= 1, got {width}")
        if self.n > MAX_QUBITS:
            raise CapacityError(f"layout needs {self.n} qubits, guard is {MAX_QUBITS}")

    @classmethod
    def of(cls, *registers: tuple[str, int]) -> "RegisterLayout":
        return cls(tuple(registers))

    @property
    def n(self) -> int:
        return sum(width for _, width in self.registers)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    def width(self, name: str) -> int:
        for reg, width in self.registers:
            if reg == name:
                return width
        raise ValueError(f"unknown register {name!r} (have {self.names})")

    def offset(self, name: str) -> int:
        """Number of qubits before this register, counted from the global MSB."""
        off = 0
        for reg, width in self.registers:
            if reg == name:
                return off
            off += width
        raise ValueError(f"unknown register {name!r} (have {self.names})")

    def appended(self, name: str, width: int) -> "RegisterLayout":
        return RegisterLayout(self.registers + ((name, width),))

    def removed(self, name: str) -> "RegisterLayout":
        self.width(name)  # raises on unknown name
        return RegisterLayout(tuple(r for r in self.registers if r[0] != name))


@dataclass
class StateVector:
    """A register layout plus its 2^n complex amplitudes (always unit norm)."""

    layout: RegisterLayout
    amps: np.ndarray

    @classmethod
    def from_amplitudes(cls, layout: RegisterLayout, amps: np.ndarray) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        if amps.shape != (1 << layout.n,):
            raise ValueError(f"expected {1 << layout.n} amplitudes, got {amps.shape}")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > NORM_GUARD:
            raise ValueError(f"amplitudes are not normalized (norm {nrm})")
        return cls(layout, amps)

    @property
    def n(self) -> int:
        return self.layout.n

    def norm_error(self) -> float:
        """|sum of probabilities - 1|; should stay below 1e-10 at all times."""
        return abs(float(np.vdot(self.amps, self.amps).real) - 1.0)


def _global_pos(layout: RegisterLayout, reg: str, k: int) -> int:
    """Global qubit position of bit k (1-based, MSB-first) of a register."""
    width = layout.width(reg)
    if not 1 <= k <= width:
        raise ValueError(f"qubit index {k} out of range for register {reg!r} ({width} wide)")
    return layout.offset(reg) + k - 1


def _reg_axis(state: StateVector, reg: str) -> np.ndarray:
    """View of the amplitudes as (before, register, after)."""
    off = state.layout.offset(reg)
    w = state.layout.width(reg)
    post = state.n - off - w
    return state.amps.reshape(1 << off, 1 << w, 1 << post)


def _apply_1q(amps: np.ndarray, n: int, pos: int, u: np.ndarray) -> np.ndarray:
    post = 1 << (n - pos - 1)
    a = amps.reshape(-1, 2, post)
    out = np.empty_like(a)
    out[:, 0, :] = u[0, 0] * a[:, 0, :] + u[0, 1] * a[:, 1, :]
    out[:, 1, :] = u[1, 0] * a[:, 0, :] + u[1, 1] * a[:, 1, :]
    return out.reshape(-1)


def init_basis(layout: RegisterLayout, values: Mapping[str, int] | None = None) -> StateVector:
    """Computational basis state with each register set to its given value.

    Registers missing from ``values`` start at 0.
    """
    values = dict(values or {})
    for name in values:
        layout.width(name)  # raises on unknown name
    index = 0
    for name, width in layout.registers:
        v = values.get(name, 0)
        if not 0 <= v < (1 << width):
            raise ValueError(f"value {v} out of range for register {name!r} ({width} wide)")
        index = (index << width) | v
    amps = np.zeros(1 << layout.n, dtype=complex)
    amps[index] = 1.0
    return StateVector(layout, amps)


def apply_hadamard_register(state: StateVector, reg: str) -> StateVector:
    """Hadamard on every qubit of the register (|0..0> -> uniform superposition)."""
    off = state.layout.offset(reg)
    amps = state.amps
    for k in range(state.layout.width(reg)):
        amps = _apply_1q(amps, state.n, off + k, _H)
    return StateVector(state.layout, amps)


def apply_qft(state: StateVector, reg: str) -> StateVector:
    """Fourier transform on the register: |j> -> 2^(-t/2) sum_k e^{2 pi i jk/2^t} |k>."""
    a = _reg_axis(state, reg)
    return StateVector(state.layout, np.fft.ifft(a, axis=1, norm="ortho").reshape(-1))


def apply_inverse_qft(state: StateVector, reg: str) -> StateVector:
    """Adjoint of apply_qft; maps 2^(-t/2) sum_k e^{2 pi i jk/2^t} |k> back to |j>."""
    a = _reg_axis(state, reg)
    return StateVector(state.layout, np.fft.fft(a, axis=1, norm="ortho").reshape(-1))


def _modmul_inverse_table(w_ctrl: int, w_tgt: int, multiplier: int, modulus: int) -> np.ndarray:
    """inv[j, y] = preimage of target value y under multiplication by multiplier^j.

    Values y >= modulus are fixed points of the permutation.
    """
    minv = pow(multiplier, -1, modulus)
    powers = np.empty(1 << w_ctrl, dtype=np.int64)
    acc = 1
    for j in range(1 << w_ctrl):
        powers[j] = acc
        acc = acc * minv % modulus
    ys = np.arange(1 << w_tgt, dtype=np.int64)
    table = np.broadcast_to(ys, (1 << w_ctrl, 1 << w_tgt)).copy()
    in_ring = ys < modulus
    table[:, in_ring] = powers[:, None] * ys[None, in_ring] % modulus
    return table


def apply_controlled_modmul(
    state: StateVector, control: str, target: str, multiplier: int, modulus: int
) -> StateVector:
    """For each basis component |j>|x|: x -> multiplier^j * x mod modulus (x < modulus).

    Target values >= modulus are left unchanged, completing the map to a
    permutation of the basis (hence a unitary).  Requires
    gcd(multiplier, modulus) = 1, otherwise the map would not be a bijection.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if math.gcd(multiplier % modulus, modulus) != 1:
        raise ValueError(f"multiplier {multiplier} is not invertible mod {modulus}")
    w_tgt = state.layout.width(target)
    w_ctrl = state.layout.width(control)
    if (1 << w_tgt) < modulus:
        raise ValueError(f"target register {target!r} too narrow for modulus {modulus}")
    oc, ot = state.layout.offset(control), state.layout.offset(target)
    inv = _modmul_inverse_table(w_ctrl, w_tgt, multiplier % modulus, modulus)

    n = state.n
    if oc < ot:
        mid = ot - (oc + w_ctrl)
        shape = (1 << oc, 1 << w_ctrl, 1 << mid, 1 << w_tgt, 1 << (n - ot - w_tgt))
        idx = inv.reshape(1, 1 << w_ctrl, 1, 1 << w_tgt, 1)
        out = np.take_along_axis(state.amps.reshape(shape), idx, axis=3)
    else:
        mid = oc - (ot + w_tgt)
        shape = (1 << ot, 1 << w_tgt, 1 << mid, 1 << w_ctrl, 1 << (n - oc - w_ctrl))
        idx = inv.T.reshape(1, 1 << w_tgt, 1, 1 << w_ctrl, 1)
        out = np.take_along_axis(state.amps.reshape(shape), idx, axis=1)
    return StateVector(state.layout, out.reshape(-1))


def register_probabilities(state: StateVector, reg: str) -> np.ndarray:
    """Exact Born-rule marginal over the register, as a length-2^w float array."""
    a = _reg_axis(state, reg)
    return np.sum(np.abs(a) ** 2, axis=(0, 2))


def marginal_probabilities(state: StateVector, regs: Sequence[str]) -> np.ndarray:
    """Joint Born-rule marginal over several registers, axes in the given order."""
    if len(set(regs)) != len(regs):
        raise ValueError(f"duplicate registers in {regs}")
    for r in regs:
        state.layout.width(r)  # raises on unknown name
    shape = tuple(1 << w for _, w in state.layout.registers)
    probs = np.abs(state.amps.reshape(shape)) ** 2
    names = list(state.layout.names)
    keep = [names.index(r) for r in regs]
    drop = tuple(i for i in range(len(names)) if i not in keep)
    if drop:
        probs = probs.sum(axis=drop)
    kept_order = [i for i in range(len(names)) if i not in drop]
    return probs.transpose([kept_order.index(i) for i in keep])


def outcome_distribution(state: StateVector, reg: str) -> dict[BitString, float]:
    """Exact outcome distribution for measuring the register."""
    w = state.layout.width(reg)
    probs = register_probabilities(state, reg)
    return {BitString(w, k): float(p) for k, p in enumerate(probs)}


def project_register(
    state: StateVector, reg: str, value: int
) -> tuple[float, StateVector | None]:
    """Probability of the outcome and the renormalized post-projection state.

    Returns (0.0, None) when the outcome has no support.
    """
    w = state.layout.width(reg)
    if not 0 <= value < (1 << w):
        raise ValueError(f"value {value} out of range for register {reg!r}")
    a = _reg_axis(state, reg)
    p = float(np.sum(np.abs(a[:, value, :]) ** 2))
    if p == 0.0:
        return 0.0, None
    out = np.zeros_like(a)
    out[:, value, :] = a[:, value, :] / math.sqrt(p)
    return p, StateVector(state.layout, out.reshape(-1))


def measure_register(
    state: StateVector, reg: str, rng: np.random.Generator
) -> tuple[BitString, StateVector]:
    """Sample a register outcome (Born rule) and collapse the state.

    Sampling is inverse-CDF over outcomes in increasing value, so the result
    is a deterministic function of the generator state.
    """
    w = state.layout.width(reg)
    probs = register_probabilities(state, reg)
    total = float(probs.sum())
    if abs(total - 1.0) > NORM_GUARD:
        raise RuntimeError(f"state norm drifted: probabilities sum to {total}")
    cdf = np.cumsum(probs)
    k = int(np.searchsorted(cdf, rng.random() * total, side="right"))
    k = min(k, (1 << w) - 1)
    _, collapsed = project_register(state, reg, k)
    assert collapsed is not None
    return BitString(w, k), collapsed


def measure_qubit(
    state: StateVector, reg: str, k: int, rng: np.random.Generator
) -> tuple[int, StateVector]:
    """Measure one qubit (1-based, MSB-first within its register) and collapse."""
    pos = _global_pos(state.layout, reg, k)
    post = 1 << (state.n - pos - 1)
    a = state.amps.reshape(-1, 2, post)
    p0 = float(np.sum(np.abs(a[:, 0, :]) ** 2))
    p1 = float(np.sum(np.abs(a[:, 1, :]) ** 2))
    if abs(p0 + p1 - 1.0) > NORM_GUARD:
        raise RuntimeError(f"state norm drifted: probabilities sum to {p0 + p1}")
    bit = 0 if rng.random() * (p0 + p1) < p0 else 1
    out = np.zeros_like(a)
    out[:, bit, :] = a[:, bit, :] / math.sqrt(p1 if bit else p0)
    return bit, StateVector(state.layout, out.reshape(-1))


def apply_h_qubit(state: StateVector, reg: str, k: int) -> StateVector:
    pos = _global_pos(state.layout, reg, k)
    return StateVector(state.layout, _apply_1q(state.amps, state.n, pos, _H))


def apply_x_qubit(state: StateVector, reg: str, k: int) -> StateVector:
    pos = _global_pos(state.layout, reg, k)
    return StateVector(state.layout, _apply_1q(state.amps, state.n, pos, _X))


def apply_z_qubit(state: StateVector, reg: str, k: int) -> StateVector:
    pos = _global_pos(state.layout, reg, k)
    return StateVector(state.layout, _apply_1q(state.amps, state.n, pos, _Z))


def apply_cnot(
    state: StateVector, control: tuple[str, int], target: tuple[str, int]
) -> StateVector:
    """CNOT between two individual qubits, each addressed as (register, index)."""
    cpos = _global_pos(state.layout, *control)
    tpos = _global_pos(state.layout, *target)
    if cpos == tpos:
        raise ValueError("control and target are the same qubit")
    n = state.n
    a = state.amps.reshape([2] * n).copy()
    i10: list = [slice(None)] * n
    i11: list = [slice(None)] * n
    i10[cpos], i10[tpos] = 1, 0
    i11[cpos], i11[tpos] = 1, 1
    a[tuple(i10)], a[tuple(i11)] = a[tuple(i11)].copy(), a[tuple(i10)].copy()
    return StateVector(state.layout, a.reshape(-1))


def swap_qubits(state: StateVector, q1: tuple[str, int], q2: tuple[str, int]) -> StateVector:
    """Swap two individual qubits, each addressed as (register, index)."""
    p1 = _global_pos(state.layout, *q1)
    p2 = _global_pos(state.layout, *q2)
    if p1 == p2:
        return state
    a = np.swapaxes(state.amps.reshape([2] * state.n), p1, p2)
    return StateVector(state.layout, np.ascontiguousarray(a).reshape(-1))


def append_register(
    state: StateVector,
    name: str,
    width: int,
    *,
    value: int = 0,
    amplitudes: np.ndarray | None = None,
) -> StateVector:
    """Adjoin a fresh register (least significant block) in a product state.

    The new register starts in the basis state ``value`` or, if given, in
    the normalized ``amplitudes`` state.
    """
    layout = state.layout.appended(name, width)  # raises CapacityError when too big
    if amplitudes is None:
        reg_amps = np.zeros(1 << width, dtype=complex)
        if not 0 <= value < (1 << width):
            raise ValueError(f"value {value} out of range for width {width}")
        reg_amps[value] = 1.0
    else:
        reg_amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if reg_amps.shape != (1 << width,):
            raise ValueError(f"expected {1 << width} amplitudes for register {name!r}")
    return StateVector(layout, np.kron(state.amps, reg_amps))


def remove_register(state: StateVector, reg: str) -> StateVector:
    """Drop a register that is in (very nearly) a definite basis state.

    Used to discard measured registers and spent work qubits; raises if the
    register is still entangled with or in superposition over the rest.
    """
    probs = register_probabilities(state, reg)
    v = int(np.argmax(probs))
    if probs[v] < 1.0 - 1e-9:
        raise ValueError(
            f"register {reg!r} is not in a basis state (max outcome mass {probs[v]:.6f})"
        )
    a = _reg_axis(state, reg)
    kept = a[:, v, :] / math.sqrt(float(probs[v]))
    return StateVector(state.layout.removed(reg), kept.reshape(-1))


def phase_superposition(t: int, omega: Fraction, name: str = "phase") -> StateVector:
    """The t-qubit state 2^(-t/2) sum_j e^{2 pi i j omega} |j> for rational omega.

    Phases are reduced mod 1 in exact integer arithmetic before exponentiation,
    so large j values lose no precision.
    """
    omega = Fraction(omega)
    layout = RegisterLayout.of((name, t))
    j = np.arange(1 << t, dtype=np.int64)
    reduced = (j * omega.numerator) % omega.denominator if omega.denominator > 1 else j * 0
    amps = np.exp(2j * np.pi * reduced / omega.denominator) / math.sqrt(1 << t)
    return StateVector(layout, amps)
