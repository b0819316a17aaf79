"""Order finding end to end: the single-node path, the two-node path with
teleportation and classical result stitching, and the factoring driver.

Both engines estimate a phase s/r for a uniformly weighted unknown s and
then recover r classically.  The single-node engine measures one wide
control register.  The two-node engine lets node A estimate the leading
bits and node B the remaining bits (B's first two overlap A's last two);
the work register travels from A to B by teleportation so both estimates
refer to the same s, and ``correct_results`` stitches the two measurements
into one full-width estimate, using B's overlap bits to fix A's possible
off-by-one.

Every run is driven by a caller-supplied numpy Generator and is a
deterministic function of it.  Shots are independent: each owns its state,
channel, pool, and generator, so they can execute on any number of workers
without changing results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import statevec
from .bitstrings import BitString
from .numeric import ceil_log2, multiplicative_order, recover_order
from .statevec import RegisterLayout, StateVector
from .teleport import ClassicalChannel, EprPool, teleport_register

ENGINE_MONOLITHIC = "monolithic"
ENGINE_DISTRIBUTED = "distributed"
MODE_SEQUENTIAL = "sequential-teleport"
MODE_JOINT = "joint-oracle"

# Register names: "ctrl*" are phase-estimation control registers, "work" is
# the modular-arithmetic register the controlled multiplications act on.
_CTRL_A = "ctrl_a"
_CTRL_B = "ctrl_b"
_WORK = "work"
_CTRL = "ctrl"


@dataclass(frozen=True)
class ProtocolParams:
    """Derived sizes for one order-finding run.

    L is the modulus bit length rounded up to even so the half-split
    formulas apply verbatim; p is the accuracy padding of each node's
    estimate, t1/t2 the two control-register widths, and m_width the width
    of the stitched estimate.  The single-node engine uses its own padding
    p_mono and control width t_mono derived from the same target failure
    budget epsilon.
    """

    N: int
    a: int
    epsilon: Fraction | None
    L: int
    p: int
    t1: int
    t2: int
    m_width: int
    p_mono: int
    t_mono: int
    l_was_rounded: bool

    def __post_init__(self) -> None:
        if self.t1 < 3:
            raise ValueError(f"control width t1 must be >= 3, got {self.t1}")
        if self.p < 1:
            raise ValueError(f"padding p must be >= 1, got {self.p}")
        # Stitching identity: the kept prefix (L/2 + 1 bits) plus B's bits
        # 3..t2 must exactly tile the stitched estimate.
        assert (self.L // 2 + 1) + (self.t2 - 2) == self.m_width

    @classmethod
    def derive(cls, N: int, a: int, epsilon: Fraction = Fraction(1, 4)) -> "ProtocolParams":
        _validate_modulus_and_base(N, a)
        epsilon = Fraction(epsilon)
        if not 0 < epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
        L = (N - 1).bit_length()
        rounded = bool(L % 2)
        L += L % 2
        eps_node = epsilon / 2  # each node may miss; half the budget per node
        p = ceil_log2(2 + Fraction(1, 2 * eps_node))
        p_mono = ceil_log2(2 + Fraction(1, 2 * epsilon))
        return cls(
            N=N,
            a=a,
            epsilon=epsilon,
            L=L,
            p=p,
            t1=L // 2 + 1 + p,
            t2=3 * L // 2 + 2 + p,
            m_width=2 * L + 1 + p,
            p_mono=p_mono,
            t_mono=2 * L + 1 + p_mono,
            l_was_rounded=rounded,
        )

    @classmethod
    def with_padding(cls, N: int, a: int, p: int) -> "ProtocolParams":
        """Params with an explicit padding p instead of an epsilon budget.

        Meant for size-controlled equivalence oracles (p below 2 is not
        reachable from any epsilon); such params carry no failure budget.
        """
        _validate_modulus_and_base(N, a)
        L = (N - 1).bit_length()
        rounded = bool(L % 2)
        L += L % 2
        return cls(
            N=N,
            a=a,
            epsilon=None,
            L=L,
            p=p,
            t1=L // 2 + 1 + p,
            t2=3 * L // 2 + 2 + p,
            m_width=2 * L + 1 + p,
            p_mono=p,
            t_mono=2 * L + 1 + p,
            l_was_rounded=rounded,
        )

    @property
    def error_bound(self) -> Fraction:
        """Accuracy target for the stitched estimate: 2^-(2L+1)."""
        return Fraction(1, 1 << (2 * self.L + 1))

    @property
    def b_stage_multiplier(self) -> int:
        """Node B's multiplier a^(2^(L/2-1)) mod N, computed classically."""
        return pow(self.a, 1 << (self.L // 2 - 1), self.N)


def _validate_modulus_and_base(N: int, a: int) -> None:
    if N < 2:
        raise ValueError(f"modulus must be >= 2, got {N}")
    if not 1 <= a < N:
        raise ValueError(f"need 1 <= a < N, got a={a}")
    if math.gcd(a, N) != 1:
        raise ValueError(f"a={a} shares a factor with N={N}")


@dataclass
class OutcomeRecord:
    """Everything observed and derived in one order-finding shot."""

    engine: str
    mode: str | None = None
    m1: BitString | None = None
    m2: BitString | None = None
    correction_bit: int | None = None
    m: BitString | None = None
    recovered_r: int | None = None
    nearest_s: int | None = None
    estimation_error: Fraction | None = None
    classical_bits_used: int = 0
    channel_transcript: list[int] = field(default_factory=list)
    estimate_within_bound: bool = False
    order_recovered: bool = False

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "type": "shot",
            "engine": self.engine,
            "mode": self.mode,
            "m1": None if self.m1 is None else self.m1.text,
            "m2": None if self.m2 is None else self.m2.text,
            "correction_bit": self.correction_bit,
            "m": None if self.m is None else self.m.text,
            "recovered_r": self.recovered_r,
            "nearest_s": self.nearest_s,
            "estimation_error": None
            if self.estimation_error is None
            else str(self.estimation_error),
            "classical_bits_used": self.classical_bits_used,
            "channel": list(self.channel_transcript),
            "estimate_within_bound": self.estimate_within_bound,
            "order_recovered": self.order_recovered,
        }


def correct_results(
    m1: BitString, m2: BitString, params: ProtocolParams
) -> tuple[int, BitString] | None:
    """Stitch the two nodes' measurements into one full-width estimate.

    B's first two bits re-measure A's bits L/2 and L/2+1.  When some
    b in {-1, 0, +1} aligns them mod 4, that same b aligns A's whole
    prefix (the overlap test on two bits is equivalent to the full-width
    test whenever the two estimates are circularly within 1), so the
    corrected prefix is concatenated with B's bits 3..t2.  Returns
    (correction bit, stitched estimate), or None when the overlap values
    differ by 2 mod 4 -- the shot fell outside the guaranteed event and
    counts as a failure.
    """
    half = params.L // 2
    if m1.width != params.t1 or m2.width != params.t2:
        raise ValueError(
            f"expected widths ({params.t1}, {params.t2}), got ({m1.width}, {m2.width})"
        )
    overlap_a = m1.slice(half, half + 1).value
    overlap_b = m2.slice(1, 2).value
    for b in (-1, 0, 1):
        if (overlap_a + b) % 4 == overlap_b:
            prefix_width = half + 1
            prefix_val = (m1.slice(1, prefix_width).value + b) % (1 << prefix_width)
            stitched = BitString(prefix_width, prefix_val).concat(m2.slice(3, params.t2))
            return b, stitched
    return None


def _check_capacity(qubits: int) -> None:
    if qubits > statevec.MAX_QUBITS:
        raise statevec.CapacityError(
            f"run needs {qubits} simultaneous qubits, guard is {statevec.MAX_QUBITS}"
        )


def run_monolithic_order_finding(
    params: ProtocolParams, rng: np.random.Generator
) -> OutcomeRecord:
    """Single-node order finding: one t_mono-bit phase estimate, then recovery."""
    _check_capacity(params.t_mono + params.L)
    layout = RegisterLayout.of((_CTRL, params.t_mono), (_WORK, params.L))
    st = statevec.init_basis(layout, {_WORK: 1})
    st = statevec.apply_hadamard_register(st, _CTRL)
    st = statevec.apply_controlled_modmul(st, _CTRL, _WORK, params.a, params.N)
    st = statevec.apply_inverse_qft(st, _CTRL)
    m, _ = statevec.measure_register(st, _CTRL, rng)
    return OutcomeRecord(
        engine=ENGINE_MONOLITHIC,
        m=m,
        recovered_r=recover_order(m, params.N, params.a),
    )


def monolithic_exact_distribution(params: ProtocolParams) -> np.ndarray:
    """Exact outcome distribution of the single-node control register."""
    _check_capacity(params.t_mono + params.L)
    layout = RegisterLayout.of((_CTRL, params.t_mono), (_WORK, params.L))
    st = statevec.init_basis(layout, {_WORK: 1})
    st = statevec.apply_hadamard_register(st, _CTRL)
    st = statevec.apply_controlled_modmul(st, _CTRL, _WORK, params.a, params.N)
    st = statevec.apply_inverse_qft(st, _CTRL)
    return statevec.register_probabilities(st, _CTRL)


def _a_stage(params: ProtocolParams) -> StateVector:
    layout = RegisterLayout.of((_CTRL_A, params.t1), (_WORK, params.L))
    st = statevec.init_basis(layout, {_WORK: 1})
    st = statevec.apply_hadamard_register(st, _CTRL_A)
    st = statevec.apply_controlled_modmul(st, _CTRL_A, _WORK, params.a, params.N)
    return statevec.apply_inverse_qft(st, _CTRL_A)


def _b_stage(st: StateVector, params: ProtocolParams) -> StateVector:
    st = statevec.apply_hadamard_register(st, _CTRL_B)
    st = statevec.apply_controlled_modmul(
        st, _CTRL_B, _WORK, params.b_stage_multiplier, params.N
    )
    return statevec.apply_inverse_qft(st, _CTRL_B)


def _finish_distributed(
    record: OutcomeRecord, m1: BitString, m2: BitString, params: ProtocolParams
) -> OutcomeRecord:
    record.m1, record.m2 = m1, m2
    stitched = correct_results(m1, m2, params)
    if stitched is not None:
        record.correction_bit, record.m = stitched
        record.recovered_r = recover_order(record.m, params.N, params.a)
    return record


def run_distributed_order_finding(
    params: ProtocolParams,
    rng: np.random.Generator,
    mode: str = MODE_SEQUENTIAL,
    faithful_teleport: bool = True,
) -> OutcomeRecord:
    """Two-node order finding.

    sequential-teleport: node A prepares, estimates, and measures first
    (measuring early is harmless because later operations never touch its
    register, and it halves the peak qubit count); the work register is
    then teleported into node B's space, which runs its own estimate.

    joint-oracle: all three registers are held in one state vector, all
    unitaries run with measurements deferred to the end, and no
    communication happens.  This is the reference execution the sequential
    path is checked against; its records carry no channel accounting.
    """
    if mode == MODE_JOINT:
        _check_capacity(params.t1 + params.t2 + params.L)
        layout = RegisterLayout.of(
            (_CTRL_A, params.t1), (_CTRL_B, params.t2), (_WORK, params.L)
        )
        st = statevec.init_basis(layout, {_WORK: 1})
        st = statevec.apply_hadamard_register(st, _CTRL_A)
        st = statevec.apply_controlled_modmul(st, _CTRL_A, _WORK, params.a, params.N)
        st = statevec.apply_inverse_qft(st, _CTRL_A)
        st = _b_stage(st, params)
        m1, st = statevec.measure_register(st, _CTRL_A, rng)
        m2, _ = statevec.measure_register(st, _CTRL_B, rng)
        record = OutcomeRecord(engine=ENGINE_DISTRIBUTED, mode=mode)
        return _finish_distributed(record, m1, m2, params)

    if mode != MODE_SEQUENTIAL:
        raise ValueError(f"unknown mode {mode!r}")
    _check_capacity(max(params.t1, params.t2) + params.L)

    # Node A.
    st = _a_stage(params)
    m1, st = statevec.measure_register(st, _CTRL_A, rng)
    st = statevec.remove_register(st, _CTRL_A)

    # Hand the work register to node B.
    channel = ClassicalChannel()
    pool = EprPool(allocated=params.L)
    st = teleport_register(st, _WORK, channel, pool, rng, faithful=faithful_teleport)

    # Node B.
    st = statevec.append_register(st, _CTRL_B, params.t2)
    st = _b_stage(st, params)
    m2, _ = statevec.measure_register(st, _CTRL_B, rng)

    record = OutcomeRecord(
        engine=ENGINE_DISTRIBUTED,
        mode=mode,
        classical_bits_used=channel.bit_count,
        channel_transcript=list(channel.transcript),
    )
    return _finish_distributed(record, m1, m2, params)


def distributed_joint_distribution(
    params: ProtocolParams, mode: str = MODE_JOINT
) -> np.ndarray:
    """Exact joint distribution over (m1, m2) as a (2^t1, 2^t2) array.

    The joint-oracle path marginalizes the final three-register state; the
    sequential path chains exactly: project each m1 outcome, teleport, run
    node B, and weight B's distribution by the outcome probability.  Any
    teleport branch gives the same conditional state, so one branch per m1
    suffices.
    """
    if mode == MODE_JOINT:
        _check_capacity(params.t1 + params.t2 + params.L)
        layout = RegisterLayout.of(
            (_CTRL_A, params.t1), (_CTRL_B, params.t2), (_WORK, params.L)
        )
        st = statevec.init_basis(layout, {_WORK: 1})
        st = statevec.apply_hadamard_register(st, _CTRL_A)
        st = statevec.apply_controlled_modmul(st, _CTRL_A, _WORK, params.a, params.N)
        st = statevec.apply_inverse_qft(st, _CTRL_A)
        st = _b_stage(st, params)
        return statevec.marginal_probabilities(st, [_CTRL_A, _CTRL_B])

    if mode != MODE_SEQUENTIAL:
        raise ValueError(f"unknown mode {mode!r}")
    _check_capacity(max(params.t1, params.t2) + params.L)
    after_a = _a_stage(params)
    joint = np.zeros((1 << params.t1, 1 << params.t2))
    branch_rng = np.random.default_rng(0)  # teleport branch choice is immaterial
    for m1_val in range(1 << params.t1):
        p1, st = statevec.project_register(after_a, _CTRL_A, m1_val)
        if st is None or p1 < 1e-300:
            continue
        st = statevec.remove_register(st, _CTRL_A)
        st = teleport_register(
            st, _WORK, ClassicalChannel(), EprPool(params.L), branch_rng
        )
        st = statevec.append_register(st, _CTRL_B, params.t2)
        st = _b_stage(st, params)
        joint[m1_val, :] = p1 * statevec.register_probabilities(st, _CTRL_B)
    return joint


def stitched_value_distribution(
    joint: np.ndarray, params: ProtocolParams
) -> tuple[dict[int, float], float]:
    """Push a joint (m1, m2) distribution through the stitching step.

    Returns (mass per stitched integer value, mass with no correction bit).
    """
    values: dict[int, float] = {}
    failed = 0.0
    for m1_val, row in enumerate(joint):
        m1 = BitString(params.t1, m1_val)
        for m2_val in np.nonzero(row > 0)[0]:
            stitched = correct_results(m1, BitString(params.t2, int(m2_val)), params)
            p = float(row[m2_val])
            if stitched is None:
                failed += p
            else:
                values[stitched[1].value] = values.get(stitched[1].value, 0.0) + p
    return values, failed


def classify_outcome(
    record: OutcomeRecord, params: ProtocolParams, r_true: int
) -> OutcomeRecord:
    """Fill in nearest-s, exact estimation error, and success flags.

    The scan over s in {0, ..., r-1} is exhaustive and exact (Fraction
    arithmetic); the accuracy flag checks the 2^-(2L+1) target.
    """
    record.order_recovered = record.recovered_r == r_true
    if record.m is None:
        return record
    estimate = Fraction(record.m.value, 1 << record.m.width)
    errors = [abs(estimate - Fraction(s, r_true)) for s in range(r_true)]
    best = min(range(r_true), key=lambda s: errors[s])
    record.nearest_s = best
    record.estimation_error = errors[best]
    record.estimate_within_bound = errors[best] <= params.error_bound
    return record


def _run_one_shot(
    params: ProtocolParams,
    rng: np.random.Generator,
    engine: str,
    mode: str,
    faithful_teleport: bool,
) -> OutcomeRecord:
    if engine == ENGINE_MONOLITHIC:
        return run_monolithic_order_finding(params, rng)
    if engine == ENGINE_DISTRIBUTED:
        return run_distributed_order_finding(
            params, rng, mode=mode, faithful_teleport=faithful_teleport
        )
    raise ValueError(f"unknown engine {engine!r}")


def shot_rng(seed: int | None, shot_index: int) -> np.random.Generator:
    """Generator for one shot, derived from the root seed and the shot index.

    Derivation (not stream-sharing) keeps results identical no matter how
    shots are scheduled across workers.
    """
    if seed is None:
        return np.random.default_rng()
    return np.random.default_rng([seed, shot_index])


def run_shots(
    params: ProtocolParams,
    shots: int,
    *,
    seed: int | None = None,
    engine: str = ENGINE_DISTRIBUTED,
    mode: str = MODE_SEQUENTIAL,
    faithful_teleport: bool = True,
    workers: int = 1,
) -> list[OutcomeRecord]:
    """Run independent classified shots; records come back in shot order."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    r_true = multiplicative_order(params.a, params.N)

    def one(i: int) -> OutcomeRecord:
        record = _run_one_shot(params, shot_rng(seed, i), engine, mode, faithful_teleport)
        return classify_outcome(record, params, r_true)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(shots)))
    return [one(i) for i in range(shots)]


def summarize(params: ProtocolParams, records: list[OutcomeRecord]) -> dict:
    """Aggregate shot records into the summary object the CLI emits."""
    shots = len(records)
    with_estimate = [r for r in records if r.m is not None]
    histogram: dict[str, int] = {}
    for r in with_estimate:
        key = str(r.nearest_s)
        histogram[key] = histogram.get(key, 0) + 1
    mean_error = (
        sum(float(r.estimation_error) for r in with_estimate) / len(with_estimate)
        if with_estimate
        else None
    )
    return {
        "schema": 1,
        "type": "summary",
        "N": params.N,
        "a": params.a,
        "epsilon": None if params.epsilon is None else str(params.epsilon),
        "L": params.L,
        "l_was_rounded": params.l_was_rounded,
        "p": params.p,
        "t1": params.t1,
        "t2": params.t2,
        "m_width": params.m_width,
        "t_mono": params.t_mono,
        "engine": records[0].engine if records else None,
        "mode": records[0].mode if records else None,
        "shots": shots,
        "success_rate": sum(r.estimate_within_bound for r in records) / shots,
        "theorem2_bound": None if params.epsilon is None else float(1 - params.epsilon),
        "mean_error": mean_error,
        "order_recovery_rate": sum(r.order_recovered for r in records) / shots,
        "correction_failures": sum(
            1 for r in records if r.m1 is not None and r.correction_bit is None
        ),
        "per_s_histogram": dict(sorted(histogram.items(), key=lambda kv: int(kv[0]))),
    }


@dataclass
class FactoringAttempt:
    """One pass of the reduction loop: the base tried and what came of it."""

    a: int
    gcd_shortcut: int | None = None
    record: OutcomeRecord | None = None
    factor: int | None = None


@dataclass
class FactoringResult:
    factor: int | None
    attempts: list[FactoringAttempt]

    @property
    def attempt_count(self) -> int:
        return len(self.attempts)


def run_shor_factoring(
    N: int,
    epsilon: Fraction,
    rng: np.random.Generator,
    max_attempts: int = 10,
    engine: str = ENGINE_DISTRIBUTED,
    mode: str = MODE_SEQUENTIAL,
) -> FactoringResult:
    """Find a nontrivial factor of an odd composite non-prime-power N.

    Each attempt draws a base a; a shared factor is returned immediately,
    otherwise order finding runs and the standard even-order reduction is
    applied.  A failed recovery or an unusable order just costs the attempt.
    The caller is responsible for the N preconditions (the CLI checks them).
    """
    if max_attempts < 1:
        raise ValueError(f"max_attempts must be >= 1, got {max_attempts}")
    attempts: list[FactoringAttempt] = []
    for _ in range(max_attempts):
        a = int(rng.integers(2, N))
        attempt = FactoringAttempt(a=a)
        attempts.append(attempt)
        g = math.gcd(a, N)
        if g > 1:
            attempt.gcd_shortcut = g
            attempt.factor = g
            return FactoringResult(g, attempts)
        params = ProtocolParams.derive(N, a, epsilon)
        record = _run_one_shot(params, rng, engine, mode, faithful_teleport=True)
        attempt.record = classify_outcome(record, params, multiplicative_order(a, N))
        r = record.recovered_r
        if r is None or r % 2:
            continue
        half_power = pow(a, r // 2, N)
        if half_power == N - 1:
            continue
        for f in (math.gcd(half_power - 1, N), math.gcd(half_power + 1, N)):
            if 1 < f < N:
                attempt.factor = f
                return FactoringResult(f, attempts)
    return FactoringResult(None, attempts)
