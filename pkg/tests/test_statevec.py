import math
from fractions import Fraction

import numpy as np
import pytest

from disq import statevec
from disq.bitstrings import BitString, circular_distance, fraction_bits
from disq.numeric import ceil_log2
from disq.statevec import (
    CapacityError,
    RegisterLayout,
    StateVector,
    apply_controlled_modmul,
    apply_hadamard_register,
    apply_inverse_qft,
    apply_qft,
    init_basis,
    marginal_probabilities,
    measure_register,
    outcome_distribution,
    phase_superposition,
    project_register,
    register_probabilities,
    remove_register,
)

ALGEBRA_TOL = 1e-10
DIST_TOL = 1e-9


def random_state(layout: RegisterLayout, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=1 << layout.n) + 1j * rng.normal(size=1 << layout.n)
    return StateVector.from_amplitudes(layout, amps / np.linalg.norm(amps))


def fourier_matrix(t: int) -> np.ndarray:
    """Independent dense oracle: W[k, j] = e^{2 pi i jk / 2^t} / 2^(t/2)."""
    dim = 1 << t
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="xy")
    return np.exp(2j * np.pi * j * k / dim) / math.sqrt(dim)


def op_as_matrix(op, t: int) -> np.ndarray:
    layout = RegisterLayout.of(("r", t))
    dim = 1 << t
    cols = np.empty((dim, dim), dtype=complex)
    for v in range(dim):
        cols[:, v] = op(init_basis(layout, {"r": v}), "r").amps
    return cols


class TestLayout:
    def test_offsets_msb_first(self):
        layout = RegisterLayout.of(("a", 2), ("b", 3), ("c", 1))
        assert layout.n == 6
        assert layout.offset("a") == 0
        assert layout.offset("b") == 2
        assert layout.offset("c") == 5

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            RegisterLayout.of(("a", 2), ("a", 3))

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            RegisterLayout.of(("big", statevec.MAX_QUBITS + 1))

    def test_unknown_register(self):
        layout = RegisterLayout.of(("a", 2))
        with pytest.raises(ValueError):
            layout.offset("zzz")


class TestInitBasis:
    def test_places_amplitude_at_packed_index(self):
        st = init_basis(RegisterLayout.of(("a", 2), ("c", 2)), {"a": 0, "c": 1})
        assert st.amps[0b0001] == 1.0
        assert np.count_nonzero(st.amps) == 1

    def test_single_register_value(self):
        st = init_basis(RegisterLayout.of(("c", 4)), {"c": 1})
        assert st.amps[1] == 1.0
        st = init_basis(RegisterLayout.of(("a", 1)), {"a": 1})
        assert st.amps[1] == 1.0

    def test_missing_registers_default_to_zero(self):
        st = init_basis(RegisterLayout.of(("a", 2), ("b", 2)), {"b": 3})
        assert st.amps[0b0011] == 1.0

    def test_value_out_of_range(self):
        with pytest.raises(ValueError):
            init_basis(RegisterLayout.of(("a", 2)), {"a": 4})


class TestHadamard:
    def test_uniform_superposition(self):
        st = apply_hadamard_register(init_basis(RegisterLayout.of(("r", 2))), "r")
        assert np.allclose(st.amps, 0.5, atol=ALGEBRA_TOL)

    def test_single_qubit_column(self):
        st = apply_hadamard_register(init_basis(RegisterLayout.of(("r", 1)), {"r": 1}), "r")
        s = 1 / math.sqrt(2)
        assert np.allclose(st.amps, [s, -s], atol=ALGEBRA_TOL)

    def test_involution(self):
        rng = np.random.default_rng(2)
        st = random_state(RegisterLayout.of(("a", 3), ("b", 2)), rng)
        back = apply_hadamard_register(apply_hadamard_register(st, "a"), "a")
        assert np.allclose(back.amps, st.amps, atol=1e-12)

    def test_acts_only_on_named_register(self):
        st = init_basis(RegisterLayout.of(("a", 1), ("b", 1)), {"b": 1})
        st = apply_hadamard_register(st, "a")
        probs = register_probabilities(st, "b")
        assert probs[1] == pytest.approx(1.0, abs=ALGEBRA_TOL)


class TestControlledModMul:
    def test_power_of_control_value(self):
        # control 2, multiplier 7 mod 15: target 1 -> 7^2 = 49 = 4 (mod 15)
        layout = RegisterLayout.of(("ctrl", 3), ("work", 4))
        st = init_basis(layout, {"ctrl": 2, "work": 1})
        st = apply_controlled_modmul(st, "ctrl", "work", 7, 15)
        assert outcome_distribution(st, "work")[BitString(4, 4)] == pytest.approx(1.0)

    def test_zero_control_is_identity(self):
        layout = RegisterLayout.of(("ctrl", 3), ("work", 4))
        st = init_basis(layout, {"ctrl": 0, "work": 6})
        st = apply_controlled_modmul(st, "ctrl", "work", 7, 15)
        assert outcome_distribution(st, "work")[BitString(4, 6)] == pytest.approx(1.0)

    def test_node_b_style_multiplier(self):
        # multiplier 4 on target 1 mod 33
        layout = RegisterLayout.of(("ctrl", 2), ("work", 6))
        st = init_basis(layout, {"ctrl": 1, "work": 1})
        st = apply_controlled_modmul(st, "ctrl", "work", 4, 33)
        assert outcome_distribution(st, "work")[BitString(6, 4)] == pytest.approx(1.0)

    def test_values_at_or_above_modulus_are_fixed(self):
        layout = RegisterLayout.of(("ctrl", 2), ("work", 4))
        for x in (15,):
            st = init_basis(layout, {"ctrl": 3, "work": x})
            st = apply_controlled_modmul(st, "ctrl", "work", 7, 15)
            assert outcome_distribution(st, "work")[BitString(4, x)] == pytest.approx(1.0)

    def test_inverse_multiplier_undoes(self):
        rng = np.random.default_rng(8)
        layout = RegisterLayout.of(("ctrl", 4), ("work", 5))
        st = random_state(layout, rng)
        fwd = apply_controlled_modmul(st, "ctrl", "work", 7, 18)
        back = apply_controlled_modmul(fwd, "ctrl", "work", pow(7, -1, 18), 18)
        assert np.allclose(back.amps, st.amps, atol=1e-12)

    def test_control_after_target_in_layout(self):
        layout = RegisterLayout.of(("work", 4), ("ctrl", 3))
        st = init_basis(layout, {"ctrl": 2, "work": 1})
        st = apply_controlled_modmul(st, "ctrl", "work", 7, 15)
        assert outcome_distribution(st, "work")[BitString(4, 4)] == pytest.approx(1.0)

    def test_is_a_permutation(self):
        # column-by-column image of the basis is a permutation of the basis
        layout = RegisterLayout.of(("ctrl", 2), ("work", 3))
        seen = set()
        for v in range(1 << 5):
            ctrl, work = divmod(v, 8)
            st = init_basis(layout, {"ctrl": ctrl, "work": work})
            st = apply_controlled_modmul(st, "ctrl", "work", 3, 7)
            image = int(np.argmax(np.abs(st.amps)))
            assert abs(st.amps[image]) == pytest.approx(1.0)
            seen.add(image)
        assert len(seen) == 1 << 5

    def test_non_coprime_multiplier_rejected(self):
        layout = RegisterLayout.of(("ctrl", 2), ("work", 4))
        st = init_basis(layout, {"work": 1})
        with pytest.raises(ValueError):
            apply_controlled_modmul(st, "ctrl", "work", 6, 15)

    def test_narrow_target_rejected(self):
        layout = RegisterLayout.of(("ctrl", 2), ("work", 3))
        st = init_basis(layout, {"work": 1})
        with pytest.raises(ValueError):
            apply_controlled_modmul(st, "ctrl", "work", 7, 15)


class TestFourier:
    def test_inverse_qft_maps_phase_state_to_basis(self):
        # omega = j/2^t must come back as exactly |j>, here j=5, t=4
        st = phase_superposition(4, Fraction(5, 16), name="r")
        st = apply_inverse_qft(st, "r")
        assert abs(st.amps[5]) == pytest.approx(1.0, abs=ALGEBRA_TOL)

    def test_round_trip_is_identity(self):
        rng = np.random.default_rng(4)
        st = random_state(RegisterLayout.of(("a", 3), ("r", 4)), rng)
        back = apply_inverse_qft(apply_qft(st, "r"), "r")
        assert np.allclose(back.amps, st.amps, atol=ALGEBRA_TOL)

    def test_single_qubit_case_is_hadamard(self):
        for v in (0, 1):
            st = init_basis(RegisterLayout.of(("r", 1)), {"r": v})
            viaq = apply_inverse_qft(st, "r")
            viah = apply_hadamard_register(st, "r")
            assert np.allclose(viaq.amps, viah.amps, atol=1e-12)

    @pytest.mark.parametrize("t", range(1, 9))
    def test_dense_matrix_against_explicit_oracle(self, t):
        w = fourier_matrix(t)
        assert np.max(np.abs(op_as_matrix(apply_qft, t) - w)) < ALGEBRA_TOL
        assert np.max(np.abs(op_as_matrix(apply_inverse_qft, t) - w.conj().T)) < ALGEBRA_TOL

    @pytest.mark.parametrize("t", range(1, 9))
    def test_product_is_identity(self, t):
        prod = op_as_matrix(apply_qft, t) @ op_as_matrix(apply_inverse_qft, t)
        assert np.max(np.abs(prod - np.eye(1 << t))) < ALGEBRA_TOL


class TestMeasurement:
    def test_basis_state_is_certain(self):
        st = init_basis(RegisterLayout.of(("r", 2)), {"r": 2})
        m, post = measure_register(st, "r", np.random.default_rng(0))
        assert m == BitString(2, 2)
        assert post.amps[2] == pytest.approx(1.0)

    def test_uniform_frequencies_within_3_sigma(self):
        st = apply_hadamard_register(init_basis(RegisterLayout.of(("r", 2))), "r")
        rng = np.random.default_rng(42)
        shots = 10_000
        counts = [0, 0, 0, 0]
        for _ in range(shots):
            m, _ = measure_register(st, "r", rng)
            counts[m.value] += 1
        sigma = math.sqrt(0.25 * 0.75 / shots)
        for c in counts:
            assert abs(c / shots - 0.25) <= 3 * sigma

    def test_collapse_keeps_matching_branch(self):
        # (|0>|phi0> + |1>|phi1>)/sqrt(2): measuring the flag collapses the
        # second register onto the matching phi
        rng = np.random.default_rng(7)
        phi0 = rng.normal(size=4) + 1j * rng.normal(size=4)
        phi0 /= np.linalg.norm(phi0)
        phi1 = rng.normal(size=4) + 1j * rng.normal(size=4)
        phi1 /= np.linalg.norm(phi1)
        amps = np.concatenate([phi0, phi1]) / math.sqrt(2)
        st = StateVector.from_amplitudes(RegisterLayout.of(("flag", 1), ("rest", 2)), amps)
        for seed in range(6):
            bit, post = measure_register(st, "flag", np.random.default_rng(seed))
            block = post.amps[4 * bit.value : 4 * bit.value + 4]
            expected = phi0 if bit.value == 0 else phi1
            assert np.allclose(block, expected, atol=1e-12)

    def test_inverse_cdf_sampling_is_deterministic(self):
        st = apply_hadamard_register(init_basis(RegisterLayout.of(("r", 3))), "r")
        a = [measure_register(st, "r", np.random.default_rng(123))[0] for _ in range(5)]
        b = [measure_register(st, "r", np.random.default_rng(123))[0] for _ in range(5)]
        assert a == b

    def test_norm_drift_guard(self):
        st = init_basis(RegisterLayout.of(("r", 2)))
        st.amps = st.amps * 2.0  # deliberately corrupt
        with pytest.raises(RuntimeError):
            measure_register(st, "r", np.random.default_rng(0))


class TestDistributions:
    def test_dyadic_phase_is_a_point_mass(self):
        st = apply_inverse_qft(phase_superposition(5, Fraction(12, 32), name="r"), "r")
        dist = outcome_distribution(st, "r")
        assert dist[BitString(5, 12)] == pytest.approx(1.0, abs=ALGEBRA_TOL)

    def test_uniform_register(self):
        st = apply_hadamard_register(init_basis(RegisterLayout.of(("r", 3))), "r")
        for p in outcome_distribution(st, "r").values():
            assert p == pytest.approx(1 / 8, abs=ALGEBRA_TOL)

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(19)
        for _ in range(10):
            st = random_state(RegisterLayout.of(("a", 3), ("b", 2)), rng)
            assert sum(outcome_distribution(st, "a").values()) == pytest.approx(
                1.0, abs=ALGEBRA_TOL
            )

    def test_marginal_ordering(self):
        st = init_basis(RegisterLayout.of(("a", 1), ("b", 2)), {"a": 1, "b": 2})
        joint = marginal_probabilities(st, ["b", "a"])
        assert joint.shape == (4, 2)
        assert joint[2, 1] == pytest.approx(1.0)

    def test_phase_estimation_matches_analytic_law(self):
        # independent oracle: P(m) = |2^-t sum_j e^{2 pi i j (omega - m/2^t)}|^2
        rng = np.random.default_rng(23)
        for _ in range(6):
            t = int(rng.integers(3, 9))
            den = int(rng.integers(2, 60))
            omega = Fraction(int(rng.integers(0, den)), den)
            st = apply_inverse_qft(phase_superposition(t, omega, name="r"), "r")
            got = register_probabilities(st, "r")
            dim = 1 << t
            j = np.arange(dim)
            expect = np.empty(dim)
            for m in range(dim):
                amp = np.exp(2j * np.pi * j * (float(omega) - m / dim)).sum() / dim
                expect[m] = abs(amp) ** 2
            assert np.max(np.abs(got - expect)) < DIST_TOL

    def test_window_mass_meets_failure_budget(self):
        # with t = n + ceil(log2(2 + 1/(2 eps))) the mass within circular
        # distance 2^(t-n) of the true leading bits is at least 1 - eps
        cases = [
            (Fraction(3, 10), 4, Fraction(1, 8)),
            (Fraction(1, 7), 3, Fraction(1, 4)),
            (Fraction(5, 11), 5, Fraction(1, 16)),
            (Fraction(13, 29), 4, Fraction(1, 4)),
        ]
        for omega, n, eps in cases:
            t = n + ceil_log2(2 + Fraction(1, 2 * eps))
            st = apply_inverse_qft(phase_superposition(t, omega, name="r"), "r")
            probs = register_probabilities(st, "r")
            target = fraction_bits(omega, 1, t)
            mass = sum(
                float(p)
                for m, p in enumerate(probs)
                if circular_distance(BitString(t, m), target) < (1 << (t - n))
            )
            assert mass >= 1 - float(eps) - 1e-12


class TestNormPreservation:
    def test_all_operations_preserve_norm(self):
        rng = np.random.default_rng(29)
        layout = RegisterLayout.of(("ctrl", 4), ("work", 4))
        st = random_state(layout, rng)
        steps = [
            lambda s: apply_hadamard_register(s, "ctrl"),
            lambda s: apply_controlled_modmul(s, "ctrl", "work", 7, 15),
            lambda s: apply_qft(s, "ctrl"),
            lambda s: apply_inverse_qft(s, "ctrl"),
            lambda s: measure_register(s, "ctrl", np.random.default_rng(1))[1],
            lambda s: statevec.append_register(s, "extra", 2, value=3),
            lambda s: remove_register(s, "extra"),
        ]
        for step in steps:
            st = step(st)
            assert st.norm_error() < ALGEBRA_TOL


class TestStructuralOps:
    def test_project_register(self):
        st = apply_hadamard_register(init_basis(RegisterLayout.of(("r", 2))), "r")
        p, post = project_register(st, "r", 3)
        assert p == pytest.approx(0.25, abs=ALGEBRA_TOL)
        assert post.amps[3] == pytest.approx(1.0)
        zero = init_basis(RegisterLayout.of(("r", 2)))
        p, post = project_register(zero, "r", 2)
        assert p == 0.0 and post is None

    def test_remove_register_requires_basis_state(self):
        st = apply_hadamard_register(init_basis(RegisterLayout.of(("a", 1), ("b", 1))), "a")
        with pytest.raises(ValueError):
            remove_register(st, "a")
        ok = remove_register(st, "b")
        assert ok.layout.names == ("a",)

    def test_append_register_amplitudes(self):
        st = init_basis(RegisterLayout.of(("a", 1)), {"a": 1})
        st = statevec.append_register(
            st, "pair", 2, amplitudes=np.array([1, 0, 0, 1]) / math.sqrt(2)
        )
        assert st.layout.names == ("a", "pair")
        assert st.amps[0b100] == pytest.approx(1 / math.sqrt(2))
        assert st.amps[0b111] == pytest.approx(1 / math.sqrt(2))

    def test_append_respects_capacity(self):
        st = init_basis(RegisterLayout.of(("a", statevec.MAX_QUBITS - 1)))
        with pytest.raises(CapacityError):
            statevec.append_register(st, "b", 2)
