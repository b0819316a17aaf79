"""How accurate is a t-bit phase estimate, and how fast does adding
padding bits buy confidence?

For a rational phase omega we prepare the uniformly phased register
2^(-t/2) sum_j e^{2 pi i j omega} |j>, run the inverse Fourier transform,
and look at the exact outcome distribution.  The mass inside the circular
window of radius 2^(t-n) around the true leading n bits should beat
1 - epsilon once t = n + ceil(log2(2 + 1/(2 epsilon))).
"""

from fractions import Fraction

from disq import (
    apply_inverse_qft,
    ceil_log2,
    circular_distance,
    fraction_bits,
    phase_superposition,
    register_probabilities,
)
from disq.bitstrings import BitString

omega = Fraction(3, 10)
n = 5  # bits we actually want

print(f"target phase omega = {omega} = 0.{fraction_bits(omega, 1, 12)}... in binary\n")
print(f"{'epsilon':>8} {'padding':>8} {'t':>3} {'mass in window':>15} {'1 - epsilon':>12}")
for eps in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)):
    pad = ceil_log2(2 + Fraction(1, 2 * eps))
    t = n + pad
    state = apply_inverse_qft(phase_superposition(t, omega), "phase")
    probs = register_probabilities(state, "phase")
    target = fraction_bits(omega, 1, t)
    mass = sum(
        float(p)
        for m, p in enumerate(probs)
        if circular_distance(BitString(t, m), target) < (1 << (t - n))
    )
    print(f"{str(eps):>8} {pad:>8} {t:>3} {mass:>15.6f} {float(1 - eps):>12.4f}")

print("\nThe most likely outcomes for epsilon = 1/16:")
state = apply_inverse_qft(phase_superposition(n + 5, omega), "phase")
probs = register_probabilities(state, "phase")
top = sorted(range(len(probs)), key=lambda m: -probs[m])[:5]
for m in top:
    estimate = Fraction(m, len(probs))
    print(f"  m = {BitString(n + 5, m)}  ->  m/2^t = {estimate}  (prob {probs[m]:.4f})")
