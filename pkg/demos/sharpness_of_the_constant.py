"""Show that the L1 constant beta1(n, T) is sharp but never attained.

For every coefficient a strictly above lam_{2n-1} that keeps 0 in the
periodic spectrum, the distance ||a - lam_{2n-1}||_L1 must exceed
beta1(n, T).  The witness family a_eps drives that distance down to the
constant as eps -> 0 while keeping Delta(0) = 2 exactly, so no smaller
constant could work -- and the infimum is not a minimum.

Run:  python demos/sharpness_of_the_constant.py
"""

import math

from hillstab import constants, floquet, lyapunov, witness

n, T = 1, 2 * math.pi
b1 = constants.beta1(n, T)
print(f"n = {n}, T = 2pi, beta1 = {b1:.12f}\n")

print("  eps      ||a_eps - lam||_L1   excess over beta1   Delta(0)")
for eps in (0.2, 0.1, 0.05, 0.02, 0.01, 0.005):
    a = witness.make_a_eps(n, T, eps)
    (_, dist), = witness.tightness_sweep(n, T, [eps])
    delta = floquet.discriminant(a, 0.0)
    print(f"  {eps:5.3f}   {dist:16.10f}   {dist - b1:14.3e}     "
          f"{delta:+.9f}")

print("\nEach a_eps has 0 as a periodic eigenvalue (Delta(0) = 2), so the")
print("certification ball ||a||_L1 <= gamma1 must exclude it:")
a = witness.make_a_eps(n, T, 0.01)
cert = lyapunov.certify_l1_periodic(a, n)
print(f"certificate holds = {cert.holds}, "
      f"L1 margin = {cert.hypothesis_values['margin_l1']:+.4f}")
