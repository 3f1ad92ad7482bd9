"""Why the von Neumann entropy cannot simply be added to the steering bound.

The state rho = (|01><01| + |10><10|)/2 is a classical mixture, so it cannot
steer. Adding S(rho_B) to the conditional steering bound nonetheless reports
a "violation" for it.
"""
import numpy as np

from steerkit import qstate
from steerkit.witness import naive_substitution_demo, steering_conditional_discrete

rho = qstate.validate_density(np.diag([0, 0.5, 0.5, 0]), [2, 2])
sz, sx = qstate.pauli_basis("z"), qstate.pauli_basis("x")

print("reduced state of B:")
print(qstate.partial_trace(rho, 1).matrix.real)
print("S(rho_B) =", qstate.von_neumann_entropy(qstate.partial_trace(rho, 1)))
print("PPT (separable for 2x2):", qstate.is_ppt(rho))
print()

print("z outcomes are perfectly anticorrelated:")
print(qstate.joint_distribution(rho, sz, sz).table)
print("x outcomes are independent:")
print(qstate.joint_distribution(rho, sx, sx).table)
print()

valid = steering_conditional_discrete(rho, sz, sz, sx, sx)
print("valid inequality  :", valid.components)
print(f"  lhs {valid.lhs:.3f} vs bound {valid.bound:.3f} -> {valid.verdict}")

naive = naive_substitution_demo(rho, sz, sz, sx, sx)
print("naive substitution:")
print(f"  lhs {naive.lhs:.3f} vs bound {naive.bound:.3f} -> {naive.verdict}")
print("  contradiction with separability:", naive.contradiction)
print("  marker:", naive.marker)
