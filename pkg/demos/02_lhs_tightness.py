"""The LHS bound log2(Omega) is reached, and random ensembles never go below it."""
import numpy as np

from steerkit import qstate
from steerkit.lhs import lhs_criterion_check, random_lhs_search, saturating_ensemble, steering_sum

for n in (2, 3):
    q, r = qstate.computational_basis(n), qstate.fourier_basis(n)
    e = saturating_ensemble(q)
    print(f"N={n}: saturating ensemble steering sum {steering_sum(e, 'Q', 'R', q, r):.12f}"
          f", log2 N = {np.log2(n):.12f}, average S = {e.average_entropy():.3g}")

    rep = lhs_criterion_check(e, "Q", "R", q, r)
    print(f"      conditional entropies {rep.lhs:.6f} >= hidden-variable average {rep.rhs:.6f}: {rep.holds}")

print()
for states in ("pure", "mixed", "both"):
    res = random_lhs_search(2, qstate.pauli_basis("z"), qstate.pauli_basis("x"),
                            trials=2000, seed=7, states=states)
    print(f"{states:5s} states: min steering sum {res.min_steering_sum:.4f} (bound {res.bound:.1f}),"
          f" min average entropy {res.min_average_entropy:.3g}, violated: {res.violated}")
