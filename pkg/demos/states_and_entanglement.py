"""Tour of the Gaussian state model: physicality, purity, and entanglement.

Run:  python3 demos/states_and_entanglement.py
"""

import numpy as np

from cvprivacy import (
    BipartiteSplit,
    is_nppt,
    is_physical,
    is_separable,
    partial_transpose,
    ppt_criterion_min_eig,
    purity,
    quadrature_density,
    single_mode_thermal,
    symmetric_state,
    symplectic_eigenvalues,
    two_mode_squeezed,
    vacuum_state,
)

split = BipartiteSplit(1, 1)

print("== Basic states ==")
vac = vacuum_state(1)
print("vacuum covariance:\n", vac.cov)
print("vacuum purity:", purity(vac))

thermal = single_mode_thermal(2.0)
print("\nthermal (nu = 2) purity:", purity(thermal))
print("thermal symplectic spectrum:", symplectic_eigenvalues(thermal.cov))

tms = two_mode_squeezed(0.5)
print("\ntwo-mode squeezed (r = 0.5) purity:", purity(tms))

print("\n== The symmetric two-mode family ==")
entangled = symmetric_state(2.0, 1.2, 1.2)
separable = symmetric_state(2.0, 0.9, 0.9)
print("lam=2, c=1.2 covariance:\n", entangled.cov)

for name, state in (("c = 1.2", entangled), ("c = 0.9", separable)):
    pt = partial_transpose(state, split)
    floor = symplectic_eigenvalues(pt.cov).min()
    print(f"\n{name}: physical={is_physical(state)}")
    print(f"  partial-transpose symplectic floor: {floor:.4f}"
          f"  -> NPPT: {is_nppt(state, split)}")
    print(f"  inverse-criterion route min eig: {ppt_criterion_min_eig(state, split):+.4f}")
    print(f"  separable: {is_separable(state, split)}")

print("\n== Quadrature marginals ==")
density = quadrature_density(entangled, [0, 2])
print("probability covariance of (X_A, X_B):\n", density.cov)
rng = np.random.default_rng(1)
samples = density.sample(rng, 200_000)
print("empirical covariance (200k samples):\n", np.cov(samples.T, bias=True).round(4))
