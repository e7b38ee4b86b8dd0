"""Gaussian maps in action: symplectics, noisy channels, homodyne updates.

Run:  python3 demos/transformations_and_homodyne.py
"""

import numpy as np

from cvprivacy import (
    apply_channel,
    apply_symplectic,
    attenuator_channel,
    beamsplitter_matrix,
    direct_sum,
    homodyne_x,
    purity,
    quadrature_density,
    rotation_matrix,
    single_mode_thermal,
    squeeze_matrix,
    symmetric_state,
    tensor,
    vacuum_state,
)

print("== Symplectic transformations ==")
squeezed = apply_symplectic(squeeze_matrix(1.5), None, vacuum_state(1))
print("squeezed vacuum variances:", np.diag(squeezed.cov), " purity:", purity(squeezed))

pair = tensor(squeezed, vacuum_state(1))
mixed = apply_symplectic(beamsplitter_matrix(np.pi / 4), None, pair)
print("after a 50:50 beamsplitter, cross block:\n", mixed.cov[:2, 2:].round(4))

rotated = apply_symplectic(direct_sum(rotation_matrix(0.3), np.eye(2)), None, mixed)
print("rotation keeps purity:", purity(rotated))

print("\n== Gaussian channels ==")
loss = attenuator_channel(0.5)
print("50% loss on vacuum (fixed point):", np.diag(apply_channel(loss, vacuum_state(1)).cov))
hot = single_mode_thermal(3.0)
print("50% loss on thermal nu=3:", np.diag(apply_channel(loss, hot).cov),
      " (expected ~2.0)")

print("\n== Homodyne conditioning ==")
state = symmetric_state(2.0, 1.2, 1.2)
outcome = homodyne_x(state, [0], results=[1.0])
print("Bob's state after Alice reads X = 1.0:")
print("  covariance:", np.diag(outcome.post_state.cov), " (x variance shrank)")
print("  displacement:", outcome.post_state.disp)

# The conditional covariance never depends on the measured value
other = homodyne_x(state, [0], results=[-2.4])
print("same covariance at X = -2.4:", np.array_equal(outcome.post_state.cov,
                                                     other.post_state.cov))

# Sampling route: empirical check of the conditional x-variance
rng = np.random.default_rng(7)
density = quadrature_density(state, [0, 2])
samples = density.sample(rng, 1_000_000)
window = np.abs(samples[:, 0] - 1.0) < 0.02
print("\nMonte Carlo conditional Var(X_B | X_A ~ 1.0):",
      round(float(np.var(samples[window, 1])), 4),
      " analytic:", outcome.post_state.cov[0, 0] / 2)
