"""Certifying the Gaussian fidelity formula against truncated Fock matrices.

The displaced-pair fidelity exp(-d^T gamma^{-1} d) drives every security
verdict, so this demo rebuilds a few states as explicit density matrices
and compares the numerical Uhlmann fidelity with the closed form.

Run:  python3 demos/fock_certification.py
"""

import numpy as np

from cvprivacy import (
    GaussianState,
    fock_moments,
    gaussian_to_fock,
    single_mode_thermal,
    uhlmann_fidelity,
    vacuum_state,
)

print("== Round trip: covariance -> density matrix -> moments ==")
thermal = single_mode_thermal(2.0)
fk = gaussian_to_fock(thermal, 40)
d, g = fock_moments(fk)
print("thermal nu=2: recovered cov diag:", np.diag(g).round(10),
      " tail mass:", fk.tail_mass)
probs = np.diag(fk.rho).real[:6]
print("photon distribution:", probs.round(6), " (geometric, mean 1/2)")

print("\n== Coherent-state overlap ==")
for d_x in (0.5, 1.0, 1.5):
    plus = gaussian_to_fock(GaussianState(np.eye(2), [d_x, 0.0]), 40)
    minus = gaussian_to_fock(GaussianState(np.eye(2), [-d_x, 0.0]), 40)
    numeric = uhlmann_fidelity(plus, minus)
    closed = np.exp(-d_x ** 2)
    print(f"d = {d_x}: fock {numeric:.8f}  closed form {closed:.8f}  "
          f"diff {abs(numeric - closed):.1e}")

print("\n== Mixed displaced pairs ==")
rng = np.random.default_rng(3)
for trial in range(4):
    nu = 1.1 + rng.random() * 0.9
    phi = rng.random() * np.pi
    R = np.array([[np.cos(phi), np.sin(phi)], [-np.sin(phi), np.cos(phi)]])
    cov = R @ np.diag([nu * 1.2, nu / 1.2]) @ R.T
    d = rng.normal(size=2) * 0.5
    plus = gaussian_to_fock(GaussianState(cov, d), 40)
    minus = gaussian_to_fock(GaussianState(cov, -d), 40)
    numeric = uhlmann_fidelity(plus, minus)
    closed = np.exp(-d @ np.linalg.solve(cov, d))
    print(f"trial {trial}: fock {numeric:.8f}  closed {closed:.8f}  "
          f"diff {abs(numeric - closed):.1e}")

print("\nvacuum sanity:", uhlmann_fidelity(gaussian_to_fock(vacuum_state(1), 20),
                                           gaussian_to_fock(vacuum_state(1), 20)))
