"""Truncated Fock-space oracle for validating Gaussian closed forms.

Builds explicit density matrices for one- and two-mode Gaussian states and
computes overlaps numerically, providing a route to fidelity values that
never touches the covariance-matrix formulas it certifies.  Conventions:
X = (a + a^dag)/sqrt(2), P = i(a^dag - a)/sqrt(2), so the vacuum
covariance is the identity and <X^2>_vac = 1/2.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalFailure, TailTooHeavy, Unphysical
from .states import GaussianState, is_physical
from .symplectic import williamson

TAU_TAIL = 1e-8

DEFAULT_CUTOFF = {1: 40, 2: 20}

# Symplectic eigenvalues are clamped this far above 1 so the thermal
# inverse temperature stays finite for pure states.
_NU_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class FockState:
    """Density matrix in the truncated number basis.

    ``tail_mass`` estimates the probability weight lost to truncation,
    from the exact partition function of the generating quadratic form.
    """

    rho: np.ndarray
    n_modes: int
    cutoff: int
    tail_mass: float


def quadrature_operators(n_modes: int, cutoff: int):
    """Truncated (X_1, P_1, ..., X_n, P_n) operators as dense matrices."""
    a = np.diag(np.sqrt(np.arange(1, cutoff)), k=1)
    x = (a + a.T) / np.sqrt(2)
    p = 1j * (a.T - a) / np.sqrt(2)
    eye = np.eye(cutoff)
    ops = []
    for mode in range(n_modes):
        for quad in (x, p):
            factors = [eye] * n_modes
            factors[mode] = quad
            out = factors[0]
            for f in factors[1:]:
                out = np.kron(out, f)
            ops.append(out)
    return ops


def _keep_indices(n_modes: int, cutoff: int, padded: int) -> np.ndarray:
    if n_modes == 1:
        return np.arange(cutoff)
    return np.array(
        [i * padded + j for i in range(cutoff) for j in range(cutoff)]
    )


def gaussian_to_fock(state: GaussianState, cutoff: int = None) -> FockState:
    """Convert a one- or two-mode Gaussian state to a truncated density matrix.

    The state is realized as exp(-(1/2) (R - d)^T G (R - d)) / Z, with G
    assembled from the Williamson decomposition of the covariance matrix.
    The quadratic form is built two levels above the cutoff and then
    sliced, so its matrix elements are exact on the kept block.

    Raises
    ------
    Unphysical
        If the covariance matrix is not physical.
    TailTooHeavy
        If the truncation leaks more than TAU_TAIL of probability mass.
    """
    if state.n_modes not in (1, 2):
        raise ValueError("the Fock oracle supports one- and two-mode states only")
    if not is_physical(state):
        raise Unphysical("state violates the uncertainty bound")
    if cutoff is None:
        cutoff = DEFAULT_CUTOFF[state.n_modes]
    n = state.n_modes

    decomp = williamson(state.cov)
    nu = np.maximum(decomp.spectrum, 1.0 + _NU_FLOOR)
    beta = np.log((nu + 1.0) / (nu - 1.0))
    G = decomp.S.T @ np.diag(np.repeat(beta, 2)) @ decomp.S

    padded = cutoff + 2
    R = quadrature_operators(n, padded)
    dim = padded ** n
    shifted = [R[k] - state.disp[k] * np.eye(dim) for k in range(2 * n)]
    H = np.zeros((dim, dim), dtype=complex)
    for k in range(2 * n):
        for l in range(2 * n):
            if G[k, l] != 0.0:
                H += 0.5 * G[k, l] * (shifted[k] @ shifted[l])
    keep = _keep_indices(n, cutoff, padded)
    H = H[np.ix_(keep, keep)]
    H = 0.5 * (H + H.conj().T)

    ground_energy = 0.5 * float(beta.sum())
    w, V = np.linalg.eigh(H)
    rho_un = (V * np.exp(-(w - ground_energy))) @ V.conj().T
    z_exact = float(np.prod(1.0 / (1.0 - np.exp(-beta))))
    trace = float(np.trace(rho_un).real)
    tail = max(0.0, 1.0 - trace / z_exact)
    if tail >= TAU_TAIL:
        raise TailTooHeavy(
            f"tail mass {tail:.3e} at cutoff {cutoff}; increase the cutoff"
        )
    rho = rho_un / trace
    rho = 0.5 * (rho + rho.conj().T)
    return FockState(rho=rho, n_modes=n, cutoff=cutoff, tail_mass=tail)


def fock_moments(fock: FockState):
    """First and second moments (d, gamma) recomputed from the density matrix.

    gamma uses the anticommutator convention, matching the covariance
    matrices this package carries.
    """
    R = quadrature_operators(fock.n_modes, fock.cutoff)
    k2 = 2 * fock.n_modes
    d = np.array([float(np.trace(fock.rho @ R[k]).real) for k in range(k2)])
    gamma = np.empty((k2, k2))
    dim = fock.rho.shape[0]
    centered = [R[k] - d[k] * np.eye(dim) for k in range(k2)]
    for k in range(k2):
        for l in range(k, k2):
            anti = centered[k] @ centered[l] + centered[l] @ centered[k]
            gamma[k, l] = gamma[l, k] = float(np.trace(fock.rho @ anti).real)
    return d, gamma


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(rho)
    if w.min() < -1e-10:
        raise NumericalFailure(f"negative eigenvalue {w.min():.3e} in density matrix")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def uhlmann_fidelity(r0: FockState, r1: FockState) -> float:
    """tr sqrt(sqrt(r0) r1 sqrt(r0)), computed through Hermitian roots."""
    if r0.cutoff != r1.cutoff or r0.n_modes != r1.n_modes:
        raise ValueError("states must share cutoff and mode count")
    sq = _psd_sqrt(r0.rho)
    inner = sq @ r1.rho @ sq
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    if w.min() < -1e-10:
        raise NumericalFailure(f"negative eigenvalue {w.min():.3e} in fidelity kernel")
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())


def minimal_discrimination_overlap(r0: FockState, r1: FockState, measurement_grid) -> float:
    """Smallest Bhattacharyya overlap over a family of projective measurements.

    Each grid entry is a unitary whose columns define the measurement
    basis; the overlap for one measurement is sum_i sqrt(p0_i p1_i).  The
    minimum over all measurements is bounded below by the Uhlmann
    fidelity and reaches it for the optimizing family.
    """
    if r0.cutoff != r1.cutoff or r0.n_modes != r1.n_modes:
        raise ValueError("states must share cutoff and mode count")
    best = np.inf
    for U in measurement_grid:
        U = np.asarray(U)
        p0 = np.clip(np.einsum("ij,jk,ki->i", U.conj().T, r0.rho, U).real, 0.0, None)
        p1 = np.clip(np.einsum("ij,jk,ki->i", U.conj().T, r1.rho, U).real, 0.0, None)
        best = min(best, float(np.sqrt(p0 * p1).sum()))
    if not np.isfinite(best):
        raise ValueError("measurement_grid must be nonempty")
    return best
