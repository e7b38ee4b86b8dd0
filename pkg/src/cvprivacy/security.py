"""Secret-key security analysis for the homodyne post-selection protocol.

The protocol measures one X quadrature on each side, keeps outcomes near
+/- X0, binarizes by sign, and distills with repetition blocks.  Security
reduces to comparing two exponential rates in X0^2: the rate at which
Bob's error odds fall versus the rate at which the eavesdropper's
conditional states stay indistinguishable.  Every boolean verdict here is
computed at the exponent level, so it is structurally independent of X0.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .exceptions import Unphysical
from .states import (
    BipartiteSplit,
    GaussianState,
    SymmetricStateParams,
    is_nppt,
    is_physical,
    make_symmetric_state,
)
from .symplectic import (
    momentum_flip,
    psd_sqrt_of_similar,
    symplectic_form,
)

# Exponent comparisons treat differences within this band as ties and fail
# safe toward "insecure"; matches the PPT boundary band in spirit.
EXPONENT_MARGIN = 1e-10


def _require_physical(state: GaussianState):
    if not is_physical(state):
        raise Unphysical("state violates the uncertainty bound")


def _default_coords(state: GaussianState, split: BipartiteSplit = None):
    """X quadratures of the first mode on each side."""
    n_a = split.n_a if split is not None else 1
    return (0, 2 * n_a)


def _check_x_coords(state: GaussianState, coords):
    coords = tuple(int(c) for c in coords)
    if len(coords) != 2:
        raise ValueError("exactly one measured X coordinate per side is expected")
    for c in coords:
        if c < 0 or c >= 2 * state.n_modes:
            raise ValueError(f"coordinate {c} out of range for {state.n_modes} modes")
        if c % 2 != 0:
            raise ValueError(f"coordinate {c} is not an X quadrature")
    if coords[0] == coords[1]:
        raise ValueError("the two measured coordinates must differ")
    return coords


# ---------------------------------------------------------------------------
# Purification and Eve's conditional states
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Purification:
    """Pure joint extension of a system state, with Eve mirroring its modes.

    Attributes
    ----------
    joint : GaussianState
        Pure state on (system, Eve) with Eve holding as many modes as the
        system.
    n_system : int
        Number of system modes (the leading block of ``joint``).
    """

    joint: GaussianState
    n_system: int

    @property
    def system_cov(self) -> np.ndarray:
        k = 2 * self.n_system
        return self.joint.cov[:k, :k]

    @property
    def coupling(self) -> np.ndarray:
        """Cross block F between system and Eve."""
        k = 2 * self.n_system
        return self.joint.cov[:k, k:]

    @property
    def eve_cov(self) -> np.ndarray:
        k = 2 * self.n_system
        return self.joint.cov[k:, k:]


def purify(state: GaussianState) -> Purification:
    """Standard purification with Eve's covariance a momentum-flipped copy.

    The coupling block is F = sigma [-(sigma gamma)^2 - 1]^{1/2} theta and
    Eve's block is theta gamma theta; the joint covariance is then pure and
    reduces exactly to the input on the system block.
    """
    _require_physical(state)
    n = state.n_modes
    sigma = symplectic_form(n)
    theta = momentum_flip(n)
    sg = sigma @ state.cov
    root = psd_sqrt_of_similar(-sg @ sg - np.eye(2 * n))
    F = sigma @ root @ theta
    eve_cov = theta @ state.cov @ theta
    # assembled without re-symmetrizing so the system block is preserved
    # bit-exactly
    joint_cov = np.block([[state.cov, F], [F.T, eve_cov]])
    joint_disp = np.concatenate([state.disp, np.zeros(2 * n)])
    return Purification(joint=GaussianState(joint_cov, joint_disp), n_system=n)


@dataclass(frozen=True, eq=False)
class ConditionalEveState:
    """Eve's state after the honest parties both observe +X0.

    The -X0 branch has the same covariance and opposite displacement.
    """

    cov: np.ndarray
    disp_plus: np.ndarray

    @property
    def disp_minus(self) -> np.ndarray:
        return -self.disp_plus


def eve_conditional_state(
    purification: Purification,
    x0: float,
    measured_x_coords=None,
) -> ConditionalEveState:
    """Condition Eve on both measured X quadratures reading +x0.

    Applies the homodyne update to the pure joint state: Eve's covariance
    loses F^T beta F and her displacement becomes F^T beta v, where beta
    embeds the inverse of the measured-X covariance block and v carries x0
    at the measured coordinates.
    """
    if x0 <= 0:
        raise ValueError("x0 must be positive")
    n = purification.n_system
    sys_cov = purification.system_cov
    state_view = GaussianState(sys_cov)
    coords = (
        _default_coords(state_view)
        if measured_x_coords is None
        else _check_x_coords(state_view, measured_x_coords)
    )
    ix = np.asarray(coords)
    gamma_x = sys_cov[np.ix_(ix, ix)]
    beta = np.zeros((2 * n, 2 * n))
    beta[np.ix_(ix, ix)] = np.linalg.inv(gamma_x)
    v = np.zeros(2 * n)
    v[ix] = x0
    F = purification.coupling
    cov = purification.eve_cov - F.T @ beta @ F
    return ConditionalEveState(
        cov=0.5 * (cov + cov.T),
        disp_plus=F.T @ beta @ v,
    )


def gaussian_fidelity_equal_cov(
    gamma: np.ndarray, d_plus: np.ndarray, d_minus: np.ndarray
) -> float:
    """Uhlmann fidelity of two Gaussian states with equal covariance and
    opposite displacements: exp(-d^T gamma^{-1} d)."""
    d_plus = np.asarray(d_plus, dtype=float)
    d_minus = np.asarray(d_minus, dtype=float)
    if np.max(np.abs(d_plus + d_minus)) > 1e-9 * max(1.0, np.max(np.abs(d_plus))):
        raise ValueError("displacements must be opposite: d_minus = -d_plus")
    _require_physical(GaussianState(gamma))
    return float(np.exp(-d_plus @ np.linalg.solve(gamma, d_plus)))


# ---------------------------------------------------------------------------
# Exponents: all comparisons happen on coefficients of X0^2
# ---------------------------------------------------------------------------


def eps_ratio_exponent(state: GaussianState, measured_x_coords=None) -> float:
    """Coefficient k_B with eps_B / (1 - eps_B) = exp(-k_B X0^2).

    For the measured-X covariance block [[a, b], [b, c]] this is
    4 b / (a c - b^2).
    """
    _require_physical(state)
    coords = (
        _default_coords(state)
        if measured_x_coords is None
        else _check_x_coords(state, measured_x_coords)
    )
    ix = np.asarray(coords)
    gx = state.cov[np.ix_(ix, ix)]
    a, b, c = gx[0, 0], gx[0, 1], gx[1, 1]
    det = a * c - b * b
    if det <= 0:
        raise Unphysical("measured-X covariance block is not positive definite")
    return float(4.0 * b / det)


def eps_ratio(state: GaussianState, x0: float, measured_x_coords=None) -> float:
    """Bob's error odds eps_B / (1 - eps_B) after post-selection at +/- x0."""
    return float(np.exp(-(x0 ** 2) * eps_ratio_exponent(state, measured_x_coords)))


def eps_b(state: GaussianState, x0: float, measured_x_coords=None) -> float:
    """Bob's error probability, recovered from the odds ratio."""
    r = eps_ratio(state, x0, measured_x_coords)
    return r / (1.0 + r)


def eve_fidelity_exponent(state: GaussianState, measured_x_coords=None) -> float:
    """Coefficient k_F with Eve fidelity = exp(-k_F X0^2).

    Evaluates u^T ((sigma gamma^{-1} sigma^T)_x^{-1} - gamma_x^{-1}) u with
    u = (1, 1), the projections taken on the two measured X coordinates.
    Nonnegative for every physical state.
    """
    _require_physical(state)
    coords = (
        _default_coords(state)
        if measured_x_coords is None
        else _check_x_coords(state, measured_x_coords)
    )
    ix = np.asarray(coords)
    n = state.n_modes
    sigma = symplectic_form(n)
    G = sigma @ np.linalg.inv(state.cov) @ sigma.T
    Gx = G[np.ix_(ix, ix)]
    gx = state.cov[np.ix_(ix, ix)]
    u = np.ones(2)
    return float(u @ (np.linalg.inv(Gx) - np.linalg.inv(gx)) @ u)


def eve_fidelity(state: GaussianState, x0: float, measured_x_coords=None) -> float:
    """Uhlmann fidelity of Eve's two conditional states, closed form.

    Equals ``gaussian_fidelity_equal_cov`` applied to the output of
    ``eve_conditional_state`` on the purification of ``state``.
    """
    return float(np.exp(-(x0 ** 2) * eve_fidelity_exponent(state, measured_x_coords)))


def individual_condition(state: GaussianState, measured_x_coords=None) -> bool:
    """Key distillable against individual attacks: error odds fall strictly
    faster than Eve's fidelity, compared at the exponent level."""
    k_b = eps_ratio_exponent(state, measured_x_coords)
    k_f = eve_fidelity_exponent(state, measured_x_coords)
    return bool(k_b - k_f > EXPONENT_MARGIN)


def collective_condition(state: GaussianState, measured_x_coords=None) -> bool:
    """Key distillable against collective attacks: error odds fall strictly
    faster than the squared fidelity."""
    k_b = eps_ratio_exponent(state, measured_x_coords)
    k_f = eve_fidelity_exponent(state, measured_x_coords)
    return bool(k_b - 2.0 * k_f > EXPONENT_MARGIN)


def general_key_condition(
    state: GaussianState, split: BipartiteSplit, measured_x_coords=None
) -> bool:
    """Key condition for an n+m mode state, one measured X per side.

    Evaluates (d + f - 2e)/(df - e^2) - (a + c + 2b)/(ac - b^2) < 0 with
    (a, b, c) from the measured block of gamma and (d, e, f) from the same
    block of sigma gamma^{-1} sigma^T.  On the protocol's working family
    this verdict coincides with the NPPT verdict.
    """
    _require_physical(state)
    if split.n_modes != state.n_modes:
        raise ValueError(
            f"split {split.n_a}+{split.n_b} does not match {state.n_modes} modes"
        )
    coords = (
        _default_coords(state, split)
        if measured_x_coords is None
        else _check_x_coords(state, measured_x_coords)
    )
    ix = np.asarray(coords)
    n = state.n_modes
    sigma = symplectic_form(n)
    G = sigma @ np.linalg.inv(state.cov) @ sigma.T
    Gx = G[np.ix_(ix, ix)]
    gx = state.cov[np.ix_(ix, ix)]
    d, e, f = Gx[0, 0], Gx[0, 1], Gx[1, 1]
    a, b, c = gx[0, 0], gx[0, 1], gx[1, 1]
    expr = (d + f - 2 * e) / (d * f - e * e) - (a + c + 2 * b) / (a * c - b * b)
    return bool(expr < -EXPONENT_MARGIN)


class AdExponents(NamedTuple):
    """Log-scale rates after N distillation rounds, per unit X0^2."""

    bob: float
    eve_individual: float
    eve_collective: float


def advantage_distillation_exponents(
    state: GaussianState, measured_x_coords=None, n_rounds: int = 1
) -> AdExponents:
    """Exponents of the error/fidelity quantities after N-round distillation.

    Bob's error odds shrink like exp(bob * X0^2) with bob = -N k_B; Eve's
    state overlap shrinks like exp(eve_individual * X0^2) for individual
    attacks and twice that rate for collective ones.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    k_b = eps_ratio_exponent(state, measured_x_coords)
    k_f = eve_fidelity_exponent(state, measured_x_coords)
    return AdExponents(
        bob=-n_rounds * k_b,
        eve_individual=-n_rounds * k_f,
        eve_collective=-2.0 * n_rounds * k_f,
    )


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1 - p) * math.log2(1 - p))


def key_rate_estimate(
    state: GaussianState,
    measured_x_coords=None,
    n_rounds: int = 1,
    x0: float = 1.0,
) -> float:
    """Heuristic lower-bound proxy for the one-way key rate after N rounds.

    ESTIMATE ONLY: Bob's mutual information term 1 - h2(eps_BN) minus an
    Eve-entropy term h2((1 - fid^N) / 2) modeling her two nearly pure
    conditional block states with overlap fid^N.  The sign reproduces the
    collective security verdict for large N; the magnitude is not a proven
    bound.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    k_b = eps_ratio_exponent(state, measured_x_coords)
    k_f = eve_fidelity_exponent(state, measured_x_coords)
    r_n = math.exp(-n_rounds * k_b * x0 ** 2)
    eps_bn = r_n / (1.0 + r_n)
    overlap_n = math.exp(-n_rounds * k_f * x0 ** 2)
    eve_entropy = _binary_entropy((1.0 - overlap_n) / 2.0)
    return (1.0 - _binary_entropy(eps_bn)) - eve_entropy


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecurityReport:
    """Full verdict bundle for one state.

    Exponents are logs per unit X0^2 (negative for useful states); the
    boolean verdicts never depend on X0.  ``individual_secure`` implies
    NPPT and ``collective_secure`` implies ``individual_secure`` by
    construction.
    """

    eps_ratio_exponent: float
    fidelity_exponent: float
    ppt: bool
    individual_secure: bool
    collective_secure: bool
    key_rate_estimate: float
    n_rounds: int
    estimate_note: str = (
        "ESTIMATE: heuristic exponent-level proxy, not a proven bound"
    )

    def to_dict(self) -> dict:
        return {
            "eps_ratio_exponent": self.eps_ratio_exponent,
            "fidelity_exponent": self.fidelity_exponent,
            "ppt": self.ppt,
            "nppt": not self.ppt,
            "individual_secure": self.individual_secure,
            "collective_secure": self.collective_secure,
            "key_rate_estimate": self.key_rate_estimate,
            "n_rounds": self.n_rounds,
            "estimate_note": self.estimate_note,
        }


def analyze_state(
    state: GaussianState,
    split: BipartiteSplit = None,
    measured_x_coords=None,
    n_rounds: int = 5,
) -> SecurityReport:
    """Assemble the security report for a bipartite state.

    Boundary states fail safe: a state inside the PPT tie-break band is
    reported PPT and insecure, and the security verdicts are conjoined
    with the PPT verdict so the report's nesting invariants hold even
    under boundary noise.
    """
    if split is None:
        if state.n_modes != 2:
            raise ValueError("split is required for states with more than 2 modes")
        split = BipartiteSplit(1, 1)
    coords = (
        _default_coords(state, split)
        if measured_x_coords is None
        else _check_x_coords(state, measured_x_coords)
    )
    nppt = is_nppt(state, split)
    individual = individual_condition(state, coords) and nppt
    collective = collective_condition(state, coords) and individual
    return SecurityReport(
        eps_ratio_exponent=-eps_ratio_exponent(state, coords),
        fidelity_exponent=-eve_fidelity_exponent(state, coords),
        ppt=not nppt,
        individual_secure=individual,
        collective_secure=collective,
        key_rate_estimate=key_rate_estimate(state, coords, n_rounds=n_rounds),
        n_rounds=n_rounds,
    )


def symmetric_collective_boundary(lam: float) -> float:
    """Collective-security boundary c*(lam) on the symmetric family c_x = c_p.

    Root of the exponent gap k_B - 2 k_F in c, lying strictly between the
    entanglement boundary c = lam - 1 and the physical boundary
    c = sqrt(lam^2 - 1).
    """
    if lam <= 1.0:
        raise ValueError("lam must exceed 1")

    def gap(c):
        state = make_symmetric_state(SymmetricStateParams(lam, c, c))
        return eps_ratio_exponent(state) - 2.0 * eve_fidelity_exponent(state)

    lo = lam - 1.0 + 1e-9
    hi = np.sqrt(lam ** 2 - 1.0) - 1e-9
    return float(brentq(gap, lo, hi, xtol=1e-14, rtol=8.9e-16))
