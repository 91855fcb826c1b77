"""Two-qubit correlations under local amplitude damping of one qubit.

Only qubit A dissipates; the channel is the operator-sum pair

    G1 = [[0, 0], [sqrt(1 - |c|^2), 0]],   G2 = [[c, 0], [0, 1]],

acting as (G_i x I_B), parameterized by the decay amplitude c(t) of the
excited state.  Entanglement is quantified by the Wootters concurrence and
quantum correlations by the discord with projective measurements on A.

For a pure initial state  alpha |e, phi+> + beta |g, phi->  the output is a
rank-2 state and both measures have closed forms: the concurrence factorizes
as |c| * C(0), and the discord is a combination of binary entropies of three
spectral parameters that depend on c only through |c|.  A brute-force
measurement minimization over the Bloch sphere serves as the independent
cross-check of the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .dynamics import AmplitudeTrajectory

__all__ = [
    "TwoQubitState",
    "PureInput",
    "KrausPair",
    "CorrelationSeries",
    "kraus_apply",
    "concurrence",
    "initial_concurrence",
    "discord_rank2",
    "discord_oracle",
    "correlation_series",
]

_SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
_SY_SY = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class TwoQubitState:
    """Validated 4x4 density matrix in the basis {|ee>, |eg>, |ge>, |gg>}."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"two-qubit state must be 4x4, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("state is not Hermitian within 1e-12")
        tr = np.trace(rho)
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"state trace {tr} deviates from 1 by more than 1e-12")
        if np.min(np.linalg.eigvalsh(rho)) < -1e-10:
            raise ValueError("state has an eigenvalue below -1e-10")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def qubit_a(self) -> np.ndarray:
        """Reduced state of the dissipating qubit."""
        return np.einsum("abcb->ac", self.rho.reshape(2, 2, 2, 2))

    def qubit_b(self) -> np.ndarray:
        return np.einsum("abad->bd", self.rho.reshape(2, 2, 2, 2))


@dataclass(frozen=True)
class PureInput:
    """Pure two-qubit input  alpha |e, phi+> + beta |g, phi->.

    alpha, beta are non-negative with alpha^2 + beta^2 = 1; phi_plus and
    phi_minus are normalized single-qubit vectors for qubit B and need not
    be orthogonal.
    """

    alpha: float
    beta: float
    phi_plus: np.ndarray
    phi_minus: np.ndarray

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if abs(self.alpha**2 + self.beta**2 - 1.0) > 1e-12:
            raise ValueError("alpha^2 + beta^2 must equal 1 within 1e-12")
        for name in ("phi_plus", "phi_minus"):
            vec = np.asarray(getattr(self, name), dtype=complex).reshape(2)
            if abs(np.vdot(vec, vec).real - 1.0) > 1e-12:
                raise ValueError(f"{name} must be normalized within 1e-12")
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)

    def state_vector(self) -> np.ndarray:
        return self.alpha * np.kron([1.0, 0.0], self.phi_plus) + self.beta * np.kron([0.0, 1.0], self.phi_minus)

    def to_state(self) -> TwoQubitState:
        psi = self.state_vector()
        return TwoQubitState(np.outer(psi, psi.conj()))

    def overlap(self) -> complex:
        """<phi+|phi->."""
        return complex(np.vdot(self.phi_plus, self.phi_minus))


@dataclass(frozen=True)
class KrausPair:
    """Operator-sum pair for local amplitude damping at amplitude c."""

    c: complex
    gamma1: np.ndarray = field(init=False)
    gamma2: np.ndarray = field(init=False)

    def __post_init__(self):
        c = complex(self.c)
        if abs(c) > 1.0 + 1e-12:
            raise ValueError(f"|c| = {abs(c)} exceeds 1")
        decayed = np.sqrt(max(0.0, 1.0 - abs(c) ** 2))
        g1 = np.array([[0.0, 0.0], [decayed, 0.0]], dtype=complex)
        g2 = np.array([[c, 0.0], [0.0, 1.0]], dtype=complex)
        for arr in (g1, g2):
            arr.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)

    def completeness_defect(self) -> float:
        ident = self.gamma1.conj().T @ self.gamma1 + self.gamma2.conj().T @ self.gamma2
        return float(np.max(np.abs(ident - np.eye(2))))


def kraus_apply(c: complex, rho0: TwoQubitState) -> TwoQubitState:
    """Propagate a two-qubit state through the local damping channel."""
    pair = KrausPair(c)
    ident = np.eye(2)
    out = np.zeros((4, 4), dtype=complex)
    for op in (pair.gamma1, pair.gamma2):
        full = np.kron(op, ident)
        out += full @ rho0.rho @ full.conj().T
    out = 0.5 * (out + out.conj().T)  # scrub rounding asymmetry
    return TwoQubitState(out)


def concurrence(rho: TwoQubitState) -> float:
    """Wootters concurrence of a two-qubit state, in [0, 1].

    The sqrt-eigenvalues of rho (sy x sy) rho* (sy x sy) equal the singular
    values of T_ij = sqrt(mu_i mu_j) <v_i| sy x sy |conj(v_j)> over the
    eigenpairs of rho.  Restricting T to the numerically nonzero eigenspace
    keeps rounding noise in the null space (whose square roots would
    otherwise pollute the answer at sqrt(eps)) out of the subtraction.
    """
    evals, vecs = np.linalg.eigh(rho.rho)
    keep = evals > 64.0 * np.finfo(float).eps * np.max(evals)
    mu = evals[keep]
    basis = vecs[:, keep]
    cross = basis.conj().T @ _SY_SY @ basis.conj()
    t_matrix = np.sqrt(np.outer(mu, mu)) * cross
    singular = np.sort(np.linalg.svd(t_matrix, compute_uv=False))[::-1]
    if singular.size == 0:
        return 0.0
    return float(max(0.0, 2.0 * singular[0] - np.sum(singular)))


def initial_concurrence(pure: PureInput) -> float:
    """Concurrence of the pure input, 2 alpha beta |<phi-| sigma_y |phi+*>|."""
    cross = np.vdot(pure.phi_minus, _SIGMA_Y @ pure.phi_plus.conj())
    return float(2.0 * pure.alpha * pure.beta * abs(cross))


def binary_entropy(x):
    """h(x) = -x log2 x - (1-x) log2(1-x), continuously 0 at the endpoints."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    out = np.zeros_like(x)
    inside = (x > 0.0) & (x < 1.0)
    xi = x[inside]
    out[inside] = -xi * np.log2(xi) - (1.0 - xi) * np.log2(1.0 - xi)
    return out if out.ndim else float(out)


def _discord_closed_form(alpha, beta, overlap_mag, c0, abs_c):
    """Vectorized over |c|; depends on c only through its magnitude."""
    abs_c = np.asarray(abs_c, dtype=float)
    decayed_sq = np.clip(1.0 - abs_c**2, 0.0, 1.0)
    lam = 0.5 * (1.0 + np.sqrt(np.clip(1.0 - decayed_sq * c0**2, 0.0, None)))

    def upper_eigenvalue(mag_sq):
        return 0.5 + np.sqrt((0.5 - alpha**2 * mag_sq) ** 2 + (alpha * beta * overlap_mag) ** 2 * mag_sq)

    lam_a = upper_eigenvalue(abs_c**2)
    lam_ab = upper_eigenvalue(decayed_sq)
    return binary_entropy(lam) + binary_entropy(lam_a) - binary_entropy(lam_ab)


def discord_rank2(pure: PureInput, c: complex) -> float:
    """Closed-form discord of the channel output for a pure input.

    Valid for the rank-2 family produced by the local damping channel; the
    value is a function of |c| alone (the phase of c is a local unitary on
    A and cannot move any correlation measure).
    """
    abs_c = abs(c)
    if abs_c > 1.0 + 1e-12:
        raise ValueError(f"|c| = {abs_c} exceeds 1")
    value = _discord_closed_form(pure.alpha, pure.beta, abs(pure.overlap()), initial_concurrence(pure), min(abs_c, 1.0))
    return float(max(0.0, value))


def _conditional_entropy(reshaped: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Post-measurement entropy of B for projective measurements on A.

    reshaped is rho as [a, b, a', b']; directions is (k, 3) of Bloch unit
    vectors.  Returns sum_k p_k S(rho_B^k) for each direction.
    """
    nx, ny, nz = directions[:, 0], directions[:, 1], directions[:, 2]
    proj = 0.5 * np.stack(
        [
            np.stack([1.0 + nz, nx - 1j * ny], axis=-1),
            np.stack([nx + 1j * ny, 1.0 - nz], axis=-1),
        ],
        axis=-2,
    )
    total = np.zeros(len(directions))
    for pk in (proj, np.eye(2)[None, :, :] - proj):
        cond = np.einsum("acbd,kca->kbd", reshaped, pk)
        prob = np.clip(np.einsum("kbb->k", cond).real, 1e-300, 1.0)
        cond = cond / prob[:, None, None]
        tr = np.einsum("kbb->k", cond).real
        det = (cond[:, 0, 0] * cond[:, 1, 1] - cond[:, 0, 1] * cond[:, 1, 0]).real
        upper = 0.5 * (tr + np.sqrt(np.clip(tr * tr - 4.0 * det, 0.0, None)))
        total += prob * binary_entropy(np.clip(upper, 0.0, 1.0))
    return total


def _von_neumann_entropy(rho: np.ndarray) -> float:
    ev = np.clip(np.linalg.eigvalsh(rho).real, 0.0, 1.0)
    ev = ev[ev > 1e-15]
    return float(-(ev * np.log2(ev)).sum())


def discord_oracle(rho: TwoQubitState, n_theta: int = 64, n_phi: int = 128) -> float:
    """Discord by direct minimization over projective measurements on A.

    Coarse (n_theta x n_phi) Bloch-sphere grid followed by Nelder-Mead
    refinement of the measurement angles to ~1e-6 rad.  Independent of the
    closed form; intended as its cross-check and for states outside the
    rank-2 family.
    """
    reshaped = rho.rho.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)
    theta = (np.arange(n_theta) + 0.5) * np.pi / n_theta
    phi = np.arange(n_phi) * 2.0 * np.pi / n_phi
    tg, pg = np.meshgrid(theta, phi, indexing="ij")
    directions = np.stack(
        [np.sin(tg) * np.cos(pg), np.sin(tg) * np.sin(pg), np.cos(tg)], axis=-1
    ).reshape(-1, 3)
    values = _conditional_entropy(reshaped, directions)
    best = int(np.argmin(values))

    def objective(angles):
        t, p = angles
        d = np.array([[np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)]])
        return _conditional_entropy(reshaped, d)[0]

    start = np.array([tg.reshape(-1)[best], pg.reshape(-1)[best]])
    result = minimize(objective, start, method="Nelder-Mead", options={"xatol": 1e-6, "fatol": 1e-14})
    cond_min = min(float(values[best]), float(result.fun))
    return cond_min + _von_neumann_entropy(rho.qubit_a()) - _von_neumann_entropy(rho.rho)


@dataclass(frozen=True)
class CorrelationSeries:
    """Concurrence and discord along an amplitude trajectory."""

    times: np.ndarray
    abs_c_squared: np.ndarray
    concurrence: np.ndarray
    discord: np.ndarray


def correlation_series(pure: PureInput, traj: AmplitudeTrajectory) -> CorrelationSeries:
    """Evaluate both closed-form measures at every trajectory node."""
    mags = np.clip(traj.magnitudes(), 0.0, 1.0)
    c0 = initial_concurrence(pure)
    conc = mags * c0
    disc = np.clip(
        _discord_closed_form(pure.alpha, pure.beta, abs(pure.overlap()), c0, mags), 0.0, None
    )
    return CorrelationSeries(
        times=traj.times.copy(), abs_c_squared=mags**2, concurrence=conc, discord=disc
    )
