"""Heat, work, energy and entropy accounting along a state trajectory.

Two bookkeeping rules run side by side:

* eigenbasis split ("new"): heat collects eigenvalue changes,
  dQ = sum_i dp_i tr(P_i H), and work collects eigenprojector changes,
  dW = sum_i p_i d[tr(P_i H)];
* Alicki split: dQ = tr(drho H), dW = tr(rho dH).

Increments are discretized with midpoint (trapezoid-consistent) rules
on a uniform grid: Delta(p m) = Dp * mean(m) + mean(p) * Dm holds as an
algebraic identity, so with a constant Hamiltonian the first law
Delta U = Delta Q + Delta W is satisfied to rounding error by
construction and the ledger's residual columns track only that noise.

Sign convention: Q > 0 and W > 0 mean energy flowing into the system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg, states
from .errors import DimensionError
from .states import DensityMatrix, SpectralDecomposition

FIRST_LAW_TOL = 1e-6
ALICKI_FIRST_LAW_TOL = 1e-9
ZERO_BRANCH_TOL = 1e-14


def internal_energy(rho: DensityMatrix, h: np.ndarray) -> float:
    """U = tr(rho H)."""
    return linalg.expectation(rho.matrix, h)


def _branch_energies(dec: SpectralDecomposition, h: np.ndarray) -> np.ndarray:
    """tr(P_i H) for every branch."""
    return np.real(np.einsum("kij,ji->k", dec.projectors, h))


def heat_increment_new(prev: SpectralDecomposition, next: SpectralDecomposition,
                       h: np.ndarray) -> float:
    """Eigenbasis heat over one step: sum_i Dp_i tr(mean(P_i) H)."""
    states.require_matched(prev, next)
    if prev.dim != h.shape[0]:
        raise DimensionError(f"dimension mismatch: {prev.dim} vs {h.shape[0]}")
    m_mid = 0.5 * (_branch_energies(prev, h) + _branch_energies(next, h))
    dp = next.probabilities - prev.probabilities
    return float(np.dot(dp, m_mid))


def work_increment_new(prev: SpectralDecomposition, next: SpectralDecomposition,
                       h_prev: np.ndarray, h_next: np.ndarray) -> float:
    """Eigenbasis work over one step: sum_i mean(p_i) D[tr(P_i H)]."""
    states.require_matched(prev, next)
    p_mid = 0.5 * (prev.probabilities + next.probabilities)
    dm = _branch_energies(next, h_next) - _branch_energies(prev, h_prev)
    return float(np.dot(p_mid, dm))


def heat_rate_alicki(rho_dot: np.ndarray, h: np.ndarray) -> float:
    """Alicki heat rate tr(rho_dot H).

    Pass a finite state difference instead of a derivative to obtain the
    heat increment over a step.
    """
    rho_dot = linalg.as_matrix(rho_dot)
    if rho_dot.shape != h.shape:
        raise DimensionError(f"dimension mismatch: {rho_dot.shape[0]} vs {h.shape[0]}")
    return float(np.real(np.sum(rho_dot * h.T)))


def work_rate_alicki(rho: DensityMatrix, h_dot: np.ndarray) -> float:
    """Alicki work rate tr(rho dH/dt); identically zero for constant H."""
    h_dot = linalg.as_matrix(h_dot)
    if rho.dim != h_dot.shape[0]:
        raise DimensionError(f"dimension mismatch: {rho.dim} vs {h_dot.shape[0]}")
    return float(np.real(np.sum(rho.matrix * h_dot.T)))


def entropy_rate(prev: SpectralDecomposition, next: SpectralDecomposition) -> float:
    """Entropy increment over one step: -sum_i Dp_i ln(mean(p_i)).

    Branches with both probabilities below ZERO_BRANCH_TOL are skipped
    (the 0 ln 0 convention).
    """
    states.require_matched(prev, next)
    return _entropy_increment(prev.probabilities, next.probabilities)


@dataclass(frozen=True)
class ThermoSample:
    """One grid point of the thermodynamic ledger.

    Energies are in units of hbar*omega0 (for omega0 = 1); increments
    refer to the step ending at t, cumulative columns start at zero.
    """

    t: float
    U: float
    S: float
    p: np.ndarray
    dQ_new: float
    dW_new: float
    dQ_alicki: float
    dW_alicki: float
    dS: float
    Q_new: float
    W_new: float
    Q_alicki: float
    W_alicki: float
    residual_new: float
    residual_alicki: float


@dataclass
class ThermoLedger:
    """Time-ordered thermodynamic samples plus run metadata."""

    samples: list[ThermoSample] = field(default_factory=list)
    scenario: str = ""
    frame: str = ""
    subsystem: str = ""

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])

    @property
    def times(self) -> np.ndarray:
        return self.column("t")


def _entropy_increment(p_prev: np.ndarray, p_next: np.ndarray) -> float:
    total = 0.0
    for pp, pn in zip(p_prev, p_next):
        if pp < ZERO_BRANCH_TOL and pn < ZERO_BRANCH_TOL:
            continue
        total -= (pn - pp) * math.log(0.5 * (pp + pn))
    return total


def build_ledger(times, trajectory, h: np.ndarray, *,
                 degeneracy_tol: float = states.DEGENERACY_TOL,
                 scenario: str = "", frame: str = "",
                 subsystem: str = "") -> ThermoLedger:
    """Fold a state trajectory into a ThermoLedger (constant Hamiltonian).

    Applies the same midpoint increments as the standalone operations,
    with branch energies cached between steps. The fold is sequential
    because branch matching carries state from one step to the next.
    """
    times = np.asarray(times, dtype=float)
    if len(times) != len(trajectory):
        raise DimensionError(f"{len(times)} times vs {len(trajectory)} states")
    if np.any(np.diff(times) <= 0.0):
        raise DimensionError("times must be strictly increasing")
    h = linalg.as_matrix(h)
    linalg.check_hermitian(h)

    def energy(m: np.ndarray) -> float:
        # tr(m h) = vdot(h, m) for Hermitian h; real for Hermitian pairs
        return float(np.vdot(h, m).real)

    ledger = ThermoLedger(scenario=scenario, frame=frame, subsystem=subsystem)
    dec = states.spectral_decompose(trajectory[0])
    m_prev = _branch_energies(dec, h)
    u = energy(trajectory[0].matrix)
    ledger.samples.append(ThermoSample(
        t=float(times[0]), U=u,
        S=states.entropy_from_probabilities(dec.probabilities),
        p=dec.probabilities.copy(),
        dQ_new=0.0, dW_new=0.0, dQ_alicki=0.0, dW_alicki=0.0, dS=0.0,
        Q_new=0.0, W_new=0.0, Q_alicki=0.0, W_alicki=0.0,
        residual_new=0.0, residual_alicki=0.0,
    ))

    u0 = u
    q_new = w_new = q_al = w_al = 0.0
    for k in range(1, len(times)):
        rho = trajectory[k]
        nxt = states.match_branches(dec, states.spectral_decompose(rho),
                                    degeneracy_tol=degeneracy_tol)
        m_next = _branch_energies(nxt, h)
        dp = nxt.probabilities - dec.probabilities
        dq_new = float(np.dot(dp, m_prev + m_next)) * 0.5
        dw_new = float(np.dot(dec.probabilities + nxt.probabilities, m_next - m_prev)) * 0.5
        dq_al = energy(rho.matrix - trajectory[k - 1].matrix)
        ds = _entropy_increment(dec.probabilities, nxt.probabilities)
        u = energy(rho.matrix)
        q_new += dq_new
        w_new += dw_new
        q_al += dq_al
        du = u - u0
        ledger.samples.append(ThermoSample(
            t=float(times[k]), U=u,
            S=states.entropy_from_probabilities(nxt.probabilities),
            p=nxt.probabilities.copy(),
            dQ_new=dq_new, dW_new=dw_new, dQ_alicki=dq_al, dW_alicki=0.0, dS=ds,
            Q_new=q_new, W_new=w_new, Q_alicki=q_al, W_alicki=w_al,
            residual_new=abs(du - q_new - w_new),
            residual_alicki=abs(du - q_al - w_al),
        ))
        dec = nxt
        m_prev = m_next
    return ledger


@dataclass(frozen=True)
class FirstLawAudit:
    """Largest first-law residuals of a ledger, per definition."""

    max_residual_new: float
    t_at_max_new: float
    max_residual_alicki: float
    t_at_max_alicki: float
    flagged_new: int
    flagged_alicki: int
    tol_new: float
    tol_alicki: float

    @property
    def passed(self) -> bool:
        return self.flagged_new == 0 and self.flagged_alicki == 0


def audit_first_law(ledger: ThermoLedger, u_series,
                    tol_new: float = FIRST_LAW_TOL,
                    tol_alicki: float = ALICKI_FIRST_LAW_TOL) -> FirstLawAudit:
    """Check |Delta U - Q - W| along a ledger against per-definition tolerances."""
    u = np.asarray(u_series, dtype=float)
    t = ledger.times
    if len(u) != len(t):
        raise DimensionError(f"{len(u)} energies vs {len(t)} ledger samples")
    du = u - u[0]
    res_new = np.abs(du - ledger.column("Q_new") - ledger.column("W_new"))
    res_al = np.abs(du - ledger.column("Q_alicki") - ledger.column("W_alicki"))
    i_new = int(np.argmax(res_new))
    i_al = int(np.argmax(res_al))
    return FirstLawAudit(
        max_residual_new=float(res_new[i_new]), t_at_max_new=float(t[i_new]),
        max_residual_alicki=float(res_al[i_al]), t_at_max_alicki=float(t[i_al]),
        flagged_new=int(np.sum(res_new > tol_new)),
        flagged_alicki=int(np.sum(res_al > tol_alicki)),
        tol_new=tol_new, tol_alicki=tol_alicki,
    )
