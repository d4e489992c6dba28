"""State evolution for the two simulated models.

Two qubits with a dispersive sigma_z (x) sigma_z coupling evolve in
closed form: the Hamiltonian is diagonal, so the joint state just picks
up element-wise phases and the reduced state of qubit A keeps its
diagonal while the coherence oscillates as cos(2 g t).

A single damped qubit follows the thermal master equation

    drho/dt = -(gamma/2) nbar  [s s+ rho - 2 s+ rho s + rho s s+]
              -(gamma/2)(nbar+1) [s+ s rho - 2 s rho s+ + rho s+ s]

(s = lowering operator, interaction picture), which has the exact
solution implemented by lindblad_analytic; rk4_evolve integrates the
same right-hand side numerically as an independent cross-check.

Units: hbar = 1 throughout; time enters through the dimensionless
products g*t and gamma*t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, states
from .errors import ConfigError, IntegrationFailureError
from .states import DensityMatrix

RK4_POSITIVITY_TOL = 1e-8

FRAMES = ("interaction", "lab")


def qubit_hamiltonian(omega0: float) -> np.ndarray:
    """H = (omega0/2) sigma_z with the excited level at +omega0/2."""
    return 0.5 * omega0 * linalg.SIGMA_Z


@dataclass(frozen=True)
class DispersiveParams:
    """Parameters of the dispersively coupled qubit pair.

    p and c define qubit A's initial state [[p, c], [c*, 1-p]]; qubit B
    always starts maximally mixed. frame selects whether the free
    sigma_z precession is kept ("lab") or factored out ("interaction").
    """

    omega0: float = 1.0
    g: float = 1.0
    p: float = 0.5
    c: complex = 0.5 + 0.0j
    frame: str = "interaction"

    def __post_init__(self):
        if self.frame not in FRAMES:
            raise ConfigError(f"frame must be one of {FRAMES}, got {self.frame!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        # positivity of the initial state, |c| <= sqrt(p(1-p))
        states.validate_density(self.initial_state_a().matrix)

    def initial_state_a(self) -> DensityMatrix:
        c = complex(self.c)
        return DensityMatrix(np.array([[self.p, c], [c.conjugate(), 1.0 - self.p]], dtype=complex))


@dataclass(frozen=True)
class LindbladParams:
    """Damped-qubit parameters; temperature enters only through nbar."""

    gamma: float = 1.0
    nbar: float = 0.0
    omega0: float = 1.0

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.nbar < 0.0:
            raise ConfigError(f"nbar must be non-negative, got {self.nbar}")


def dispersive_reduced_A(params: DispersiveParams, t: float) -> DensityMatrix:
    """Reduced state of qubit A at time t (closed form).

    Interaction frame: [[p, c cos(2gt)], [c* cos(2gt), 1-p]]; the lab
    frame multiplies the coherence by exp(-i omega0 t) in addition.
    """
    c = complex(params.c)
    off = c * math.cos(2.0 * params.g * t)
    if params.frame == "lab":
        off *= np.exp(-1j * params.omega0 * t)
    return DensityMatrix(np.array([[params.p, off],
                                   [np.conjugate(off), 1.0 - params.p]], dtype=complex))


def dispersive_energies(params: DispersiveParams) -> np.ndarray:
    """Diagonal of the joint Hamiltonian in |ee>, |eg>, |ge>, |gg> order."""
    g = params.g
    if params.frame == "lab":
        w = params.omega0
        return np.array([w + g, -g, -g, -w + g])
    return np.array([g, -g, -g, g])


def dispersive_joint_evolve(params: DispersiveParams, rho_ab0: DensityMatrix,
                            t: float) -> DensityMatrix:
    """Evolve the joint 4x4 state: rho_jk(t) = rho_jk(0) e^{-i(E_j - E_k)t}."""
    if rho_ab0.dim != 4:
        raise ConfigError(f"joint state must be 4x4, got dim {rho_ab0.dim}")
    energies = dispersive_energies(params)
    phases = np.exp(-1j * np.subtract.outer(energies, energies) * t)
    return DensityMatrix(rho_ab0.matrix * phases)


_SS_PLUS = linalg.SIGMA_MINUS @ linalg.SIGMA_PLUS   # |g><g|
_S_PLUS_S = linalg.SIGMA_PLUS @ linalg.SIGMA_MINUS  # |e><e|


def lindblad_rhs(params: LindbladParams, rho) -> np.ndarray:
    """Right-hand side of the thermal master equation (interaction picture).

    Accepts a DensityMatrix or a raw 2x2 array so that integrator stages
    can be evaluated; the result is traceless and Hermitian.
    """
    if isinstance(rho, DensityMatrix):
        m = rho.matrix
    elif isinstance(rho, np.ndarray) and rho.dtype == np.complex128:
        m = rho
    else:
        m = np.asarray(rho, dtype=complex)
    if m.shape != (2, 2):
        raise ConfigError(f"lindblad_rhs requires a 2x2 state, got shape {m.shape}")
    sm, sp = linalg.SIGMA_MINUS, linalg.SIGMA_PLUS
    up = _SS_PLUS @ m - 2.0 * (sp @ m @ sm) + m @ _SS_PLUS
    down = _S_PLUS_S @ m - 2.0 * (sm @ m @ sp) + m @ _S_PLUS_S
    n = params.nbar
    return -0.5 * params.gamma * (n * up + (n + 1.0) * down)


def lindblad_analytic(params: LindbladParams, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """Exact solution of the thermal master equation.

    rho_ee(t) = ([(2n+1) rho_ee(0) - n] e^{-(2n+1) gamma t} + n) / (2n+1)
    rho_eg(t) = rho_eg(0) e^{-(n + 1/2) gamma t}
    """
    if rho0.dim != 2:
        raise ConfigError(f"lindblad_analytic requires a 2x2 state, got dim {rho0.dim}")
    n = params.nbar
    w = 2.0 * n + 1.0
    ee0 = rho0.matrix[0, 0].real
    eg0 = complex(rho0.matrix[0, 1])
    ee = ((w * ee0 - n) * math.exp(-w * params.gamma * t) + n) / w
    eg = eg0 * math.exp(-(n + 0.5) * params.gamma * t)
    return DensityMatrix(np.array([[ee, eg], [eg.conjugate(), 1.0 - ee]], dtype=complex))


def rk4_evolve(params: LindbladParams, rho0: DensityMatrix, times: np.ndarray,
               positivity_tol: float = RK4_POSITIVITY_TOL) -> list[DensityMatrix]:
    """Classic 4th-order Runge-Kutta along a uniform time grid.

    Every output state is re-validated: hermitized, trace-renormalized,
    and rejected if an eigenvalue strays outside [-tol, 1 + tol].
    """
    times = np.asarray(times, dtype=float)
    if len(times) < 2:
        raise ConfigError("time grid needs at least two points")
    dts = np.diff(times)
    dt = float(dts[0])
    if dt <= 0.0 or not np.allclose(dts, dt, rtol=1e-12, atol=1e-15):
        raise ConfigError("time grid must be uniform with positive step")

    rho = rho0.matrix.astype(complex)
    out = [DensityMatrix(rho.copy())]
    for t in times[1:]:
        k1 = lindblad_rhs(params, rho)
        k2 = lindblad_rhs(params, rho + 0.5 * dt * k1)
        k3 = lindblad_rhs(params, rho + 0.5 * dt * k2)
        k4 = lindblad_rhs(params, rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        rho = rho / np.trace(rho).real
        hi, lo = linalg.hermitian_eigvalues_2x2(rho)
        if lo < -positivity_tol or hi > 1.0 + positivity_tol:
            raise IntegrationFailureError(
                f"state left the physical simplex at t = {t:.6g} "
                f"(eigenvalues [{lo:.3e}, {hi:.6g}]); reduce the time step"
            )
        out.append(DensityMatrix(rho.copy()))
    return out
