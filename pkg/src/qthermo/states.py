"""Validated density matrices and spectral diagnostics.

A DensityMatrix wraps a Hermitian, unit-trace, positive-semidefinite
complex matrix. SpectralDecomposition carries the eigenvalue
probabilities together with rank-1 eigenprojectors and stable branch
labels; match_branches keeps those labels continuous along a
trajectory so that probability and projector differentials remain well
defined through eigenvalue crossings.

Projectors, not kets, are the stored eigenobjects: that removes the
unphysical global-phase gauge from the projector differentials used by
the thermodynamic accounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import linalg
from .errors import (
    DimensionError,
    NotPositiveError,
    TraceNotOneError,
    UnmatchedBranchesError,
)

TRACE_TOL = 1e-10
POSITIVITY_SLACK = 1e-10
DEGENERACY_TOL = 1e-12
BLOCH_NORM_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """A quantum state; construct through validate_density."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalue probabilities with rank-1 projectors and branch labels.

    probabilities[i], projectors[i] and branch_ids[i] describe one
    eigenbranch; labels are assigned in descending-probability order
    when a trajectory starts and are preserved by match_branches.
    """

    probabilities: np.ndarray
    projectors: np.ndarray  # shape (k, d, d)
    branch_ids: np.ndarray

    @property
    def dim(self) -> int:
        return self.projectors.shape[1]

    def reconstruct(self) -> np.ndarray:
        return np.tensordot(self.probabilities, self.projectors, axes=1)


@dataclass(frozen=True)
class BlochVector:
    """Bloch components of a qubit state; eigenvalues are (1 +- r)/2."""

    x: float
    y: float
    z: float
    r: float


def _eigensystem(m: np.ndarray) -> linalg.EigenSystem:
    if m.shape[0] == 2:
        return linalg.hermitian_eig_2x2(m)
    return linalg.hermitian_eig_4x4(m)


def validate_density(m, hermiticity_tol: float = linalg.HERMITICITY_TOL,
                     trace_tol: float = TRACE_TOL,
                     positivity_slack: float = POSITIVITY_SLACK) -> DensityMatrix:
    """Check the density-matrix invariants and wrap the matrix.

    Raises NonHermitianError, TraceNotOneError or NotPositiveError with
    the magnitude of the violation; for 2x2 matrices [[p, c], [c*, 1-p]]
    positivity is equivalent to |c| <= sqrt(p(1-p)).
    """
    a = linalg.as_matrix(m)
    dim = a.shape[0]
    if dim not in (2, 4):
        raise DimensionError(f"density matrices must have dim 2 or 4, got {dim}")
    linalg.check_hermitian(a, hermiticity_tol)
    tr = complex(np.trace(a))
    if abs(tr - 1.0) > trace_tol:
        raise TraceNotOneError(f"trace is {tr.real:.12g}, off by {abs(tr - 1.0):.3e}")
    if dim == 2:
        lo = linalg.hermitian_eigvalues_2x2(a)[1]
    else:
        lo = float(np.min(linalg.hermitian_eig_4x4(a, tol=hermiticity_tol).values))
    if lo < -positivity_slack:
        raise NotPositiveError(f"minimum eigenvalue {lo:.3e} below -{positivity_slack:.1e}")
    return DensityMatrix(a)


def spectral_decompose(rho: DensityMatrix,
                       positivity_slack: float = POSITIVITY_SLACK) -> SpectralDecomposition:
    """Eigendecompose a state into probabilities and rank-1 projectors.

    Probabilities within the positivity slack of [0, 1] are clamped onto
    the interval; branch labels are assigned in descending order.
    """
    eig = _eigensystem(rho.matrix)
    probs = np.asarray(eig.values, dtype=float)
    hi = float(probs[0])   # values are descending
    lo = float(probs[-1])
    if lo < -positivity_slack or hi > 1.0 + positivity_slack:
        raise NotPositiveError(
            f"eigenvalues {probs} outside [0, 1] beyond slack {positivity_slack:.1e}"
        )
    if lo < 0.0 or hi > 1.0:
        probs = np.clip(probs, 0.0, 1.0)
    vecs = eig.vectors
    projectors = np.einsum("ik,jk->kij", vecs, vecs.conj())
    return SpectralDecomposition(probs, projectors, np.arange(len(probs)))


def match_branches(prev: SpectralDecomposition, next: SpectralDecomposition,
                   degeneracy_tol: float = DEGENERACY_TOL) -> SpectralDecomposition:
    """Align next's branches with prev's labels.

    The permutation maximizing sum_i tr(P_i_prev P_i_next) is applied to
    next; inside a degeneracy window (adjacent eigenvalue gap below
    degeneracy_tol) the eigenbasis is gauge-free, so next inherits
    prev's projectors unchanged and only the probabilities advance.
    """
    if prev.dim != next.dim:
        raise DimensionError(f"dimension mismatch: {prev.dim} vs {next.dim}")
    k = len(prev.probabilities)

    overlaps = np.real(np.einsum("kij,lji->kl", prev.projectors, next.projectors))
    if k == 2:
        identity_wins = overlaps[0, 0] + overlaps[1, 1] >= overlaps[0, 1] + overlaps[1, 0]
        probs = next.probabilities if identity_wins else next.probabilities[::-1].copy()
        degenerate = abs(float(probs[0]) - float(probs[1])) < degeneracy_tol
        if degenerate:
            projectors = prev.projectors
        elif identity_wins:
            projectors = next.projectors
        else:
            projectors = next.projectors[::-1].copy()
        return SpectralDecomposition(probs, projectors, prev.branch_ids)

    perm = list(max(permutations(range(k)),
                    key=lambda candidate: sum(overlaps[i, candidate[i]] for i in range(k))))
    probs = next.probabilities[perm]
    gaps = np.diff(np.sort(probs))
    if len(gaps) and float(np.min(np.abs(gaps))) < degeneracy_tol:
        projectors = prev.projectors
    else:
        projectors = next.projectors[perm]
    return SpectralDecomposition(probs, projectors, prev.branch_ids)


def entropy_from_probabilities(probs: np.ndarray) -> float:
    """-sum p ln p over clamped probabilities, with 0 ln 0 := 0."""
    total = 0.0
    for p in probs:
        p = min(max(float(p), 0.0), 1.0)
        if p > 0.0:
            total -= p * math.log(p)
    return max(total, 0.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """von Neumann entropy in nats."""
    if rho.dim == 2:
        values = linalg.hermitian_eigvalues_2x2(rho.matrix)
    else:
        values = _eigensystem(rho.matrix).values
    return entropy_from_probabilities(np.asarray(values))


def bloch_vector(rho: DensityMatrix) -> BlochVector:
    """Bloch components (x, y, z) of a qubit state.

    Convention: index 0 is the excited level, so z = rho_ee - rho_gg.
    """
    if rho.dim != 2:
        raise DimensionError(f"bloch_vector requires dim 2, got {rho.dim}")
    m = rho.matrix
    x = float(2.0 * m[0, 1].real) + 0.0
    y = float(-2.0 * m[0, 1].imag) + 0.0
    z = float(m[0, 0].real - m[1, 1].real) + 0.0
    r = math.sqrt(x * x + y * y + z * z)
    if r > 1.0 + BLOCH_NORM_TOL:
        raise NotPositiveError(f"Bloch radius {r:.12g} exceeds 1 beyond {BLOCH_NORM_TOL:.1e}")
    return BlochVector(x, y, z, r)


def require_matched(prev: SpectralDecomposition, next: SpectralDecomposition) -> None:
    """Raise unless two decompositions carry identical branch labels."""
    if not np.array_equal(prev.branch_ids, next.branch_ids):
        raise UnmatchedBranchesError(
            f"branch labels differ: {prev.branch_ids} vs {next.branch_ids}"
        )
