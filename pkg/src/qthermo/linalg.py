"""Dense complex linear algebra for 2x2 and 4x4 operators.

Everything operates on plain complex numpy arrays (row-major square
matrices). Dimensions 2 and 4 cover every state and operator in the
simulated models; tensor products are capped at dimension 16 so that
composite operators can still be assembled.

The 2x2 Hermitian eigensolver is closed-form and doubles as the fast
path used by the state-validation and thermodynamics layers; the 4x4
solver is a cyclic complex Jacobi iteration. Both order eigenvalues
descending and fix the eigenvector gauge by making the first
non-negligible component real and positive.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NonConvergenceError, NonHermitianError, NumericalFailureError

HERMITICITY_TOL = 1e-12
ORTHONORMALITY_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-10
REAL_TRACE_TOL = 1e-12
JACOBI_MAX_SWEEPS = 50
JACOBI_OFFDIAG_TOL = 1e-14
MAX_TENSOR_DIM = 16

# Basis convention: index 0 = excited |e>, index 1 = ground |g>, so that
# <e| sigma_z |e> = +1 and the lowering operator maps |e> to |g>.
IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |g><e|
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |e><g|


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermiticity_defect(m: np.ndarray) -> float:
    """max |m - m^dagger| over elements."""
    return float(np.max(np.abs(m - m.conj().T)))


def check_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NonHermitianError(
            f"matrix is not Hermitian: max |m - m^dagger| = {defect:.3e} > {tol:.1e}"
        )


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product a (x) b; the joint dimension is capped at 16."""
    a = as_matrix(a)
    b = as_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_TENSOR_DIM:
        raise DimensionError(
            f"tensor product of dims {a.shape[0]} x {b.shape[0]} exceeds supported size {MAX_TENSOR_DIM}"
        )
    return np.kron(a, b)


def partial_trace(m, keep: str) -> np.ndarray:
    """Reduce a two-qubit (4x4) operator to one qubit.

    keep='A' traces out the second factor, keep='B' the first; composite
    index convention is row = 2*a + b. The trace is preserved exactly.
    """
    m = as_matrix(m)
    if m.shape[0] != 4:
        raise DimensionError(f"partial_trace supports dim 4 only, got {m.shape[0]}")
    r = m.reshape(2, 2, 2, 2)  # (a, b, a', b')
    if keep == "A":
        return r[:, 0, :, 0] + r[:, 1, :, 1]
    if keep == "B":
        return r[0, :, 0, :] + r[1, :, 1, :]
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (real, descending) and unit-norm eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """sum_i values[i] * v_i v_i^dagger."""
        v = self.vectors
        return (v * self.values) @ v.conj().T


def _fix_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a vector's global phase so its first non-negligible
    component is real and positive."""
    for comp in v:
        if abs(comp) > tol:
            return v * (comp.conjugate() / abs(comp))
    return v


def hermitian_eigvalues_2x2(m: np.ndarray) -> tuple[float, float]:
    """Closed-form (high, low) eigenvalues of a 2x2 Hermitian matrix.

    No hermiticity check; callers on hot paths use this for cheap
    positivity tests.
    """
    a = m[0, 0].real
    d = m[1, 1].real
    b = 0.5 * (m[0, 1] + m[1, 0].conjugate())
    mid = 0.5 * (a + d)
    half_gap = math.hypot(0.5 * (a - d), abs(b))
    return mid + half_gap, mid - half_gap


def hermitian_eig_2x2(m, tol: float = HERMITICITY_TOL) -> EigenSystem:
    """Closed-form eigendecomposition of a 2x2 Hermitian matrix."""
    if not (isinstance(m, np.ndarray) and m.shape == (2, 2) and m.dtype == np.complex128):
        m = as_matrix(m)
    if m.shape[0] != 2:
        raise DimensionError(f"hermitian_eig_2x2 requires dim 2, got {m.shape[0]}")
    # scalar checks keep this hot path cheap
    m00 = complex(m[0, 0])
    m01 = complex(m[0, 1])
    m10 = complex(m[1, 0])
    m11 = complex(m[1, 1])
    if not (cmath.isfinite(m00) and cmath.isfinite(m01)
            and cmath.isfinite(m10) and cmath.isfinite(m11)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    defect = max(2.0 * abs(m00.imag), 2.0 * abs(m11.imag), abs(m01 - m10.conjugate()))
    if defect > tol:
        raise NonHermitianError(
            f"matrix is not Hermitian: max |m - m^dagger| = {defect:.3e} > {tol:.1e}"
        )

    a = m00.real
    d = m11.real
    b = 0.5 * (m01 + m10.conjugate())  # symmetrized off-diagonal
    mid = 0.5 * (a + d)
    half_gap = math.hypot(0.5 * (a - d), abs(b))
    hi = mid + half_gap
    lo = mid - half_gap

    scale = max(abs(a), abs(d), abs(b), 1.0)
    if half_gap <= 1e-15 * scale:
        # fully degenerate: any orthonormal pair works, use the basis
        vectors = np.eye(2, dtype=complex)
    elif abs(b) <= 1e-15 * scale:
        # effectively diagonal: basis vectors ordered by diagonal entry
        vectors = np.eye(2, dtype=complex) if a >= d else np.fliplr(np.eye(2)).astype(complex)
    else:
        # pick the numerically safe component (no cancellation)
        if a >= d:
            v0, v1 = complex(hi - d), b.conjugate()
        else:
            v0, v1 = b, complex(hi - a)
        norm = math.sqrt(abs(v0) ** 2 + abs(v1) ** 2)
        v0 /= norm
        v1 /= norm
        # gauge: first non-negligible component real and positive, per column
        ph = v0.conjugate() / abs(v0) if abs(v0) > 1e-12 else v1.conjugate() / abs(v1)
        v0 *= ph
        v1 *= ph
        w0, w1 = -v1.conjugate(), v0.conjugate()
        ph = w0.conjugate() / abs(w0) if abs(w0) > 1e-12 else w1.conjugate() / abs(w1)
        vectors = np.array([[v0, w0 * ph], [v1, w1 * ph]], dtype=complex)

    return EigenSystem(np.array([hi, lo]), vectors)


def _jacobi_hermitian(m: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi rotations; returns (diag values, vector columns)."""
    a = 0.5 * (m + m.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(a))))
    tol = JACOBI_OFFDIAG_TOL * scale

    def offdiag(x):
        return float(np.sqrt(np.sum(np.abs(x - np.diag(np.diag(x))) ** 2)))

    for _ in range(max_sweeps):
        if offdiag(a) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol * 1e-2:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                phase = apq / abs(apq)
                diff = app - aqq
                if diff == 0.0:
                    theta = 0.25 * math.pi
                else:
                    # inner rotation (|theta| <= pi/4) for guaranteed convergence
                    theta = 0.5 * math.atan2(2.0 * abs(apq), diff)
                    if diff < 0.0:
                        theta -= 0.5 * math.pi
                c = math.cos(theta)
                s = math.sin(theta)
                # unitary U: U[p,p]=c, U[p,q]=-s*phase, U[q,p]=s*conj(phase), U[q,q]=c
                col_p = c * a[:, p] + s * phase.conjugate() * a[:, q]
                col_q = -s * phase * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = col_p, col_q
                row_p = c * a[p, :] + s * phase * a[q, :]
                row_q = -s * phase.conjugate() * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = row_p, row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vec_p = c * v[:, p] + s * phase.conjugate() * v[:, q]
                vec_q = -s * phase * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vec_p, vec_q

    residual = offdiag(a)
    if residual > tol:
        raise NonConvergenceError(
            f"Jacobi eigensolver did not converge after {max_sweeps} sweeps "
            f"(off-diagonal norm {residual:.3e})"
        )
    return np.real(np.diag(a)).copy(), v


def hermitian_eig_4x4(m, tol: float = HERMITICITY_TOL,
                      max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenSystem:
    """Eigendecomposition of a 4x4 Hermitian matrix via cyclic Jacobi."""
    m = as_matrix(m)
    if m.shape[0] != 4:
        raise DimensionError(f"hermitian_eig_4x4 requires dim 4, got {m.shape[0]}")
    check_hermitian(m, tol)
    values, vectors = _jacobi_hermitian(m, max_sweeps)
    order = np.argsort(-values, kind="stable")
    vecs = vectors[:, order]
    for i in range(vecs.shape[1]):
        vecs[:, i] = _fix_phase(vecs[:, i])
    return EigenSystem(values[order], vecs)


def expectation(state, observable, tol: float = HERMITICITY_TOL) -> float:
    """Re tr(state @ observable) for a Hermitian observable.

    Raises if dimensions mismatch or if the trace picks up an imaginary
    part beyond tolerance (which would signal corrupted inputs).
    """
    s = as_matrix(state)
    o = as_matrix(observable)
    if s.shape != o.shape:
        raise DimensionError(f"dimension mismatch: {s.shape[0]} vs {o.shape[0]}")
    check_hermitian(o, tol)
    val = complex(np.trace(s @ o))
    if abs(val.imag) > REAL_TRACE_TOL:
        raise NumericalFailureError(
            f"expectation value has imaginary part {val.imag:.3e} beyond {REAL_TRACE_TOL:.1e}"
        )
    return float(val.real)
