"""Dense complex linear algebra for one- and two-qubit operators.

Matrices are plain numpy arrays, row major, with the signal qubit always
the left tensor factor. Norms are Frobenius throughout. State values are
small frozen wrappers so downstream code never mutates them by accident.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)
for _s in PAULIS:
    _s.setflags(write=False)

UNITARY_TOL = 1e-12
HERMITIAN_TOL = 1e-12
STATE_EIG_FLOOR = -1e-10


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    """Coerce to a square complex ndarray, validating shape and finiteness."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if dim is not None and a.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got {a.shape[0]}x{a.shape[1]}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def frob(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    m = as_matrix(m)
    return frob(dagger(m) @ m - np.eye(m.shape[0])) < tol


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators, signal on the left."""
    return np.kron(as_matrix(a, 2), as_matrix(b, 2))


def ptrace(m, keep: int) -> np.ndarray:
    """Partial trace of a 4x4 operator down to the kept qubit (1 = signal)."""
    m = as_matrix(m, 4)
    t = m.reshape(2, 2, 2, 2)
    if keep == 1:
        return np.einsum("ijkj->ik", t)
    if keep == 2:
        return np.einsum("ijil->jl", t)
    raise ValueError("keep must be 1 (signal) or 2 (probe)")


@dataclass(frozen=True, eq=False)
class QubitState:
    """Single-qubit density matrix stored as its Bloch vector s, rho = (I + s.sigma)/2."""

    bloch: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bloch, dtype=float).copy()
        if b.shape != (3,):
            raise ValueError("Bloch vector must have exactly three components")
        if not np.isfinite(b).all():
            raise ValueError("Bloch vector must be finite")
        if np.linalg.norm(b) > 1.0 + 1e-12:
            raise ValueError("Bloch vector must lie inside the unit ball")
        b.setflags(write=False)
        object.__setattr__(self, "bloch", b)

    @classmethod
    def ket0(cls) -> "QubitState":
        """The |0><0| state, Bloch vector (0, 0, 1)."""
        return cls(np.array([0.0, 0.0, 1.0]))

    @classmethod
    def from_density(cls, m) -> "QubitState":
        m = as_matrix(m, 2)
        if frob(m - dagger(m)) > HERMITIAN_TOL:
            raise ValueError("density matrix must be Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > 1e-12:
            raise ValueError("density matrix must have unit trace")
        b = np.array([np.trace(m @ s).real for s in (SIGMA1, SIGMA2, SIGMA3)])
        return cls(b)

    @property
    def density(self) -> np.ndarray:
        b = self.bloch
        return 0.5 * (SIGMA0 + b[0] * SIGMA1 + b[1] * SIGMA2 + b[2] * SIGMA3)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Validated 4x4 density matrix of the signal-probe pair."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, 4).copy()
        if frob(m - dagger(m)) > HERMITIAN_TOL:
            raise ValueError("two-qubit state must be Hermitian")
        if abs(complex(np.trace(m)) - 1.0) > 1e-12:
            raise ValueError("two-qubit state must have unit trace")
        if np.linalg.eigvalsh(m).min() < STATE_EIG_FLOOR:
            raise ValueError("two-qubit state must be positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def partial_trace(state: TwoQubitState, keep: int) -> QubitState:
    """Reduced state of the kept qubit (1 = signal, 2 = probe)."""
    if not isinstance(state, TwoQubitState):
        state = TwoQubitState(state)
    return QubitState.from_density(ptrace(state.matrix, keep))


def pauli_exponential(terms) -> np.ndarray:
    """exp(i * sum_k a_k G_k) as a product of cos/sin closed forms.

    Each generator must square to the identity and all generators must
    commute pairwise; otherwise the factored form would be wrong, so the
    call fails instead. Factors multiply in input order.
    """
    prepared = [(float(a), as_matrix(g)) for a, g in terms]
    if not prepared:
        raise ValueError("at least one (angle, generator) term is required")
    dim = prepared[0][1].shape[0]
    eye = np.eye(dim)
    for _, g in prepared:
        if g.shape != (dim, dim):
            raise ValueError("all generators must share one dimension")
        if frob(g @ g - eye) > 1e-12:
            raise ValueError("generator is not involutory (G @ G != I)")
    for i in range(len(prepared)):
        for j in range(i + 1, len(prepared)):
            gi, gj = prepared[i][1], prepared[j][1]
            if frob(gi @ gj - gj @ gi) > 1e-12:
                raise ValueError("generators must commute; split non-commuting exponents explicitly")
    out = np.eye(dim, dtype=complex)
    for a, g in prepared:
        out = out @ (np.cos(a) * eye + 1j * np.sin(a) * g)
    return out


def pauli_rotation(v) -> np.ndarray:
    """exp(i * v . sigma) for a real 3-vector v (axis-angle form)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError("rotation parameter must be a real 3-vector")
    if not np.isfinite(v).all():
        raise ValueError("rotation parameter must be finite")
    angle = float(np.linalg.norm(v))
    if angle == 0.0:
        return SIGMA0.copy()
    n = v / angle
    return np.cos(angle) * SIGMA0 + 1j * np.sin(angle) * (
        n[0] * SIGMA1 + n[1] * SIGMA2 + n[2] * SIGMA3
    )


def matrix_to_nested(m: np.ndarray) -> list:
    """Row-major nested lists with complex entries as [re, im] pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_nested(data) -> np.ndarray:
    rows = []
    for row in data:
        rows.append([complex(re, im) for re, im in row])
    return as_matrix(np.array(rows, dtype=complex))
