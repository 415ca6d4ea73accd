"""Dense complex linear algebra for small quantum systems.

Conventions shared by every module in this package:

* kets are 1-D complex ndarrays, operators are square 2-D complex ndarrays;
* tensor products put the FIRST factor on the most significant
  (slowest-varying) index, i.e. ``numpy.kron`` ordering;
* hbar = 1, so energies are angular frequencies and times plain reals.

All functions are pure and never mutate their inputs.
"""

from __future__ import annotations

import numpy as np

# Composite dimensions beyond this are rejected (dense storage only).
DIM_LIMIT = 65536

HERMITIAN_ATOL = 1e-12
DENSITY_TRACE_ATOL = 1e-12
DENSITY_EIG_FLOOR = -1e-10
# Eigenvalues below this are floating noise and excluded from entropy sums.
ENTROPY_EIG_CUTOFF = 1e-14


def as_ket(vec) -> np.ndarray:
    """Coerce to a 1-D complex vector, rejecting non-finite entries."""
    arr = np.asarray(vec, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a 1-D state vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state vector has non-finite entries")
    return arr


def as_operator(mat) -> np.ndarray:
    """Coerce to a square 2-D complex matrix."""
    arr = np.asarray(mat, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"expected a square operator, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("operator has non-finite entries")
    return arr


def hermiticity_defect(mat) -> float:
    """Largest entrywise deviation |A - A^dagger|."""
    arr = as_operator(mat)
    return float(np.max(np.abs(arr - arr.conj().T)))


def require_hermitian(mat, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    arr = as_operator(mat)
    defect = float(np.max(np.abs(arr - arr.conj().T)))
    if defect > atol:
        raise ValueError(f"operator is not Hermitian: max |A - A^dagger| = {defect:.3e} > {atol:.1e}")
    return arr


def check_density_matrix(rho, trace_atol: float = DENSITY_TRACE_ATOL,
                         eig_floor: float = DENSITY_EIG_FLOOR) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a density matrix."""
    arr = require_hermitian(rho)
    tr = complex(np.trace(arr))
    if abs(tr - 1.0) > trace_atol:
        raise ValueError(f"density matrix trace deviates from 1 by {abs(tr - 1.0):.3e}")
    lo = float(np.linalg.eigvalsh(arr)[0])
    if lo < eig_floor:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return arr


def projector(vec) -> np.ndarray:
    """Rank-1 projector |v><v| (input need not be normalized)."""
    v = as_ket(vec)
    return np.outer(v, v.conj())


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two kets or two operators (same kind only)."""
    x = np.asarray(a, dtype=complex)
    y = np.asarray(b, dtype=complex)
    if x.ndim != y.ndim or x.ndim not in (1, 2):
        raise ValueError(f"tensor requires two kets or two operators, got ndim {x.ndim} and {y.ndim}")
    if x.ndim == 2:
        x, y = as_operator(x), as_operator(y)
    else:
        x, y = as_ket(x), as_ket(y)
    if x.shape[0] * y.shape[0] > DIM_LIMIT:
        raise ValueError(f"tensor dimension {x.shape[0] * y.shape[0]} exceeds limit {DIM_LIMIT}")
    return np.kron(x, y)


def partial_trace(rho, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite matrix.

    ``dims`` gives (dA, dB) with A the most significant factor; ``keep`` is
    "A" or "B". Works on any square matrix of size dA*dB, not only density
    matrices; the trace of the input is preserved.
    """
    da, db = dims
    if da < 1 or db < 1:
        raise ValueError("subsystem dimensions must be positive")
    arr = as_operator(rho)
    if arr.shape[0] != da * db:
        raise ValueError(f"matrix dimension {arr.shape[0]} does not factor as {da}*{db}")
    blocks = arr.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", blocks)
    if keep == "B":
        return np.einsum("ijil->jl", blocks)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def hermitian_eig(op, atol: float = HERMITIAN_ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix."""
    arr = require_hermitian(op, atol=atol)
    w, v = np.linalg.eigh(arr)
    return w, v


def evolve_unitary(hamiltonian, t: float) -> np.ndarray:
    """exp(-i H t) for Hermitian H, via eigendecomposition."""
    w, v = hermitian_eig(hamiltonian)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def von_neumann_entropy(rho, validate: bool = True) -> float:
    """Entropy -sum(lam * ln lam) in nats over eigenvalues above the cutoff."""
    arr = check_density_matrix(rho) if validate else as_operator(rho)
    w = np.linalg.eigvalsh(arr)
    w = w[w > ENTROPY_EIG_CUTOFF]
    return max(float(-np.sum(w * np.log(w))), 0.0) + 0.0
