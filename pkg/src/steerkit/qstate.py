"""Finite-dimensional density operators, projective bases and Born-rule statistics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from .errors import (BadSubsystem, DimensionMismatch, InvalidBasis, NonHermitian,
                     NonUnitTrace, NotPositive)
from .infotheory import JointDistribution, TAU_PROB, as_probability_vector

TAU_HERM = 1e-8
TAU_TRACE = 1e-8
TAU_PSD = 1e-9
TAU_ORTH = 1e-8
MIN_DIM, MAX_DIM = 2, 64


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A validated density matrix with its subsystem dimensions.

    Build instances through :func:`validate_density` (or the helpers below);
    the constructor itself does not check the physical invariants.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_bipartite(self) -> bool:
        return len(self.dims) == 2

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues clipped to [0, 1], ascending."""
        return np.clip(np.linalg.eigvalsh(self.matrix), 0.0, 1.0)

    def __eq__(self, other):
        if not isinstance(other, DensityOperator):
            return NotImplemented
        return self.dims == other.dims and bool(np.array_equal(self.matrix, other.matrix))

    __hash__ = None


def validate_density(matrix, dims: Sequence[int] | None = None) -> DensityOperator:
    """Check Hermiticity, unit trace and positivity; return a DensityOperator.

    Every violated invariant is collected into the raised exception's
    ``violations`` list together with its measured defect.
    """
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got shape {m.shape}")
    dims = (m.shape[0],) if dims is None else tuple(int(d) for d in dims)
    if not dims or int(np.prod(dims)) != m.shape[0]:
        raise DimensionMismatch(f"dims {dims} do not multiply to matrix side {m.shape[0]}")
    for d in dims:
        if not MIN_DIM <= d <= MAX_DIM:
            raise DimensionMismatch(f"subsystem dimension {d} outside [{MIN_DIM}, {MAX_DIM}]")
    if not np.all(np.isfinite(m)):
        raise NonHermitian("matrix has non-finite entries", float("inf"),
                           [("NonHermitian", float("inf"))])

    violations: list[tuple[type, str, float]] = []
    herm = float(np.abs(m - m.conj().T).max())
    if herm > TAU_HERM:
        violations.append((NonHermitian, "matrix is not Hermitian", herm))
    # remaining checks act on the Hermitian part
    h = 0.5 * (m + m.conj().T)
    trace_defect = float(abs(np.trace(h).real - 1.0))
    if trace_defect > TAU_TRACE:
        violations.append((NonUnitTrace, "trace differs from 1", trace_defect))
    lam_min = float(np.linalg.eigvalsh(h)[0])
    if lam_min < -TAU_PSD:
        violations.append((NotPositive, "matrix has a negative eigenvalue", -lam_min))

    if violations:
        cls, msg, defect = violations[0]
        summary = "; ".join(f"{c.__name__} (defect {d:.3g})" for c, _, d in violations)
        raise cls(f"{msg}: {summary}", defect, [(c.__name__, d) for c, _, d in violations])
    return DensityOperator(_readonly(h), dims)


def pure_state(psi, dims: Sequence[int] | None = None) -> DensityOperator:
    """Projector onto the normalized vector ``psi``."""
    v = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("state vector must be nonzero")
    v = v / norm
    return validate_density(np.outer(v, v.conj()), dims)


def maximally_mixed(n: int) -> DensityOperator:
    return validate_density(np.eye(n) / n, [n])


def tensor(*states: DensityOperator) -> DensityOperator:
    """Tensor product; subsystem dimensions are concatenated."""
    m = reduce(np.kron, (s.matrix for s in states))
    dims = sum((s.dims for s in states), ())
    return validate_density(m, dims)


def partial_trace(rho: DensityOperator, keep: int) -> DensityOperator:
    """Reduced state on subsystem ``keep``, tracing out all others."""
    if not 0 <= keep < len(rho.dims):
        raise BadSubsystem(f"subsystem index {keep} out of range for dims {rho.dims}")
    if len(rho.dims) < 2:
        raise BadSubsystem("partial trace needs a composite state")
    dims = rho.dims
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    # move kept row/column axes to the front, trace the rest pairwise
    d_keep = dims[keep]
    rest = int(np.prod(dims)) // d_keep
    order = [keep] + [k for k in range(n) if k != keep]
    t = t.transpose(order + [n + k for k in order]).reshape(d_keep, rest, d_keep, rest)
    reduced = np.einsum("ajbj->ab", t)
    return validate_density(reduced, [d_keep])


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    """Orthonormal measurement basis; ``vectors[i]`` is the i-th outcome vector."""

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.array(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise InvalidBasis(f"basis must hold N vectors of length N, got shape {v.shape}")
        if not MIN_DIM <= v.shape[0] <= MAX_DIM:
            raise InvalidBasis(f"basis dimension {v.shape[0]} outside [{MIN_DIM}, {MAX_DIM}]")
        defect = float(np.abs(v.conj() @ v.T - np.eye(v.shape[0])).max())
        if defect > TAU_ORTH:
            raise InvalidBasis(f"basis {self.label!r} is not orthonormal (defect {defect:.3g})")
        object.__setattr__(self, "vectors", _readonly(v))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def unitary(self) -> np.ndarray:
        """Matrix whose columns are the basis vectors."""
        return self.vectors.T

    def projector(self, i: int) -> np.ndarray:
        v = self.vectors[i]
        return np.outer(v, v.conj())

    def __eq__(self, other):
        if not isinstance(other, ObservableBasis):
            return NotImplemented
        return self.label == other.label and bool(np.array_equal(self.vectors, other.vectors))

    __hash__ = None


def computational_basis(n: int, label: str = "Z") -> ObservableBasis:
    return ObservableBasis(np.eye(n), label)


def fourier_basis(n: int, label: str = "F") -> ObservableBasis:
    """Discrete Fourier basis; mutually unbiased with the computational one."""
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return ObservableBasis(np.exp(2j * np.pi * j * k / n) / np.sqrt(n), label)


def pauli_basis(axis: str) -> ObservableBasis:
    """Eigenbasis of sigma_x, sigma_y or sigma_z, +1 eigenvector first."""
    s = 1 / np.sqrt(2)
    vecs = {
        "z": [[1, 0], [0, 1]],
        "x": [[s, s], [s, -s]],
        "y": [[s, 1j * s], [s, -1j * s]],
    }
    try:
        return ObservableBasis(np.array(vecs[axis.lower()]), f"sigma_{axis.lower()}")
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def rotated_basis(basis: ObservableBasis, unitary, label: str | None = None) -> ObservableBasis:
    """Apply ``unitary`` to every vector of ``basis``."""
    u = np.asarray(unitary, dtype=complex)
    return ObservableBasis((u @ basis.unitary).T, basis.label if label is None else label)


def random_mub_pair(n: int, rng: np.random.Generator) -> tuple[ObservableBasis, ObservableBasis]:
    """A Haar-rotated (computational, Fourier) pair; the two remain mutually unbiased."""
    u = unitary_group.rvs(n, random_state=rng) if n > 1 else np.eye(1)
    return (rotated_basis(computational_basis(n), u, "Q"),
            rotated_basis(fourier_basis(n), u, "R"))


def marginal_distribution(rho: DensityOperator, basis: ObservableBasis) -> np.ndarray:
    """Born-rule outcome probabilities of ``basis`` on ``rho``."""
    if basis.dim != rho.dim:
        raise DimensionMismatch(f"basis dimension {basis.dim} != state dimension {rho.dim}")
    u = basis.unitary
    p = np.einsum("ia,ij,ja->a", u.conj(), rho.matrix, u).real
    return as_probability_vector(np.clip(p, 0.0, None), TAU_PROB)


def joint_distribution(rho: DensityOperator, basis_a: ObservableBasis,
                       basis_b: ObservableBasis) -> JointDistribution:
    """Joint outcome table of local measurements ``basis_a`` on A and ``basis_b`` on B."""
    if not rho.is_bipartite:
        raise DimensionMismatch(f"joint distribution needs a bipartite state, got dims {rho.dims}")
    da, db = rho.dims
    if basis_a.dim != da or basis_b.dim != db:
        raise DimensionMismatch(
            f"basis dimensions ({basis_a.dim}, {basis_b.dim}) do not match subsystems {rho.dims}")
    u = np.kron(basis_a.unitary, basis_b.unitary)
    p = np.einsum("ia,ij,ja->a", u.conj(), rho.matrix, u).real
    return JointDistribution(np.clip(p, 0.0, None).reshape(da, db))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Entropy ``-Tr(rho log2 rho)`` in bits."""
    lam = rho.eigenvalues()
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def is_ppt(rho: DensityOperator, tol: float = TAU_PSD) -> bool:
    """Positive-partial-transpose test on a bipartite state.

    Equivalent to separability when the total dimension is at most 6.
    """
    if not rho.is_bipartite:
        raise DimensionMismatch("PPT test needs a bipartite state")
    da, db = rho.dims
    t = rho.matrix.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(da * db, da * db)
    return bool(np.linalg.eigvalsh(0.5 * (t + t.conj().T))[0] >= -tol)


def random_pure_state(n: int, rng: np.random.Generator) -> DensityOperator:
    """Haar-random pure state."""
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return pure_state(v, [n])


def random_mixed_state(n: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random mixed state from the induced (Hilbert-Schmidt for full rank) measure."""
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real, [n])
