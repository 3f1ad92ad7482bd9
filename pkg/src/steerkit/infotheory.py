"""Discrete Shannon measures and binning of bivariate Gaussians.

All entropies are in bits. ``0 log 0`` is taken as 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import ndtr

from .errors import InvalidDistribution, NotPositiveDefinite, QuadratureFailure

TAU_PROB = 1e-8
CELL_ATOL = 1e-10

Party = Literal["A", "B"]


def as_probability_vector(p, tol: float = TAU_PROB) -> np.ndarray:
    """Validate ``p`` as a probability vector and return it as a float array.

    Entries in ``[-tol, 0)`` are clipped to zero; anything more negative,
    or a total off by more than ``tol``, raises InvalidDistribution.
    """
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidDistribution(f"expected a non-empty 1-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidDistribution("probabilities must be finite")
    if arr.min() < -tol or arr.max() > 1 + tol:
        raise InvalidDistribution(f"entries outside [0, 1]: min={arr.min():.3g}, max={arr.max():.3g}")
    total = arr.sum()
    if abs(total - 1) > tol:
        raise InvalidDistribution(f"probabilities sum to {total!r}")
    return np.clip(arr, 0.0, None)


def _plogp(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def shannon_entropy(p) -> float:
    """Shannon entropy in bits of a probability vector."""
    return _plogp(as_probability_vector(p))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint outcome probabilities, rows for party A and columns for party B."""

    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=float)
        if t.ndim != 2 or 0 in t.shape:
            raise InvalidDistribution(f"joint table must be a non-empty matrix, got shape {t.shape}")
        if not np.all(np.isfinite(t)):
            raise InvalidDistribution("joint table must be finite")
        if t.min() < -TAU_PROB:
            raise InvalidDistribution(f"negative joint probability {t.min():.3g}")
        if abs(t.sum() - 1) > TAU_PROB:
            raise InvalidDistribution(f"joint table sums to {t.sum()!r}")
        t = np.clip(t, 0.0, None)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def shape(self) -> tuple[int, int]:
        return self.table.shape

    def marginal(self, party: Party) -> np.ndarray:
        if party == "A":
            return self.table.sum(axis=1)
        if party == "B":
            return self.table.sum(axis=0)
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")

    def swapped(self) -> "JointDistribution":
        return JointDistribution(self.table.T)

    # convenience accessors mirroring the module-level functions
    def joint_entropy(self) -> float:
        return joint_entropy(self)

    def conditional_entropy(self, given: Party = "A") -> float:
        return conditional_entropy(self, given)

    def mutual_information(self) -> float:
        return mutual_information(self)

    def __eq__(self, other):
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.table, other.table))

    __hash__ = None


def _as_joint(d) -> JointDistribution:
    return d if isinstance(d, JointDistribution) else JointDistribution(d)


def joint_entropy(d) -> float:
    return _plogp(_as_joint(d).table)


def conditional_entropy(d, given: Party = "A") -> float:
    """Entropy of the other party's outcome conditioned on ``given``.

    Evaluated through ``H(other | given) = H(A, B) - H(given)``.
    """
    d = _as_joint(d)
    return joint_entropy(d) - _plogp(d.marginal(given))


def mutual_information(d) -> float:
    d = _as_joint(d)
    return _plogp(d.marginal("A")) + _plogp(d.marginal("B")) - joint_entropy(d)


def gaussian_mutual_information(correlation: float) -> float:
    """Mutual information in bits of a bivariate normal with given correlation."""
    return -0.5 * float(np.log2(1.0 - correlation**2))


@dataclass(frozen=True)
class BinningSpec:
    """Uniform bins ``[lower + k*width, lower + (k+1)*width)``, ``k < count``.

    When used for binning, the first and last bins are extended to
    -inf and +inf so that tail mass lands in the edge bins.
    """

    lower: float
    width: float
    count: int

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.width)):
            raise ValueError("bin edges must be finite")
        if self.width <= 0:
            raise ValueError(f"bin width must be positive, got {self.width}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"bin count must be an integer >= 2, got {self.count}")

    @classmethod
    def symmetric(cls, sigma: float, count: int = 64, n_sigma: float = 6.0) -> "BinningSpec":
        """``count`` equal bins covering ``[-n_sigma*sigma, n_sigma*sigma]``."""
        half = n_sigma * sigma
        return cls(lower=-half, width=2 * half / count, count=count)

    @property
    def upper(self) -> float:
        return self.lower + self.width * self.count

    def edges(self) -> np.ndarray:
        """Finite bin edges, ``count + 1`` of them."""
        return float(self.lower) + float(self.width) * np.arange(self.count + 1, dtype=float)

    def open_edges(self) -> np.ndarray:
        e = self.edges()
        e[0], e[-1] = -np.inf, np.inf
        return e


def bin_bivariate_gaussian(cov, spec_a: BinningSpec, spec_b: BinningSpec,
                           atol: float = CELL_ATOL) -> JointDistribution:
    """Discretize a zero-mean bivariate normal onto a rectangular grid.

    Cell ``(i, j)`` holds the probability of bin ``i`` of the first variable
    and bin ``j`` of the second. For each outer bin the mass is an adaptive
    1-d quadrature of the marginal density times the conditional normal CDF
    difference; all cells of a row are integrated together with a max-norm
    error target of ``atol`` per cell.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2) or not np.all(np.isfinite(cov)):
        raise NotPositiveDefinite(f"expected a finite 2x2 covariance, got shape {cov.shape}")
    if abs(cov[0, 1] - cov[1, 0]) > 1e-10 * max(1.0, np.abs(cov).max()):
        raise NotPositiveDefinite("covariance is not symmetric")
    if cov[0, 0] <= 0 or cov[1, 1] <= 0 or np.linalg.det(cov) <= 0:
        raise NotPositiveDefinite("covariance is not positive definite")

    sa, sb = np.sqrt(cov[0, 0]), np.sqrt(cov[1, 1])
    rho = 0.5 * (cov[0, 1] + cov[1, 0]) / (sa * sb)
    if not abs(rho) < 1:
        raise NotPositiveDefinite(f"correlation {rho} is degenerate")
    s = np.sqrt(1.0 - rho * rho)
    # work in standardized coordinates so the table depends only on rho and edges/sigma
    ea = spec_a.open_edges() / sa
    eb = spec_b.open_edges() / sb

    def row(u):
        return np.exp(-0.5 * u * u) / np.sqrt(2 * np.pi) * np.diff(ndtr((eb - rho * u) / s))

    table = np.empty((spec_a.count, spec_b.count))
    for i in range(spec_a.count):
        res, err, info = quad_vec(row, ea[i], ea[i + 1], epsabs=atol, epsrel=0,
                                  norm="max", full_output=True)
        if info.status != 0 or not err <= atol:
            raise QuadratureFailure(
                f"row {i}: quadrature error {err:.3g} exceeds {atol:.3g} (status {info.status})")
        table[i] = res
    return JointDistribution(np.clip(table, 0.0, None))
