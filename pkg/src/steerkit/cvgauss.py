"""Two-mode Gaussian states and continuous-variable entropic steering tests.

Quadratures are ordered ``(x_A, k_A, x_B, k_B)`` and scaled so the vacuum
has variance 1/2 in each, which makes independent vacua saturate the
``log2(pi e)`` conditional bound. Entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidGaussianState, NonpositiveVariance
from .infotheory import BinningSpec, bin_bivariate_gaussian, mutual_information
from .witness import WitnessReport

QUADRATURES = ("xA", "kA", "xB", "kB")
_INDEX = {q: i for i, q in enumerate(QUADRATURES)}

LOG2_PI_E = float(np.log2(np.pi * np.e))


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).ravel()
        cov = np.array(self.cov, dtype=float)
        if mean.shape != (4,) or cov.shape != (4, 4):
            raise InvalidGaussianState(f"need a 4-vector mean and 4x4 covariance, got {mean.shape}, {cov.shape}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidGaussianState("non-finite entries")
        if np.abs(cov - cov.T).max() > 1e-10:
            raise InvalidGaussianState("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise InvalidGaussianState("covariance is not positive definite") from None
        for party, (ix, ik) in (("A", (0, 1)), ("B", (2, 3))):
            product = cov[ix, ix] * cov[ik, ik]
            if product < 0.25 * (1 - 1e-12):
                raise InvalidGaussianState(
                    f"party {party} violates the uncertainty bound: var(x) var(k) = {product:.6g} < 1/4")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def variance(self, q: str) -> float:
        i = _INDEX[q]
        return float(self.cov[i, i])

    def pair_cov(self, a: str, b: str) -> np.ndarray:
        """2x2 covariance of quadratures ``a`` and ``b``."""
        idx = [_INDEX[a], _INDEX[b]]
        return self.cov[np.ix_(idx, idx)].copy()

    def __eq__(self, other):
        if not isinstance(other, GaussianState):
            return NotImplemented
        return bool(np.array_equal(self.mean, other.mean) and np.array_equal(self.cov, other.cov))

    __hash__ = None


def tmsv(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with squeezing parameter ``r``."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    c, s = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
    cov = np.zeros((4, 4))
    cov[:2, :2] = cov[2:, 2:] = c * np.eye(2)
    cov[:2, 2:] = cov[2:, :2] = s * np.diag([1.0, -1.0])
    return GaussianState(np.zeros(4), cov)


def thermal_product(var_a: float, var_b: float) -> GaussianState:
    """Uncorrelated thermal modes with the given quadrature variances."""
    return GaussianState(np.zeros(4), np.diag([var_a, var_a, var_b, var_b]))


def rescaled(g: GaussianState, s: float) -> GaussianState:
    """Apply ``x -> s x, k -> k / s`` to both modes."""
    d = np.array([s, 1 / s, s, 1 / s])
    return GaussianState(d * g.mean, g.cov * np.outer(d, d))


def gaussian_differential_entropy(variance: float) -> float:
    """``0.5 * log2(2 pi e variance)``; negative below ``1/(2 pi e)``."""
    if not variance > 0:
        raise NonpositiveVariance(f"variance must be positive, got {variance}")
    return 0.5 * float(np.log2(2 * np.pi * np.e * variance))


def conditional_variance(g: GaussianState, target: str, given: str) -> float:
    """Variance of ``target`` conditioned on ``given`` (Schur complement)."""
    c = g.pair_cov(target, given)
    return float(c[0, 0] - c[0, 1] ** 2 / c[1, 1])


def steering_conditional_cv(g: GaussianState) -> WitnessReport:
    """``h(x_B|x_A) + h(k_B|k_A) >= log2(pi e)``."""
    hx = gaussian_differential_entropy(conditional_variance(g, "xB", "xA"))
    hk = gaussian_differential_entropy(conditional_variance(g, "kB", "kA"))
    return WitnessReport("steering-conditional-cv", ">=", hx + hk, LOG2_PI_E,
                         {"h(xB|xA)": hx, "h(kB|kA)": hk, "log2(pi e)": LOG2_PI_E},
                         certifies_steering=True)


def _symmetric_bound(g: GaussianState) -> tuple[float, dict[str, float]]:
    # log2(2 sigma_x sigma_k) for each party; the larger one is used
    ba = float(np.log2(2 * np.sqrt(g.variance("xA") * g.variance("kA"))))
    bb = float(np.log2(2 * np.sqrt(g.variance("xB") * g.variance("kB"))))
    return max(ba, bb), {"bound_A": ba, "bound_B": bb}


def _gaussian_mi(g: GaussianState, a: str, b: str) -> float:
    # h(b) - h(b|a)
    return (gaussian_differential_entropy(g.variance(b))
            - gaussian_differential_entropy(conditional_variance(g, b, a)))


def steering_symmetric_cv(g: GaussianState) -> WitnessReport:
    """``h(x_A:x_B) + h(k_A:k_B) <= max_i log2(2 sigma_x^i sigma_k^i)``."""
    ix = _gaussian_mi(g, "xA", "xB")
    ik = _gaussian_mi(g, "kA", "kB")
    bound, parts = _symmetric_bound(g)
    return WitnessReport("steering-symmetric-cv", "<=", ix + ik, bound,
                         {"h(xA:xB)": ix, "h(kA:kB)": ik, **parts}, certifies_steering=True)


def steering_symmetric_binned(g: GaussianState, spec_x: BinningSpec | None = None,
                              spec_k: BinningSpec | None = None, bins: int = 64,
                              n_sigma: float = 6.0) -> WitnessReport:
    """Symmetric inequality with binned mutual informations on the left.

    ``spec_x`` bins both parties' ``x`` quadrature and ``spec_k`` both ``k``
    quadratures. Without a spec, each variable gets ``bins`` bins over
    ``+-n_sigma`` of its own marginal standard deviations. The bound is the
    continuous one.
    """
    def specs(q: str, spec: BinningSpec | None):
        if spec is not None:
            return spec, spec
        return (BinningSpec.symmetric(np.sqrt(g.variance(q + "A")), bins, n_sigma),
                BinningSpec.symmetric(np.sqrt(g.variance(q + "B")), bins, n_sigma))

    ix = mutual_information(bin_bivariate_gaussian(g.pair_cov("xA", "xB"), *specs("x", spec_x)))
    ik = mutual_information(bin_bivariate_gaussian(g.pair_cov("kA", "kB"), *specs("k", spec_k)))
    bound, parts = _symmetric_bound(g)
    return WitnessReport("steering-symmetric-binned", "<=", ix + ik, bound,
                         {"H(XA:XB)": ix, "H(KA:KB)": ik, **parts}, certifies_steering=True)
