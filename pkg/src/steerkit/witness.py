"""Entropic uncertainty relations and discrete steering inequalities.

Every evaluator returns a :class:`WitnessReport`. For a ``>=`` relation the
margin is ``lhs - bound``; for a ``<=`` relation it is ``bound - lhs``. A
negative margin beyond ``TAU_VERDICT`` is a violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import DimensionMismatch, UnequalDimensions
from .infotheory import conditional_entropy, mutual_information, shannon_entropy
from .qstate import (DensityOperator, ObservableBasis, is_ppt, joint_distribution,
                     marginal_distribution, partial_trace, von_neumann_entropy)

TAU_VERDICT = 1e-9

Verdict = Literal["satisfied", "saturated", "violated"]

NOT_A_WITNESS = ("not a steering witness: the state-dependent bound log2(Omega_B) + S(rho_B) "
                 "is invalid for LHS models, so its violation certifies nothing")


def verdict_for(margin: float, tol: float = TAU_VERDICT) -> Verdict:
    if margin < -tol:
        return "violated"
    if abs(margin) <= tol:
        return "saturated"
    return "satisfied"


@dataclass(frozen=True)
class WitnessReport:
    relation: str
    sense: Literal[">=", "<="]
    lhs: float
    bound: float
    components: dict[str, float] = field(default_factory=dict)
    # whether a violation of this relation is a valid steering certificate
    certifies_steering: bool = False

    @property
    def margin(self) -> float:
        return self.lhs - self.bound if self.sense == ">=" else self.bound - self.lhs

    @property
    def verdict(self) -> Verdict:
        return verdict_for(self.margin)

    @property
    def steering_certified(self) -> bool:
        return self.certifies_steering and self.verdict == "violated"

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "sense": self.sense,
            "lhs": self.lhs,
            "bound": self.bound,
            "margin": self.margin,
            "verdict": self.verdict,
            "certifies_steering": self.certifies_steering,
            "components": dict(self.components),
        }


@dataclass(frozen=True)
class NaiveSubstitutionReport(WitnessReport):
    """Report for the invalid state-dependent steering bound.

    ``contradiction`` is set when a state known to be separable still
    "violates" the bound. ``separable`` is None when separability could
    not be decided.
    """

    contradiction: bool = False
    separable: bool | None = None
    marker: str = NOT_A_WITNESS

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update(contradiction=self.contradiction, separable=self.separable, marker=self.marker)
        return d


def overlap_omega(q: ObservableBasis, r: ObservableBasis) -> float:
    """``1 / max |<q_i|r_j>|^2`` for two bases of equal dimension."""
    if q.dim != r.dim:
        raise DimensionMismatch(f"bases have dimensions {q.dim} and {r.dim}")
    c = float(np.max(np.abs(q.vectors.conj() @ r.vectors.T) ** 2))
    return float(min(q.dim, max(1.0, 1.0 / c)))


def _check_single(rho: DensityOperator, q: ObservableBasis, r: ObservableBasis):
    if len(rho.dims) != 1 or q.dim != rho.dim or r.dim != rho.dim:
        raise DimensionMismatch(
            f"need a single-system state matching the bases; got dims {rho.dims}, "
            f"basis dims {q.dim}, {r.dim}")


def maassen_uffink_check(rho: DensityOperator, q: ObservableBasis, r: ObservableBasis) -> WitnessReport:
    """``H(Q) + H(R) >= log2 Omega``."""
    _check_single(rho, q, r)
    hq = shannon_entropy(marginal_distribution(rho, q))
    hr = shannon_entropy(marginal_distribution(rho, r))
    omega = overlap_omega(q, r)
    return WitnessReport("maassen-uffink", ">=", hq + hr, float(np.log2(omega)),
                         {"H(Q)": hq, "H(R)": hr, "Omega": omega, "log2(Omega)": float(np.log2(omega))})


def berta_check(rho: DensityOperator, q: ObservableBasis, r: ObservableBasis) -> WitnessReport:
    """``H(Q) + H(R) >= log2 Omega + S(rho)``, the memoryless quantum-memory bound."""
    _check_single(rho, q, r)
    hq = shannon_entropy(marginal_distribution(rho, q))
    hr = shannon_entropy(marginal_distribution(rho, r))
    omega = overlap_omega(q, r)
    log_omega = float(np.log2(omega))
    s = von_neumann_entropy(rho)
    return WitnessReport("berta", ">=", hq + hr, log_omega + s,
                         {"H(Q)": hq, "H(R)": hr, "Omega": omega, "log2(Omega)": log_omega, "S(rho)": s})


def _check_bipartite(rho: DensityOperator, qa, qb, ra, rb):
    if not rho.is_bipartite:
        raise DimensionMismatch(f"need a bipartite state, got dims {rho.dims}")
    da, db = rho.dims
    if qa.dim != da or ra.dim != da or qb.dim != db or rb.dim != db:
        raise DimensionMismatch(f"basis dimensions do not match subsystems {rho.dims}")


def _conditional_terms(rho, qa, qb, ra, rb) -> tuple[float, float]:
    hq = conditional_entropy(joint_distribution(rho, qa, qb), given="A")
    hr = conditional_entropy(joint_distribution(rho, ra, rb), given="A")
    return hq, hr


def steering_conditional_discrete(rho: DensityOperator, qa: ObservableBasis, qb: ObservableBasis,
                                  ra: ObservableBasis, rb: ObservableBasis) -> WitnessReport:
    """``H(Q_B|Q_A) + H(R_B|R_A) >= log2 Omega_B``; violation certifies steering of B by A."""
    _check_bipartite(rho, qa, qb, ra, rb)
    hq, hr = _conditional_terms(rho, qa, qb, ra, rb)
    omega = overlap_omega(qb, rb)
    log_omega = float(np.log2(omega))
    return WitnessReport("steering-conditional", ">=", hq + hr, log_omega,
                         {"H(Q_B|Q_A)": hq, "H(R_B|R_A)": hr, "Omega_B": omega, "log2(Omega_B)": log_omega},
                         certifies_steering=True)


def naive_substitution_demo(rho: DensityOperator, qa: ObservableBasis, qb: ObservableBasis,
                            ra: ObservableBasis, rb: ObservableBasis,
                            separable: bool | None = None) -> NaiveSubstitutionReport:
    """Evaluate the invalid bound ``log2 Omega_B + S(rho_B)`` against the conditional entropies.

    ``separable`` may be passed for states separable by construction. If it
    is omitted, the PPT test decides it for total dimension <= 6 and it is
    left undecided otherwise.
    """
    _check_bipartite(rho, qa, qb, ra, rb)
    hq, hr = _conditional_terms(rho, qa, qb, ra, rb)
    omega = overlap_omega(qb, rb)
    log_omega = float(np.log2(omega))
    s_b = von_neumann_entropy(partial_trace(rho, 1))
    if separable is None and rho.dim <= 6:
        separable = is_ppt(rho)
    lhs, bound = hq + hr, log_omega + s_b
    contradiction = bool(separable) and verdict_for(lhs - bound) == "violated"
    return NaiveSubstitutionReport(
        "naive-substitution", ">=", lhs, bound,
        {"H(Q_B|Q_A)": hq, "H(R_B|R_A)": hr, "Omega_B": omega, "log2(Omega_B)": log_omega, "S(rho_B)": s_b},
        certifies_steering=False, contradiction=contradiction, separable=separable)


def steering_symmetric_discrete(rho: DensityOperator, qa: ObservableBasis, qb: ObservableBasis,
                                ra: ObservableBasis, rb: ObservableBasis) -> WitnessReport:
    """``I(Q_A:Q_B) + I(R_A:R_B) <= max_i log2(N^2 / Omega_i)``; violation rules out LHS models both ways."""
    _check_bipartite(rho, qa, qb, ra, rb)
    da, db = rho.dims
    if da != db:
        raise UnequalDimensions(f"symmetric inequality needs equal subsystem dimensions, got {rho.dims}")
    iq = mutual_information(joint_distribution(rho, qa, qb))
    ir = mutual_information(joint_distribution(rho, ra, rb))
    omega_a, omega_b = overlap_omega(qa, ra), overlap_omega(qb, rb)
    bound_a = float(np.log2(da**2 / omega_a))
    bound_b = float(np.log2(db**2 / omega_b))
    return WitnessReport("steering-symmetric", "<=", iq + ir, max(bound_a, bound_b),
                         {"I(Q_A:Q_B)": iq, "I(R_A:R_B)": ir, "Omega_A": omega_a, "Omega_B": omega_b,
                          "bound_A": bound_a, "bound_B": bound_b},
                         certifies_steering=True)
