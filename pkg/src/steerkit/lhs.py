"""Local-hidden-state models for Bob and randomized search over them.

An ensemble assigns each hidden value ``lam`` a weight ``P(lam)``, a quantum
state for Bob and, for every Alice observable label, a distribution over
Alice's announced outcomes. The joint statistics are

    P(a_i, b_j) = sum_lam P(lam) P(a_i | lam) Tr(|b_j><b_j| rho_lam).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Literal, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidDistribution, MissingResponse
from .infotheory import (TAU_PROB, JointDistribution, as_probability_vector, conditional_entropy,
                         shannon_entropy)
from .qstate import (DensityOperator, ObservableBasis, random_mixed_state, random_pure_state,
                     validate_density)
from .witness import TAU_VERDICT, overlap_omega

DEFAULT_LAMBDAS = 8
MAX_LAMBDAS = 64


@dataclass(frozen=True, eq=False)
class LhsEnsemble:
    weights: np.ndarray
    bob_states: tuple[DensityOperator, ...]
    alice_responses: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        w = as_probability_vector(self.weights)
        states = tuple(self.bob_states)
        if len(states) != w.size:
            raise DimensionMismatch(f"{w.size} weights but {len(states)} Bob states")
        states = tuple(s if isinstance(s, DensityOperator) else validate_density(s) for s in states)
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionMismatch(f"Bob states have mixed dimensions {sorted(dims)}")
        responses = {}
        for label, table in self.alice_responses.items():
            t = np.array(table, dtype=float)
            if t.ndim != 2 or t.shape[0] != w.size:
                raise DimensionMismatch(
                    f"responses for {label!r} need one row per hidden value, got shape {t.shape}")
            if (not np.all(np.isfinite(t)) or t.min() < -TAU_PROB
                    or np.abs(t.sum(axis=1) - 1).max() > TAU_PROB):
                raise InvalidDistribution(f"responses for {label!r} are not probability vectors")
            t = np.clip(t, 0.0, None)
            t.setflags(write=False)
            responses[label] = t
        w.setflags(write=False)
        stack = np.stack([st.matrix for st in states])
        stack.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bob_states", states)
        object.__setattr__(self, "alice_responses", responses)
        object.__setattr__(self, "_stack", stack)

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def dim(self) -> int:
        return self.bob_states[0].dim

    def responses(self, label: str) -> np.ndarray:
        try:
            return self.alice_responses[label]
        except KeyError:
            raise MissingResponse(f"no Alice responses for observable {label!r}") from None

    def state_entropies(self) -> np.ndarray:
        """Von Neumann entropy of each Bob state, in bits."""
        lam = np.clip(np.linalg.eigvalsh(self._stack), 0.0, 1.0)
        terms = np.where(lam > 0, -lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0)
        return np.maximum(terms.sum(axis=1), 0.0)

    def average_entropy(self) -> float:
        """``sum_lam P(lam) S(rho_lam)``."""
        return float(self.weights @ self.state_entropies())


def _bob_probabilities(e: LhsEnsemble, basis: ObservableBasis) -> np.ndarray:
    """Row ``lam`` holds Bob's Born probabilities for ``basis`` on ``rho_lam``."""
    if basis.dim != e.dim:
        raise DimensionMismatch(f"Bob basis dimension {basis.dim} != ensemble dimension {e.dim}")
    u = basis.unitary
    return np.clip(np.einsum("ia,lij,ja->la", u.conj(), e._stack, u).real, 0.0, None)


def lhs_joint_distribution(e: LhsEnsemble, alice_label: str, bob_basis: ObservableBasis) -> JointDistribution:
    """Joint table produced by the ensemble; rows are Alice's outcomes."""
    alice = e.responses(alice_label)
    bob = _bob_probabilities(e, bob_basis)
    return JointDistribution(np.einsum("l,li,lj->ij", e.weights, alice, bob))


def steering_sum(e: LhsEnsemble, q_label: str, r_label: str,
                 q_b: ObservableBasis, r_b: ObservableBasis) -> float:
    """``H(Q_B|Q_A) + H(R_B|R_A)`` on the ensemble's own statistics."""
    return (conditional_entropy(lhs_joint_distribution(e, q_label, q_b), "A")
            + conditional_entropy(lhs_joint_distribution(e, r_label, r_b), "A"))


@dataclass(frozen=True)
class LhsCriterionReport:
    lhs: float
    rhs: float
    average_entropy: float
    per_lambda: tuple[dict, ...]

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - TAU_VERDICT

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "average_entropy": self.average_entropy,
                "holds": self.holds, "per_lambda": [dict(d) for d in self.per_lambda]}


def lhs_criterion_check(e: LhsEnsemble, q_label: str, r_label: str,
                        q_b: ObservableBasis, r_b: ObservableBasis) -> LhsCriterionReport:
    """Compare the conditional-entropy sum with its hidden-variable average.

    The right-hand side is ``sum_lam P(lam) (H(Q_B|lam) + H(R_B|lam))``.
    """
    hq_cond = conditional_entropy(lhs_joint_distribution(e, q_label, q_b), "A")
    hr_cond = conditional_entropy(lhs_joint_distribution(e, r_label, r_b), "A")
    pq = _bob_probabilities(e, q_b)
    pr = _bob_probabilities(e, r_b)
    s_lam = e.state_entropies()
    rows = []
    for k, w in enumerate(e.weights):
        rows.append({"lambda": k, "weight": float(w), "H(Q_B|lambda)": shannon_entropy(pq[k]),
                     "H(R_B|lambda)": shannon_entropy(pr[k]), "S(rho_lambda)": float(s_lam[k])})
    rhs = float(sum(r["weight"] * (r["H(Q_B|lambda)"] + r["H(R_B|lambda)"]) for r in rows))
    avg_s = float(sum(r["weight"] * r["S(rho_lambda)"] for r in rows))
    return LhsCriterionReport(hq_cond + hr_cond, rhs, avg_s, tuple(rows))


def saturating_ensemble(q_b: ObservableBasis, labels: tuple[str, str] = ("Q", "R")) -> LhsEnsemble:
    """Uniform mixture of the eigenstates of ``q_b`` with Alice announcing ``lam`` exactly.

    Its steering sum is ``0 + H(R_B)`` per hidden value, which equals
    ``log2 Omega`` when ``r_b`` is mutually unbiased to ``q_b``.
    """
    n = q_b.dim
    states = tuple(validate_density(q_b.projector(i), [n]) for i in range(n))
    announce = np.eye(n)
    return LhsEnsemble(np.full(n, 1.0 / n), states, {label: announce for label in labels})


# randomized search

StateKind = Literal["pure", "mixed", "both"]
Sampler = Callable[[np.random.Generator, int], LhsEnsemble]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Generator for one trial; depends only on (seed, trial)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def sample_ensemble(rng: np.random.Generator, n: int, n_lambda: int = DEFAULT_LAMBDAS,
                    states: StateKind = "both", deterministic: bool = True,
                    labels: Sequence[str] = ("Q", "R")) -> LhsEnsemble:
    """Draw one random ensemble.

    Weights are Dirichlet(1, ..., 1). Bob's states are Haar-random pure
    states, Hilbert-Schmidt random mixed states, or a per-trial coin flip
    between the two. Alice's responses are either a deterministic outcome
    per hidden value or uniform draws from the simplex.
    """
    if not 1 <= n_lambda <= MAX_LAMBDAS:
        raise ValueError(f"hidden-variable count must be in [1, {MAX_LAMBDAS}], got {n_lambda}")
    weights = rng.dirichlet(np.ones(n_lambda))
    kind = states if states != "both" else ("pure" if rng.random() < 0.5 else "mixed")
    draw = random_pure_state if kind == "pure" else random_mixed_state
    bob = tuple(draw(n, rng) for _ in range(n_lambda))
    responses = {}
    for label in labels:
        if deterministic:
            # a random permutation of outcomes, cycled over the hidden values
            outcome = rng.permutation(n)[np.arange(n_lambda) % n]
            rng.shuffle(outcome)
            responses[label] = np.eye(n)[outcome]
        else:
            responses[label] = rng.dirichlet(np.ones(n), size=n_lambda)
    return LhsEnsemble(weights, bob, responses)


@dataclass(frozen=True)
class LhsSearchResult:
    dim: int
    trials: int
    bound: float
    min_steering_sum: float
    min_average_entropy: float
    argmin_trial: int
    argmin_ensemble: LhsEnsemble

    @property
    def min_margin(self) -> float:
        return self.min_steering_sum - self.bound

    @property
    def violated(self) -> bool:
        return self.min_margin < -TAU_VERDICT

    def to_dict(self) -> dict:
        e = self.argmin_ensemble
        return {
            "dim": self.dim, "trials": self.trials, "bound": self.bound,
            "min_steering_sum": self.min_steering_sum, "min_margin": self.min_margin,
            "min_average_entropy": self.min_average_entropy, "violated": self.violated,
            "argmin_trial": self.argmin_trial,
            "argmin_ensemble": {
                "weights": e.weights.tolist(),
                "bob_states": [[[[z.real, z.imag] for z in row] for row in s.matrix] for s in e.bob_states],
                "alice_responses": {k: v.tolist() for k, v in e.alice_responses.items()},
            },
        }


def random_lhs_search(n: int, q_b: ObservableBasis, r_b: ObservableBasis, trials: int, seed: int,
                      n_lambda: int = DEFAULT_LAMBDAS, states: StateKind = "both",
                      sampler: Sampler | None = None, workers: int = 1) -> LhsSearchResult:
    """Sample LHS ensembles and record the smallest steering sum and average entropy.

    Even-numbered trials use deterministic Alice responses, odd ones random
    responses. Each trial draws from its own generator, so results do not
    depend on ``workers``. Ties go to the lowest trial index.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if q_b.dim != n or r_b.dim != n:
        raise DimensionMismatch(f"Bob bases must have dimension {n}")

    def one(trial: int) -> tuple[float, float, LhsEnsemble]:
        rng = trial_rng(seed, trial)
        if sampler is not None:
            e = sampler(rng, trial)
        else:
            e = sample_ensemble(rng, n, n_lambda, states, deterministic=(trial % 2 == 0))
        return steering_sum(e, "Q", "R", q_b, r_b), e.average_entropy(), e

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(t) for t in range(trials)]

    sums = np.array([r[0] for r in results])
    best = int(np.argmin(sums))
    return LhsSearchResult(
        dim=n, trials=trials, bound=float(np.log2(overlap_omega(q_b, r_b))),
        min_steering_sum=float(sums[best]),
        min_average_entropy=float(min(r[1] for r in results)),
        argmin_trial=best, argmin_ensemble=results[best][2])
