"""JSON task documents and the ``steerkit`` command line.

A task document looks like::

    {
      "schema": "steerkit/1",
      "states": {
        "rho": {"kind": "density", "dims": [2, 2], "matrix": [[[0, 0], ...], ...]},
        "g":   {"kind": "tmsv", "r": 0.5}
      },
      "observables": {"sz": {"pauli": "z"}, "sx": {"vectors": [[[0.7071, 0], ...], ...]}},
      "tasks": [
        {"kind": "steering-conditional", "state": "rho",
         "observables": {"qA": "sz", "qB": "sz", "rA": "sx", "rB": "sx"}}
      ]
    }

Complex numbers are ``[re, im]`` pairs (plain reals are accepted on input).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import cvgauss, lhs, qstate, witness
from .errors import (DocumentError, InvalidBasis, InvalidDensity, InvalidGaussianState,
                     NumericalFailure, ParseError, SteerkitError, UnknownSchema,
                     UnresolvedReference, InvalidState)
from .infotheory import BinningSpec

SCHEMA = "steerkit/1"

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3

State = qstate.DensityOperator | cvgauss.GaussianState


@dataclass
class Task:
    kind: str
    state: str | None = None
    observables: dict[str, str] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"kind": self.kind}
        if self.state is not None:
            d["state"] = self.state
        if self.observables:
            d["observables"] = dict(self.observables)
        if self.params:
            d["params"] = dict(self.params)
        return d


@dataclass(eq=False)
class TaskDocument:
    schema: str
    states: dict[str, State]
    observables: dict[str, qstate.ObservableBasis]
    tasks: list[Task]

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "states": {k: _state_record(v) for k, v in self.states.items()},
            "observables": {k: _basis_record(v) for k, v in self.observables.items()},
            "tasks": [t.to_dict() for t in self.tasks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __eq__(self, other):
        if not isinstance(other, TaskDocument):
            return NotImplemented
        return self.to_dict() == other.to_dict()


# task kinds -> (state type or None, required observable roles, optional roles)
TASK_KINDS: dict[str, tuple[type | None, tuple[str, ...], tuple[str, ...]]] = {
    "von-neumann-entropy": (qstate.DensityOperator, (), ()),
    "maassen-uffink": (qstate.DensityOperator, ("q", "r"), ()),
    "berta": (qstate.DensityOperator, ("q", "r"), ()),
    "steering-conditional": (qstate.DensityOperator, ("qA", "qB", "rA", "rB"), ()),
    "demo-contradiction": (qstate.DensityOperator, ("qA", "qB", "rA", "rB"), ()),
    "steering-symmetric": (qstate.DensityOperator, ("qA", "qB", "rA", "rB"), ()),
    "steering-conditional-cv": (cvgauss.GaussianState, (), ()),
    "steering-symmetric-cv": (cvgauss.GaussianState, (), ()),
    "steering-symmetric-binned": (cvgauss.GaussianState, (), ()),
    "lhs-search": (None, (), ("qB", "rB")),
    "lhs-saturating": (None, ("qB", "rB"), ()),
}


# encoding helpers

def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_record(m: np.ndarray) -> list:
    return [[_complex_pair(z) for z in row] for row in m]


def _state_record(s: State) -> dict:
    if isinstance(s, qstate.DensityOperator):
        return {"kind": "density", "dims": list(s.dims), "matrix": _matrix_record(s.matrix)}
    return {"kind": "gaussian", "mean": s.mean.tolist(), "cov": s.cov.tolist()}


def _basis_record(b: qstate.ObservableBasis) -> dict:
    d: dict[str, Any] = {"vectors": _matrix_record(b.vectors)}
    if b.label:
        d["label"] = b.label
    return d


def _parse_complex(x, path: str) -> complex:
    if isinstance(x, bool):
        raise ParseError("expected a number or [re, im]", path)
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise ParseError("expected a number or [re, im]", path)


def _parse_matrix(x, path: str) -> np.ndarray:
    if not isinstance(x, list) or not x or not all(isinstance(r, list) for r in x):
        raise ParseError("expected a non-empty list of rows", path)
    n = len(x[0])
    rows = []
    for i, row in enumerate(x):
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}", f"{path}[{i}]")
        rows.append([_parse_complex(z, f"{path}[{i}][{j}]") for j, z in enumerate(row)])
    return np.array(rows, dtype=complex)


def _parse_reals(x, path: str, ndim: int) -> np.ndarray:
    try:
        a = np.array(x, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("expected real numbers", path) from None
    if a.ndim != ndim:
        raise ParseError(f"expected a {ndim}-d array of reals", path)
    return a


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise ParseError(f"missing field {key!r}", path)
    return obj[key]


def _parse_state(rec, path: str) -> State:
    if not isinstance(rec, dict):
        raise ParseError("state record must be an object", path)
    kind = _require(rec, "kind", path)
    try:
        if kind == "density":
            m = _parse_matrix(_require(rec, "matrix", path), f"{path}.matrix")
            dims = rec.get("dims")
            if dims is not None and not (isinstance(dims, list) and all(isinstance(d, int) for d in dims)):
                raise ParseError("dims must be a list of integers", f"{path}.dims")
            return qstate.validate_density(m, dims)
        if kind == "pure":
            v = [_parse_complex(z, f"{path}.vector[{i}]")
                 for i, z in enumerate(_require(rec, "vector", path))]
            return qstate.pure_state(v, rec.get("dims"))
        if kind == "gaussian":
            cov = _parse_reals(_require(rec, "cov", path), f"{path}.cov", 2)
            mean = _parse_reals(rec.get("mean", [0.0] * 4), f"{path}.mean", 1)
            return cvgauss.GaussianState(mean, cov)
        if kind == "tmsv":
            r = _require(rec, "r", path)
            if isinstance(r, bool) or not isinstance(r, (int, float)):
                raise ParseError("r must be a number", f"{path}.r")
            return cvgauss.tmsv(float(r))
    except InvalidDensity as exc:
        raise InvalidState(f"{exc} (violations: {exc.violations})", path) from exc
    except (InvalidGaussianState, SteerkitError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise InvalidState(str(exc), path) from exc
    raise ParseError(f"unknown state kind {kind!r}", f"{path}.kind")


def _parse_basis(rec, path: str, name: str) -> qstate.ObservableBasis:
    if not isinstance(rec, dict):
        raise ParseError("observable record must be an object", path)
    try:
        if "pauli" in rec:
            return qstate.pauli_basis(str(rec["pauli"]))
        if "computational" in rec:
            return qstate.computational_basis(int(rec["computational"]), rec.get("label", name))
        if "fourier" in rec:
            return qstate.fourier_basis(int(rec["fourier"]), rec.get("label", name))
        v = _parse_matrix(_require(rec, "vectors", path), f"{path}.vectors")
        return qstate.ObservableBasis(v, rec.get("label", name))
    except (InvalidBasis, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise InvalidState(str(exc), path) from exc


def _parse_task(rec, path: str, states: dict, observables: dict) -> Task:
    if not isinstance(rec, dict):
        raise ParseError("task must be an object", path)
    kind = _require(rec, "kind", path)
    if kind not in TASK_KINDS:
        raise ParseError(f"unknown task kind {kind!r}", f"{path}.kind")
    state_type, required, optional = TASK_KINDS[kind]
    state = rec.get("state")
    if state_type is not None:
        if state is None:
            raise ParseError("task needs a state reference", path)
        if state not in states:
            raise UnresolvedReference(state, f"{path}.state")
        if not isinstance(states[state], state_type):
            raise ParseError(f"task {kind!r} needs a {state_type.__name__}", f"{path}.state")
    obs = rec.get("observables", {})
    if not isinstance(obs, dict):
        raise ParseError("observables must map roles to names", f"{path}.observables")
    for role in required:
        if role not in obs:
            raise ParseError(f"missing observable role {role!r}", f"{path}.observables")
    for role, name in obs.items():
        if role not in required + optional:
            raise ParseError(f"unexpected observable role {role!r}", f"{path}.observables")
        if name not in observables:
            raise UnresolvedReference(name, f"{path}.observables.{role}")
    params = rec.get("params", {})
    if not isinstance(params, dict):
        raise ParseError("params must be an object", f"{path}.params")
    return Task(kind, state, dict(obs), dict(params))


def parse_document(text: str) -> TaskDocument:
    """Parse and resolve a task document; raise on the first problem found."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from exc
    if not isinstance(raw, dict):
        raise ParseError("document must be a JSON object")
    schema = _require(raw, "schema", "$")
    if schema != SCHEMA:
        raise UnknownSchema(f"unrecognized schema {schema!r}, expected {SCHEMA!r}", "$.schema")
    sections = {}
    for key in ("states", "observables"):
        sec = raw.get(key, {})
        if not isinstance(sec, dict):
            raise ParseError(f"{key} must be an object", f"$.{key}")
        sections[key] = sec
    tasks_raw = raw.get("tasks", [])
    if not isinstance(tasks_raw, list):
        raise ParseError("tasks must be a list", "$.tasks")

    states = {k: _parse_state(v, f"$.states.{k}") for k, v in sections["states"].items()}
    observables = {k: _parse_basis(v, f"$.observables.{k}", k) for k, v in sections["observables"].items()}
    tasks = [_parse_task(t, f"$.tasks[{i}]", states, observables) for i, t in enumerate(tasks_raw)]
    return TaskDocument(schema, states, observables, tasks)


# execution

def _round(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


def _execute(task: Task, doc: TaskDocument, seed: int) -> dict:
    obs = {role: doc.observables[name] for role, name in task.observables.items()}
    state = doc.states.get(task.state) if task.state is not None else None
    p = task.params
    k = task.kind
    if k == "von-neumann-entropy":
        sub = p.get("subsystem")
        rho = state if sub is None else qstate.partial_trace(state, int(sub))
        return {"entropy": qstate.von_neumann_entropy(rho)}
    if k == "maassen-uffink":
        return witness.maassen_uffink_check(state, obs["q"], obs["r"]).to_dict()
    if k == "berta":
        return witness.berta_check(state, obs["q"], obs["r"]).to_dict()
    four = (obs.get("qA"), obs.get("qB"), obs.get("rA"), obs.get("rB"))
    if k == "steering-conditional":
        return witness.steering_conditional_discrete(state, *four).to_dict()
    if k == "demo-contradiction":
        return witness.naive_substitution_demo(state, *four, separable=p.get("separable")).to_dict()
    if k == "steering-symmetric":
        return witness.steering_symmetric_discrete(state, *four).to_dict()
    if k == "steering-conditional-cv":
        return cvgauss.steering_conditional_cv(state).to_dict()
    if k == "steering-symmetric-cv":
        return cvgauss.steering_symmetric_cv(state).to_dict()
    if k == "steering-symmetric-binned":
        specs = [BinningSpec(**p[key]) if key in p else None for key in ("spec_x", "spec_k")]
        return cvgauss.steering_symmetric_binned(state, *specs, bins=int(p.get("bins", 64)),
                                                 n_sigma=float(p.get("n_sigma", 6.0))).to_dict()
    if k == "lhs-search":
        n = int(p.get("dim", 2))
        q_b = obs.get("qB", qstate.computational_basis(n, "Q"))
        r_b = obs.get("rB", qstate.fourier_basis(n, "R"))
        res = lhs.random_lhs_search(n, q_b, r_b, trials=int(p.get("trials", 1000)),
                                    seed=int(p.get("seed", seed)),
                                    n_lambda=int(p.get("lambdas", lhs.DEFAULT_LAMBDAS)),
                                    states=p.get("states", "both"))
        out = res.to_dict()
        if not p.get("include_ensemble", False):
            out.pop("argmin_ensemble")
        return out
    if k == "lhs-saturating":
        e = lhs.saturating_ensemble(obs["qB"])
        total = lhs.steering_sum(e, "Q", "R", obs["qB"], obs["rB"])
        bound = float(np.log2(witness.overlap_omega(obs["qB"], obs["rB"])))
        return {"steering_sum": total, "bound": bound, "gap": total - bound,
                "average_entropy": e.average_entropy()}
    raise AssertionError(f"unhandled task kind {k}")


def _run_one(index: int, task: Task, doc: TaskDocument, seed: int) -> dict:
    record: dict[str, Any] = {"index": index, "task": task.to_dict()}
    try:
        record["result"] = _execute(task, doc, seed)
        record["status"] = "ok"
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        record["status"] = "error"
        record["error"] = {"type": "NumericalFailure" if isinstance(exc, np.linalg.LinAlgError)
                           else type(exc).__name__, "numerical": True, "message": str(exc)}
    except (SteerkitError, ValueError, KeyError, TypeError) as exc:
        record["status"] = "error"
        record["error"] = {"type": type(exc).__name__, "numerical": False, "message": str(exc)}
    return _round(record)


def run(doc: TaskDocument, seed: int = 0, workers: int = 1) -> dict:
    """Execute every task and return the report document, in task order."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda it: _run_one(it[0], it[1], doc, seed), enumerate(doc.tasks)))
    else:
        reports = [_run_one(i, t, doc, seed) for i, t in enumerate(doc.tasks)]
    return {"schema": SCHEMA, "seed": seed, "reports": reports}


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def contradiction_document() -> TaskDocument:
    """The maximally correlated separable two-qubit state with sigma_z / sigma_x."""
    rho = qstate.validate_density(np.diag([0, 0.5, 0.5, 0]), [2, 2])
    sz, sx = qstate.pauli_basis("z"), qstate.pauli_basis("x")
    roles = {"qA": "sz", "qB": "sz", "rA": "sx", "rB": "sx"}
    return TaskDocument(SCHEMA, {"rho": rho}, {"sz": sz, "sx": sx}, [
        Task("von-neumann-entropy", "rho", {}, {"subsystem": 1}),
        Task("steering-conditional", "rho", dict(roles)),
        Task("demo-contradiction", "rho", dict(roles)),
    ])


def _summary_line(rec: dict) -> str:
    head = f"[{rec['index']}] {rec['task']['kind']}"
    if rec["status"] != "ok":
        return f"{head}: error {rec['error']['type']}: {rec['error']['message']}"
    r = rec["result"]
    if "verdict" in r:
        extra = " (contradiction)" if r.get("contradiction") else ""
        return f"{head}: lhs={r['lhs']:.6g} bound={r['bound']:.6g} {r['verdict']}{extra}"
    if "min_steering_sum" in r:
        return (f"{head}: min steering sum={r['min_steering_sum']:.6g} bound={r['bound']:.6g} "
                f"min avg entropy={r['min_average_entropy']:.3g}")
    return f"{head}: " + " ".join(f"{k}={v:.6g}" for k, v in r.items() if isinstance(v, float))


def _emit(report: dict) -> int:
    sys.stdout.write(dumps_report(report))
    for rec in report["reports"]:
        print(_summary_line(rec), file=sys.stderr)
    if any(rec.get("error", {}).get("numerical") for rec in report["reports"]):
        return EXIT_NUMERICAL
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="steerkit", description="Entropic EPR-steering witnesses.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("validate", help="parse and validate a task document")
    v.add_argument("file")
    r = sub.add_parser("run", help="evaluate every task in a document")
    r.add_argument("file")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--workers", type=int, default=1)
    d = sub.add_parser("demo", help="built-in demonstrations")
    d.add_argument("name", choices=["contradiction"])
    s = sub.add_parser("lhs-search", help="random search over LHS ensembles")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--lambdas", type=int, default=lhs.DEFAULT_LAMBDAS)
    s.add_argument("--states", choices=["pure", "mixed", "both"], default="both")
    s.add_argument("--workers", type=int, default=1)
    return p


def _load(path: str) -> TaskDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command in ("validate", "run"):
        try:
            doc = _load(args.file)
        except OSError as exc:
            print(f"steerkit: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
        except DocumentError as exc:
            print(f"steerkit: invalid document: {exc}", file=sys.stderr)
            return EXIT_INVALID
        if args.command == "validate":
            print(f"ok: {len(doc.states)} states, {len(doc.observables)} observables, "
                  f"{len(doc.tasks)} tasks", file=sys.stderr)
            return EXIT_OK
        return _emit(run(doc, seed=args.seed, workers=args.workers))
    if args.command == "demo":
        return _emit(run(contradiction_document()))
    if args.command == "lhs-search":
        if not 2 <= args.dim <= qstate.MAX_DIM or not 1 <= args.lambdas <= lhs.MAX_LAMBDAS or args.trials < 1:
            print("steerkit: --dim must be in [2, 64], --lambdas in [1, 64], --trials >= 1", file=sys.stderr)
            return EXIT_USAGE
        task = Task("lhs-search", None, {}, {"dim": args.dim, "trials": args.trials, "seed": args.seed,
                                             "lambdas": args.lambdas, "states": args.states})
        doc = TaskDocument(SCHEMA, {}, {}, [task])
        return _emit(run(doc, seed=args.seed, workers=args.workers))
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
