"""Run configuration: one strict JSON document per run.

The document has three sections. ``problem`` and ``disc`` describe the
equation and its discretization; the optional ``run`` section holds the sweep
list, the reference eigenvalue source and the output directory. Any key not
listed here is rejected with its dotted path, so a typo never silently falls
back to a default.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from common.errors import ConfigError
from discretize.config import DiscConfig, Method
from oracles.bruteforce import MIN_STEPS
from oracles.roots import RootSearchRegion
from problems.evaluate import is_autonomous
from problems.spec import CoeffMatrix, DiscreteTerm, KernelMatrix, KernelTerm, ProblemKind, ProblemSpec
from problems.validate import validate
from spectra.convergence import REFINEMENTS

TOP_KEYS = ("problem", "disc", "run")
PROBLEM_KEYS = ("kind", "dim", "max_delay", "A", "discrete", "kernels", "period", "label")
DISCRETE_KEYS = ("delay", "B")
KERNEL_KEYS = ("support", "C")
DISC_KEYS = ("M", "N", "h", "s", "method", "pieces", "quad_order")
RUN_KEYS = ("n_list", "refine", "workers", "reference", "out")
REFERENCE_KINDS = ("value", "char-roots", "bruteforce")
REFERENCE_KEYS = {
    "value": ("kind", "value", "provenance"),
    "char-roots": ("kind", "re_range", "im_range", "grid"),
    "bruteforce": ("kind", "M", "steps"),
}


@dataclass(frozen=True)
class ReferenceSpec:
    """
    Where the reference eigenvalue of a sweep comes from.

    Attributes:
        kind (str): "value", "char-roots" or "bruteforce".
        value (complex | None): The eigenvalue itself, for kind "value".
        provenance (str): Free-form origin of a given value.
        region (RootSearchRegion | None): Search region, for kind "char-roots".
        M (int | None): Grid index, for kind "bruteforce".
        steps (int | None): Time steps, for kind "bruteforce".
    """

    kind: str
    value: Optional[complex] = None
    provenance: str = "value"
    region: Optional[RootSearchRegion] = None
    M: Optional[int] = None
    steps: Optional[int] = None


@dataclass(frozen=True)
class RunSpec:
    problem: ProblemSpec
    disc: DiscConfig
    n_list: Tuple[int, ...] = ()
    refine: str = "index"
    workers: int = 1
    reference: Optional[ReferenceSpec] = None
    out: Optional[str] = None


def _join(key_path, key):
    if isinstance(key, int):
        return f"{key_path}[{key}]"
    return f"{key_path}.{key}" if key_path else key


def _object(value, key_path, allowed, required=()):
    if not isinstance(value, dict):
        raise ConfigError("expected an object", key_path or None)
    for key in value:
        if key not in allowed:
            raise ConfigError("unknown key", _join(key_path, key))
    for key in required:
        if key not in value:
            raise ConfigError("missing required key", _join(key_path, key))
    return value


def _list(value, key_path):
    if not isinstance(value, list):
        raise ConfigError("expected a list", key_path)
    return value


def _number(value, key_path) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("expected a number", key_path)
    if not math.isfinite(value):
        raise ConfigError("expected a finite number", key_path)
    return float(value)


def _integer(value, key_path) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError("expected an integer", key_path)
    return value


def _string(value, key_path) -> str:
    if not isinstance(value, str):
        raise ConfigError("expected a string", key_path)
    return value


def _pair(value, key_path) -> Tuple[float, float]:
    items = _list(value, key_path)
    if len(items) != 2:
        raise ConfigError("expected two numbers", key_path)
    return tuple(_number(item, _join(key_path, i)) for i, item in enumerate(items))


def _complex(value, key_path) -> complex:
    if isinstance(value, list):
        re, im = _pair(value, key_path)
        return complex(re, im)
    return complex(_number(value, key_path))


def _rows(value, key_path):
    rows = _list(value, key_path)
    for i, row in enumerate(rows):
        for j, cell in enumerate(_list(row, _join(key_path, i))):
            if isinstance(cell, bool) or not isinstance(cell, (str, int, float)):
                raise ConfigError("expected an expression string or a number", f"{key_path}[{i}][{j}]")
    return rows


def _parse_problem(doc) -> ProblemSpec:
    section = _object(doc, "problem", PROBLEM_KEYS, ("kind", "dim", "max_delay"))
    kind_text = _string(section["kind"], "problem.kind")
    try:
        kind = ProblemKind(kind_text)
    except ValueError:
        raise ConfigError(f"unknown problem kind {kind_text!r}", "problem.kind") from None
    A = None
    if "A" in section:
        A = CoeffMatrix.parse(_rows(section["A"], "problem.A"), "problem.A")
    discrete = []
    for k, item in enumerate(_list(section.get("discrete", []), "problem.discrete")):
        path = f"problem.discrete[{k}]"
        item = _object(item, path, DISCRETE_KEYS, DISCRETE_KEYS)
        B = CoeffMatrix.parse(_rows(item["B"], f"{path}.B"), f"{path}.B")
        discrete.append(DiscreteTerm(_number(item["delay"], f"{path}.delay"), B))
    kernels = []
    for k, item in enumerate(_list(section.get("kernels", []), "problem.kernels")):
        path = f"problem.kernels[{k}]"
        item = _object(item, path, KERNEL_KEYS, KERNEL_KEYS)
        support = _pair(item["support"], f"{path}.support")
        kernels.append(KernelTerm(KernelMatrix.parse(_rows(item["C"], f"{path}.C"), support, f"{path}.C")))
    period = _number(section["period"], "problem.period") if "period" in section else None
    problem = ProblemSpec(
        kind=kind,
        dim=_integer(section["dim"], "problem.dim"),
        max_delay=_number(section["max_delay"], "problem.max_delay"),
        A=A,
        discrete=tuple(discrete),
        kernels=tuple(kernels),
        period=period,
        label=_string(section.get("label", ""), "problem.label"),
    )
    return validate(problem)


def _parse_disc(doc, kind) -> DiscConfig:
    section = _object(doc, "disc", DISC_KEYS, ("M", "N", "h"))
    method_text = _string(section.get("method", Method.COLLOCATION.value), "disc.method")
    try:
        method = Method(method_text)
    except ValueError:
        raise ConfigError(f"unknown method {method_text!r}", "disc.method") from None
    pieces = None
    if "pieces" in section:
        pieces = tuple(_number(x, f"disc.pieces[{i}]") for i, x in enumerate(_list(section["pieces"], "disc.pieces")))
    quad_order = _integer(section["quad_order"], "disc.quad_order") if "quad_order" in section else None
    cfg = DiscConfig(
        M=_integer(section["M"], "disc.M"),
        N=_integer(section["N"], "disc.N"),
        h=_number(section["h"], "disc.h"),
        s=_number(section.get("s", 0.0), "disc.s"),
        method=method,
        pieces=pieces,
        quad_order=quad_order,
    )
    return cfg.check(kind)


def _parse_reference(doc, problem: ProblemSpec) -> ReferenceSpec:
    path = "run.reference"
    if not isinstance(doc, dict):
        raise ConfigError("expected an object", path)
    kind = _string(doc.get("kind"), f"{path}.kind") if "kind" in doc else None
    if kind not in REFERENCE_KINDS:
        raise ConfigError(f"kind must be one of {', '.join(REFERENCE_KINDS)}", f"{path}.kind")
    allowed = REFERENCE_KEYS[kind]
    if kind == "value":
        _object(doc, path, allowed, ("value",))
        return ReferenceSpec(kind, value=_complex(doc["value"], f"{path}.value"),
                             provenance=_string(doc.get("provenance", "value"), f"{path}.provenance"))
    if kind == "char-roots":
        _object(doc, path, allowed, ("re_range", "im_range"))
        if not is_autonomous(problem):
            raise ConfigError("characteristic roots need an autonomous problem", path)
        grid = (8, 8)
        if "grid" in doc:
            items = _list(doc["grid"], f"{path}.grid")
            if len(items) != 2:
                raise ConfigError("expected two integers", f"{path}.grid")
            grid = tuple(_integer(item, f"{path}.grid[{i}]") for i, item in enumerate(items))
        try:
            region = RootSearchRegion(_pair(doc["re_range"], f"{path}.re_range"),
                                      _pair(doc["im_range"], f"{path}.im_range"), grid)
        except ValueError as e:
            raise ConfigError(str(e), path) from e
        return ReferenceSpec(kind, provenance="char-roots", region=region)
    _object(doc, path, allowed, ("M", "steps"))
    M = _integer(doc["M"], f"{path}.M")
    if M < 1:
        raise ConfigError("M must be at least 1", f"{path}.M")
    steps = _integer(doc["steps"], f"{path}.steps")
    if steps < MIN_STEPS:
        raise ConfigError(f"steps must be at least {MIN_STEPS}", f"{path}.steps")
    return ReferenceSpec(kind, provenance="bruteforce", M=M, steps=steps)


def parse_config(text: str) -> RunSpec:
    """
    Parse and validate a run document.

    Raises:
        ConfigError: On malformed JSON, unknown or missing keys and wrongly
            typed values, with the dotted key path of the offending entry.
        ExprSyntaxError: If a coefficient expression does not parse.
        ValidationError: If the problem or the discretization is inconsistent.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg} at line {e.lineno} column {e.colno}") from e
    _object(doc, "", TOP_KEYS, ("problem", "disc"))
    problem = _parse_problem(doc["problem"])
    disc = _parse_disc(doc["disc"], problem.kind)

    run = _object(doc.get("run", {}), "run", RUN_KEYS)
    n_list = tuple(_integer(n, f"run.n_list[{i}]") for i, n in enumerate(_list(run.get("n_list", []), "run.n_list")))
    refine = _string(run.get("refine", "index"), "run.refine")
    if refine not in REFINEMENTS:
        raise ConfigError(f"refine must be one of {', '.join(REFINEMENTS)}", "run.refine")
    workers = _integer(run.get("workers", 1), "run.workers")
    if workers < 1:
        raise ConfigError("workers must be at least 1", "run.workers")
    reference = _parse_reference(run["reference"], problem) if "reference" in run else None
    out = _string(run["out"], "run.out") if "out" in run else None
    return RunSpec(problem, disc, n_list, refine, workers, reference, out)


def _matrix_doc(matrix):
    return [[str(entry) for entry in row] for row in matrix.entries]


def _complex_doc(value):
    return value.real if value.imag == 0 else [value.real, value.imag]


def serialize_config(spec: RunSpec) -> str:
    """JSON text that parse_config reads back to an equal RunSpec."""
    p = spec.problem
    problem = {"kind": p.kind.value, "dim": p.dim, "max_delay": p.max_delay}
    if p.A is not None:
        problem["A"] = _matrix_doc(p.A)
    if p.discrete:
        problem["discrete"] = [{"delay": term.delay, "B": _matrix_doc(term.B)} for term in p.discrete]
    if p.kernels:
        problem["kernels"] = [{"support": list(term.support), "C": _matrix_doc(term.C)} for term in p.kernels]
    if p.period is not None:
        problem["period"] = p.period
    if p.label:
        problem["label"] = p.label

    cfg = spec.disc
    disc = {"M": cfg.M, "N": cfg.N, "h": cfg.h, "s": cfg.s, "method": cfg.method.value}
    if cfg.pieces is not None:
        disc["pieces"] = list(cfg.pieces)
    if cfg.quad_order is not None:
        disc["quad_order"] = cfg.quad_order

    run = {"n_list": list(spec.n_list), "refine": spec.refine, "workers": spec.workers}
    ref = spec.reference
    if ref is not None:
        if ref.kind == "value":
            run["reference"] = {"kind": "value", "value": _complex_doc(ref.value), "provenance": ref.provenance}
        elif ref.kind == "char-roots":
            run["reference"] = {"kind": "char-roots", "re_range": list(ref.region.re_range),
                                "im_range": list(ref.region.im_range), "grid": list(ref.region.grid)}
        else:
            run["reference"] = {"kind": "bruteforce", "M": ref.M, "steps": ref.steps}
    if spec.out is not None:
        run["out"] = spec.out
    return json.dumps({"problem": problem, "disc": disc, "run": run}, indent=2) + "\n"
