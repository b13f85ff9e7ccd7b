"""Problem-file schema: JSON in, library objects out.

A problem file bundles everything one conversion question needs: the two
representations, the states, optional component pairs, optional U(1) spectra,
symmetry-check inputs, and optional ensemble/thermo extras. Complex scalars
are encoded as [re, im]; bare numbers are real.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .numkit import DEFAULT_TOL, ToleranceConfig
from .ratekit import SymCheckOptions
from .repkit import Representation, RepPair, U1Spec

__all__ = [
    "Problem",
    "load_problem",
    "loads_problem",
    "shipped_problems",
    "shipped_path",
    "scalar_from_json",
    "matrix_from_json",
    "vector_from_json",
    "jsonable",
]

SHIPPED = (
    "u1_coherence_bit",
    "su2_highest_weight",
    "so3_reference_J1",
    "pauli_zero_vs_plus",
    "appendix_g_counterexample",
)


def scalar_from_json(x: object, where: str = "value") -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    raise ValidationError(f"{where}: expected a number or [re, im] pair, got {x!r}")


def vector_from_json(v: object, where: str = "vector") -> np.ndarray:
    if not isinstance(v, (list, tuple)) or not v:
        raise ValidationError(f"{where}: expected a nonempty list")
    return np.array([scalar_from_json(x, where) for x in v], dtype=complex)


def matrix_from_json(m: object, where: str = "matrix") -> np.ndarray:
    if not isinstance(m, (list, tuple)) or not m:
        raise ValidationError(f"{where}: expected a nonempty list of rows")
    rows = [vector_from_json(r, where) for r in m]
    width = {r.size for r in rows}
    if len(width) != 1:
        raise ValidationError(f"{where}: ragged rows")
    return np.stack(rows, axis=0)


def _scalar_to_json(x: complex) -> object:
    def one(t: float) -> object:
        if math.isinf(t):
            return "inf" if t > 0 else "-inf"
        if math.isnan(t):
            return "nan"
        return t

    if abs(x.imag) == 0.0:
        return one(float(x.real))
    return [one(float(x.real)), one(float(x.imag))]


def jsonable(obj: object) -> object:
    """Recursively convert report values into JSON-serializable structures.

    Complex scalars become [re, im], infinities become "inf"/"-inf", arrays
    become nested lists, dataclass-like objects become dicts of their public
    attributes.
    """
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, float):
        return _scalar_to_json(complex(obj))
    if isinstance(obj, complex):
        return _scalar_to_json(obj)
    if isinstance(obj, np.ndarray):
        if obj.ndim == 0:
            return jsonable(obj.item())
        return [jsonable(row) for row in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, np.complexfloating)):
        return jsonable(complex(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {k: jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__ if k != "tol"}
    raise ValidationError(f"cannot serialize {type(obj).__name__} into a report")


@dataclass(frozen=True, eq=False)
class Problem:
    """Parsed problem file."""

    label: str
    pair: RepPair
    state_in: np.ndarray  # density matrix form
    state_out: np.ndarray
    state_in_vector: np.ndarray | None
    state_out_vector: np.ndarray | None
    sym_options: SymCheckOptions | None = None
    u1: tuple[U1Spec, U1Spec] | None = None
    ensemble: tuple[tuple[float, np.ndarray], ...] = ()
    p_sym: float = 0.0
    thermo: dict | None = None
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False)
    raw: dict = field(default_factory=dict, repr=False)


def _rep_from_json(block: object, where: str, tol: ToleranceConfig) -> Representation:
    if not isinstance(block, dict):
        raise ValidationError(f"{where}: expected an object")
    try:
        dim = int(block["dim"])
        gens = tuple(matrix_from_json(g, f"{where}.generators") for g in block["generators"])
    except KeyError as exc:
        raise ValidationError(f"{where}: missing field {exc}") from exc
    comps = tuple(
        matrix_from_json(c, f"{where}.component_reps") for c in block.get("component_reps", [])
    )
    return Representation(dim, gens, comps, str(block.get("label", "")), tol)


def _state_from_json(block: object, where: str) -> tuple[np.ndarray, np.ndarray | None]:
    if not isinstance(block, dict):
        raise ValidationError(f"{where}: expected an object")
    kind = block.get("type", "pure")
    if kind == "pure":
        vec = vector_from_json(block.get("vector"), f"{where}.vector")
        nrm = float(np.linalg.norm(vec))
        if nrm == 0.0:
            raise ValidationError(f"{where}: zero vector")
        vec = vec / nrm
        return np.outer(vec, vec.conj()), vec
    if kind == "mixed":
        mat = matrix_from_json(block.get("matrix"), f"{where}.matrix")
        return mat, None
    raise ValidationError(f"{where}: unknown state type {kind!r}")


def _u1_from_json(block: object, where: str) -> U1Spec:
    if not isinstance(block, dict) or "eigenvalues" not in block:
        raise ValidationError(f"{where}: expected an object with eigenvalues")
    eigs = tuple(block["eigenvalues"])
    basis = block.get("basis")
    return U1Spec(eigs, matrix_from_json(basis, f"{where}.basis") if basis is not None else None)


def loads_problem(text: str, label_hint: str = "") -> Problem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"problem file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("problem file must contain a JSON object")
    tol = DEFAULT_TOL.with_overrides(**{k: float(v) for k, v in data.get("tolerances", {}).items()})
    rep_in = _rep_from_json(data.get("rep_in"), "rep_in", tol)
    rep_out = _rep_from_json(data.get("rep_out"), "rep_out", tol)
    pairs = ()
    if "component_pairs" in data:
        pairs = tuple(
            (
                matrix_from_json(p["u_in"], "component_pairs.u_in"),
                matrix_from_json(p["u_out"], "component_pairs.u_out"),
            )
            for p in data["component_pairs"]
        )
    pair = RepPair(rep_in, rep_out, pairs)
    state_in, vec_in = _state_from_json(data.get("state_in"), "state_in")
    state_out, vec_out = _state_from_json(data.get("state_out"), "state_out")
    u1 = None
    if "u1" in data:
        block = data["u1"]
        u1 = (_u1_from_json(block.get("in"), "u1.in"), _u1_from_json(block.get("out"), "u1.out"))
    sym_options = None
    sym = data.get("sym", {})
    if sym or u1:
        extras = tuple(
            (
                matrix_from_json(e["u_in"], "sym.extra_elements.u_in"),
                matrix_from_json(e["u_out"], "sym.extra_elements.u_out"),
            )
            for e in sym.get("extra_elements", [])
        )
        sym_options = SymCheckOptions(
            u1=u1,
            extra_elements=extras,
            exhaustive=bool(sym.get("exhaustive", False)),
            samples=int(sym.get("samples", 16)),
            seed=int(sym.get("seed", 7)),
        )
    ensemble = ()
    p_sym = 0.0
    if "ensemble" in data:
        block = data["ensemble"]
        ensemble = tuple(
            (float(m["weight"]), vector_from_json(m["vector"], "ensemble.vector"))
            for m in block.get("members", [])
        )
        p_sym = float(block.get("p_sym", 0.0))
    thermo = None
    if "thermo" in data:
        block = data["thermo"]
        thermo = {
            "h_target": matrix_from_json(block["h_target"], "thermo.h_target"),
            "r": float(block.get("r", 1.0)),
            "q": float(block.get("q", 0.5)),
        }
    return Problem(
        label=str(data.get("label", label_hint)),
        pair=pair,
        state_in=state_in,
        state_out=state_out,
        state_in_vector=vec_in,
        state_out_vector=vec_out,
        sym_options=sym_options,
        u1=u1,
        ensemble=ensemble,
        p_sym=p_sym,
        thermo=thermo,
        tol=tol,
        raw=data,
    )


def load_problem(path: str | Path) -> Problem:
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"problem file not found: {p}")
    return loads_problem(p.read_text(), label_hint=p.stem)


def shipped_problems() -> dict[str, Path]:
    base = resources.files("asymkit") / "problems"
    out = {}
    for name in SHIPPED:
        candidate = base / f"{name}.json"
        with resources.as_file(candidate) as concrete:
            out[name] = Path(str(concrete))
    return out


def shipped_path(name: str) -> Path:
    if name not in SHIPPED:
        raise ValidationError(f"unknown shipped problem {name!r}; available: {', '.join(SHIPPED)}")
    return shipped_problems()[name]
