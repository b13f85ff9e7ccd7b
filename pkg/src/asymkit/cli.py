"""Command-line interface: measure / rate / channel / simulate over problem files.

Every command reads a problem file, emits one deterministic report (JSON by
default, CSV for tabular simulate output), and exits 0 on success, 2 on
malformed input, 3 on precondition failures, 4 when a tensor cap would be
exceeded.
"""

from __future__ import annotations

import functools
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .chankit import build_conversion_channel, covariance_defect, apply_channel, estimate_and_convert
from .core import MetricSpec, qgt, s_matrix, s_q_matrix, u1_relative_entropy_asymmetry
from .errors import AsymkitError, ValidationError
from .numkit import state_distance
from .problemfile import Problem, jsonable, load_problem, shipped_problems
from .ratekit import (
    conversion_rate,
    cost_bound,
    distillable_bound,
    min_entropy_rate,
    reversibility_check,
    thermo_bounds,
)
from .repkit import GroupPoint
from .simkit import (
    ScanConfig,
    convergence_scan,
    largest_ev_check,
    monotonicity_probe,
    s_q_property_suite,
)

_TOL_FIELDS = ("tol_herm", "tol_norm", "tol_psd", "tol_kernel", "tol_residual")


def _tol_options(fn):
    for name in reversed(_TOL_FIELDS):
        fn = click.option(f"--{name.replace('_', '-')}", type=float, default=None, help=f"override {name}")(fn)
    return fn


def _common_options(fn):
    fn = click.option("--problem", "problem_path", required=True, type=click.Path(), help="problem file (JSON)")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)(fn)
    fn = click.option("--out", "out_path", type=click.Path(), default=None, help="write the report here instead of stdout")(fn)
    fn = _tol_options(fn)
    return fn


def _load(problem_path: str, tol_overrides: dict) -> Problem:
    problem = load_problem(problem_path)
    tol = problem.tol.with_overrides(**tol_overrides)
    if tol is not problem.tol:
        problem = Problem(
            label=problem.label,
            pair=problem.pair,
            state_in=problem.state_in,
            state_out=problem.state_out,
            state_in_vector=problem.state_in_vector,
            state_out_vector=problem.state_out_vector,
            sym_options=problem.sym_options,
            u1=problem.u1,
            ensemble=problem.ensemble,
            p_sym=problem.p_sym,
            thermo=problem.thermo,
            tol=tol,
            raw=problem.raw,
        )
    return problem


def _tol_kwargs(kw: dict) -> dict:
    return {name: kw.pop(name) for name in _TOL_FIELDS}


def _emit(command: str, problem: Problem | None, problem_path: str | None, results: object, caveats, fmt: str, out_path: str | None, extra_config: dict | None = None, csv_rows=None) -> None:
    if fmt == "csv":
        if csv_rows is None:
            raise ValidationError("csv format is only available for tabular simulate output")
        header, rows = csv_rows
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_csv_cell(x) for x in row))
        text = "\n".join(lines) + "\n"
    else:
        config = {"version": __version__}
        if problem_path is not None:
            config["problem_path"] = str(problem_path)
        if problem is not None:
            config["problem"] = problem.label
            config["tolerances"] = jsonable(problem.tol)
        if extra_config:
            config.update(jsonable(extra_config))
        envelope = {
            "command": command,
            "config": config,
            "results": jsonable(results),
            "caveats": jsonable(list(caveats)),
        }
        text = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        click.echo(text, nl=False)


def _csv_cell(x: object) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def _catch(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except AsymkitError as exc:
            click.echo(json.dumps({"error": str(exc), "type": type(exc).__name__}), err=True)
            sys.exit(exc.exit_code)

    return wrapper


def _need_pure(problem: Problem, which: str) -> np.ndarray:
    vec = problem.state_in_vector if which == "in" else problem.state_out_vector
    if vec is None:
        raise ValidationError(f"this command needs a pure state_{which} in the problem file")
    return vec


def _parse_copies(text: str) -> list[int]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo_i, hi_i = int(lo), int(hi)
        if lo_i < 1 or hi_i < lo_i:
            raise ValidationError(f"bad copy range {text!r}")
        return list(range(lo_i, hi_i + 1))
    return [int(t) for t in text.split(",") if t.strip()]


def _parse_shift_file(path: str | None, dim_g: int) -> tuple[tuple[float, ...], ...]:
    if path is None:
        return (tuple(0.0 for _ in range(dim_g)),)
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read shift file {path}: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise ValidationError("shift file must contain a nonempty JSON list")
    shifts = []
    for entry in data:
        if isinstance(entry, (int, float)):
            entry = [entry]
        vec = [float(x) for x in entry]
        if len(vec) != dim_g:
            raise ValidationError(f"shift {entry!r} has {len(vec)} entries, expected {dim_g}")
        shifts.append(tuple(vec))
    return tuple(shifts)


@click.group()
@click.version_option(__version__, prog_name="asymkit")
def main() -> None:
    """Asymmetry measures, covariant conversion rates, channels, simulations."""


@main.command()
@click.argument("name", required=False)
@_catch
def problems(name: str | None) -> None:
    """List shipped problem files, or print the path of NAME."""
    paths = shipped_problems()
    if name is None:
        for key, path in paths.items():
            click.echo(f"{key}\t{path}")
        return
    if name not in paths:
        raise ValidationError(f"unknown shipped problem {name!r}; available: {', '.join(paths)}")
    click.echo(str(paths[name]))


@main.group()
def measure() -> None:
    """Asymmetry tensors and scalar measures of the problem's input state."""


@measure.command("qgt")
@_common_options
@click.option("--component", type=int, default=0, show_default=True, help="component representative to transport by")
@_catch
def measure_qgt(problem_path, fmt, out_path, component, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    vec = _need_pure(problem, "in")
    tensor = qgt(problem.pair.rep_in, vec, GroupPoint((), component), problem.tol)
    results = {
        "kind": tensor.kind,
        "matrix": tensor.matrix,
        "fisher_part": tensor.real_part(),
        "curvature_part": tensor.imag_part(),
        "component": component,
    }
    _emit("measure qgt", problem, problem_path, results, (), fmt, out_path)


@measure.command("smatrix")
@_common_options
@click.option("--component", type=int, default=0, show_default=True)
@_catch
def measure_smatrix(problem_path, fmt, out_path, component, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    tensor = s_matrix(problem.pair.rep_in, problem.state_in, GroupPoint((), component), problem.tol)
    _emit(
        "measure smatrix",
        problem,
        problem_path,
        {"kind": tensor.kind, "matrix": tensor.matrix, "component": component},
        (),
        fmt,
        out_path,
    )


@measure.command("sq")
@_common_options
@click.option("--q", type=float, default=0.5, show_default=True, help="metric family parameter in (0, 1)")
@click.option("--component", type=int, default=0, show_default=True)
@_catch
def measure_sq(problem_path, fmt, out_path, q, component, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    tensor = s_q_matrix(problem.pair.rep_in, problem.state_in, MetricSpec(q), GroupPoint((), component), problem.tol)
    _emit(
        "measure sq",
        problem,
        problem_path,
        {"kind": tensor.kind, "matrix": tensor.matrix, "q": q, "component": component},
        (),
        fmt,
        out_path,
        extra_config={"q": q},
    )


@measure.command("ag")
@_common_options
@_catch
def measure_ag(problem_path, fmt, out_path, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    if problem.u1 is None:
        raise ValidationError("measure ag needs a u1 block in the problem file")
    value = u1_relative_entropy_asymmetry(problem.u1[0], problem.state_in, problem.tol)
    results = {"value_nats": value, "value_bits": value / math.log(2.0)}
    _emit("measure ag", problem, problem_path, results, (), fmt, out_path)


@main.group()
def rate() -> None:
    """Conversion rates, duals, and bound corollaries."""


def _pencil_json(p) -> dict:
    return {
        "value": p.value,
        "method": p.method,
        "kernel_eigenvalues": list(p.kernel_eigenvalues),
        "minimizing_direction": p.minimizing_direction,
    }


def _verdict_json(v) -> dict | None:
    if v is None:
        return None
    return {"verdict": v.verdict, "witnesses": [[k, w] for k, w in v.witnesses], "detail": v.detail}


@rate.command("rate")
@_common_options
@click.option("--catalyst", is_flag=True, help="skip the symmetry gate (sublinear catalyst regime)")
@_catch
def rate_rate(problem_path, fmt, out_path, catalyst, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    report = conversion_rate(
        problem.pair,
        _need_pure(problem, "in"),
        _need_pure(problem, "out"),
        problem.sym_options,
        catalyst,
        problem.tol,
    )
    results = {
        "rate": report.rate,
        "dmax_bits": report.dmax_bits,
        "rate_from_dual": 2.0 ** (-report.dmax_bits) if not math.isnan(report.dmax_bits) else None,
        "per_component": {label: _pencil_json(p) for label, p in report.per_component},
        "sym_verdict": _verdict_json(report.sym_verdict),
    }
    _emit("rate rate", problem, problem_path, results, report.caveats, fmt, out_path, extra_config={"catalyst": catalyst})


@rate.command("reversible")
@_common_options
@_catch
def rate_reversible(problem_path, fmt, out_path, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    report = reversibility_check(
        problem.pair,
        _need_pure(problem, "in"),
        _need_pure(problem, "out"),
        problem.sym_options,
        problem.tol,
    )
    results = {
        "reversible": report.reversible,
        "r": report.r,
        "r_reverse": report.r_reverse,
        "proportionality_gap": report.proportionality_gap,
        "sym_forward": _verdict_json(report.sym_forward),
        "sym_backward": _verdict_json(report.sym_backward),
    }
    _emit("rate reversible", problem, problem_path, results, report.caveats, fmt, out_path)


@rate.command("distill-bound")
@_common_options
@_catch
def rate_distill(problem_path, fmt, out_path, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    report = distillable_bound(problem.pair, problem.state_in, _need_pure(problem, "out"), problem.tol)
    results = {
        "rate_bound": report.rate,
        "dmax_bits": report.dmax_bits,
        "per_component": {label: _pencil_json(p) for label, p in report.per_component},
    }
    _emit("rate distill-bound", problem, problem_path, results, report.caveats, fmt, out_path)


@rate.command("cost-bound")
@_common_options
@_catch
def rate_cost(problem_path, fmt, out_path, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    if not problem.ensemble:
        raise ValidationError("rate cost-bound needs an ensemble block in the problem file")
    report = cost_bound(problem.pair, problem.ensemble, problem.p_sym, _need_pure(problem, "out"), problem.tol)
    results = {
        "total": report.total,
        "per_state": list(report.per_state),
        "weights": list(report.weights),
        "p_sym": report.p_sym,
    }
    _emit("rate cost-bound", problem, problem_path, results, (), fmt, out_path)


@rate.command("thermo-bound")
@_common_options
@click.option("--q", type=float, default=None, help="override the problem's metric parameter")
@click.option("--r", "rate_r", type=float, default=None, help="override the problem's conversion rate")
@_catch
def rate_thermo(problem_path, fmt, out_path, q, rate_r, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    if problem.thermo is None:
        raise ValidationError("rate thermo-bound needs a thermo block in the problem file")
    q_eff = q if q is not None else problem.thermo["q"]
    r_eff = rate_r if rate_r is not None else problem.thermo["r"]
    report = thermo_bounds(
        problem.pair.rep_in,
        problem.state_in,
        _need_pure(problem, "out"),
        problem.thermo["h_target"],
        r_eff,
        MetricSpec(q_eff),
        problem.tol,
    )
    results = {
        "variance_rate_required": report.variance_rate_required,
        "s_bound_matrix": report.s_bound_matrix,
        "skew_bound": report.skew_bound,
    }
    _emit(
        "rate thermo-bound",
        problem,
        problem_path,
        results,
        ("skew bound evaluated at the self-dual point q = 1/2",),
        fmt,
        out_path,
        extra_config={"q": q_eff, "r": r_eff},
    )


@rate.command("refrate")
@_common_options
@_catch
def rate_refrate(problem_path, fmt, out_path, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    tensor = qgt(problem.pair.rep_out, _need_pure(problem, "out"), GroupPoint(), problem.tol)
    top = float(np.linalg.eigvalsh(tensor.matrix)[-1])
    value = min_entropy_rate(tensor, problem.tol)
    results = {"rate": value, "target_tensor_top_eigenvalue": top}
    _emit(
        "rate refrate",
        problem,
        problem_path,
        results,
        ("rate from the maximally spread reference state (identity tensor source)",),
        fmt,
        out_path,
    )


@main.command()
@_common_options
@click.option("--seed", type=int, default=0, show_default=True, help="seed for the covariance probe set")
@_catch
def channel(problem_path, fmt, out_path, seed, **kw) -> None:
    """Build the explicit conversion channel and audit it."""
    problem = _load(problem_path, _tol_kwargs(kw))
    vin = _need_pure(problem, "in")
    vout = _need_pure(problem, "out")
    built, artifacts = build_conversion_channel(problem.pair, vin, vout, problem.tol)
    out_state = apply_channel(built, np.outer(vin, vin.conj()), problem.tol)
    tdist, fid = state_distance(out_state, np.outer(vout, vout.conj()), problem.tol)
    defect = covariance_defect(built, problem.pair, None, samples=6, seed=seed, tol=problem.tol)
    results = {
        "kraus_ops": list(built.kraus_ops),
        "n_kraus": len(built.kraus_ops),
        "conversion_trace_distance": tdist,
        "conversion_fidelity": fid,
        "covariance_defect_probe": defect,
        "slack_eigenvalues": np.linalg.eigvalsh(0.5 * (artifacts.gamma + artifacts.gamma.conj().T)),
    }
    caveats = ("covariance defect is probed on a seeded sample, not certified globally",)
    _emit("channel", problem, problem_path, results, caveats, fmt, out_path, extra_config={"seed": seed})


@main.group()
def simulate() -> None:
    """Seeded simulation probes: convergence scans, estimation, inequality checks."""


@simulate.command("scan")
@_common_options
@click.option("--copies", default="1:8", show_default=True, help="copy counts, A:B range or comma list")
@click.option("--shift-file", type=click.Path(), default=None, help="JSON list of per-copy shift vectors")
@click.option("--seed", type=int, default=0, show_default=True)
@_catch
def simulate_scan(problem_path, fmt, out_path, copies, shift_file, seed, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    shifts = _parse_shift_file(shift_file, problem.pair.dim_g)
    config = ScanConfig(copies=tuple(_parse_copies(copies)), shifts=shifts, seed=seed)
    table = convergence_scan(problem.pair, _need_pure(problem, "in"), _need_pure(problem, "out"), config, problem.tol)
    rows = [
        (r.n, r.shift_norm, r.trace_distance, r.fidelity, r.per_copy_infidelity) for r in table.rows
    ]
    fits = {}
    for norm in sorted({r.shift_norm for r in table.rows if r.shift_norm > 0}):
        pts = [(r.n, r.per_copy_infidelity) for r in table.rows if r.shift_norm == norm and r.per_copy_infidelity > 0]
        if len(pts) >= 2:
            xs = np.log([p[0] for p in pts])
            ys = np.log([p[1] for p in pts])
            slope = float(np.polyfit(xs, ys, 1)[0])
            fits[f"per_copy_infidelity_exponent_at_shift_{norm:g}"] = slope
    results = {
        "rows": [
            {
                "n": r.n,
                "shift_norm": r.shift_norm,
                "trace_distance": r.trace_distance,
                "fidelity": r.fidelity,
                "per_copy_infidelity": r.per_copy_infidelity,
            }
            for r in table.rows
        ],
        "fitted_exponents": fits,
    }
    _emit(
        "simulate scan",
        problem,
        problem_path,
        results,
        table.caveats,
        fmt,
        out_path,
        extra_config={"seed": seed, "copies": copies, "shift_file": shift_file},
        csv_rows=(("n", "shift_norm", "trace_distance", "fidelity", "per_copy_infidelity"), rows),
    )


@simulate.command("estimate")
@_common_options
@click.option("--copies", default="4:10", show_default=True, help="total copy counts, comma list or A:B")
@click.option("--shift-file", type=click.Path(), default=None, help="JSON list with one shift vector")
@click.option("--split-exponent", type=float, default=0.3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_catch
def simulate_estimate(problem_path, fmt, out_path, copies, shift_file, split_exponent, seed, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    shifts = _parse_shift_file(shift_file, problem.pair.dim_g)
    shift = shifts[0]
    rows = []
    caveats: tuple[str, ...] = ()
    for n in _parse_copies(copies):
        report = estimate_and_convert(
            problem.pair,
            _need_pure(problem, "in"),
            _need_pure(problem, "out"),
            n,
            split_exponent,
            shift,
            seed,
            problem.tol,
        )
        caveats = report.caveats
        rows.append(
            {
                "n": n,
                "n_est": report.n_est,
                "n_conv": report.n_conv,
                "distance_to_target": report.distance_to_target,
                "fidelity_to_target": report.fidelity_to_target,
                "estimate_theta": list(report.estimate_theta),
                "true_theta": list(report.true_theta),
            }
        )
    csv_rows = (
        ("n", "n_est", "n_conv", "distance_to_target", "fidelity_to_target"),
        [(r["n"], r["n_est"], r["n_conv"], r["distance_to_target"], r["fidelity_to_target"]) for r in rows],
    )
    _emit(
        "simulate estimate",
        problem,
        problem_path,
        {"rows": rows},
        caveats,
        fmt,
        out_path,
        extra_config={"seed": seed, "copies": copies, "shift": list(shift), "split_exponent": split_exponent},
        csv_rows=csv_rows,
    )


@simulate.command("check")
@_common_options
@click.option("--suite", type=click.Choice(["monotonicity", "sq", "near-pure", "all"]), default="all", show_default=True)
@click.option("--count", type=int, default=40, show_default=True, help="random draws per probe family")
@click.option("--seed", type=int, default=0, show_default=True)
@_catch
def simulate_check(problem_path, fmt, out_path, suite, count, seed, **kw) -> None:
    problem = _load(problem_path, _tol_kwargs(kw))
    results: dict[str, object] = {}
    caveats: tuple[str, ...] = ()
    if suite in ("monotonicity", "all"):
        mono = monotonicity_probe(problem.pair, problem.state_in, count, seed, problem.tol)
        results["monotonicity"] = mono
        caveats += tuple(mono.caveats)
    if suite in ("sq", "all"):
        sq = s_q_property_suite(problem.pair.rep_in, max(count // 2, 10), seed, problem.tol)
        results["s_q_properties"] = sq
        caveats += tuple(sq.caveats)
    if suite in ("near-pure", "all"):
        results["near_pure_bound"] = largest_ev_check(count * 4, seed, problem.tol)
    _emit(
        "simulate check",
        problem,
        problem_path,
        results,
        caveats,
        fmt,
        out_path,
        extra_config={"seed": seed, "count": count, "suite": suite},
    )


if __name__ == "__main__":
    main()
