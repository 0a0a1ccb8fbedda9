"""Command-line interface: ``qubit-schwarz {classify,sweep,simulate,spectrum,markov-check,examples}``.

Exit codes: 0 success, 1 usage or parse error, 2 a verdict Fails under ``--strict``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io as _stdio
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import classification as cls
from . import constraints, dynamics, maps
from ._config import SamplingPlan
from .errors import PreconditionViolated, QubitSchwarzError, UnsupportedForm
from .generators import PhaseCovariant, canonical_form
from .io import SpecDocument, SweepAxis, dump_document, load_document, parse_document, sweep_parameters
from .linalg import pauli_coordinates

DEFAULT_ALPHAS = (1.0, 1.5, 2.0)

EXAMPLE_DOCUMENTS = {
    "pauli-positive-saturation": "form: pauli\ngamma: [1.0, 1.0, -1.0]\n",
    "pauli-schwarz-saturation": "form: pauli\ngamma: [1.0, 1.0, -0.5]\n",
    "pauli-cp-saturation": "form: pauli\ngamma: [1.0, 1.0, 0.0]\n",
    "phase-covariant-schwarz-boundary": (
        "form: phase_covariant\nomega: 0.0\ngamma_plus: 1.0\ngamma_minus: 1.0\ngamma_z: -0.25\n"
    ),
    "pauli-sweep": (
        "form: pauli\ngamma: [1.0, 1.0, 0.0]\nsweep:\n  - {param: gamma3, min: -1.2, max: 0.2, steps: 141}\n"
    ),
    "general": (
        "form: general\n"
        "C:\n"
        "  - [[0.5, 0.0], [0.1, 0.2], [0.0, 0.0]]\n"
        "  - [[0.1, -0.2], [0.5, 0.0], [0.0, 0.0]]\n"
        "  - [[0.0, 0.0], [0.0, 0.0], [0.3, 0.0]]\n"
        "h: [0.0, 0.0, 1.0]\n"
    ),
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialisation helpers
# ---------------------------------------------------------------------------

def _complex_pair(z):
    return [float(z.real), float(z.imag)]


def _witness(w):
    if w is None:
        return None
    w = np.asarray(w)
    if w.shape == (2, 2):
        return [_complex_pair(c) for c in pauli_coordinates(w)]
    if np.iscomplexobj(w):
        return [_complex_pair(c) for c in w]
    return [float(v) for v in w]


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    return value


def _verdict(v: cls.ClassVerdict):
    return {
        "status": v.status.value,
        "margin": v.margin,
        "method": v.method.value,
        "witness": _witness(v.witness),
        "detail": _jsonable({k: val for k, val in v.detail.items()}),
    }


def _fmt_float(x):
    return format(float(x), ".17g")


def _write_csv(out, columns, rows, comment=None):
    buf = _stdio.StringIO()
    buf.write("# columns: " + ",".join(columns) + "\n")
    if comment:
        buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    out.write(buf.getvalue())


def _alpha_key(a):
    return format(float(a), "g")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _plan(args, doc: SpecDocument | None) -> SamplingPlan:
    base = doc.sampling if doc is not None else SamplingPlan()
    return dataclasses.replace(
        base,
        grid_points=args.grid if args.grid is not None else base.grid_points,
        refine_iters=args.refine if args.refine is not None else base.refine_iters,
        seed=args.seed if args.seed is not None else base.seed,
    )


def _closed_or_none(fn, spec, tol):
    try:
        return fn(spec, tol)
    except UnsupportedForm:
        return None


def classify_report(doc: SpecDocument, plan: SamplingPlan, alphas=DEFAULT_ALPHAS) -> dict:
    spec = doc.generator()
    tol = doc.tolerances
    verdicts = {
        "cp": cls.check_cp(spec, tol),
        "schwarz_closed": _closed_or_none(cls.check_schwarz_closed, spec, tol),
        "schwarz_numeric": cls.check_schwarz_numeric(spec, plan, tol),
        "positive_closed": _closed_or_none(cls.check_positive_closed, spec, tol),
        "positive_numeric": cls.check_positive_numeric(spec, plan, tol),
    }
    rates = constraints.relaxation_rates(spec, tol)
    cf_g = canonical_form(spec, tol).g
    report = {
        "form": spec.form,
        "parameters": doc.params,
        "verdicts": {k: (_verdict(v) if v is not None else None) for k, v in verdicts.items()},
        "rates": {"gamma": list(rates.gamma), "omegas": list(rates.omegas), "total": rates.total},
        "alpha_margins": {_alpha_key(a): constraints.alpha_bound(rates, a) for a in alphas},
        "critical_alpha": constraints.critical_alpha(rates),
        "g_inequalities": constraints.g_inequalities(cf_g).tolist(),
    }
    if isinstance(spec.tag, PhaseCovariant):
        report["tl"] = dataclasses.asdict(constraints.tl_check(spec))
    return _jsonable(report)


def _any_fails(report) -> bool:
    return any(v is not None and v["status"] == cls.Status.FAILS.value for v in report["verdicts"].values())


def cmd_classify(args, out) -> int:
    doc = _load(args)
    alphas = tuple(args.alpha) if args.alpha else DEFAULT_ALPHAS
    report = classify_report(doc, _plan(args, doc), alphas)
    if args.format == "csv":
        rows = []
        for name, v in report["verdicts"].items():
            if v is not None:
                rows.append(["verdict", name, v["status"], v["margin"]])
        for a, m in report["alpha_margins"].items():
            rows.append(["alpha_margin", a, "holds" if m >= -doc.tolerances.closed_margin else "fails", m])
        for k, g in enumerate(report["rates"]["gamma"], 1):
            rows.append(["rate", f"Gamma{k}", "", g])
        _write_csv(out, ["kind", "name", "status", "value"], rows)
    else:
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 2 if args.strict and _any_fails(report) else 0


def sweep_point(doc: SpecDocument, overrides: dict, plan: SamplingPlan, alphas) -> list:
    spec = doc.generator(overrides)
    tol = doc.tolerances
    cp = cls.check_cp(spec, tol)
    schwarz = _closed_or_none(cls.check_schwarz_closed, spec, tol) or cls.check_schwarz_numeric(spec, plan, tol)
    positive = _closed_or_none(cls.check_positive_closed, spec, tol) or cls.check_positive_numeric(spec, plan, tol)
    if cp.holds:
        code = "CP"
    elif schwarz.status is cls.Status.UNDETERMINED:
        code = "undet"
    elif schwarz.holds:
        code = "S"
    elif positive.holds:
        code = "P"
    else:
        code = "none"
    rates = constraints.relaxation_rates(spec, tol)
    return (
        [float(v) for v in overrides.values()]
        + [code, cp.margin, schwarz.margin, positive.margin]
        + list(rates.gamma)
        + [constraints.alpha_bound(rates, a) for a in alphas]
    )


def _sweep_task(payload):
    text, overrides, plan, alphas = payload
    return sweep_point(parse_document(text), overrides, plan, alphas)


def _parse_vary(spec: str) -> SweepAxis:
    parts = spec.split(":")
    if len(parts) != 4:
        raise UsageError(f"--vary expects NAME:MIN:MAX:STEPS, got {spec!r}")
    try:
        axis = SweepAxis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError:
        raise UsageError(f"--vary expects NAME:MIN:MAX:STEPS, got {spec!r}") from None
    if axis.steps < 1 or axis.max < axis.min or (axis.steps > 1 and axis.max == axis.min):
        raise UsageError(f"empty sweep range in {spec!r}")
    return axis


def cmd_sweep(args, out) -> int:
    doc = _load(args)
    axes = tuple(_parse_vary(v) for v in args.vary) if args.vary else doc.sweep
    if not axes or len(axes) > 3:
        raise UsageError("sweep needs 1 to 3 axes (document 'sweep' block or --vary)")
    allowed = sweep_parameters(doc.form)
    for axis in axes:
        if axis.param not in allowed:
            raise UsageError(f"cannot sweep {axis.param!r} for form {doc.form!r}")
    alphas = tuple(args.alpha) if args.alpha else DEFAULT_ALPHAS
    plan = _plan(args, doc)
    names = [a.param for a in axes]
    points = [dict(zip(names, vals)) for vals in itertools.product(*(a.values() for a in axes))]
    if args.jobs and args.jobs > 1:
        text = dump_document(doc)
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_task, [(text, p, plan, alphas) for p in points], chunksize=8))
    else:
        rows = [sweep_point(doc, p, plan, alphas) for p in points]
    columns = names + ["verdict", "cp_margin", "schwarz_margin", "positive_margin",
                       "Gamma1", "Gamma2", "Gamma3"] + [f"alpha_margin_{_alpha_key(a)}" for a in alphas]
    _write_csv(out, columns, rows, comment="verdict codes: CP, S (Schwarz), P (positive), none, undet")
    if args.strict and any(r[len(names)] == "none" for r in rows):
        return 2
    return 0


def _parse_vector(text: str):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected three comma-separated numbers, got {text!r}") from None
    if len(values) != 3 or not all(np.isfinite(values)):
        raise UsageError(f"expected three comma-separated numbers, got {text!r}")
    return np.array(values)


def cmd_simulate(args, out) -> int:
    doc = _load(args)
    r0 = _parse_vector(args.r0)
    if np.linalg.norm(r0) > 1.0 + 1e-9:
        raise UsageError("initial Bloch vector must satisfy |r0| <= 1")
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not args.t_max > 0:
        raise UsageError("--t-max must be positive")
    times = np.linspace(0.0, args.t_max, args.steps)
    traj = dynamics.trajectory(doc.generator(), r0, times)
    rows = [[t, *r, float(np.linalg.norm(r))] for t, r in zip(times, traj)]
    _write_csv(out, ["t", "r1", "r2", "r3", "norm"], rows)
    return 0


def _target_map(args):
    if args.map:
        if args.map not in maps.EXAMPLES:
            raise UsageError(f"unknown map {args.map!r}; choose from {sorted(maps.EXAMPLES)}")
        factory = maps.EXAMPLES[args.map]
        return factory() if args.param is None else factory(args.param)
    doc = _load(args)
    return dynamics.semigroup_map(doc.generator(), args.t)


def cmd_spectrum(args, out) -> int:
    phi = _target_map(args)
    spec = maps.map_spectrum(phi)
    alphas = tuple(args.alpha) if args.alpha else DEFAULT_ALPHAS
    report = {
        "map": phi.name,
        "lambdas": [_complex_pair(v) for v in spec.lambdas],
        "x": list(spec.x),
        "y": list(spec.y),
        "spectral_alpha_margins": {_alpha_key(a): maps.spectral_alpha_constraint(spec.x, a) for a in alphas},
    }
    if args.format == "csv":
        rows = [[k, spec.x[k], spec.y[k]] for k in range(3)]
        _write_csv(out, ["index", "x", "y"], rows)
    else:
        out.write(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    fails = any(m < -1e-9 for m in report["spectral_alpha_margins"].values())
    return 2 if args.strict and fails else 0


def cmd_markov_check(args, out) -> int:
    phi = _target_map(args)
    spec = maps.map_spectrum(phi)
    alphas = tuple(args.alpha) if args.alpha else DEFAULT_ALPHAS
    results = {}
    for a in alphas:
        try:
            b = maps.markov_spectral_bound(spec, a)
        except PreconditionViolated as exc:
            results[_alpha_key(a)] = {"applicable": False, "reason": str(exc)}
            continue
        results[_alpha_key(a)] = {
            "applicable": True,
            "determinant": b.determinant,
            "margins": list(b.margins),
            "pauli_margins": list(b.pauli_margins) if b.pauli_margins is not None else None,
            "holds": b.holds,
        }
    report = {"map": phi.name, "bounds": results}
    if args.format == "csv":
        rows = []
        for a, r in results.items():
            if r["applicable"]:
                rows.append([a, "holds" if r["holds"] else "fails", min(r["margins"] + (r["pauli_margins"] or []))])
            else:
                rows.append([a, "not_applicable", ""])
        _write_csv(out, ["alpha", "status", "min_margin"], rows)
    else:
        out.write(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    fails = any(r.get("applicable") and not r["holds"] for r in results.values())
    return 2 if args.strict and fails else 0


def cmd_examples(args, out) -> int:
    if args.name:
        if args.name not in EXAMPLE_DOCUMENTS:
            raise UsageError(f"unknown example {args.name!r}")
        out.write(EXAMPLE_DOCUMENTS[args.name])
        return 0
    out.write("spec documents (print one with --name):\n")
    for name in EXAMPLE_DOCUMENTS:
        out.write(f"  {name}\n")
    out.write("maps (use with --map, optional --param):\n")
    for name in maps.EXAMPLES:
        out.write(f"  {name}\n")
    return 0


def _load(args) -> SpecDocument:
    if not args.input:
        raise UsageError("--input PATH is required")
    if args.input == "-":
        return parse_document(sys.stdin.read())
    try:
        return load_document(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qubit-schwarz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="YAML spec document ('-' for stdin)")
    common.add_argument("--alpha", type=float, action="append", help="alpha in [1, 2]; repeatable")
    common.add_argument("--grid", type=int, help="oracle grid points")
    common.add_argument("--refine", type=int, help="refinement iterations")
    common.add_argument("--seed", type=_u64, help="seed for refinement restarts")
    common.add_argument("--strict", action="store_true", help="exit 2 when a check fails")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    sub.add_parser("classify", parents=[common], help="classify a generator")
    p = sub.add_parser("sweep", parents=[common], help="CSV region map over 1-3 parameters")
    p.add_argument("--vary", action="append", metavar="NAME:MIN:MAX:STEPS")
    p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("simulate", parents=[common], help="Bloch trajectory as CSV")
    p.add_argument("--r0", default="0,0,1")
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=101)
    for name, text in (("spectrum", "spectrum of a unital map"), ("markov-check", "spectral Markovianity bounds")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--map", help="example map name instead of --input")
        p.add_argument("--param", type=float, help="parameter of the example map")
        p.add_argument("--t", type=float, default=1.0, help="time for exp(t L) when --input is used")
    p = sub.add_parser("examples", help="list or print example inputs")
    p.add_argument("--name")
    return parser


COMMANDS = {
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "spectrum": cmd_spectrum,
    "markov-check": cmd_markov_check,
    "examples": cmd_examples,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, QubitSchwarzError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
