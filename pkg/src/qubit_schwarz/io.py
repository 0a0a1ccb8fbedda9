"""YAML spec documents: parsing with located diagnostics, validation and dumping.

A document names a generator form and its parameters, e.g.::

    form: phase_covariant
    omega: 0.0
    gamma_plus: 1.0
    gamma_minus: 1.0
    gamma_z: -0.25
    sampling: {grid_points: 4096, refine_iters: 200, seed: 0}
    sweep:
      - {param: gamma_z, min: -0.6, max: 0.1, steps: 71}

General generators give ``C`` as a 3x3 array of ``[re, im]`` pairs and ``h``
as a real triple.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
import yaml

from ._config import SamplingPlan, Tolerances
from .errors import InvalidSamplingPlan, QubitSchwarzError
from .generators import GeneratorSpec, build_general, pauli, phase_covariant

FORM_KEYS = {
    "pauli": ("gamma",),
    "phase_covariant": ("omega", "gamma_plus", "gamma_minus", "gamma_z"),
    "general": ("C", "h"),
}
OPTIONAL_KEYS = ("tolerances", "sampling", "sweep")
SWEEP_KEYS = ("param", "min", "max", "steps")


class DocumentError(QubitSchwarzError, ValueError):
    """Malformed spec document; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class SweepAxis:
    param: str
    min: float
    max: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class SpecDocument:
    form: str
    params: dict
    tolerances: Tolerances = field(default_factory=Tolerances)
    sampling: SamplingPlan = field(default_factory=SamplingPlan)
    sweep: tuple = ()

    def generator(self, overrides=None) -> GeneratorSpec:
        p = dict(self.params)
        if overrides:
            p = apply_overrides(self.form, p, overrides)
        if self.form == "pauli":
            return pauli(*p["gamma"])
        if self.form == "phase_covariant":
            return phase_covariant(p["omega"], p["gamma_plus"], p["gamma_minus"], p["gamma_z"])
        c = np.array([[complex(re, im) for re, im in row] for row in p["C"]])
        return build_general(c, p["h"], self.tolerances)

    def to_dict(self) -> dict:
        out = {"form": self.form}
        out.update(self.params)
        if self.tolerances != Tolerances():
            out["tolerances"] = dataclasses.asdict(self.tolerances)
        if self.sampling != SamplingPlan():
            out["sampling"] = dataclasses.asdict(self.sampling)
        if self.sweep:
            out["sweep"] = [dataclasses.asdict(a) for a in self.sweep]
        return out


def sweep_parameters(form: str) -> tuple:
    """Names accepted by ``sweep`` / ``--vary`` for each form."""
    if form == "pauli":
        return ("gamma1", "gamma2", "gamma3")
    if form == "phase_covariant":
        return FORM_KEYS["phase_covariant"]
    names = [f"h{k}" for k in (1, 2, 3)]
    for i in range(1, 4):
        for j in range(1, 4):
            names.append(f"c{i}{j}_re")
            if i != j:
                names.append(f"c{i}{j}_im")
    return tuple(names)


def apply_overrides(form: str, params: dict, overrides: dict) -> dict:
    p = {k: (list(map(list, v)) if k == "C" else list(v) if isinstance(v, list) else v) for k, v in params.items()}
    for name, value in overrides.items():
        value = float(value)
        if form == "pauli":
            p["gamma"][int(name[-1]) - 1] = value
        elif form == "phase_covariant":
            p[name] = value
        elif name.startswith("h"):
            p["h"][int(name[1]) - 1] = value
        else:
            i, j, part = int(name[1]) - 1, int(name[2]) - 1, name[4:]
            p["C"] = [[list(e) for e in row] for row in p["C"]]
            k = 0 if part == "re" else 1
            p["C"][i][j][k] = value
            # keep C Hermitian
            p["C"][j][i][k] = value if k == 0 else -value
    return p


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _key_mark(node, key):
    if isinstance(node, yaml.MappingNode):
        for k, _ in node.value:
            if k.value == key:
                return k.start_mark
    return node.start_mark


class _Validator:
    def __init__(self, root):
        self.root = root

    def fail(self, message, path=(), key=None):
        if self.root is None:
            raise DocumentError(message)
        node = self.root
        for p in path:
            node = _descend(node, p)
        mark = node.start_mark if key is None else _key_mark(node, key)
        raise DocumentError(message, mark.line + 1, mark.column + 1)

    def number(self, value, path):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"expected a number at {_fmt(path)}", path)
        if not math.isfinite(value):
            self.fail(f"non-finite number at {_fmt(path)}", path)
        return float(value)

    def triple(self, value, path):
        if not isinstance(value, list) or len(value) != 3:
            self.fail(f"expected a list of 3 numbers at {_fmt(path)}", path)
        return [self.number(v, path + (k,)) for k, v in enumerate(value)]

    def mapping(self, value, path, allowed):
        if not isinstance(value, dict):
            self.fail(f"expected a mapping at {_fmt(path) or 'top level'}", path)
        for key in value:
            if key not in allowed:
                self.fail(f"unknown key {key!r}" + (f" in {_fmt(path)}" if path else ""), path, key=key)
        return value


def _descend(node, key):
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            if k.value == key:
                return v
    if isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
        return node.value[key]
    return node


def _fmt(path):
    return ".".join(str(p) for p in path)


def parse_document(text: str) -> SpecDocument:
    """Parse and validate a YAML spec document; raise :class:`DocumentError` on failure."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        msg = exc.problem or str(exc)
        if mark is None:
            raise DocumentError(msg) from None
        raise DocumentError(msg, mark.line + 1, mark.column + 1) from None
    except yaml.YAMLError as exc:
        raise DocumentError(str(exc)) from None
    return document_from_dict(data, root)


def document_from_dict(data, root=None) -> SpecDocument:
    v = _Validator(root)
    if not isinstance(data, dict):
        v.fail("document must be a mapping")
    if "form" not in data:
        v.fail("missing required key 'form'")
    form = data["form"]
    if form not in FORM_KEYS:
        v.fail(f"form must be one of {sorted(FORM_KEYS)}, got {form!r}", ("form",))
    v.mapping(data, (), ("form",) + FORM_KEYS[form] + OPTIONAL_KEYS)
    for key in FORM_KEYS[form]:
        if key not in data:
            v.fail(f"missing required key {key!r} for form {form!r}")

    if form == "pauli":
        params = {"gamma": v.triple(data["gamma"], ("gamma",))}
    elif form == "phase_covariant":
        params = {k: v.number(data[k], (k,)) for k in FORM_KEYS[form]}
    else:
        c = data["C"]
        if not isinstance(c, list) or len(c) != 3:
            v.fail("C must be a 3x3 array of [re, im] pairs", ("C",))
        rows = []
        for i, row in enumerate(c):
            if not isinstance(row, list) or len(row) != 3:
                v.fail("each row of C must hold 3 [re, im] pairs", ("C", i))
            entries = []
            for j, pair in enumerate(row):
                if not isinstance(pair, list) or len(pair) != 2:
                    v.fail("C entries must be [re, im] pairs", ("C", i, j))
                entries.append([v.number(pair[0], ("C", i, j, 0)), v.number(pair[1], ("C", i, j, 1))])
            rows.append(entries)
        params = {"C": rows, "h": v.triple(data["h"], ("h",))}

    tolerances = Tolerances()
    if "tolerances" in data:
        names = tuple(f.name for f in dataclasses.fields(Tolerances))
        block = v.mapping(data["tolerances"], ("tolerances",), names)
        vals = {k: v.number(val, ("tolerances", k)) for k, val in block.items()}
        for k, val in vals.items():
            if val < 0:
                v.fail(f"tolerance {k} must be >= 0", ("tolerances", k))
        tolerances = Tolerances(**vals)

    sampling = SamplingPlan()
    if "sampling" in data:
        names = tuple(f.name for f in dataclasses.fields(SamplingPlan))
        block = v.mapping(data["sampling"], ("sampling",), names)
        for k, val in block.items():
            if isinstance(val, bool) or not isinstance(val, int):
                v.fail(f"sampling.{k} must be an integer", ("sampling", k))
        try:
            sampling = SamplingPlan(**block)
        except InvalidSamplingPlan as exc:
            v.fail(str(exc), ("sampling",))

    sweep = ()
    if "sweep" in data:
        raw = data["sweep"]
        if not isinstance(raw, list) or not 1 <= len(raw) <= 3:
            v.fail("sweep must list 1 to 3 axes", ("sweep",))
        axes = []
        allowed = sweep_parameters(form)
        for k, axis in enumerate(raw):
            path = ("sweep", k)
            v.mapping(axis, path, SWEEP_KEYS)
            for key in SWEEP_KEYS:
                if key not in axis:
                    v.fail(f"sweep axis is missing {key!r}", path)
            if axis["param"] not in allowed:
                v.fail(f"cannot sweep {axis['param']!r} for form {form!r}; choose from {list(allowed)}",
                       path + ("param",))
            steps = axis["steps"]
            if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
                v.fail("steps must be a positive integer", path + ("steps",))
            lo, hi = v.number(axis["min"], path + ("min",)), v.number(axis["max"], path + ("max",))
            if hi < lo or (steps > 1 and hi == lo):
                v.fail("empty sweep range", path)
            axes.append(SweepAxis(axis["param"], lo, hi, steps))
        sweep = tuple(axes)

    return SpecDocument(form, params, tolerances, sampling, sweep)


def load_document(path) -> SpecDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def dump_document(doc: SpecDocument) -> str:
    return yaml.safe_dump(doc.to_dict(), sort_keys=False, default_flow_style=None)
